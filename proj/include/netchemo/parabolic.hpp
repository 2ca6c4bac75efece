#pragma once

/// @file parabolic.hpp
/// @brief Backward-Euler diffusion-reaction step for phi over the whole
/// network with permeability-type (Kedem-Katchalsky) node fluxes.
///
/// At a node the flux entering arc i through its end cell is
///     F_i = sum_j alpha_ij (Phi_j - Phi_i),
/// with Phi the end-cell averages. F_i enters the end cell with a plus sign
/// for both orientations: the sign flip between incoming and outgoing arcs in
/// the continuous condition is absorbed by the direction of the outward
/// normal. External ends are zero-flux.

#include <cstddef>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "netchemo/fields.hpp"
#include "netchemo/network.hpp"

namespace netchemo {

using Field = std::vector<std::vector<double>>;  // per arc, per cell

struct ReactionSwitches {
    bool production = true;   ///< a u source
    bool degradation = true;  ///< -b phi sink
    friend bool operator==(const ReactionSwitches&, const ReactionSwitches&) = default;
};

/// Assembled and factorized implicit system. Rows are scaled by the cell
/// width so the matrix is symmetric positive definite:
///     h (1/dt + b) phi - h * Lap_h(phi) = h (phi_old/dt + a u).
class DiffusionSystem {
public:
    DiffusionSystem(const NetworkSpec& spec, const Grids& grids, double dt, ReactionSwitches rx = {});

    double dt_built() const { return dt_; }
    const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }
    std::size_t offset(std::size_t arc) const { return offsets_[arc]; }
    std::size_t n_unknowns() const { return offsets_.back(); }
    const ReactionSwitches& switches() const { return rx_; }

    /// True when this system can be reused for `dt` (relative change <= 1e-12).
    bool matches(double dt) const;

    /// Right-hand side for the given state (phi = old phi, u = source density).
    Eigen::VectorXd rhs(const NetworkState& state) const;
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

private:
    NetworkSpec spec_;
    Grids grids_;
    double dt_;
    ReactionSwitches rx_;
    std::vector<std::size_t> offsets_;
    Eigen::SparseMatrix<double> matrix_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
};

DiffusionSystem assemble(const NetworkSpec& spec, const Grids& grids, double dt, ReactionSwitches rx = {});

/// One implicit step. `state.phi` is the old chemoattractant and `state.u`
/// the freshly transported density feeding the production term.
Field diffusion_step(const DiffusionSystem& system, const NetworkState& state);

/// Semi-discrete rate d(phi)/dt of the same discretization (explicit form).
Field diffusion_rate(const NetworkSpec& spec, const Grids& grids, const NetworkState& state,
                     ReactionSwitches rx = {});

/// End-cell values Phi_k at a node, in the node's local arc order.
std::vector<double> node_phi_traces(const NetworkSpec& spec, const NetworkState& state, std::size_t node);

/// F_k = sum_j alpha_kj (Phi_j - Phi_k), local order.
std::vector<double> node_kk_fluxes(const NetworkSpec& spec, const NetworkState& state, std::size_t node);

/// 1/2 sum_ij alpha_ij (Phi_j - Phi_i)^2 >= 0.
double node_phi_dissipation(const NetworkSpec& spec, const NetworkState& state, std::size_t node);

/// Node term from the fluxes: -(sum_in D Phi phi_x - sum_out D Phi phi_x)
/// with D phi_x(N) = theta_k F_k. Equals node_phi_dissipation algebraically.
double node_gamma2(const NetworkSpec& spec, const NetworkState& state, std::size_t node);

}  // namespace netchemo
