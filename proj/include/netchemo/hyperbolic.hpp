#pragma once

/// @file hyperbolic.hpp
/// @brief Upwind transport of (u, v) through Riemann invariants, node trace
/// solves for the density transmission conditions, and the v-source update.
///
/// Each arc end receives exactly one characteristic from the interior: w+ at
/// a head end, w- at a tail end. At a node this gives one datum
/// c_i = u_i + theta_i v_i per arc (theta_i = +1 incoming, -1 outgoing), and
/// the transmission conditions close the system
///
///     (Lambda + L) u_N = Lambda c,     L = graph Laplacian of K,
///
/// after which v_i(N) = theta_i (c_i - u_i(N)).

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "netchemo/fields.hpp"
#include "netchemo/network.hpp"

namespace netchemo {

struct NodeTraceSolution {
    std::size_t node = 0;
    std::vector<double> u_trace;  ///< local (incidence) order
    std::vector<double> v_trace;
    double residual_flux = 0.0;   ///< sum_in lambda v - sum_out lambda v
};

/// Dense SPD system Lambda + L for one node, factorized once.
class NodeSystem {
public:
    NodeSystem(const NetworkSpec& spec, std::size_t node);

    std::size_t node() const { return node_; }
    std::size_t degree() const { return lambda_.size(); }
    const Eigen::MatrixXd& matrix() const { return matrix_; }
    const std::vector<double>& lambda() const { return lambda_; }
    const std::vector<int>& signs() const { return signs_; }
    const TransmissionMatrix& weights() const { return K_; }

    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const { return llt_.solve(rhs); }

private:
    std::size_t node_;
    std::vector<double> lambda_;
    std::vector<int> signs_;
    TransmissionMatrix K_;
    Eigen::MatrixXd matrix_;
    Eigen::LLT<Eigen::MatrixXd> llt_;
};

/// incoming_data[k] is u + v (incoming arc) or u - v (outgoing arc) from the
/// cell adjacent to the node, in the node's local arc order.
NodeTraceSolution solve_node_traces(const NodeSystem& system, std::span<const double> incoming_data);

struct EndTrace {
    double u = 0.0;
    double v = 0.0;
};

/// Null-flux closure at an external point: v = 0 reflects the arriving
/// characteristic, so u = 2 w_incoming.
constexpr EndTrace external_boundary_traces(double w_incoming) { return {2.0 * w_incoming, 0.0}; }

struct ArcTraces {
    EndTrace tail;  ///< x = 0
    EndTrace head;  ///< x = length
};

struct Traces {
    std::vector<ArcTraces> arcs;
    std::vector<NodeTraceSolution> nodes;
};

/// Owns the factorized node systems of a network.
class HyperbolicOperator {
public:
    HyperbolicOperator(const NetworkSpec& spec, Grids grids);

    const NetworkSpec& spec() const { return spec_; }
    const Grids& grids() const { return grids_; }
    const NodeSystem& node_system(std::size_t node) const { return systems_[node]; }

    /// Gathers characteristic data, solves every node, and scatters endpoint
    /// (u, v) traces back to arcs.
    Traces compute_traces(const NetworkState& state) const;

    /// Largest stable step: min over arcs of h / lambda (times cfl).
    double max_stable_dt(double cfl = 1.0) const;

private:
    NetworkSpec spec_;
    Grids grids_;
    std::vector<NodeSystem> systems_;
};

/// First-order upwind update of w+ (speed +lambda) and w- (speed -lambda)
/// using endpoint traces as ghost values. Throws CflViolation if
/// lambda dt / h > 1 on any arc.
NetworkState transport_step(const NetworkSpec& spec, const Grids& grids, NetworkState state,
                            const Traces& traces, double dt);

/// Semi-discrete right-hand side of the same upwind discretization.
struct TransportRate {
    std::vector<std::vector<double>> du;
    std::vector<std::vector<double>> dv;
};
TransportRate transport_rate(const NetworkSpec& spec, const Grids& grids, const NetworkState& state,
                             const Traces& traces);

/// Centered differences inside the arc, second-order one-sided at both ends.
std::vector<double> phi_gradient(std::span<const double> phi, double h);

/// v <- v e^{-beta dt} + phi_x u (1 - e^{-beta dt}) / beta per cell, the exact
/// solution of v' = phi_x u - beta v with u and phi_x frozen. With damping
/// disabled the update is v + dt phi_x u.
NetworkState source_step(const NetworkSpec& spec, NetworkState state,
                         const std::vector<std::vector<double>>& phi_x, double dt, bool damping = true);

/// Node flux identity terms.
/// gamma1 = sum_in lambda v u - sum_out lambda v u on the traces.
double node_gamma1(const NodeSystem& system, const NodeTraceSolution& sol);
/// 1/2 sum_ij K_ij (u_j - u_i)^2 on the traces.
double node_gamma1_quadratic(const NodeSystem& system, const NodeTraceSolution& sol);

}  // namespace netchemo
