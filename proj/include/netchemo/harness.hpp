#pragma once

/// @file harness.hpp
/// @brief Reference integrator and refinement studies.

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "netchemo/fields.hpp"
#include "netchemo/network.hpp"
#include "netchemo/simulator.hpp"

namespace netchemo {

/// Integrates the semi-discrete system behind the split solver (same cells,
/// node solves and flux formulas) with classical RK4 at `dt_oracle`, diffusion
/// explicit. Throws NumericalError if dt_oracle > h^2 / (2 D) on any arc.
NetworkState oracle_run(const NetworkSpec& spec, const Grids& grids, const NetworkState& initial,
                        double t_final, double dt_oracle, Toggles toggles = {});

NetworkState oracle_run(const NetworkSpec& spec, const Grids& grids, const InitialConditions& ic,
                        double t_final, double dt_oracle, Toggles toggles = {});

/// Max abs difference over u, v and phi.
double linf_gap(const NetworkState& a, const NetworkState& b);

/// Network L2 norm of the difference of one field.
enum class FieldId { u, v, phi };
double l2_difference(const Grids& grids, const NetworkState& a, const NetworkState& b, FieldId f);

/// Averages pairs of fine cells onto a grid with half as many cells per arc.
NetworkState restrict_to_coarse(const NetworkState& fine);

/// Exact solution (u, v, phi) at (arc, x, t), if known.
using ExactSolution = std::function<std::array<double, 3>(std::size_t arc, double x, double t)>;

struct ConvergenceOptions {
    std::size_t levels = 4;
    std::size_t base_cells = 16;  ///< per arc at the coarsest level
    double t_final = 0.5;
    double cfl = 0.9;
    Toggles toggles;
    /// When set, dt = diffusive_dt0 * (h / h0)^2 instead of the CFL step.
    std::optional<double> diffusive_dt0;
    /// When set, errors are measured against it; otherwise against the next
    /// finer level (Richardson-style).
    ExactSolution exact;
};

struct ConvergenceRow {
    std::size_t n_cells = 0;  ///< per arc
    double h = 0.0;           ///< cell width on the first arc
    double dt = 0.0;
    std::array<double, 3> error{};                 ///< u, v, phi (L2)
    std::array<std::optional<double>, 3> order{};  ///< vs previous row
    bool exact = false;                            ///< all errors <= 1e-12
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
};

inline constexpr double exact_error_threshold = 1e-12;

/// Runs `levels` refinements (cells doubling). With a reference solution
/// every level gets an error; in Richardson mode the last level only serves
/// as reference for the one before it. Observed order between consecutive
/// rows is log2(e_prev / e). Throws std::invalid_argument if levels < 3.
ConvergenceTable convergence_study(const NetworkSpec& spec, const InitialConditions& ic,
                                   const ConvergenceOptions& options);

}  // namespace netchemo
