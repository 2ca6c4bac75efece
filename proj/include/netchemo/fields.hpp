#pragma once

/// @file fields.hpp
/// @brief Cell-centered per-arc grids, discrete state containers, Riemann
/// invariants and initial-data construction.

#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "netchemo/network.hpp"

namespace netchemo {

/// Uniform cell-centered grid on one arc; cell j is centered at (j + 1/2) h.
struct ArcGrid {
    std::size_t arc = 0;
    std::size_t n_cells = 0;
    double h = 0.0;

    double center(std::size_t j) const { return (static_cast<double>(j) + 0.5) * h; }
    friend bool operator==(const ArcGrid&, const ArcGrid&) = default;
};

using Grids = std::vector<ArcGrid>;  // indexed like NetworkSpec::arcs

inline constexpr std::size_t min_cells_per_arc = 4;

/// Builds one grid per arc. Throws std::invalid_argument if any count < 4.
Grids make_grids(const NetworkSpec& spec, const std::vector<std::size_t>& n_cells);
Grids make_grids(const NetworkSpec& spec, std::size_t n_cells_per_arc);

struct ArcState {
    std::vector<double> u;    ///< cell density
    std::vector<double> v;    ///< cell flux
    std::vector<double> phi;  ///< chemoattractant

    explicit ArcState(std::size_t n = 0) : u(n, 0.0), v(n, 0.0), phi(n, 0.0) {}
    std::size_t size() const { return u.size(); }
    friend bool operator==(const ArcState&, const ArcState&) = default;
};

struct NetworkState {
    double time = 0.0;
    std::vector<ArcState> arcs;  ///< indexed like NetworkSpec::arcs

    friend bool operator==(const NetworkState&, const NetworkState&) = default;
};

NetworkState zero_state(const Grids& grids);

struct RiemannPair {
    double w_plus;
    double w_minus;
};

/// w+ = (u + v)/2 travels right at speed lambda, w- = (u - v)/2 travels left.
constexpr RiemannPair to_invariants(double u, double v) { return {0.5 * (u + v), 0.5 * (u - v)}; }

struct DensityFlux {
    double u;
    double v;
};

constexpr DensityFlux from_invariants(double w_plus, double w_minus) {
    return {w_plus + w_minus, w_plus - w_minus};
}

/// Spatial profile of one field along an arc (x measured from the tail).
struct FieldProfile {
    enum class Shape { constant, gaussian, cosine };
    Shape shape = Shape::constant;
    double base = 0.0;
    double amplitude = 0.0;
    double center = -1.0;  ///< gaussian center; negative means mid-arc
    double width = 0.1;    ///< gaussian: exp(-((x - center)/width)^2)
    int mode = 1;          ///< cosine: cos(mode * pi * x / length)

    double evaluate(double x, double length) const;
};

/// Initial data for one arc.
///  - constant:     u, v, phi uniform
///  - gaussian:     per-field profiles (typically a u bump)
///  - cosine:       per-field cosine modes, zero slope at both arc ends
///  - steady:       u = c, v = 0, phi = (a/b) c
///  - custom_table: exactly n_cells samples per field
struct InitialCondition {
    enum class Kind { constant, gaussian, cosine, steady, custom_table };
    Kind kind = Kind::constant;
    FieldProfile u, v, phi;
    double steady_value = 0.0;
    std::vector<double> table_u, table_v, table_phi;

    static InitialCondition constant(double u, double v, double phi);
    static InitialCondition steady(double c);
    static InitialCondition gaussian_bump(double amplitude, double center, double width,
                                          double base = 0.0);
    static InitialCondition table(std::vector<double> u, std::vector<double> v, std::vector<double> phi);
};

using InitialConditions = std::vector<InitialCondition>;  // one per arc

/// Result of initial-data construction; `warnings` collects compatibility
/// violations when checking is enabled.
struct InitialState {
    NetworkState state;
    double compat_residual = 0.0;
    std::vector<std::string> warnings;
};

inline constexpr double compat_tolerance = 1e-8;

/// Samples the initial conditions on the grids at t = 0. Throws
/// std::invalid_argument on a custom-table length mismatch.
InitialState build_initial_state(const NetworkSpec& spec, const Grids& grids,
                                 const InitialConditions& ic, bool compat_check = true);

}  // namespace netchemo
