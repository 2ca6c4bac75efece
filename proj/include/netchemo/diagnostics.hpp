#pragma once

/// @file diagnostics.hpp
/// @brief Mass, energies, node dissipation terms, the global-existence
/// functional F_T and compatibility residuals of discrete states.
///
/// Discrete norms on each arc (cell width h, n cells):
///   ||f||^2    = sum_j f_j^2 h                       (midpoint rule)
///   ||f_x||^2  = sum_{j<n-1} ((f_{j+1}-f_j)/h)^2 h   (forward differences)
///   ||f_xx||^2 = sum_{0<j<n-1} ((f_{j+1}-2f_j+f_{j-1})/h^2)^2 h
/// summed over arcs.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "netchemo/fields.hpp"
#include "netchemo/network.hpp"

namespace netchemo {

class HyperbolicOperator;
struct ReactionSwitches;

struct FtSupTerms {
    double u = 0.0;    ///< sup ||u||_{H1}^2
    double v = 0.0;    ///< sup ||v||_{H1}^2
    double phi = 0.0;  ///< sup ||phi||_{H2}^2
};

struct FtIntegralTerms {
    double ux = 0.0;     ///< int ||u_x||^2
    double v = 0.0;      ///< int ||v||_{H1}^2
    double vt = 0.0;     ///< int ||v_t||^2
    double phix = 0.0;   ///< int ||phi_x||_{H1}^2
    double phixt = 0.0;  ///< int ||phi_xt||^2
};

struct DiagnosticsRecord {
    double time = 0.0;
    double mass = 0.0;  ///< sum of int u
    double E1 = 0.0;    ///< sum of int (u^2 + v^2)
    double E2 = 0.0;    ///< sum of int phi^2
    std::vector<double> gamma1;  ///< per node, from trace fluxes
    std::vector<double> gamma2;  ///< per node, from KK fluxes
    FtSupTerms ft_sup;
    FtIntegralTerms ft_int;
    double compat_residual = 0.0;
    double max_flux_residual = 0.0;  ///< max over nodes |sum_in lambda v - sum_out lambda v|

    /// F_T^2: sum of the sup and integral components.
    double ft_squared() const;
    double ft() const;
};

/// Instantaneous discrete norms of one state (summed over arcs).
struct StateNorms {
    double u_l2 = 0.0, u_x = 0.0;
    double v_l2 = 0.0, v_x = 0.0;
    double phi_l2 = 0.0, phi_x = 0.0, phi_xx = 0.0;

    double u_h1() const { return u_l2 + u_x; }
    double v_h1() const { return v_l2 + v_x; }
    double phi_h2() const { return phi_l2 + phi_x + phi_xx; }
};
StateNorms state_norms(const Grids& grids, const NetworkState& state);

double total_mass(const Grids& grids, const NetworkState& state);
double total_phi(const Grids& grids, const NetworkState& state);
double energy_e1(const Grids& grids, const NetworkState& state);
double energy_e2(const Grids& grids, const NetworkState& state);

/// Max over external ends and nodes of the discrete boundary/transmission
/// residuals of a state: |v(a)|, |phi_x(a)|, |theta lambda v + sum K (u_j - u_i)|
/// and |theta D phi_x - sum alpha (phi_j - phi_i)|, with end values taken from
/// the adjacent cell and phi_x from one-sided differences.
double compatibility_residual(const NetworkSpec& spec, const Grids& grids, const NetworkState& state);

/// Accumulates records along a trajectory. v_t and phi_xt are backward
/// differences between consecutive samples; time integrals use the
/// trapezoid rule; derivative terms are zero at the first sample.
class DiagnosticsMonitor {
public:
    explicit DiagnosticsMonitor(const HyperbolicOperator& hyper);

    DiagnosticsRecord measure(const NetworkState& state);

private:
    const HyperbolicOperator* hyper_;
    std::optional<NetworkState> prev_;
    double prev_integrands_[5] = {0, 0, 0, 0, 0};
    FtSupTerms sup_;
    FtIntegralTerms int_;
};

/// CSV header for the given node ids.
std::string csv_header(const std::vector<std::string>& nodes);
void write_csv_row(std::ostream& out, const DiagnosticsRecord& r);
void write_snapshot(std::ostream& out, const NetworkSpec& spec, const Grids& grids, const NetworkState& state);

}  // namespace netchemo
