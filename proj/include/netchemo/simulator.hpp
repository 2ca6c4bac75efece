#pragma once

/// @file simulator.hpp
/// @brief Split time loop: node/boundary traces, upwind transport, v-source,
/// implicit phi diffusion.

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "netchemo/diagnostics.hpp"
#include "netchemo/fields.hpp"
#include "netchemo/hyperbolic.hpp"
#include "netchemo/network.hpp"
#include "netchemo/parabolic.hpp"

namespace netchemo {

/// Ablation switches. Everything on is the full model.
struct Toggles {
    bool chemotaxis_source = true;  ///< phi_x u in the v equation
    bool damping = true;            ///< -beta v
    bool production = true;         ///< a u in the phi equation
    bool degradation = true;        ///< -b phi
    friend bool operator==(const Toggles&, const Toggles&) = default;
};

struct SimConfig {
    double t_final = 1.0;
    double cfl = 0.9;
    std::vector<std::size_t> n_cells;  ///< per arc
    std::size_t output_every = 1;
    Toggles toggles;
    bool compat_check = true;
    std::optional<double> max_dt;  ///< caps the CFL step (used by diffusive refinement)

    /// Throws ConfigError unless cfl in (0,1], t_final > 0, output_every > 0.
    void check() const;
};

struct RunResult {
    NetworkState final_state;
    std::vector<DiagnosticsRecord> records;
    std::size_t wall_steps = 0;
    std::vector<std::string> warnings;
};

/// dt = cfl * min_i h_i / lambda_i.
double compute_dt(const NetworkSpec& spec, const Grids& grids, double cfl);

/// Step sizes covering [0, t_final]: full steps of `dt`, then one shortened
/// step landing exactly on t_final.
std::vector<double> step_schedule(double t_final, double dt);

/// Time reached after k steps of the schedule (exactly t_final for the last).
double schedule_time(double t_final, double dt, std::size_t k, std::size_t n_steps);

class Simulator {
public:
    Simulator(const NetworkSpec& spec, Grids grids, Toggles toggles = {});

    const NetworkSpec& spec() const { return hyper_.spec(); }
    const Grids& grids() const { return hyper_.grids(); }
    const HyperbolicOperator& hyperbolic() const { return hyper_; }
    const Toggles& toggles() const { return toggles_; }
    ReactionSwitches reaction() const { return {toggles_.production, toggles_.degradation}; }

    /// Advances by dt; time becomes state.time + dt (or `new_time` if given).
    /// `traces_out` receives the node/boundary traces used for transport.
    NetworkState step(const NetworkState& state, double dt, std::optional<double> new_time = {},
                      Traces* traces_out = nullptr);

    /// Number of diffusion assemblies performed so far.
    std::size_t assemblies() const { return assemblies_; }

private:
    HyperbolicOperator hyper_;
    Toggles toggles_;
    std::optional<DiffusionSystem> diffusion_;
    std::size_t assemblies_ = 0;
};

using SampleCallback = std::function<void(const NetworkState&, const DiagnosticsRecord&)>;

/// Runs to config.t_final, sampling diagnostics every `output_every` steps
/// and at the final step. Deterministic.
RunResult run(const NetworkSpec& spec, const SimConfig& config, const InitialConditions& ic,
              const SampleCallback& on_sample = {});

/// Same, from an already-built initial state.
RunResult run_from(const NetworkSpec& spec, const SimConfig& config, const NetworkState& initial,
                   const SampleCallback& on_sample = {});

}  // namespace netchemo
