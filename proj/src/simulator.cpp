#include "netchemo/simulator.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "netchemo/errors.hpp"

namespace netchemo {

void SimConfig::check() const {
    if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ConfigError("t_final must be positive");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl must lie in (0, 1]");
    if (output_every == 0) throw ConfigError("output_every must be positive");
    if (max_dt && !(*max_dt > 0.0)) throw ConfigError("max_dt must be positive");
}

double compute_dt(const NetworkSpec& spec, const Grids& grids, double cfl) {
    double dt = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grids.size(); ++i) {
        if (!(spec.arcs[i].lambda > 0.0)) throw std::invalid_argument("compute_dt needs lambda > 0");
        dt = std::min(dt, grids[i].h / spec.arcs[i].lambda);
    }
    return cfl * dt;
}

namespace {

// Number of steps so that full steps plus one remainder cover t_final. A
// remainder below 1e-12 dt is absorbed into the last full step.
std::size_t count_steps(double t_final, double dt) {
    const double q = t_final / dt;
    auto n = static_cast<std::size_t>(std::floor(q));
    if (q - static_cast<double>(n) > 1e-12) ++n;
    return std::max<std::size_t>(n, 1);
}

}  // namespace

double schedule_time(double t_final, double dt, std::size_t k, std::size_t n_steps) {
    if (k >= n_steps) return t_final;
    return std::min(static_cast<double>(k) * dt, t_final);
}

std::vector<double> step_schedule(double t_final, double dt) {
    const std::size_t n = count_steps(t_final, dt);
    std::vector<double> steps(n);
    for (std::size_t k = 0; k + 1 < n; ++k) steps[k] = dt;
    steps[n - 1] = t_final - static_cast<double>(n - 1) * dt;
    return steps;
}

Simulator::Simulator(const NetworkSpec& spec, Grids grids, Toggles toggles)
    : hyper_(spec, std::move(grids)), toggles_(toggles) {}

NetworkState Simulator::step(const NetworkState& state, double dt, std::optional<double> new_time,
                             Traces* traces_out) {
    const auto& spec = hyper_.spec();
    const auto& grids = hyper_.grids();

    Traces traces = hyper_.compute_traces(state);
    NetworkState next = transport_step(spec, grids, state, traces, dt);

    // phi_x is taken from the old phi and frozen over the step
    Field phi_x(grids.size());
    for (std::size_t i = 0; i < grids.size(); ++i) {
        if (toggles_.chemotaxis_source) phi_x[i] = phi_gradient(state.arcs[i].phi, grids[i].h);
        else phi_x[i].assign(grids[i].n_cells, 0.0);
    }
    next = source_step(spec, std::move(next), phi_x, dt, toggles_.damping);

    if (!diffusion_ || !diffusion_->matches(dt)) {
        diffusion_.emplace(spec, grids, dt, reaction());
        ++assemblies_;
    }
    Field phi = diffusion_step(*diffusion_, next);
    for (std::size_t i = 0; i < grids.size(); ++i) next.arcs[i].phi = std::move(phi[i]);

    next.time = new_time ? *new_time : state.time + dt;
    if (traces_out) *traces_out = std::move(traces);
    return next;
}

RunResult run(const NetworkSpec& spec, const SimConfig& config, const InitialConditions& ic,
              const SampleCallback& on_sample) {
    config.check();
    const Grids grids = make_grids(spec, config.n_cells);
    auto init = build_initial_state(spec, grids, ic, config.compat_check);
    RunResult r = run_from(spec, config, init.state, on_sample);
    r.warnings.insert(r.warnings.begin(), init.warnings.begin(), init.warnings.end());
    return r;
}

RunResult run_from(const NetworkSpec& spec, const SimConfig& config, const NetworkState& initial,
                   const SampleCallback& on_sample) {
    config.check();
    Simulator sim(spec, make_grids(spec, config.n_cells), config.toggles);
    double dt = compute_dt(spec, sim.grids(), config.cfl);
    if (config.max_dt) dt = std::min(dt, *config.max_dt);

    const double t0 = initial.time;
    const double span = config.t_final - t0;
    if (!(span > 0.0)) throw ConfigError("t_final must exceed the initial time");
    const std::size_t n = count_steps(span, dt);

    RunResult result;
    DiagnosticsMonitor monitor(sim.hyperbolic());
    auto sample = [&](const NetworkState& s) {
        auto rec = monitor.measure(s);
        for (std::size_t v = 0; v < rec.gamma1.size(); ++v) {
            if (rec.gamma1[v] < -1e-12 || rec.gamma2[v] < -1e-12) {
                std::ostringstream msg;
                msg << "negative node dissipation at node '" << spec.nodes[v] << "', t = " << s.time;
                result.warnings.push_back(msg.str());
            }
        }
        if (on_sample) on_sample(s, rec);
        result.records.push_back(std::move(rec));
    };

    NetworkState state = initial;
    sample(state);
    // full steps use dt itself so the diffusion factorization is reused; the
    // last step takes the remainder and lands exactly on t_final
    for (std::size_t k = 0; k < n; ++k) {
        const bool last = k + 1 == n;
        const double h = last ? span - static_cast<double>(n - 1) * dt : dt;
        state = sim.step(state, h, last ? config.t_final : t0 + schedule_time(span, dt, k + 1, n));
        if ((k + 1) % config.output_every == 0 || k + 1 == n) sample(state);
    }
    result.final_state = std::move(state);
    result.wall_steps = n;
    return result;
}

}  // namespace netchemo
