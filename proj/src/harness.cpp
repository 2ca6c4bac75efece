#include "netchemo/harness.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "netchemo/errors.hpp"
#include "netchemo/hyperbolic.hpp"
#include "netchemo/parabolic.hpp"

namespace netchemo {

namespace {

struct Rate {
    Field du, dv, dphi;
};

Rate semi_discrete_rate(const HyperbolicOperator& hyper, const NetworkState& y, const Toggles& tg) {
    const auto& spec = hyper.spec();
    const auto& grids = hyper.grids();
    const auto traces = hyper.compute_traces(y);
    auto tr = transport_rate(spec, grids, y, traces);
    Rate r{std::move(tr.du), std::move(tr.dv), {}};
    for (std::size_t i = 0; i < grids.size(); ++i) {
        const auto& s = y.arcs[i];
        const double beta = tg.damping ? spec.arcs[i].beta : 0.0;
        std::vector<double> gx;
        if (tg.chemotaxis_source) gx = phi_gradient(s.phi, grids[i].h);
        for (std::size_t j = 0; j < s.size(); ++j) {
            const double chemo = tg.chemotaxis_source ? gx[j] * s.u[j] : 0.0;
            r.dv[i][j] += chemo - beta * s.v[j];
        }
    }
    r.dphi = diffusion_rate(spec, grids, y, {tg.production, tg.degradation});
    return r;
}

NetworkState axpy(const NetworkState& y, double c, const Rate& k) {
    NetworkState out = y;
    for (std::size_t i = 0; i < out.arcs.size(); ++i) {
        auto& s = out.arcs[i];
        for (std::size_t j = 0; j < s.size(); ++j) {
            s.u[j] += c * k.du[i][j];
            s.v[j] += c * k.dv[i][j];
            s.phi[j] += c * k.dphi[i][j];
        }
    }
    return out;
}

}  // namespace

NetworkState oracle_run(const NetworkSpec& spec, const Grids& grids, const NetworkState& initial,
                        double t_final, double dt_oracle, Toggles toggles) {
    if (!(dt_oracle > 0.0)) throw std::invalid_argument("dt_oracle must be positive");
    for (std::size_t i = 0; i < grids.size(); ++i) {
        const double limit = grids[i].h * grids[i].h / (2.0 * spec.arcs[i].D);
        if (dt_oracle > limit) {
            std::ostringstream msg;
            msg << "dt_oracle = " << dt_oracle << " exceeds the explicit diffusion limit " << limit
                << " on arc '" << spec.arcs[i].id << "'";
            throw NumericalError(msg.str());
        }
    }
    const HyperbolicOperator hyper(spec, grids);
    NetworkState y = initial;
    const double span = t_final - initial.time;
    if (!(span > 0.0)) return y;
    const auto steps = step_schedule(span, dt_oracle);
    for (std::size_t k = 0; k < steps.size(); ++k) {
        const double h = steps[k];
        const Rate k1 = semi_discrete_rate(hyper, y, toggles);
        const Rate k2 = semi_discrete_rate(hyper, axpy(y, 0.5 * h, k1), toggles);
        const Rate k3 = semi_discrete_rate(hyper, axpy(y, 0.5 * h, k2), toggles);
        const Rate k4 = semi_discrete_rate(hyper, axpy(y, h, k3), toggles);
        for (std::size_t i = 0; i < y.arcs.size(); ++i) {
            auto& s = y.arcs[i];
            for (std::size_t j = 0; j < s.size(); ++j) {
                s.u[j] += h / 6.0 * (k1.du[i][j] + 2.0 * k2.du[i][j] + 2.0 * k3.du[i][j] + k4.du[i][j]);
                s.v[j] += h / 6.0 * (k1.dv[i][j] + 2.0 * k2.dv[i][j] + 2.0 * k3.dv[i][j] + k4.dv[i][j]);
                s.phi[j] +=
                    h / 6.0 * (k1.dphi[i][j] + 2.0 * k2.dphi[i][j] + 2.0 * k3.dphi[i][j] + k4.dphi[i][j]);
            }
        }
    }
    y.time = t_final;
    return y;
}

NetworkState oracle_run(const NetworkSpec& spec, const Grids& grids, const InitialConditions& ic,
                        double t_final, double dt_oracle, Toggles toggles) {
    return oracle_run(spec, grids, build_initial_state(spec, grids, ic, false).state, t_final, dt_oracle,
                      toggles);
}

double linf_gap(const NetworkState& a, const NetworkState& b) {
    if (a.arcs.size() != b.arcs.size()) throw std::invalid_argument("states have different arc counts");
    double g = 0.0;
    for (std::size_t i = 0; i < a.arcs.size(); ++i) {
        const auto& x = a.arcs[i];
        const auto& y = b.arcs[i];
        if (x.size() != y.size()) throw std::invalid_argument("states have different grids");
        for (std::size_t j = 0; j < x.size(); ++j) {
            g = std::max(g, std::abs(x.u[j] - y.u[j]));
            g = std::max(g, std::abs(x.v[j] - y.v[j]));
            g = std::max(g, std::abs(x.phi[j] - y.phi[j]));
        }
    }
    return g;
}

double l2_difference(const Grids& grids, const NetworkState& a, const NetworkState& b, FieldId f) {
    double s = 0.0;
    for (std::size_t i = 0; i < grids.size(); ++i) {
        const auto& x = a.arcs[i];
        const auto& y = b.arcs[i];
        const auto& fx = f == FieldId::u ? x.u : f == FieldId::v ? x.v : x.phi;
        const auto& fy = f == FieldId::u ? y.u : f == FieldId::v ? y.v : y.phi;
        double acc = 0.0;
        for (std::size_t j = 0; j < fx.size(); ++j) acc += (fx[j] - fy[j]) * (fx[j] - fy[j]);
        s += acc * grids[i].h;
    }
    return std::sqrt(s);
}

NetworkState restrict_to_coarse(const NetworkState& fine) {
    NetworkState c;
    c.time = fine.time;
    for (const auto& s : fine.arcs) {
        if (s.size() % 2 != 0) throw std::invalid_argument("restriction needs an even cell count");
        ArcState a(s.size() / 2);
        for (std::size_t j = 0; j < a.size(); ++j) {
            a.u[j] = 0.5 * (s.u[2 * j] + s.u[2 * j + 1]);
            a.v[j] = 0.5 * (s.v[2 * j] + s.v[2 * j + 1]);
            a.phi[j] = 0.5 * (s.phi[2 * j] + s.phi[2 * j + 1]);
        }
        c.arcs.push_back(std::move(a));
    }
    return c;
}

ConvergenceTable convergence_study(const NetworkSpec& spec, const InitialConditions& ic,
                                   const ConvergenceOptions& opt) {
    if (opt.levels < 3) throw std::invalid_argument("convergence study needs at least 3 levels");

    struct Level {
        Grids grids;
        NetworkState final_state;
        double dt;
    };
    std::vector<Level> runs;
    const double h0 = spec.arcs.front().length / static_cast<double>(opt.base_cells);
    for (std::size_t l = 0; l < opt.levels; ++l) {
        SimConfig cfg;
        cfg.t_final = opt.t_final;
        cfg.cfl = opt.cfl;
        cfg.toggles = opt.toggles;
        cfg.compat_check = false;
        cfg.n_cells.assign(spec.arcs.size(), opt.base_cells << l);
        cfg.output_every = std::numeric_limits<std::size_t>::max();
        const Grids grids = make_grids(spec, cfg.n_cells);
        double dt = compute_dt(spec, grids, cfg.cfl);
        if (opt.diffusive_dt0) {
            const double r = grids.front().h / h0;
            cfg.max_dt = *opt.diffusive_dt0 * r * r;
            dt = std::min(dt, *cfg.max_dt);
        }
        auto res = run(spec, cfg, ic);
        runs.push_back({grids, std::move(res.final_state), dt});
    }

    ConvergenceTable table;
    const std::size_t n_rows = opt.exact ? opt.levels : opt.levels - 1;
    for (std::size_t l = 0; l < n_rows; ++l) {
        const auto& run_l = runs[l];
        ConvergenceRow row;
        row.n_cells = run_l.grids.front().n_cells;
        row.h = run_l.grids.front().h;
        row.dt = run_l.dt;
        NetworkState ref;
        if (opt.exact) {
            ref = run_l.final_state;
            for (std::size_t i = 0; i < ref.arcs.size(); ++i)
                for (std::size_t j = 0; j < ref.arcs[i].size(); ++j) {
                    const auto e = opt.exact(i, run_l.grids[i].center(j), opt.t_final);
                    ref.arcs[i].u[j] = e[0];
                    ref.arcs[i].v[j] = e[1];
                    ref.arcs[i].phi[j] = e[2];
                }
        } else {
            ref = restrict_to_coarse(runs[l + 1].final_state);
        }
        const FieldId ids[3] = {FieldId::u, FieldId::v, FieldId::phi};
        for (int f = 0; f < 3; ++f) row.error[f] = l2_difference(run_l.grids, run_l.final_state, ref, ids[f]);
        row.exact = row.error[0] <= exact_error_threshold && row.error[1] <= exact_error_threshold &&
                    row.error[2] <= exact_error_threshold;
        if (!table.rows.empty()) {
            const auto& prev = table.rows.back();
            for (int f = 0; f < 3; ++f)
                if (prev.error[f] > exact_error_threshold && row.error[f] > exact_error_threshold)
                    row.order[f] = std::log2(prev.error[f] / row.error[f]);
        }
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace netchemo
