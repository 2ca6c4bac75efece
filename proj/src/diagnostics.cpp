#include "netchemo/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "netchemo/hyperbolic.hpp"
#include "netchemo/parabolic.hpp"

namespace netchemo {

namespace {

double l2(std::span<const double> f, double h) {
    double s = 0.0;
    for (double x : f) s += x * x;
    return s * h;
}

double dx2(std::span<const double> f, double h) {
    double s = 0.0;
    for (std::size_t j = 0; j + 1 < f.size(); ++j) {
        const double d = (f[j + 1] - f[j]) / h;
        s += d * d;
    }
    return s * h;
}

double dxx2(std::span<const double> f, double h) {
    double s = 0.0;
    for (std::size_t j = 1; j + 1 < f.size(); ++j) {
        const double d = (f[j + 1] - 2.0 * f[j] + f[j - 1]) / (h * h);
        s += d * d;
    }
    return s * h;
}

std::vector<double> forward_diff(std::span<const double> f, double h) {
    std::vector<double> d(f.size() > 0 ? f.size() - 1 : 0);
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = (f[j + 1] - f[j]) / h;
    return d;
}

// %.17g keeps CSV output round-trippable and byte-stable.
void put(std::ostream& out, double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);  // no "-0"
    out << buf;
}

}  // namespace

double DiagnosticsRecord::ft_squared() const {
    return ft_sup.u + ft_sup.v + ft_sup.phi + ft_int.ux + ft_int.v + ft_int.vt + ft_int.phix + ft_int.phixt;
}

double DiagnosticsRecord::ft() const { return std::sqrt(ft_squared()); }

StateNorms state_norms(const Grids& grids, const NetworkState& state) {
    StateNorms n;
    for (std::size_t i = 0; i < grids.size(); ++i) {
        const double h = grids[i].h;
        const auto& s = state.arcs[i];
        n.u_l2 += l2(s.u, h);
        n.u_x += dx2(s.u, h);
        n.v_l2 += l2(s.v, h);
        n.v_x += dx2(s.v, h);
        n.phi_l2 += l2(s.phi, h);
        n.phi_x += dx2(s.phi, h);
        n.phi_xx += dxx2(s.phi, h);
    }
    return n;
}

double total_mass(const Grids& grids, const NetworkState& state) {
    double m = 0.0;
    for (std::size_t i = 0; i < grids.size(); ++i) {
        double s = 0.0;
        for (double u : state.arcs[i].u) s += u;
        m += s * grids[i].h;
    }
    return m;
}

double total_phi(const Grids& grids, const NetworkState& state) {
    double m = 0.0;
    for (std::size_t i = 0; i < grids.size(); ++i) {
        double s = 0.0;
        for (double p : state.arcs[i].phi) s += p;
        m += s * grids[i].h;
    }
    return m;
}

double energy_e1(const Grids& grids, const NetworkState& state) {
    double e = 0.0;
    for (std::size_t i = 0; i < grids.size(); ++i)
        e += l2(state.arcs[i].u, grids[i].h) + l2(state.arcs[i].v, grids[i].h);
    return e;
}

double energy_e2(const Grids& grids, const NetworkState& state) {
    double e = 0.0;
    for (std::size_t i = 0; i < grids.size(); ++i) e += l2(state.arcs[i].phi, grids[i].h);
    return e;
}

double compatibility_residual(const NetworkSpec& spec, const Grids& grids, const NetworkState& state) {
    double res = 0.0;
    // one-sided phi_x at an arc end; sign > 0 is the head end
    auto end_slope = [&](std::size_t arc, int sign) {
        const auto& phi = state.arcs[arc].phi;
        const std::size_t n = phi.size();
        return sign > 0 ? (phi[n - 1] - phi[n - 2]) / grids[arc].h : (phi[1] - phi[0]) / grids[arc].h;
    };
    for (std::size_t i = 0; i < spec.arcs.size(); ++i) {
        const auto& a = spec.arcs[i];
        const auto& s = state.arcs[i];
        if (!a.tail.is_node()) {
            res = std::max(res, std::abs(s.v.front()));
            res = std::max(res, std::abs(end_slope(i, -1)));
        }
        if (!a.head.is_node()) {
            res = std::max(res, std::abs(s.v.back()));
            res = std::max(res, std::abs(end_slope(i, 1)));
        }
    }
    for (std::size_t v = 0; v < spec.nodes.size(); ++v) {
        const auto& inc = spec.incidence[v];
        const auto& K = spec.K[v];
        const auto& alpha = spec.alpha[v];
        const std::size_t m = inc.size();
        std::vector<double> u(m), vv(m), phi(m);
        for (std::size_t k = 0; k < m; ++k) {
            const auto& s = state.arcs[inc[k].arc];
            const bool head = inc[k].sign > 0;
            u[k] = head ? s.u.back() : s.u.front();
            vv[k] = head ? s.v.back() : s.v.front();
            phi[k] = head ? s.phi.back() : s.phi.front();
        }
        for (std::size_t k = 0; k < m; ++k) {
            const auto& a = spec.arcs[inc[k].arc];
            double ku = 0.0, aphi = 0.0;
            for (std::size_t j = 0; j < m; ++j) {
                ku += K(k, j) * (u[j] - u[k]);
                aphi += alpha(k, j) * (phi[j] - phi[k]);
            }
            const double theta = inc[k].sign;
            res = std::max(res, std::abs(theta * a.lambda * vv[k] + ku));
            res = std::max(res, std::abs(theta * a.D * end_slope(inc[k].arc, inc[k].sign) - aphi));
        }
    }
    return res;
}

DiagnosticsMonitor::DiagnosticsMonitor(const HyperbolicOperator& hyper) : hyper_(&hyper) {}

DiagnosticsRecord DiagnosticsMonitor::measure(const NetworkState& state) {
    const auto& spec = hyper_->spec();
    const auto& grids = hyper_->grids();
    if (state.arcs.size() != grids.size()) throw std::invalid_argument("state does not match grids");
    for (std::size_t i = 0; i < grids.size(); ++i)
        if (state.arcs[i].size() != grids[i].n_cells)
            throw std::invalid_argument("state does not match grid of arc '" + spec.arcs[i].id + "'");

    DiagnosticsRecord r;
    r.time = state.time;
    r.mass = total_mass(grids, state);
    r.E1 = energy_e1(grids, state);
    r.E2 = energy_e2(grids, state);

    const auto traces = hyper_->compute_traces(state);
    r.gamma1.resize(spec.nodes.size());
    r.gamma2.resize(spec.nodes.size());
    for (std::size_t v = 0; v < spec.nodes.size(); ++v) {
        r.gamma1[v] = node_gamma1(hyper_->node_system(v), traces.nodes[v]);
        r.gamma2[v] = node_gamma2(spec, state, v);
        r.max_flux_residual = std::max(r.max_flux_residual, std::abs(traces.nodes[v].residual_flux));
    }

    const auto n = state_norms(grids, state);
    sup_.u = std::max(sup_.u, n.u_h1());
    sup_.v = std::max(sup_.v, n.v_h1());
    sup_.phi = std::max(sup_.phi, n.phi_h2());

    double integrands[5] = {n.u_x, n.v_h1(), 0.0, n.phi_x + n.phi_xx, 0.0};
    if (prev_) {
        const double dt = state.time - prev_->time;
        if (dt > 0.0) {
            double vt = 0.0, phixt = 0.0;
            for (std::size_t i = 0; i < grids.size(); ++i) {
                const double h = grids[i].h;
                const auto& s = state.arcs[i];
                const auto& p = prev_->arcs[i];
                for (std::size_t j = 0; j < s.size(); ++j) {
                    const double d = (s.v[j] - p.v[j]) / dt;
                    vt += d * d * h;
                }
                const auto gx = forward_diff(s.phi, h);
                const auto gx_prev = forward_diff(p.phi, h);
                for (std::size_t j = 0; j < gx.size(); ++j) {
                    const double d = (gx[j] - gx_prev[j]) / dt;
                    phixt += d * d * h;
                }
            }
            integrands[2] = vt;
            integrands[4] = phixt;
            double* acc[5] = {&int_.ux, &int_.v, &int_.vt, &int_.phix, &int_.phixt};
            for (int k = 0; k < 5; ++k) *acc[k] += 0.5 * (prev_integrands_[k] + integrands[k]) * dt;
        }
    }
    std::copy(std::begin(integrands), std::end(integrands), prev_integrands_);
    prev_ = state;

    r.ft_sup = sup_;
    r.ft_int = int_;
    r.compat_residual = compatibility_residual(spec, grids, state);
    return r;
}

std::string csv_header(const std::vector<std::string>& nodes) {
    std::string h = "time,mass,E1,E2";
    for (const auto& n : nodes) h += ",gamma1_" + n;
    for (const auto& n : nodes) h += ",gamma2_" + n;
    h += ",FT_sup_u,FT_sup_v,FT_sup_phi,FT_int_ux,FT_int_v,FT_int_vt,FT_int_phix,FT_int_phixt,compat_residual";
    return h;
}

void write_csv_row(std::ostream& out, const DiagnosticsRecord& r) {
    put(out, r.time);
    for (double x : {r.mass, r.E1, r.E2}) {
        out << ',';
        put(out, x);
    }
    for (double g : r.gamma1) {
        out << ',';
        put(out, g);
    }
    for (double g : r.gamma2) {
        out << ',';
        put(out, g);
    }
    for (double x : {r.ft_sup.u, r.ft_sup.v, r.ft_sup.phi, r.ft_int.ux, r.ft_int.v, r.ft_int.vt,
                     r.ft_int.phix, r.ft_int.phixt, r.compat_residual}) {
        out << ',';
        put(out, x);
    }
    out << '\n';
}

void write_snapshot(std::ostream& out, const NetworkSpec& spec, const Grids& grids, const NetworkState& state) {
    out << "arc,x,u,v,phi\n";
    for (std::size_t i = 0; i < grids.size(); ++i) {
        const auto& s = state.arcs[i];
        for (std::size_t j = 0; j < s.size(); ++j) {
            out << spec.arcs[i].id << ',';
            put(out, grids[i].center(j));
            for (double x : {s.u[j], s.v[j], s.phi[j]}) {
                out << ',';
                put(out, x);
            }
            out << '\n';
        }
    }
}

}  // namespace netchemo
