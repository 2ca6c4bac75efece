#include "netchemo/hyperbolic.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "netchemo/errors.hpp"
#include "netchemo/parallel.hpp"

namespace netchemo {

NodeSystem::NodeSystem(const NetworkSpec& spec, std::size_t node)
    : node_(node), K_(spec.K.at(node)) {
    const auto& inc = spec.incidence.at(node);
    const std::size_t n = inc.size();
    lambda_.reserve(n);
    signs_.reserve(n);
    for (const auto& e : inc) {
        lambda_.push_back(spec.arcs.at(e.arc).lambda);
        signs_.push_back(e.sign);
    }
    matrix_ = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        matrix_(ii, ii) = lambda_[i] + K_.row_sum(i);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) matrix_(ii, static_cast<Eigen::Index>(j)) = -K_(i, j);
    }
    llt_.compute(matrix_);
    if (llt_.info() != Eigen::Success)
        throw SolverBreakdown("node '" + spec.nodes.at(node) +
                              "': trace system is not positive definite (check lambda and K)");
}

NodeTraceSolution solve_node_traces(const NodeSystem& system, std::span<const double> incoming_data) {
    const std::size_t n = system.degree();
    if (incoming_data.size() != n) throw std::invalid_argument("node data size does not match degree");
    const auto& lam = system.lambda();
    const auto& sgn = system.signs();

    Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) rhs(static_cast<Eigen::Index>(k)) = lam[k] * incoming_data[k];
    const Eigen::VectorXd uN = system.solve(rhs);
    if (!uN.allFinite()) throw SolverBreakdown("node trace solve produced non-finite values");

    NodeTraceSolution sol;
    sol.node = system.node();
    sol.u_trace.resize(n);
    sol.v_trace.resize(n);
    double flux = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double u = uN(static_cast<Eigen::Index>(k));
        sol.u_trace[k] = u;
        sol.v_trace[k] = sgn[k] * (incoming_data[k] - u);
        flux += sgn[k] * lam[k] * sol.v_trace[k];
    }
    sol.residual_flux = flux;
    return sol;
}

HyperbolicOperator::HyperbolicOperator(const NetworkSpec& spec, Grids grids)
    : spec_(spec), grids_(std::move(grids)) {
    systems_.reserve(spec_.nodes.size());
    for (std::size_t v = 0; v < spec_.nodes.size(); ++v) systems_.emplace_back(spec_, v);
}

Traces HyperbolicOperator::compute_traces(const NetworkState& state) const {
    Traces out;
    out.arcs.resize(spec_.arcs.size());
    out.nodes.resize(spec_.nodes.size());

    for (std::size_t i = 0; i < spec_.arcs.size(); ++i) {
        const auto& a = spec_.arcs[i];
        const auto& s = state.arcs[i];
        const std::size_t last = s.size() - 1;
        if (!a.tail.is_node()) out.arcs[i].tail = external_boundary_traces(0.5 * (s.u[0] - s.v[0]));
        if (!a.head.is_node())
            out.arcs[i].head = external_boundary_traces(0.5 * (s.u[last] + s.v[last]));
    }

    parallel_for(spec_.nodes.size(), [&](std::size_t v) {
        const auto& inc = spec_.incidence[v];
        std::vector<double> c(inc.size());
        for (std::size_t k = 0; k < inc.size(); ++k) {
            const auto& s = state.arcs[inc[k].arc];
            c[k] = inc[k].sign > 0 ? s.u.back() + s.v.back() : s.u.front() - s.v.front();
        }
        out.nodes[v] = solve_node_traces(systems_[v], c);
    });

    for (std::size_t v = 0; v < spec_.nodes.size(); ++v) {
        const auto& inc = spec_.incidence[v];
        const auto& sol = out.nodes[v];
        for (std::size_t k = 0; k < inc.size(); ++k) {
            EndTrace t{sol.u_trace[k], sol.v_trace[k]};
            if (inc[k].sign > 0) out.arcs[inc[k].arc].head = t;
            else out.arcs[inc[k].arc].tail = t;
        }
    }
    return out;
}

double HyperbolicOperator::max_stable_dt(double cfl) const {
    double dt = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grids_.size(); ++i) dt = std::min(dt, grids_[i].h / spec_.arcs[i].lambda);
    return cfl * dt;
}

NetworkState transport_step(const NetworkSpec& spec, const Grids& grids, NetworkState state,
                            const Traces& traces, double dt) {
    for (std::size_t i = 0; i < grids.size(); ++i) {
        const double nu = spec.arcs[i].lambda * dt / grids[i].h;
        if (nu > 1.0 + 1e-12) {
            std::ostringstream msg;
            msg << "CFL violation on arc '" << spec.arcs[i].id << "': lambda dt / h = " << nu;
            throw CflViolation(msg.str());
        }
    }

    parallel_for(grids.size(), [&](std::size_t i) {
        auto& s = state.arcs[i];
        const std::size_t n = s.size();
        const double nu = spec.arcs[i].lambda * dt / grids[i].h;
        std::vector<double> wp(n), wm(n);
        for (std::size_t j = 0; j < n; ++j) {
            const auto w = to_invariants(s.u[j], s.v[j]);
            wp[j] = w.w_plus;
            wm[j] = w.w_minus;
        }
        const double wp_ghost = to_invariants(traces.arcs[i].tail.u, traces.arcs[i].tail.v).w_plus;
        const double wm_ghost = to_invariants(traces.arcs[i].head.u, traces.arcs[i].head.v).w_minus;
        for (std::size_t j = 0; j < n; ++j) {
            const double left = j == 0 ? wp_ghost : wp[j - 1];
            const double right = j + 1 == n ? wm_ghost : wm[j + 1];
            const double p = wp[j] - nu * (wp[j] - left);
            const double m = wm[j] + nu * (right - wm[j]);
            const auto uv = from_invariants(p, m);
            s.u[j] = uv.u;
            s.v[j] = uv.v;
        }
    });
    return state;
}

TransportRate transport_rate(const NetworkSpec& spec, const Grids& grids, const NetworkState& state,
                             const Traces& traces) {
    TransportRate r;
    r.du.resize(grids.size());
    r.dv.resize(grids.size());
    for (std::size_t i = 0; i < grids.size(); ++i) {
        const auto& s = state.arcs[i];
        const std::size_t n = s.size();
        const double k = spec.arcs[i].lambda / grids[i].h;
        const double wp_ghost = to_invariants(traces.arcs[i].tail.u, traces.arcs[i].tail.v).w_plus;
        const double wm_ghost = to_invariants(traces.arcs[i].head.u, traces.arcs[i].head.v).w_minus;
        r.du[i].resize(n);
        r.dv[i].resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            const auto w = to_invariants(s.u[j], s.v[j]);
            const double left = j == 0 ? wp_ghost : to_invariants(s.u[j - 1], s.v[j - 1]).w_plus;
            const double right = j + 1 == n ? wm_ghost : to_invariants(s.u[j + 1], s.v[j + 1]).w_minus;
            const double dp = -k * (w.w_plus - left);
            const double dm = k * (right - w.w_minus);
            r.du[i][j] = dp + dm;
            r.dv[i][j] = dp - dm;
        }
    }
    return r;
}

std::vector<double> phi_gradient(std::span<const double> phi, double h) {
    const std::size_t n = phi.size();
    if (n < 3) throw std::invalid_argument("phi_gradient needs at least 3 cells");
    std::vector<double> g(n);
    g[0] = (-3.0 * phi[0] + 4.0 * phi[1] - phi[2]) / (2.0 * h);
    for (std::size_t j = 1; j + 1 < n; ++j) g[j] = (phi[j + 1] - phi[j - 1]) / (2.0 * h);
    g[n - 1] = (3.0 * phi[n - 1] - 4.0 * phi[n - 2] + phi[n - 3]) / (2.0 * h);
    return g;
}

NetworkState source_step(const NetworkSpec& spec, NetworkState state,
                         const std::vector<std::vector<double>>& phi_x, double dt, bool damping) {
    parallel_for(state.arcs.size(), [&](std::size_t i) {
        auto& s = state.arcs[i];
        const double beta = spec.arcs[i].beta;
        const auto& gx = phi_x[i];
        if (damping) {
            const double decay = std::exp(-beta * dt);
            const double gain = -std::expm1(-beta * dt) / beta;
            for (std::size_t j = 0; j < s.size(); ++j) s.v[j] = s.v[j] * decay + gx[j] * s.u[j] * gain;
        } else {
            for (std::size_t j = 0; j < s.size(); ++j) s.v[j] += dt * gx[j] * s.u[j];
        }
    });
    return state;
}

double node_gamma1(const NodeSystem& system, const NodeTraceSolution& sol) {
    double g = 0.0;
    for (std::size_t k = 0; k < system.degree(); ++k)
        g += system.signs()[k] * system.lambda()[k] * sol.v_trace[k] * sol.u_trace[k];
    return g;
}

double node_gamma1_quadratic(const NodeSystem& system, const NodeTraceSolution& sol) {
    const auto& K = system.weights();
    double g = 0.0;
    for (std::size_t i = 0; i < K.size(); ++i)
        for (std::size_t j = 0; j < K.size(); ++j) {
            const double d = sol.u_trace[j] - sol.u_trace[i];
            g += K(i, j) * d * d;
        }
    return 0.5 * g;
}

}  // namespace netchemo
