#include "netchemo/parabolic.hpp"

#include <cmath>

#include "netchemo/errors.hpp"

namespace netchemo {

namespace {

// Index of the cell adjacent to `node` on the arc of incidence entry `inc`.
std::size_t end_cell(const NodeIncidence& inc, const Grids& grids) {
    return inc.sign > 0 ? grids[inc.arc].n_cells - 1 : 0;
}

double production(const ArcSpec& a, const ReactionSwitches& rx) { return rx.production ? a.a : 0.0; }
double degradation(const ArcSpec& a, const ReactionSwitches& rx) { return rx.degradation ? a.b : 0.0; }

}  // namespace

DiffusionSystem::DiffusionSystem(const NetworkSpec& spec, const Grids& grids, double dt, ReactionSwitches rx)
    : spec_(spec), grids_(grids), dt_(dt), rx_(rx) {
    if (!(dt > 0.0)) throw std::invalid_argument("diffusion dt must be positive");
    offsets_.resize(grids.size() + 1, 0);
    for (std::size_t i = 0; i < grids.size(); ++i) offsets_[i + 1] = offsets_[i] + grids[i].n_cells;

    const auto n = static_cast<Eigen::Index>(offsets_.back());
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(n) * 3 + 16);
    std::vector<double> diag(static_cast<std::size_t>(n), 0.0);

    for (std::size_t i = 0; i < grids.size(); ++i) {
        const auto& a = spec.arcs[i];
        const double h = grids[i].h;
        const double k = a.D / h;
        const std::size_t nc = grids[i].n_cells;
        for (std::size_t j = 0; j < nc; ++j) {
            const std::size_t r = offsets_[i] + j;
            diag[r] += h * (1.0 / dt + degradation(a, rx));
            if (j > 0) {
                diag[r] += k;
                t.emplace_back(r, r - 1, -k);
            }
            if (j + 1 < nc) {
                diag[r] += k;
                t.emplace_back(r, r + 1, -k);
            }
        }
    }
    for (std::size_t v = 0; v < spec.nodes.size(); ++v) {
        const auto& inc = spec.incidence[v];
        const auto& alpha = spec.alpha[v];
        for (std::size_t p = 0; p < inc.size(); ++p) {
            const std::size_t rp = offsets_[inc[p].arc] + end_cell(inc[p], grids);
            for (std::size_t q = 0; q < inc.size(); ++q) {
                if (q == p || alpha(p, q) == 0.0) continue;
                const std::size_t rq = offsets_[inc[q].arc] + end_cell(inc[q], grids);
                diag[rp] += alpha(p, q);
                t.emplace_back(rp, rq, -alpha(p, q));
            }
        }
    }
    for (std::size_t r = 0; r < diag.size(); ++r) t.emplace_back(r, r, diag[r]);

    matrix_.resize(n, n);
    matrix_.setFromTriplets(t.begin(), t.end());
    ldlt_.compute(matrix_);
    if (ldlt_.info() != Eigen::Success) throw SolverBreakdown("diffusion matrix factorization failed");
}

bool DiffusionSystem::matches(double dt) const { return std::abs(dt - dt_) <= 1e-12 * dt_; }

Eigen::VectorXd DiffusionSystem::rhs(const NetworkState& state) const {
    Eigen::VectorXd b(static_cast<Eigen::Index>(n_unknowns()));
    for (std::size_t i = 0; i < grids_.size(); ++i) {
        const double h = grids_[i].h;
        const double a = production(spec_.arcs[i], rx_);
        const auto& s = state.arcs[i];
        for (std::size_t j = 0; j < grids_[i].n_cells; ++j)
            b(static_cast<Eigen::Index>(offsets_[i] + j)) = h * (s.phi[j] / dt_ + a * s.u[j]);
    }
    return b;
}

Eigen::VectorXd DiffusionSystem::solve(const Eigen::VectorXd& rhs) const {
    Eigen::VectorXd x = ldlt_.solve(rhs);
    if (ldlt_.info() != Eigen::Success || !x.allFinite())
        throw SolverBreakdown("diffusion solve failed");
    return x;
}

DiffusionSystem assemble(const NetworkSpec& spec, const Grids& grids, double dt, ReactionSwitches rx) {
    return DiffusionSystem(spec, grids, dt, rx);
}

Field diffusion_step(const DiffusionSystem& system, const NetworkState& state) {
    const Eigen::VectorXd x = system.solve(system.rhs(state));
    Field phi(state.arcs.size());
    for (std::size_t i = 0; i < state.arcs.size(); ++i) {
        const std::size_t n = state.arcs[i].size();
        phi[i].resize(n);
        for (std::size_t j = 0; j < n; ++j) phi[i][j] = x(static_cast<Eigen::Index>(system.offset(i) + j));
    }
    return phi;
}

Field diffusion_rate(const NetworkSpec& spec, const Grids& grids, const NetworkState& state,
                     ReactionSwitches rx) {
    Field r(grids.size());
    for (std::size_t i = 0; i < grids.size(); ++i) {
        const auto& a = spec.arcs[i];
        const auto& s = state.arcs[i];
        const double h = grids[i].h;
        const double k = a.D / (h * h);
        const std::size_t n = s.size();
        r[i].resize(n);
        for (std::size_t j = 0; j < n; ++j) {
            double lap = 0.0;
            if (j > 0) lap += s.phi[j - 1] - s.phi[j];
            if (j + 1 < n) lap += s.phi[j + 1] - s.phi[j];
            r[i][j] = k * lap + production(a, rx) * s.u[j] - degradation(a, rx) * s.phi[j];
        }
    }
    for (std::size_t v = 0; v < spec.nodes.size(); ++v) {
        const auto& inc = spec.incidence[v];
        const auto flux = node_kk_fluxes(spec, state, v);
        for (std::size_t p = 0; p < inc.size(); ++p)
            r[inc[p].arc][end_cell(inc[p], grids)] += flux[p] / grids[inc[p].arc].h;
    }
    return r;
}

std::vector<double> node_phi_traces(const NetworkSpec& spec, const NetworkState& state, std::size_t node) {
    const auto& inc = spec.incidence.at(node);
    std::vector<double> out(inc.size());
    for (std::size_t k = 0; k < inc.size(); ++k) {
        const auto& phi = state.arcs[inc[k].arc].phi;
        out[k] = inc[k].sign > 0 ? phi.back() : phi.front();
    }
    return out;
}

std::vector<double> node_kk_fluxes(const NetworkSpec& spec, const NetworkState& state, std::size_t node) {
    const auto phi = node_phi_traces(spec, state, node);
    const auto& alpha = spec.alpha.at(node);
    std::vector<double> f(phi.size(), 0.0);
    for (std::size_t p = 0; p < phi.size(); ++p)
        for (std::size_t q = 0; q < phi.size(); ++q) f[p] += alpha(p, q) * (phi[q] - phi[p]);
    return f;
}

double node_phi_dissipation(const NetworkSpec& spec, const NetworkState& state, std::size_t node) {
    const auto phi = node_phi_traces(spec, state, node);
    const auto& alpha = spec.alpha.at(node);
    double g = 0.0;
    for (std::size_t p = 0; p < phi.size(); ++p)
        for (std::size_t q = 0; q < phi.size(); ++q) {
            const double d = phi[q] - phi[p];
            g += alpha(p, q) * d * d;
        }
    return 0.5 * g;
}

double node_gamma2(const NetworkSpec& spec, const NetworkState& state, std::size_t node) {
    const auto& inc = spec.incidence.at(node);
    const auto phi = node_phi_traces(spec, state, node);
    const auto flux = node_kk_fluxes(spec, state, node);
    double in = 0.0, out = 0.0;
    for (std::size_t k = 0; k < inc.size(); ++k) {
        const double d_phi_x = inc[k].sign * flux[k];
        if (inc[k].sign > 0) in += phi[k] * d_phi_x;
        else out += phi[k] * d_phi_x;
    }
    return -(in - out);
}

}  // namespace netchemo
