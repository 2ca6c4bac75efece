#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "netchemo/diagnostics.hpp"
#include "netchemo/harness.hpp"
#include "netchemo/parabolic.hpp"
#include "support.hpp"

using namespace netchemo;
using namespace netchemo::testing;

namespace {

double arc_phi(const ArcGrid& g, const ArcState& s) {
    double t = 0.0;
    for (double p : s.phi) t += p * g.h;
    return t;
}

NetworkState with_phi(NetworkState s, const Field& phi) {
    for (std::size_t i = 0; i < s.arcs.size(); ++i) s.arcs[i].phi = phi[i];
    return s;
}

NetworkState random_state(std::mt19937_64& rng, const Grids& grids) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    NetworkState s = zero_state(grids);
    for (auto& a : s.arcs)
        for (std::size_t j = 0; j < a.size(); ++j) {
            a.u[j] = unit(rng);
            a.phi[j] = unit(rng);
        }
    return s;
}

}  // namespace

// a = b = 0 is expressed through the reaction switches
TEST(Diffusion, ZeroAlphaDecouplesArcs) {
    const auto spec = two_arc(1.0, 0.0);
    const auto grids = make_grids(spec, 10);
    NetworkState s = zero_state(grids);
    s.arcs[0].phi.assign(10, 1.0);
    s.arcs[0].phi[9] = 3.0;
    const auto sys = assemble(spec, grids, 0.01, {false, false});
    for (int k = 0; k < 20; ++k) {
        s = with_phi(s, diffusion_step(sys, s));
        EXPECT_NEAR(arc_phi(grids[0], s.arcs[0]), 1.2, 1e-13);
        EXPECT_EQ(arc_phi(grids[1], s.arcs[1]), 0.0);
    }
}

TEST(Diffusion, BalancedConstantIsFixed) {
    Coefficients c;
    c.a = 2.0;
    c.b = 0.5;
    const auto spec = star3(1.0, 1.0, c);
    const auto grids = make_grids(spec, 8);
    NetworkState s = zero_state(grids);
    for (auto& a : s.arcs) {
        a.phi.assign(8, 1.3);
        a.u.assign(8, 1.3 * c.b / c.a);
    }
    const auto phi = diffusion_step(assemble(spec, grids, 0.1), s);
    for (const auto& arc : phi)
        for (double p : arc) EXPECT_NEAR(p, 1.3, 1e-14);
}

TEST(Diffusion, TwoArcExchangeConservesAndDrains) {
    const auto spec = two_arc(1.0, 1.0);
    const auto grids = make_grids(spec, 16);
    NetworkState s = zero_state(grids);
    s.arcs[0].phi.assign(16, 1.0);
    const double total0 = total_phi(grids, s), arc0 = arc_phi(grids[0], s.arcs[0]);
    const auto next = with_phi(s, diffusion_step(assemble(spec, grids, 0.01, {false, false}), s));
    EXPECT_NEAR(total_phi(grids, next), total0, 1e-12);
    EXPECT_LT(arc_phi(grids[0], next.arcs[0]), arc0);
    EXPECT_GT(next.arcs[1].phi[0], 0.0);
}

TEST(Diffusion, PureFluxConservationOnRandomNetworks) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const auto spec = random_network(rng);
        const auto grids = make_grids(spec, 9);
        NetworkState s = random_state(rng, grids);
        const auto sys = assemble(spec, grids, 0.05, {false, false});
        const double total = total_phi(grids, s);
        for (int k = 0; k < 20; ++k) {
            s = with_phi(s, diffusion_step(sys, s));
            EXPECT_NEAR(total_phi(grids, s), total, 1e-12);
        }
    }
}

TEST(Diffusion, EnergyNonincreasingWithoutProduction) {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const auto spec = random_network(rng);
        const auto grids = make_grids(spec, 7);
        NetworkState s = random_state(rng, grids);
        for (double dt : {1e-4, 0.1, 10.0}) {
            const auto sys = assemble(spec, grids, dt, {false, true});
            double e = energy_e2(grids, s);
            for (int k = 0; k < 10; ++k) {
                s = with_phi(s, diffusion_step(sys, s));
                const double e_new = energy_e2(grids, s);
                EXPECT_LE(e_new, e + 1e-12);
                e = e_new;
            }
        }
    }
}

TEST(Diffusion, RowStructure) {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 10; ++trial) {
        const auto spec = random_network(rng);
        const auto grids = make_grids(spec, 6);
        const double dt = 0.3;
        const auto sys = assemble(spec, grids, dt);
        const Eigen::MatrixXd M = sys.matrix();
        EXPECT_LE((M - M.transpose()).cwiseAbs().maxCoeff(), 0.0);
        for (std::size_t i = 0; i < grids.size(); ++i)
            for (std::size_t j = 0; j < grids[i].n_cells; ++j) {
                const auto r = static_cast<Eigen::Index>(sys.offset(i) + j);
                const double reaction = grids[i].h * (1.0 / dt + spec.arcs[i].b);
                EXPECT_NEAR(M.row(r).sum(), reaction, 1e-12 * M(r, r));
                EXPECT_GT(M(r, r), M.row(r).cwiseAbs().sum() - M(r, r));
            }
    }
}

TEST(Diffusion, ImplicitResidualMatchesRate) {
    // phi_new solves (phi_new - phi_old)/dt = rate(phi_new) with u fixed
    std::mt19937_64 rng(53);
    const auto spec = random_network(rng);
    const auto grids = make_grids(spec, 8);
    const NetworkState s = random_state(rng, grids);
    const double dt = 0.07;
    const auto next = with_phi(s, diffusion_step(assemble(spec, grids, dt), s));
    const auto rate = diffusion_rate(spec, grids, next);
    for (std::size_t i = 0; i < grids.size(); ++i)
        for (std::size_t j = 0; j < grids[i].n_cells; ++j)
            EXPECT_NEAR((next.arcs[i].phi[j] - s.arcs[i].phi[j]) / dt, rate[i][j], 1e-10);
}

TEST(Diffusion, MirrorSymmetricDataStaysSymmetric) {
    // a1 -> N -> a2 reflected about N is the same network
    const auto spec = two_arc(1.0, 0.7);
    const auto grids = make_grids(spec, 12);
    NetworkState s = zero_state(grids);
    for (std::size_t j = 0; j < 12; ++j) {
        s.arcs[0].phi[j] = std::exp(-0.3 * j) + 0.1 * j;
        s.arcs[1].phi[11 - j] = s.arcs[0].phi[j];
        s.arcs[0].u[j] = 0.5 + 0.01 * j * j;
        s.arcs[1].u[11 - j] = s.arcs[0].u[j];
    }
    const auto sys = assemble(spec, grids, 0.02);
    for (int k = 0; k < 50; ++k) {
        s = with_phi(s, diffusion_step(sys, s));
        for (std::size_t j = 0; j < 12; ++j) EXPECT_NEAR(s.arcs[0].phi[j], s.arcs[1].phi[11 - j], 1e-12);
    }
}

TEST(Diffusion, ReassemblyMatchesOnlySameDt) {
    const auto spec = single_arc();
    const auto sys = assemble(spec, make_grids(spec, 8), 0.1);
    EXPECT_TRUE(sys.matches(0.1 * (1.0 + 1e-13)));
    EXPECT_FALSE(sys.matches(0.1 * (1.0 + 1e-10)));
    EXPECT_THROW(assemble(spec, make_grids(spec, 8), 0.0), std::invalid_argument);
}

namespace {

// phi = e^{-t} cos(pi x / L) on one arc; u supplies the compensating source
// a u = (-1 + D pi^2 / L^2 + b) e^{-t} cos(pi x / L).
double manufactured_error(std::size_t n, double dt, double t_final) {
    Coefficients c;
    c.length = 2.0;
    c.D = 0.5;
    c.a = 1.0;
    c.b = 0.3;
    const auto spec = single_arc(c);
    const auto grids = make_grids(spec, n);
    const double k = std::numbers::pi / c.length;
    const double src = (-1.0 + c.D * k * k + c.b) / c.a;
    NetworkState s = zero_state(grids);
    for (std::size_t j = 0; j < n; ++j) s.arcs[0].phi[j] = std::cos(k * grids[0].center(j));
    const auto sys = assemble(spec, grids, dt);
    const auto steps = static_cast<int>(std::lround(t_final / dt));
    for (int m = 1; m <= steps; ++m) {
        const double t = m * dt;
        for (std::size_t j = 0; j < n; ++j) s.arcs[0].u[j] = src * std::exp(-t) * std::cos(k * grids[0].center(j));
        s = with_phi(s, diffusion_step(sys, s));
    }
    double err = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double d = s.arcs[0].phi[j] - std::exp(-t_final) * std::cos(k * grids[0].center(j));
        err += d * d * grids[0].h;
    }
    return std::sqrt(err);
}

}  // namespace

TEST(DiffusionConvergence, FirstOrderInTime) {
    double prev = 0.0;
    for (double dt : {0.1, 0.05, 0.025, 0.0125}) {
        const double e = manufactured_error(400, dt, 1.0);
        if (prev > 0.0) EXPECT_NEAR(std::log2(prev / e), 1.0, 0.15) << "dt " << dt;
        prev = e;
    }
}

TEST(DiffusionConvergence, SecondOrderInSpace) {
    double prev = 0.0;
    for (std::size_t n : {8u, 16u, 32u, 64u}) {
        const double h = 2.0 / static_cast<double>(n);
        const double dt = 0.5 * h * h;
        const double err = manufactured_error(n, 0.5 / std::ceil(0.5 / dt), 0.5);
        if (prev > 0.0) EXPECT_NEAR(std::log2(prev / err), 2.0, 0.2) << "n " << n;
        prev = err;
    }
}

TEST(NodeDissipation, Examples) {
    const auto spec = two_arc(1.0, 1.0);
    const auto grids = make_grids(spec, 4);
    NetworkState s = zero_state(grids);
    EXPECT_EQ(node_phi_dissipation(spec, s, 0), 0.0);
    s.arcs[0].phi.assign(4, 1.0);  // Phi = (1, 0)
    EXPECT_DOUBLE_EQ(node_phi_dissipation(spec, s, 0), 1.0);
    EXPECT_NEAR(node_gamma2(spec, s, 0), 1.0, 1e-15);

    const auto scaled = two_arc(1.0, 3.5);
    EXPECT_DOUBLE_EQ(node_phi_dissipation(scaled, s, 0), 3.5);
}

TEST(NodeDissipation, FluxFormEqualsQuadraticForm) {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 30; ++trial) {
        const auto spec = random_network(rng);
        const auto grids = make_grids(spec, 5);
        const auto s = random_state(rng, grids);
        for (std::size_t v = 0; v < spec.nodes.size(); ++v) {
            const double g = node_phi_dissipation(spec, s, v);
            EXPECT_GE(g, 0.0);
            EXPECT_NEAR(node_gamma2(spec, s, v), g, 1e-10);
            double fsum = 0.0;
            for (double f : node_kk_fluxes(spec, s, v)) fsum += f;
            EXPECT_NEAR(fsum, 0.0, 1e-12);
        }
    }
}

TEST(DiffusionOracle, ImplicitEulerConvergesToMethodOfLines) {
    const auto spec = star3();
    const auto grids = make_grids(spec, 8);
    NetworkState s = zero_state(grids);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 8; ++j) {
            s.arcs[i].u[j] = 0.4;  // constant u, v = 0: transport leaves it alone
            s.arcs[i].phi[j] = std::exp(-std::pow((grids[i].center(j) - 0.3 * (i + 1)) / 0.2, 2));
        }
    Toggles tg;
    tg.chemotaxis_source = false;
    const double T = 0.5;
    const auto ref = oracle_run(spec, grids, s, T, 1e-4, tg);

    std::vector<double> gaps;
    for (double dt : {0.05, 0.025, 0.0125}) {
        const auto sys = assemble(spec, grids, dt);
        NetworkState x = s;
        for (int k = 0; k < static_cast<int>(std::lround(T / dt)); ++k) x = with_phi(x, diffusion_step(sys, x));
        double gap = 0.0;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 8; ++j) gap = std::max(gap, std::abs(x.arcs[i].phi[j] - ref.arcs[i].phi[j]));
        gaps.push_back(gap);
    }
    EXPECT_NEAR(gaps[0] / gaps[1], 2.0, 0.3);
    EXPECT_NEAR(gaps[1] / gaps[2], 2.0, 0.3);
}
