#include "netchemo/fields.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "netchemo/diagnostics.hpp"

namespace netchemo {

Grids make_grids(const NetworkSpec& spec, const std::vector<std::size_t>& n_cells) {
    if (n_cells.size() != spec.arcs.size())
        throw std::invalid_argument("need one cell count per arc");
    Grids grids;
    grids.reserve(spec.arcs.size());
    for (std::size_t i = 0; i < spec.arcs.size(); ++i) {
        if (n_cells[i] < min_cells_per_arc)
            throw std::invalid_argument("arc '" + spec.arcs[i].id + "' needs at least 4 cells");
        grids.push_back({i, n_cells[i], spec.arcs[i].length / static_cast<double>(n_cells[i])});
    }
    return grids;
}

Grids make_grids(const NetworkSpec& spec, std::size_t n_cells_per_arc) {
    return make_grids(spec, std::vector<std::size_t>(spec.arcs.size(), n_cells_per_arc));
}

NetworkState zero_state(const Grids& grids) {
    NetworkState s;
    s.arcs.reserve(grids.size());
    for (const auto& g : grids) s.arcs.emplace_back(g.n_cells);
    return s;
}

double FieldProfile::evaluate(double x, double length) const {
    switch (shape) {
        case Shape::constant:
            return base;
        case Shape::gaussian: {
            const double c = center < 0.0 ? 0.5 * length : center;
            const double z = (x - c) / width;
            return base + amplitude * std::exp(-z * z);
        }
        case Shape::cosine:
            return base + amplitude * std::cos(mode * std::numbers::pi * x / length);
    }
    return base;
}

InitialCondition InitialCondition::constant(double u, double v, double phi) {
    InitialCondition ic;
    ic.kind = Kind::constant;
    ic.u.base = u;
    ic.v.base = v;
    ic.phi.base = phi;
    return ic;
}

InitialCondition InitialCondition::steady(double c) {
    InitialCondition ic;
    ic.kind = Kind::steady;
    ic.steady_value = c;
    return ic;
}

InitialCondition InitialCondition::gaussian_bump(double amplitude, double center, double width,
                                                 double base) {
    InitialCondition ic;
    ic.kind = Kind::gaussian;
    ic.u = {FieldProfile::Shape::gaussian, base, amplitude, center, width, 1};
    return ic;
}

InitialCondition InitialCondition::table(std::vector<double> u, std::vector<double> v,
                                         std::vector<double> phi) {
    InitialCondition ic;
    ic.kind = Kind::custom_table;
    ic.table_u = std::move(u);
    ic.table_v = std::move(v);
    ic.table_phi = std::move(phi);
    return ic;
}

InitialState build_initial_state(const NetworkSpec& spec, const Grids& grids,
                                 const InitialConditions& ic, bool compat_check) {
    if (ic.size() != spec.arcs.size())
        throw std::invalid_argument("initial conditions must cover every arc");
    InitialState out;
    out.state = zero_state(grids);
    for (std::size_t i = 0; i < grids.size(); ++i) {
        const auto& g = grids[i];
        const auto& arc = spec.arcs[i];
        const auto& c = ic[i];
        auto& s = out.state.arcs[i];
        switch (c.kind) {
            case InitialCondition::Kind::steady:
                for (std::size_t j = 0; j < g.n_cells; ++j) {
                    s.u[j] = c.steady_value;
                    s.v[j] = 0.0;
                    s.phi[j] = arc.a / arc.b * c.steady_value;
                }
                break;
            case InitialCondition::Kind::custom_table:
                if (c.table_u.size() != g.n_cells || c.table_v.size() != g.n_cells ||
                    c.table_phi.size() != g.n_cells) {
                    std::ostringstream msg;
                    msg << "custom table for arc '" << arc.id << "' must have exactly " << g.n_cells
                        << " samples per field";
                    throw std::invalid_argument(msg.str());
                }
                s.u = c.table_u;
                s.v = c.table_v;
                s.phi = c.table_phi;
                break;
            default:
                for (std::size_t j = 0; j < g.n_cells; ++j) {
                    const double x = g.center(j);
                    s.u[j] = c.u.evaluate(x, arc.length);
                    s.v[j] = c.v.evaluate(x, arc.length);
                    s.phi[j] = c.phi.evaluate(x, arc.length);
                }
        }
        for (std::size_t j = 0; j < g.n_cells; ++j)
            if (!std::isfinite(s.u[j]) || !std::isfinite(s.v[j]) || !std::isfinite(s.phi[j]))
                throw std::invalid_argument("initial data on arc '" + arc.id + "' is not finite");
    }

    out.compat_residual = compatibility_residual(spec, grids, out.state);
    if (compat_check && out.compat_residual > compat_tolerance) {
        std::ostringstream msg;
        msg << "initial data violate boundary/transmission compatibility (residual "
            << out.compat_residual << ")";
        out.warnings.push_back(msg.str());
    }
    return out;
}

}  // namespace netchemo
