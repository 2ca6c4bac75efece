#include "netchemo/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "netchemo/errors.hpp"

namespace netchemo {

using nlohmann::json;

namespace {

FieldProfile gaussian_profile(const json& j) {
    FieldProfile p;
    if (j.is_number()) {
        p.base = j.get<double>();
        return p;
    }
    p.shape = FieldProfile::Shape::gaussian;
    p.amplitude = j.value("amplitude", 0.0);
    p.center = j.value("center", -1.0);
    p.width = j.value("width", 0.1);
    p.base = j.value("base", 0.0);
    if (!(p.width > 0.0)) throw ConfigError("gaussian width must be positive");
    return p;
}

FieldProfile cosine_profile(const json& j) {
    FieldProfile p;
    if (j.is_number()) {
        p.base = j.get<double>();
        return p;
    }
    p.shape = FieldProfile::Shape::cosine;
    p.amplitude = j.value("amplitude", 0.0);
    p.mode = j.value("mode", 1);
    p.base = j.value("base", 0.0);
    return p;
}

InitialCondition parse_ic(const json& j) {
    const auto kind = j.at("kind").get<std::string>();
    const json params = j.value("params", json::object());
    InitialCondition ic;
    if (kind == "constant") {
        ic = InitialCondition::constant(params.value("u", 0.0), params.value("v", 0.0), params.value("phi", 0.0));
    } else if (kind == "steady") {
        ic = InitialCondition::steady(params.contains("value") ? params.at("value").get<double>()
                                                               : params.value("c", 0.0));
    } else if (kind == "gaussian") {
        ic.kind = InitialCondition::Kind::gaussian;
        if (params.contains("amplitude")) {
            ic.u = gaussian_profile(params);
            if (params.contains("v")) ic.v = gaussian_profile(params.at("v"));
            if (params.contains("phi")) ic.phi = gaussian_profile(params.at("phi"));
        } else {
            if (params.contains("u")) ic.u = gaussian_profile(params.at("u"));
            if (params.contains("v")) ic.v = gaussian_profile(params.at("v"));
            if (params.contains("phi")) ic.phi = gaussian_profile(params.at("phi"));
        }
    } else if (kind == "cosine") {
        ic.kind = InitialCondition::Kind::cosine;
        if (params.contains("u")) ic.u = cosine_profile(params.at("u"));
        if (params.contains("v")) ic.v = cosine_profile(params.at("v"));
        if (params.contains("phi")) ic.phi = cosine_profile(params.at("phi"));
    } else if (kind == "custom-table") {
        ic = InitialCondition::table(params.at("u").get<std::vector<double>>(),
                                     params.at("v").get<std::vector<double>>(),
                                     params.at("phi").get<std::vector<double>>());
    } else {
        throw ConfigError("unknown initial-condition kind '" + kind + "'");
    }
    return ic;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

}  // namespace

InitialCondition parse_initial_condition(std::string_view json_text) {
    try {
        return parse_ic(json::parse(json_text));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad initial condition: ") + e.what());
    }
}

RunConfig parse_run_config(std::string_view text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed run configuration: ") + e.what());
    }

    RunConfig rc;
    try {
        rc.network_path = resolve(base_dir, doc.at("network").get<std::string>());
        rc.spec = load_network(rc.network_path.string());
        const auto& spec = rc.spec;

        rc.sim.t_final = doc.at("t_final").get<double>();
        rc.sim.cfl = doc.value("cfl", 0.9);
        rc.sim.output_every = doc.value("output_every", std::size_t{1});
        rc.sim.compat_check = doc.value("compat_check", true);
        if (doc.contains("toggles")) {
            const auto& t = doc.at("toggles");
            rc.sim.toggles.chemotaxis_source = t.value("chemotaxis_source", true);
            rc.sim.toggles.damping = t.value("damping", true);
            rc.sim.toggles.production = t.value("production", true);
            rc.sim.toggles.degradation = t.value("degradation", true);
        }

        const json cells = doc.value("n_cells", json::object());
        const std::size_t fallback = cells.value("default", default_cells_per_arc);
        for (auto it = cells.begin(); it != cells.end(); ++it)
            if (it.key() != "default") (void)spec.arc_index(it.key());
        for (const auto& a : spec.arcs) rc.sim.n_cells.push_back(cells.value(a.id, fallback));

        const json initial = doc.value("initial", json::object());
        for (auto it = initial.begin(); it != initial.end(); ++it)
            if (it.key() != "default") (void)spec.arc_index(it.key());
        for (const auto& a : spec.arcs) {
            if (initial.contains(a.id)) rc.ic.push_back(parse_ic(initial.at(a.id)));
            else if (initial.contains("default")) rc.ic.push_back(parse_ic(initial.at("default")));
            else throw ConfigError("no initial condition for arc '" + a.id + "'");
        }

        if (doc.contains("outputs")) {
            const auto& o = doc.at("outputs");
            if (o.contains("csv") && !o.at("csv").is_null())
                rc.csv_path = resolve(base_dir, o.at("csv").get<std::string>());
            if (o.contains("snapshots") && !o.at("snapshots").is_null())
                rc.snapshots_dir = resolve(base_dir, o.at("snapshots").get<std::string>());
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("run configuration schema error: ") + e.what());
    } catch (const std::out_of_range& e) {
        throw ConfigError(std::string("run configuration: ") + e.what());
    }
    rc.sim.check();
    return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open run configuration '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str(), path.parent_path());
}

}  // namespace netchemo
