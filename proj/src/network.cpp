#include "netchemo/network.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "json.hpp"

namespace netchemo {

using nlohmann::json;

TransmissionMatrix::TransmissionMatrix(std::vector<std::size_t> arcs, std::vector<double> row_major)
    : arcs_(std::move(arcs)), entries_(std::move(row_major)) {
    const std::size_t n = arcs_.size();
    if (entries_.size() != n * n) throw std::invalid_argument("transmission matrix is not square");
    for (std::size_t i = 0; i < n; ++i) entries_[i * n + i] = 0.0;
}

double TransmissionMatrix::row_sum(std::size_t i) const {
    const std::size_t n = arcs_.size();
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += entries_[i * n + j];
    return s;
}

std::size_t NetworkSpec::arc_index(std::string_view id) const {
    for (std::size_t i = 0; i < arcs.size(); ++i)
        if (arcs[i].id == id) return i;
    throw std::out_of_range("unknown arc '" + std::string(id) + "'");
}

std::size_t NetworkSpec::node_index(std::string_view id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] == id) return i;
    throw std::out_of_range("unknown node '" + std::string(id) + "'");
}

NetworkValidationError::NetworkValidationError(std::vector<ValidationIssue> issues)
    : std::runtime_error([&] {
          std::string msg = "network validation failed:";
          for (const auto& i : issues) msg += " [" + i.code + "] " + i.message + ";";
          return msg;
      }()),
      issues_(std::move(issues)) {}

bool NetworkValidationError::has(std::string_view code) const {
    return std::any_of(issues_.begin(), issues_.end(), [&](const auto& i) { return i.code == code; });
}

namespace {

void add(std::vector<ValidationIssue>& out, const char* code, std::string msg) {
    out.push_back({code, std::move(msg)});
}

void check_arc_coefficients(const std::vector<ArcSpec>& arcs, std::vector<ValidationIssue>& out) {
    auto positive = [&](const ArcSpec& a, double v, const char* name) {
        if (!(std::isfinite(v) && v > 0.0))
            add(out, codes::bad_coefficient, "arc '" + a.id + "': " + name + " must be > 0");
    };
    for (const auto& a : arcs) {
        positive(a, a.length, "length");
        positive(a, a.D, "D");
        positive(a, a.beta, "beta");
        positive(a, a.b, "b");
        if (!(std::isfinite(a.a) && a.a >= 0.0))
            add(out, codes::bad_coefficient, "arc '" + a.id + "': a must be >= 0");
        if (!(std::isfinite(a.lambda) && a.lambda >= 0.0))
            add(out, codes::bad_coefficient, "arc '" + a.id + "': lambda must be >= 0");
        else if (a.lambda == 0.0)
            add(out, codes::zero_lambda, "arc '" + a.id + "': lambda = 0 is not supported");
    }
    // a/b must be the same on every arc
    const ArcSpec* ref = nullptr;
    for (const auto& a : arcs) {
        if (!(a.b > 0.0) || !std::isfinite(a.a)) continue;
        if (!ref) {
            ref = &a;
            continue;
        }
        const double r0 = ref->a / ref->b;
        const double r = a.a / a.b;
        if (std::abs(r - r0) > 1e-12 * std::max(std::abs(r), std::abs(r0)))
            add(out, codes::bad_ratio_ab,
                "arc '" + a.id + "': a/b differs from arc '" + ref->id + "'");
    }
}

void check_matrix(const std::string& node, const TransmissionMatrix& m, const char* asym_code,
                  const char* neg_code, const char* name, std::vector<ValidationIssue>& out) {
    const std::size_t n = m.size();
    bool asym = false;
    bool neg = false;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double v = m(i, j);
            if (!std::isfinite(v) || v < 0.0) neg = true;
            if (v != m(j, i)) asym = true;
        }
    }
    if (asym) add(out, asym_code, std::string(name) + " at node '" + node + "' is not symmetric");
    if (neg) add(out, neg_code, std::string(name) + " at node '" + node + "' has negative entries");
}

void check_graph(const NetworkSpec& spec, std::vector<ValidationIssue>& out) {
    const std::size_t nn = spec.nodes.size();
    const std::size_t ne = spec.external_points.size();
    std::vector<int> node_deg(nn, 0), ext_deg(ne, 0);
    std::vector<std::size_t> parent(nn + ne);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto vertex = [&](const Endpoint& e) { return e.is_node() ? e.index : nn + e.index; };

    for (const auto& a : spec.arcs) {
        if (a.tail == a.head)
            add(out, codes::self_loop, "arc '" + a.id + "' starts and ends at the same point");
        for (const Endpoint* e : {&a.tail, &a.head}) {
            if (e->is_node()) ++node_deg[e->index];
            else ++ext_deg[e->index];
        }
        parent[find(vertex(a.tail))] = find(vertex(a.head));
    }
    for (std::size_t i = 0; i < nn; ++i)
        if (node_deg[i] < 2)
            add(out, codes::node_degree,
                "node '" + spec.nodes[i] + "' meets fewer than 2 arcs; declare it as an external point");
    for (std::size_t i = 0; i < ne; ++i)
        if (ext_deg[i] != 1)
            add(out, codes::external_degree,
                "external point '" + spec.external_points[i] + "' must touch exactly one arc");

    if (spec.arcs.empty()) {
        add(out, codes::disconnected, "network has no arcs");
        return;
    }
    const std::size_t root = find(0);
    for (std::size_t v = 1; v < nn + ne; ++v) {
        if (find(v) != root) {
            add(out, codes::disconnected, "network graph is not connected");
            break;
        }
    }
}

void check_incidence(const NetworkSpec& spec, std::vector<ValidationIssue>& out) {
    const std::size_t nn = spec.nodes.size();
    if (spec.incidence.size() != nn || spec.K.size() != nn || spec.alpha.size() != nn) {
        add(out, codes::missing_transmission, "transmission data does not cover every node");
        return;
    }
    for (std::size_t v = 0; v < nn; ++v) {
        std::multiset<std::size_t> expected, listed;
        for (std::size_t i = 0; i < spec.arcs.size(); ++i) {
            const auto& a = spec.arcs[i];
            if (a.head.is_node() && a.head.index == v) expected.insert(i);
            if (a.tail.is_node() && a.tail.index == v) expected.insert(i);
        }
        std::vector<std::size_t> order;
        for (const auto& inc : spec.incidence[v]) {
            listed.insert(inc.arc);
            order.push_back(inc.arc);
            if (inc.arc >= spec.arcs.size()) continue;
            const auto& a = spec.arcs[inc.arc];
            const int want = (a.head.is_node() && a.head.index == v) ? 1 : -1;
            if (inc.sign != want)
                add(out, codes::arc_order_mismatch,
                    "incidence sign of arc '" + a.id + "' at node '" + spec.nodes[v] + "' is wrong");
        }
        if (expected != listed)
            add(out, codes::arc_order_mismatch,
                "arc_order at node '" + spec.nodes[v] + "' differs from the arcs meeting it");
        if (spec.K[v].arcs() != order || spec.alpha[v].arcs() != order)
            add(out, codes::matrix_shape,
                "transmission matrices at node '" + spec.nodes[v] + "' do not follow arc_order");
        check_matrix(spec.nodes[v], spec.K[v], codes::asymmetric_k, codes::negative_k, "K", out);
        check_matrix(spec.nodes[v], spec.alpha[v], codes::asymmetric_alpha, codes::negative_alpha,
                     "alpha", out);
    }
}

// Accepts [[r0...],[r1...]] or a flat list of n*n values.
std::optional<std::vector<double>> read_square(const json& j, std::size_t n) {
    std::vector<double> flat;
    if (!j.is_array()) return std::nullopt;
    if (!j.empty() && j.front().is_array()) {
        if (j.size() != n) return std::nullopt;
        for (const auto& row : j) {
            if (!row.is_array() || row.size() != n) return std::nullopt;
            for (const auto& x : row) flat.push_back(x.get<double>());
        }
    } else {
        if (j.size() != n * n) return std::nullopt;
        for (const auto& x : j) flat.push_back(x.get<double>());
    }
    return flat;
}

json matrix_json(const TransmissionMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::vector<ValidationIssue> validate(const NetworkSpec& spec) {
    std::vector<ValidationIssue> out;
    check_arc_coefficients(spec.arcs, out);
    check_graph(spec, out);
    check_incidence(spec, out);
    return out;
}

namespace {

// Spec built from a document before the whole-network checks, with the
// issues found while building it.
struct Draft {
    NetworkSpec spec;
    std::vector<ValidationIssue> issues;
    std::vector<bool> usable;  // node has a well-formed transmission entry
    bool dangling = false;

    bool structural_failure() const { return dangling || !issues.empty(); }

    // What can still be checked without a consistent graph.
    void add_partial_checks() {
        check_arc_coefficients(spec.arcs, issues);
        for (std::size_t v = 0; v < spec.nodes.size(); ++v) {
            if (!usable[v]) continue;
            check_matrix(spec.nodes[v], spec.K[v], codes::asymmetric_k, codes::negative_k, "K", issues);
            check_matrix(spec.nodes[v], spec.alpha[v], codes::asymmetric_alpha, codes::negative_alpha, "alpha",
                         issues);
        }
    }
};

json parse_document(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw NetworkSyntaxError(std::string("malformed network document: ") + e.what());
    }
}

Draft draft_network(const json& doc) {
    Draft d;
    auto& spec = d.spec;
    auto& issues = d.issues;
    std::map<std::string, Endpoint, std::less<>> points;

    try {
        if (!doc.is_object()) throw NetworkSyntaxError("network document must be a JSON object");
        for (const auto& n : doc.at("nodes")) spec.nodes.push_back(n.get<std::string>());
        if (doc.contains("external_points"))
            for (const auto& n : doc.at("external_points"))
                spec.external_points.push_back(n.get<std::string>());

        for (std::size_t i = 0; i < spec.nodes.size(); ++i)
            if (!points.emplace(spec.nodes[i], Endpoint{Endpoint::Kind::node, i}).second)
                add(issues, codes::duplicate_id, "point id '" + spec.nodes[i] + "' is declared twice");
        for (std::size_t i = 0; i < spec.external_points.size(); ++i)
            if (!points.emplace(spec.external_points[i], Endpoint{Endpoint::Kind::external, i}).second)
                add(issues, codes::duplicate_id,
                    "point id '" + spec.external_points[i] + "' is declared twice");

        std::set<std::string, std::less<>> arc_ids;
        for (const auto& ja : doc.at("arcs")) {
            ArcSpec a;
            a.id = ja.at("id").get<std::string>();
            if (!arc_ids.insert(a.id).second)
                add(issues, codes::duplicate_id, "arc id '" + a.id + "' is declared twice");
            a.length = ja.at("length").get<double>();
            a.lambda = ja.at("lambda").get<double>();
            a.D = ja.at("D").get<double>();
            a.beta = ja.at("beta").get<double>();
            a.a = ja.at("a").get<double>();
            a.b = ja.at("b").get<double>();
            const auto tail = ja.at("tail").get<std::string>();
            const auto head = ja.at("head").get<std::string>();
            for (auto [name, slot] : {std::pair{&tail, &a.tail}, std::pair{&head, &a.head}}) {
                auto it = points.find(*name);
                if (it == points.end()) {
                    add(issues, codes::dangling_endpoint,
                        "arc '" + a.id + "' endpoint '" + *name + "' is not a declared point");
                    d.dangling = true;
                } else {
                    *slot = it->second;
                }
            }
            spec.arcs.push_back(std::move(a));
        }

        const std::size_t nn = spec.nodes.size();
        std::vector<bool> seen(nn, false);
        spec.incidence.assign(nn, {});
        spec.K.assign(nn, {});
        spec.alpha.assign(nn, {});
        d.usable.assign(nn, false);
        if (doc.contains("transmission")) {
            for (const auto& jt : doc.at("transmission")) {
                const auto node = jt.at("node").get<std::string>();
                auto it = points.find(node);
                if (it == points.end() || !it->second.is_node()) {
                    add(issues, codes::dangling_endpoint,
                        "transmission entry refers to unknown node '" + node + "'");
                    continue;
                }
                const std::size_t v = it->second.index;
                if (seen[v]) {
                    add(issues, codes::duplicate_id, "node '" + node + "' has two transmission entries");
                    continue;
                }
                seen[v] = true;
                std::vector<std::size_t> order;
                bool ok = true;
                for (const auto& id : jt.at("arc_order")) {
                    const auto s = id.get<std::string>();
                    auto ai = std::find_if(spec.arcs.begin(), spec.arcs.end(),
                                           [&](const ArcSpec& a) { return a.id == s; });
                    if (ai == spec.arcs.end()) {
                        add(issues, codes::arc_order_mismatch,
                            "arc_order at node '" + node + "' names unknown arc '" + s + "'");
                        ok = false;
                    } else {
                        order.push_back(static_cast<std::size_t>(ai - spec.arcs.begin()));
                    }
                }
                if (!ok) continue;
                const auto k = read_square(jt.at("K"), order.size());
                const auto al = read_square(jt.at("alpha"), order.size());
                if (!k || !al) {
                    add(issues, codes::matrix_shape,
                        "K/alpha at node '" + node + "' must be square with arc_order size");
                    continue;
                }
                spec.K[v] = TransmissionMatrix(order, *k);
                spec.alpha[v] = TransmissionMatrix(order, *al);
                if (!d.dangling) {
                    for (auto arc : order) {
                        const auto& a = spec.arcs[arc];
                        const bool in = a.head.is_node() && a.head.index == v;
                        spec.incidence[v].push_back({arc, in ? 1 : -1});
                    }
                }
                d.usable[v] = true;
            }
        }
        for (std::size_t v = 0; v < nn; ++v)
            if (!seen[v])
                add(issues, codes::missing_transmission,
                    "node '" + spec.nodes[v] + "' has no transmission entry");

    } catch (const json::exception& e) {
        throw NetworkSyntaxError(std::string("network document schema error: ") + e.what());
    }
    return d;
}

}  // namespace

NetworkSpec parse_network(std::string_view text) {
    Draft d = draft_network(parse_document(text));
    if (d.structural_failure()) {
        d.add_partial_checks();
        throw NetworkValidationError(std::move(d.issues));
    }
    auto issues = validate(d.spec);
    if (!issues.empty()) throw NetworkValidationError(std::move(issues));
    populate_global_condition(d.spec);
    return std::move(d.spec);
}

NetworkReport inspect_network(std::string_view text) {
    Draft d = draft_network(parse_document(text));
    NetworkReport r;
    if (d.structural_failure()) d.add_partial_checks();
    else d.issues = validate(d.spec);
    r.issues = std::move(d.issues);
    populate_global_condition(d.spec);
    for (std::size_t v = 0; v < d.spec.nodes.size(); ++v) {
        NodeReport n;
        n.node = d.spec.nodes[v];
        n.degree = d.spec.K[v].size();
        if (d.usable[v]) {
            n.global_condition = d.spec.global_condition_hub[v].has_value();
            if (n.global_condition.value_or(false))
                n.hub_arc = d.spec.arcs[*d.spec.global_condition_hub[v]].id;
        }
        r.nodes.push_back(std::move(n));
    }
    if (r.issues.empty()) r.spec = std::move(d.spec);
    return r;
}

NetworkSpec load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw NetworkSyntaxError("cannot open network file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_network(ss.str());
}

std::string serialize_network(const NetworkSpec& spec) {
    json doc;
    doc["nodes"] = spec.nodes;
    doc["external_points"] = spec.external_points;
    auto point_name = [&](const Endpoint& e) {
        return e.is_node() ? spec.nodes.at(e.index) : spec.external_points.at(e.index);
    };
    json arcs = json::array();
    for (const auto& a : spec.arcs) {
        arcs.push_back({{"id", a.id},
                        {"tail", point_name(a.tail)},
                        {"head", point_name(a.head)},
                        {"length", a.length},
                        {"lambda", a.lambda},
                        {"D", a.D},
                        {"beta", a.beta},
                        {"a", a.a},
                        {"b", a.b}});
    }
    doc["arcs"] = std::move(arcs);
    json tr = json::array();
    for (std::size_t v = 0; v < spec.nodes.size(); ++v) {
        json order = json::array();
        for (auto arc : spec.K[v].arcs()) order.push_back(spec.arcs[arc].id);
        tr.push_back({{"node", spec.nodes[v]},
                      {"arc_order", std::move(order)},
                      {"K", matrix_json(spec.K[v])},
                      {"alpha", matrix_json(spec.alpha[v])}});
    }
    doc["transmission"] = std::move(tr);
    return doc.dump(2);
}

std::vector<bool> check_global_condition(const NetworkSpec& spec) {
    std::vector<bool> result(spec.nodes.size(), false);
    for (std::size_t v = 0; v < spec.nodes.size(); ++v) {
        const auto& K = spec.K[v];
        for (std::size_t k = 0; k < K.size() && !result[v]; ++k) {
            bool all = true;
            for (std::size_t i = 0; i < K.size(); ++i)
                if (i != k && !(K(i, k) > 0.0)) all = false;
            result[v] = all;
        }
    }
    return result;
}

void populate_global_condition(NetworkSpec& spec) {
    spec.global_condition_hub.assign(spec.nodes.size(), std::nullopt);
    for (std::size_t v = 0; v < spec.nodes.size(); ++v) {
        const auto& K = spec.K[v];
        for (std::size_t k = 0; k < K.size(); ++k) {
            bool all = true;
            for (std::size_t i = 0; i < K.size(); ++i)
                if (i != k && !(K(i, k) > 0.0)) all = false;
            if (all) {
                spec.global_condition_hub[v] = K.arcs()[k];
                break;
            }
        }
    }
}

int arc_sign_at_node(const NetworkSpec& spec, std::size_t arc, std::size_t node) {
    const auto& a = spec.arcs.at(arc);
    if (a.head.is_node() && a.head.index == node) return 1;
    if (a.tail.is_node() && a.tail.index == node) return -1;
    throw std::invalid_argument("arc '" + a.id + "' does not meet node '" + spec.nodes.at(node) + "'");
}

std::optional<std::size_t> local_index(const NetworkSpec& spec, std::size_t node, std::size_t arc) {
    const auto& inc = spec.incidence.at(node);
    for (std::size_t k = 0; k < inc.size(); ++k)
        if (inc[k].arc == arc) return k;
    return std::nullopt;
}

}  // namespace netchemo
