#pragma once

// Network builders shared by the test suites and the acceptance binary.

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "netchemo/network.hpp"

namespace netchemo::testing {

struct Coefficients {
    double length = 1.0, lambda = 1.0, D = 1.0, beta = 1.0, a = 1.0, b = 1.0;
};

inline nlohmann::json arc_json(const std::string& id, const std::string& tail, const std::string& head,
                               const Coefficients& c = {}) {
    return {{"id", id},         {"tail", tail}, {"head", head}, {"length", c.length}, {"lambda", c.lambda},
            {"D", c.D},         {"beta", c.beta}, {"a", c.a},   {"b", c.b}};
}

inline nlohmann::json full_matrix(std::size_t n, double value) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < n; ++j) row.push_back(i == j ? 0.0 : value);
        rows.push_back(row);
    }
    return rows;
}

/// [a1] -> [a2], no nodes.
inline std::string single_arc_json(const Coefficients& c = {}) {
    nlohmann::json doc;
    doc["nodes"] = nlohmann::json::array();
    doc["external_points"] = {"a1", "a2"};
    doc["arcs"] = {arc_json("e1", "a1", "a2", c)};
    doc["transmission"] = nlohmann::json::array();
    return doc.dump();
}

/// Star at N: e1 = a1 -> N, e2 = a2 -> N (incoming), e3 = N -> a3 (outgoing).
inline std::string star3_json(double K = 1.0, double alpha = 1.0, const Coefficients& c = {}) {
    nlohmann::json doc;
    doc["nodes"] = {"N"};
    doc["external_points"] = {"a1", "a2", "a3"};
    doc["arcs"] = {arc_json("e1", "a1", "N", c), arc_json("e2", "a2", "N", c), arc_json("e3", "N", "a3", c)};
    doc["transmission"] = {{{"node", "N"},
                            {"arc_order", {"e1", "e2", "e3"}},
                            {"K", full_matrix(3, K)},
                            {"alpha", full_matrix(3, alpha)}}};
    return doc.dump();
}

/// e1 = a1 -> N (incoming), e2 = N -> a2 (outgoing).
inline std::string two_arc_json(double K, double alpha, const Coefficients& c1 = {},
                                const Coefficients& c2 = {}) {
    nlohmann::json doc;
    doc["nodes"] = {"N"};
    doc["external_points"] = {"a1", "a2"};
    doc["arcs"] = {arc_json("e1", "a1", "N", c1), arc_json("e2", "N", "a2", c2)};
    doc["transmission"] = {{{"node", "N"},
                            {"arc_order", {"e1", "e2"}},
                            {"K", full_matrix(2, K)},
                            {"alpha", full_matrix(2, alpha)}}};
    return doc.dump();
}

/// Single node N with arc k incoming (sign +1) or outgoing (sign -1) and the
/// given per-arc speeds and weight matrices.
inline std::string star_json(const std::vector<double>& lambda, const std::vector<int>& sign,
                             const std::vector<std::vector<double>>& K,
                             const std::vector<std::vector<double>>& alpha) {
    nlohmann::json doc;
    doc["nodes"] = {"N"};
    doc["external_points"] = nlohmann::json::array();
    doc["arcs"] = nlohmann::json::array();
    std::vector<std::string> order;
    for (std::size_t k = 0; k < lambda.size(); ++k) {
        const std::string ext = "a" + std::to_string(k), id = "e" + std::to_string(k);
        Coefficients c;
        c.lambda = lambda[k];
        doc["external_points"].push_back(ext);
        doc["arcs"].push_back(sign[k] > 0 ? arc_json(id, ext, "N", c) : arc_json(id, "N", ext, c));
        order.push_back(id);
    }
    doc["transmission"] = {{{"node", "N"}, {"arc_order", order}, {"K", K}, {"alpha", alpha}}};
    return doc.dump();
}

inline NetworkSpec star3(double K = 1.0, double alpha = 1.0, const Coefficients& c = {}) {
    return parse_network(star3_json(K, alpha, c));
}

inline NetworkSpec single_arc(const Coefficients& c = {}) { return parse_network(single_arc_json(c)); }

inline NetworkSpec two_arc(double K, double alpha, const Coefficients& c1 = {}, const Coefficients& c2 = {}) {
    return parse_network(two_arc_json(K, alpha, c1, c2));
}

/// Random connected network: a random tree of 1..max_nodes nodes (random
/// orientation), an optional extra internal arc, and external arcs so that
/// every node has degree >= 2. Transmission weights are symmetric,
/// nonnegative, with some zeros.
inline std::string random_network_json(std::mt19937_64& rng, std::size_t max_nodes = 4) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
    const std::size_t n_nodes = 1 + static_cast<std::size_t>(unit(rng) * static_cast<double>(max_nodes));
    const double ratio = uniform(0.2, 2.0);
    auto coeffs = [&] {
        Coefficients c;
        c.length = uniform(0.5, 2.0);
        c.lambda = uniform(0.5, 2.0);
        c.D = uniform(0.2, 2.0);
        c.beta = uniform(0.1, 2.0);
        c.b = uniform(0.5, 2.0);
        c.a = ratio * c.b;
        return c;
    };

    std::vector<std::string> nodes;
    for (std::size_t i = 0; i < n_nodes; ++i) nodes.push_back("N" + std::to_string(i));
    std::vector<std::string> externals;
    nlohmann::json arcs = nlohmann::json::array();
    std::vector<std::vector<std::string>> at(n_nodes);
    int arc_no = 0;
    auto add_arc = [&](const std::string& tail, const std::string& head, int tn, int hn) {
        const std::string id = "e" + std::to_string(arc_no++);
        arcs.push_back(arc_json(id, tail, head, coeffs()));
        if (tn >= 0) at[tn].push_back(id);
        if (hn >= 0) at[hn].push_back(id);
    };
    for (std::size_t i = 1; i < n_nodes; ++i) {
        const auto j = static_cast<std::size_t>(unit(rng) * static_cast<double>(i));
        if (unit(rng) < 0.5) add_arc(nodes[j], nodes[i], static_cast<int>(j), static_cast<int>(i));
        else add_arc(nodes[i], nodes[j], static_cast<int>(i), static_cast<int>(j));
    }
    if (n_nodes >= 3 && unit(rng) < 0.5) add_arc(nodes[0], nodes[n_nodes - 1], 0, static_cast<int>(n_nodes - 1));
    for (std::size_t i = 0; i < n_nodes; ++i) {
        std::size_t extra = at[i].size() < 2 ? 2 - at[i].size() : 0;
        if (unit(rng) < 0.5) ++extra;
        for (std::size_t k = 0; k < extra; ++k) {
            const std::string ext = "x" + std::to_string(externals.size());
            externals.push_back(ext);
            if (unit(rng) < 0.5) add_arc(ext, nodes[i], -1, static_cast<int>(i));
            else add_arc(nodes[i], ext, static_cast<int>(i), -1);
        }
    }

    nlohmann::json tr = nlohmann::json::array();
    for (std::size_t v = 0; v < n_nodes; ++v) {
        const std::size_t m = at[v].size();
        std::vector<std::vector<double>> K(m, std::vector<double>(m, 0.0)), A = K;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) {
                K[i][j] = K[j][i] = unit(rng) < 0.3 ? 0.0 : uniform(0.0, 2.0);
                A[i][j] = A[j][i] = unit(rng) < 0.3 ? 0.0 : uniform(0.0, 2.0);
            }
        tr.push_back({{"node", nodes[v]}, {"arc_order", at[v]}, {"K", K}, {"alpha", A}});
    }
    nlohmann::json doc;
    doc["nodes"] = nodes;
    doc["external_points"] = externals;
    doc["arcs"] = arcs;
    doc["transmission"] = tr;
    return doc.dump();
}

inline NetworkSpec random_network(std::mt19937_64& rng, std::size_t max_nodes = 4) {
    return parse_network(random_network_json(rng, max_nodes));
}

}  // namespace netchemo::testing
