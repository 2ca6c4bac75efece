#include <gtest/gtest.h>

#include <random>

#include "json.hpp"
#include "netchemo/network.hpp"
#include "support.hpp"

using namespace netchemo;
using namespace netchemo::testing;
using nlohmann::json;

namespace {

std::vector<ValidationIssue> issues_of(const std::string& text) {
    try {
        parse_network(text);
    } catch (const NetworkValidationError& e) {
        return e.issues();
    }
    return {};
}

bool has_code(const std::vector<ValidationIssue>& issues, const std::string& code) {
    for (const auto& i : issues)
        if (i.code == code) return true;
    return false;
}

// A node with `n` arcs a_k -> N carrying the given K matrix.
NetworkSpec node_with_k(const std::vector<std::vector<double>>& K) {
    const std::size_t n = K.size();
    json doc;
    doc["nodes"] = {"N"};
    doc["external_points"] = json::array();
    doc["arcs"] = json::array();
    std::vector<std::string> order;
    for (std::size_t k = 0; k < n; ++k) {
        const auto ext = "a" + std::to_string(k);
        doc["external_points"].push_back(ext);
        doc["arcs"].push_back(arc_json("e" + std::to_string(k), ext, "N"));
        order.push_back("e" + std::to_string(k));
    }
    doc["transmission"] = {{{"node", "N"}, {"arc_order", order}, {"K", K}, {"alpha", full_matrix(n, 1.0)}}};
    return parse_network(doc.dump());
}

}  // namespace

TEST(Network, SingleArcHasNoNodes) {
    const auto spec = single_arc();
    EXPECT_TRUE(spec.nodes.empty());
    EXPECT_EQ(spec.external_points.size(), 2u);
    ASSERT_EQ(spec.arcs.size(), 1u);
    EXPECT_FALSE(spec.arcs[0].tail.is_node());
    EXPECT_FALSE(spec.arcs[0].head.is_node());
}

TEST(Network, StarWithUniformWeightsIsValid) {
    const auto spec = star3();
    ASSERT_EQ(spec.nodes.size(), 1u);
    ASSERT_EQ(spec.incidence[0].size(), 3u);
    EXPECT_EQ(spec.incidence[0][0].sign, 1);
    EXPECT_EQ(spec.incidence[0][1].sign, 1);
    EXPECT_EQ(spec.incidence[0][2].sign, -1);
    ASSERT_TRUE(spec.global_condition_hub[0].has_value());
    EXPECT_TRUE(check_global_condition(spec)[0]);
}

TEST(Network, AsymmetricKIsRejected) {
    json doc = json::parse(two_arc_json(1.0, 1.0));
    doc["transmission"][0]["K"] = {{0.0, 1.0}, {2.0, 0.0}};
    const auto issues = issues_of(doc.dump());
    EXPECT_TRUE(has_code(issues, codes::asymmetric_k));
}

TEST(Network, NegativeAlphaIsRejected) {
    json doc = json::parse(two_arc_json(1.0, 1.0));
    doc["transmission"][0]["alpha"] = {{0.0, -1.0}, {-1.0, 0.0}};
    EXPECT_TRUE(has_code(issues_of(doc.dump()), codes::negative_alpha));
}

TEST(Network, DisconnectedGraphIsRejected) {
    json doc = json::parse(single_arc_json());
    doc["external_points"] = {"a1", "a2", "b1", "b2"};
    doc["arcs"].push_back(arc_json("f1", "b1", "b2"));
    EXPECT_TRUE(has_code(issues_of(doc.dump()), codes::disconnected));
}

TEST(Network, RatioAOverBMustBeConstant) {
    Coefficients c2;
    c2.a = 2.0;
    EXPECT_TRUE(has_code(issues_of(two_arc_json(1.0, 1.0, {}, c2)), codes::bad_ratio_ab));

    // same ratio with different a, b is fine; rounding-level differences too
    c2.a = 3.0;
    c2.b = 3.0 * (1.0 + 1e-14);
    EXPECT_NO_THROW(parse_network(two_arc_json(1.0, 1.0, {}, c2)));
}

TEST(Network, DanglingEndpointIsRejected) {
    json doc = json::parse(single_arc_json());
    doc["arcs"][0]["head"] = "nowhere";
    EXPECT_TRUE(has_code(issues_of(doc.dump()), codes::dangling_endpoint));
}

TEST(Network, ZeroLambdaIsRejected) {
    Coefficients c;
    c.lambda = 0.0;
    EXPECT_TRUE(has_code(issues_of(single_arc_json(c)), codes::zero_lambda));
}

TEST(Network, DegreeOneNodeIsRejected) {
    json doc;
    doc["nodes"] = {"N"};
    doc["external_points"] = {"a1"};
    doc["arcs"] = {arc_json("e1", "a1", "N")};
    doc["transmission"] = {{{"node", "N"}, {"arc_order", {"e1"}}, {"K", {{0.0}}}, {"alpha", {{0.0}}}}};
    EXPECT_TRUE(has_code(issues_of(doc.dump()), codes::node_degree));
}

TEST(Network, ArcOrderMustMatchIncidentArcs) {
    json doc = json::parse(star3_json());
    doc["transmission"][0]["arc_order"] = {"e1", "e2", "e2"};
    EXPECT_TRUE(has_code(issues_of(doc.dump()), codes::arc_order_mismatch));
}

TEST(Network, ReportsEveryViolation) {
    json doc = json::parse(two_arc_json(1.0, 1.0));
    doc["transmission"][0]["K"] = {{0.0, 1.0}, {2.0, 0.0}};
    doc["transmission"][0]["alpha"] = {{0.0, -1.0}, {-1.0, 0.0}};
    doc["arcs"][0]["lambda"] = 0.0;
    const auto issues = issues_of(doc.dump());
    EXPECT_TRUE(has_code(issues, codes::asymmetric_k));
    EXPECT_TRUE(has_code(issues, codes::negative_alpha));
    EXPECT_TRUE(has_code(issues, codes::zero_lambda));
}

TEST(Network, MalformedDocumentIsSyntaxError) {
    EXPECT_THROW(parse_network("{\"nodes\": [}"), NetworkSyntaxError);
    EXPECT_THROW(parse_network("{\"nodes\": []}"), NetworkSyntaxError);
}

TEST(Network, GlobalConditionColumnCriterion) {
    EXPECT_TRUE(check_global_condition(node_with_k({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}))[0]);
    EXPECT_FALSE(check_global_condition(node_with_k({{0, 1, 0}, {1, 0, 0}, {0, 0, 0}}))[0]);

    // only column 2 (index 1) is fully positive off the diagonal
    const auto spec = node_with_k({{0, 0.5, 0, 0}, {0.5, 0, 0.5, 0.5}, {0, 0.5, 0, 0}, {0, 0.5, 0, 0}});
    EXPECT_TRUE(check_global_condition(spec)[0]);
    ASSERT_TRUE(spec.global_condition_hub[0].has_value());
    EXPECT_EQ(*spec.global_condition_hub[0], spec.arc_index("e1"));
}

TEST(Network, ArcSignAtNode) {
    const auto star = star3();
    EXPECT_EQ(arc_sign_at_node(star, star.arc_index("e1"), 0), 1);
    EXPECT_EQ(arc_sign_at_node(star, star.arc_index("e3"), 0), -1);

    json doc;
    doc["nodes"] = {"Nv", "Nm"};
    doc["external_points"] = {"a", "b", "c", "d"};
    doc["arcs"] = {arc_json("in1", "a", "Nv"), arc_json("in2", "b", "Nv"), arc_json("mid", "Nv", "Nm"),
                   arc_json("out1", "Nm", "c"), arc_json("out2", "Nm", "d")};
    doc["transmission"] = {
        {{"node", "Nv"}, {"arc_order", {"in1", "in2", "mid"}}, {"K", full_matrix(3, 1)}, {"alpha", full_matrix(3, 1)}},
        {{"node", "Nm"}, {"arc_order", {"mid", "out1", "out2"}}, {"K", full_matrix(3, 1)}, {"alpha", full_matrix(3, 1)}}};
    const auto spec = parse_network(doc.dump());
    const auto mid = spec.arc_index("mid");
    EXPECT_EQ(arc_sign_at_node(spec, mid, spec.node_index("Nv")), -1);
    EXPECT_EQ(arc_sign_at_node(spec, mid, spec.node_index("Nm")), 1);
    EXPECT_THROW(arc_sign_at_node(spec, spec.arc_index("in1"), spec.node_index("Nm")), std::invalid_argument);
}

TEST(NetworkProperty, SerializeParseRoundTrip) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto spec = random_network(rng);
        EXPECT_EQ(parse_network(serialize_network(spec)), spec) << "trial " << trial;
    }
    EXPECT_EQ(parse_network(serialize_network(single_arc())), single_arc());
}

TEST(NetworkProperty, MatricesAreSymmetricAndNonnegative) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const auto spec = random_network(rng);
        for (std::size_t v = 0; v < spec.nodes.size(); ++v)
            for (const auto* M : {&spec.K[v], &spec.alpha[v]})
                for (std::size_t i = 0; i < M->size(); ++i)
                    for (std::size_t j = 0; j < M->size(); ++j) {
                        EXPECT_EQ((*M)(i, j), (*M)(j, i));
                        EXPECT_GE((*M)(i, j), 0.0);
                    }
        EXPECT_TRUE(validate(spec).empty());
    }
}

TEST(NetworkProperty, GlobalConditionIsMonotoneInK) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        json doc = json::parse(random_network_json(rng));
        const auto before = check_global_condition(parse_network(doc.dump()));
        for (auto& t : doc["transmission"]) {
            const std::size_t m = t["K"].size();
            const auto i = static_cast<std::size_t>(unit(rng) * static_cast<double>(m));
            const auto j = (i + 1) % m;
            const double add = 0.1 + unit(rng);
            t["K"][i][j] = t["K"][i][j].get<double>() + add;
            t["K"][j][i] = t["K"][i][j];
        }
        const auto after = check_global_condition(parse_network(doc.dump()));
        for (std::size_t v = 0; v < before.size(); ++v)
            if (before[v]) EXPECT_TRUE(after[v]);
    }
}

TEST(NetworkReport, CollectsIssuesAndNodeConditions) {
    json doc = json::parse(star3_json());
    doc["transmission"][0]["K"] = {{0, 1, 1}, {2, 0, 1}, {1, 1, 0}};
    const auto r = inspect_network(doc.dump());
    EXPECT_FALSE(r.valid());
    EXPECT_FALSE(r.spec.has_value());
    EXPECT_TRUE(has_code(r.issues, codes::asymmetric_k));
    ASSERT_EQ(r.nodes.size(), 1u);
    EXPECT_EQ(r.nodes[0].degree, 3u);
    ASSERT_TRUE(r.nodes[0].global_condition.has_value());
    EXPECT_TRUE(*r.nodes[0].global_condition);
    EXPECT_EQ(r.nodes[0].hub_arc, "e1");

    const auto ok = inspect_network(star3_json(0.0, 1.0));
    EXPECT_TRUE(ok.valid());
    ASSERT_TRUE(ok.spec.has_value());
    EXPECT_FALSE(*ok.nodes[0].global_condition);
    EXPECT_FALSE(ok.nodes[0].hub_arc.has_value());

    EXPECT_THROW(inspect_network("[1, 2"), NetworkSyntaxError);
}
