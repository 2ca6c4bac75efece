#pragma once

/// @file network.hpp
/// @brief Oriented-arc network description: arcs, nodes, external points and
/// the per-node transmission matrices that couple arcs at junctions.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace netchemo {

/// Where an arc end is attached.
struct Endpoint {
    enum class Kind { node, external };
    Kind kind = Kind::external;
    std::size_t index = 0;  ///< into NetworkSpec::nodes or ::external_points

    bool is_node() const { return kind == Kind::node; }
    friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

/// One oriented arc running from `tail` (x = 0) to `head` (x = length).
struct ArcSpec {
    std::string id;
    Endpoint tail;
    Endpoint head;
    double length = 1.0;
    double lambda = 1.0;  ///< characteristic speed
    double D = 1.0;       ///< chemoattractant diffusivity
    double beta = 1.0;    ///< friction
    double a = 1.0;       ///< production rate
    double b = 1.0;       ///< degradation rate

    friend bool operator==(const ArcSpec&, const ArcSpec&) = default;
};

/// Symmetric nonnegative coupling weights among the arcs meeting one node.
/// Row/column k refers to `arcs[k]`; the diagonal is stored as zero.
class TransmissionMatrix {
public:
    TransmissionMatrix() = default;
    TransmissionMatrix(std::vector<std::size_t> arcs, std::vector<double> row_major);

    std::size_t size() const { return arcs_.size(); }
    const std::vector<std::size_t>& arcs() const { return arcs_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * arcs_.size() + j]; }
    const std::vector<double>& entries() const { return entries_; }

    /// Sum of row i (the diagonal is zero).
    double row_sum(std::size_t i) const;

    friend bool operator==(const TransmissionMatrix&, const TransmissionMatrix&) = default;

private:
    std::vector<std::size_t> arcs_;
    std::vector<double> entries_;
};

/// One arc end seen from a node. `sign` is +1 when the arc heads into the
/// node (incoming) and -1 when it leaves it (outgoing).
struct NodeIncidence {
    std::size_t arc = 0;
    int sign = 1;
    friend bool operator==(const NodeIncidence&, const NodeIncidence&) = default;
};

/// Validated, immutable network. Transmission matrices `K` (cell density)
/// and `alpha` (chemoattractant) share the arc ordering of `incidence[node]`.
struct NetworkSpec {
    std::vector<std::string> nodes;
    std::vector<std::string> external_points;
    std::vector<ArcSpec> arcs;
    std::vector<std::vector<NodeIncidence>> incidence;  ///< per node, in arc_order
    std::vector<TransmissionMatrix> K;
    std::vector<TransmissionMatrix> alpha;
    std::vector<std::optional<std::size_t>> global_condition_hub;  ///< arc index per node

    std::size_t arc_index(std::string_view id) const;
    std::size_t node_index(std::string_view id) const;

    friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

/// Machine-readable validation codes.
namespace codes {
inline constexpr const char* asymmetric_k = "ASYMMETRIC_K";
inline constexpr const char* asymmetric_alpha = "ASYMMETRIC_ALPHA";
inline constexpr const char* negative_k = "NEGATIVE_K";
inline constexpr const char* negative_alpha = "NEGATIVE_ALPHA";
inline constexpr const char* disconnected = "DISCONNECTED";
inline constexpr const char* bad_ratio_ab = "BAD_RATIO_AB";
inline constexpr const char* dangling_endpoint = "DANGLING_ENDPOINT";
inline constexpr const char* zero_lambda = "ZERO_LAMBDA";
inline constexpr const char* bad_coefficient = "BAD_COEFFICIENT";
inline constexpr const char* node_degree = "NODE_DEGREE";
inline constexpr const char* external_degree = "EXTERNAL_DEGREE";
inline constexpr const char* self_loop = "SELF_LOOP";
inline constexpr const char* duplicate_id = "DUPLICATE_ID";
inline constexpr const char* missing_transmission = "MISSING_TRANSMISSION";
inline constexpr const char* arc_order_mismatch = "ARC_ORDER_MISMATCH";
inline constexpr const char* matrix_shape = "MATRIX_SHAPE";
}  // namespace codes

struct ValidationIssue {
    std::string code;
    std::string message;
};

/// Thrown for malformed documents (bad JSON, missing keys, wrong types).
class NetworkSyntaxError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when a well-formed document violates one or more invariants.
class NetworkValidationError : public std::runtime_error {
public:
    explicit NetworkValidationError(std::vector<ValidationIssue> issues);
    const std::vector<ValidationIssue>& issues() const { return issues_; }
    bool has(std::string_view code) const;

private:
    std::vector<ValidationIssue> issues_;
};

/// Parse and validate a network-description JSON document.
NetworkSpec parse_network(std::string_view text);
NetworkSpec load_network(const std::string& path);

/// Per-node part of a validation report. `global_condition` is empty when the
/// node's transmission entry could not be read.
struct NodeReport {
    std::string node;
    std::size_t degree = 0;
    std::optional<bool> global_condition;
    std::optional<std::string> hub_arc;  ///< first arc whose K column is all positive
};

/// Everything `parse_network` checks, collected instead of thrown. `spec` is
/// set only when there are no issues.
struct NetworkReport {
    std::vector<ValidationIssue> issues;
    std::vector<NodeReport> nodes;
    std::optional<NetworkSpec> spec;

    bool valid() const { return issues.empty(); }
};

/// Throws NetworkSyntaxError for malformed documents only.
NetworkReport inspect_network(std::string_view text);

/// Emit the JSON document that parse_network reads back to an equal spec.
std::string serialize_network(const NetworkSpec& spec);

/// Re-run every invariant check on an already-built spec and return the
/// issues found (empty when valid).
std::vector<ValidationIssue> validate(const NetworkSpec& spec);

/// For each node: true iff some column k of K has K(i,k) > 0 for all i != k.
std::vector<bool> check_global_condition(const NetworkSpec& spec);

/// Fills spec.global_condition_hub with the first qualifying column per node.
void populate_global_condition(NetworkSpec& spec);

/// +1 if `arc` heads into `node`, -1 if it tails from it.
/// Throws std::invalid_argument if the arc does not meet the node.
int arc_sign_at_node(const NetworkSpec& spec, std::size_t arc, std::size_t node);

/// Position of `arc` inside incidence[node], if it meets the node.
std::optional<std::size_t> local_index(const NetworkSpec& spec, std::size_t node, std::size_t arc);

}  // namespace netchemo
