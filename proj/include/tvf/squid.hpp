#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvf/graph.hpp"
#include "tvf/scheme.hpp"
#include "tvf/vd.hpp"

namespace tvf {

/// one:    arms ⊆ (N°(partner) ∪ N°(body)) × {row_i}, heart (body, row_i)
/// two:    arms ⊆ N°(body) × {row_i, row_j}, hearts (body, row_i), (body, row_j), row_i < row_j
/// column: no arms, heart (body, row_i); only produced when the body has no
///         neighbour in G and no second row is left in its column
enum class SquidKind { one, two, column };

std::string to_string(SquidKind kind);
SquidKind parse_squid_kind(const std::string& text);

struct Squid {
    Vertex body = 0;
    SquidKind kind = SquidKind::one;
    std::optional<Vertex> partner;
    int row_i = 1;
    int row_j = 0;
    std::vector<ProductVertex> hearts;
    /// Rows r with (body, r) in the squid, ascending.
    std::vector<int> column;
    std::vector<ProductVertex> arms;

    std::vector<ProductVertex> cells() const;
    friend bool operator==(const Squid&, const Squid&) = default;
};

/// Checks the squid shape against G □ K_q.
bool is_valid_squid(const ProductLayout& layout, const Squid& squid);

/// Bookkeeping state of sequential squid removal: (G, q, j = squids.size(), squids, m).
struct DfTuple {
    Graph graph;
    int q = 1;
    std::vector<Squid> squids;
    int m = 0;
};

/// Throws DomainError unless |G| >= m >= j >= 0, q > 0 and every squid is valid.
void validate_tuple(const DfTuple& t);

/// G □ K_q minus every squid; labels as in ProductLayout.
Graph residual(const DfTuple& t);

/// max_v |N²(v)| + 2|N°(v)|; 0 for the empty graph.
int df1_threshold(const Graph& g, TwoStepMode mode = TwoStepMode::walk);
/// q > |N²(v)| + 2|N°(v)| at every vertex.
bool df1_check(const Graph& g, int q, TwoStepMode mode = TwoStepMode::walk);

/// Row state of a dynamic-scheme node.
struct BlockInfo {
    int index = 1;  // 1-based block number
    int row = 1;
    bool starts_block = false;
    std::vector<int> previous_rows;  // r_1..r_{index-1}
    /// Preserved vertices per row 1..q when the block starts (empty otherwise).
    std::vector<int> preserved;
};

struct TraceChild {
    /// u_l for the chain children; empty for the closed-neighbourhood child.
    std::optional<ProductVertex> neighbour;
    Squid squid;
    std::size_t child = 0;
};

struct TraceNode {
    int level = 0;
    int residual_count = 0;
    std::optional<ProductVertex> pivot;
    std::optional<BlockInfo> block;
    std::vector<TraceChild> children;
};

enum class Algorithm { df1, dynamic };

/// Branching removal record. Nodes form a DAG rooted at nodes[0]: identical
/// states reached along different branches share one node.
struct RemovalTrace {
    Algorithm algorithm = Algorithm::df1;
    DfTuple initial;
    TwoStepMode mode = TwoStepMode::walk;
    std::optional<SizeScheme> scheme;
    std::vector<TraceNode> nodes;
};

/// DF1 algorithm with the lexicographically smallest residual vertex as pivot,
/// expanded to level 0. Throws DomainError if df1_check fails and
/// TheoremViolation if a residual runs empty before level 0.
RemovalTrace run_df1(const Graph& g, int q, TwoStepMode mode = TwoStepMode::walk);

/// Block-wise removal following `scheme` (rows chosen top-most with the most
/// preserved vertices). Throws DomainError on precondition failures and
/// SchemeInfeasible when a chosen row runs empty.
RemovalTrace run_dynamic(const Graph& g, int q, const SizeScheme& scheme);

/// Rebuilds residuals from the recorded squids and assembles the certificate
/// for G □ K_q minus the initial squids at level m - j. Throws DomainError on
/// incomplete or inconsistent traces.
VdCertificate extract_certificate(const RemovalTrace& trace);

/// Certificates from traces use product labels; this is the graph they certify.
Graph trace_host(const RemovalTrace& trace);

/// Is S ⊆ N°_H(p) ∪ N°_H(v,j) for some (v,j) ∈ H (condition a), or
/// S ⊆ (N°_H(p) ∩ row i) ∪ N°_H(u,i) for some u ∈ N°_G(v) with (u,i) ∈ H
/// (condition b)? p = (v,i) is the pivot; all sets are product labels.
bool admissible_successor(const ProductLayout& layout, const VertexSet& residual, ProductVertex pivot,
                          const VertexSet& squid);

nlohmann::json squid_to_json(const Squid& s);
Squid squid_from_json(const nlohmann::json& j);
nlohmann::json trace_to_json(const RemovalTrace& trace);
RemovalTrace trace_from_json(const nlohmann::json& j);

} // namespace tvf
