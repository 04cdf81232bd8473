#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "tvf/graph.hpp"

namespace tvf {

/// Witness tree for the VD_k property. Subtrees are shared (the value is a DAG
/// of immutable nodes), so copies are cheap.
///
///   any       level 0, any graph
///   edgeless  level = number of listed vertices, graph has no edges
///   node      pivot v; del certifies G \ v at the same level,
///             link certifies G \ N•(v) one level lower
class VdCertificate {
public:
    enum class Kind { any, edgeless, node };

    /// Defaults to a level-0 LeafAny.
    VdCertificate();

    static VdCertificate any(int level = 0);
    static VdCertificate edgeless(std::vector<Vertex> vertices);
    /// Explicit level, for deliberately malformed trees.
    static VdCertificate edgeless(std::vector<Vertex> vertices, int level);
    static VdCertificate node(Vertex pivot, VdCertificate del, VdCertificate link, int level);

    Kind kind() const;
    int level() const;
    Vertex pivot() const;
    const std::vector<Vertex>& vertices() const;
    const VdCertificate& del() const;
    const VdCertificate& link() const;

    /// Stable address of the shared node; equal ids mean the same subtree.
    const void* id() const;
    /// Number of distinct nodes in the DAG.
    std::size_t distinct_nodes() const;
    /// Number of nodes of the fully expanded tree (saturates at SIZE_MAX).
    std::size_t expanded_size() const;

private:
    struct Rep;
    explicit VdCertificate(std::shared_ptr<const Rep> rep);
    std::shared_ptr<const Rep> rep_;
};

bool structurally_equal(const VdCertificate& a, const VdCertificate& b);

/// Memoized exhaustive decision procedure over the induced subgraphs of one
/// root graph (at most VertexMask::kCapacity vertices).
class VdDecider {
public:
    explicit VdDecider(const Graph& g);

    const BitGraph& graph() const { return graph_; }

    /// Does the induced subgraph on `m` satisfy VD_k?
    bool decide(const VertexMask& m, int k);
    /// Largest k with VD_k for the induced subgraph on `m`.
    int max_level(const VertexMask& m);
    /// Lexicographically first certificate (smallest workable pivot label at
    /// every node), or nullopt.
    std::optional<VdCertificate> certificate(const VertexMask& m, int k);

private:
    struct Key {
        VertexMask mask;
        int k;
        friend bool operator==(const Key&, const Key&) = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& key) const { return key.mask.hash() * 31 + static_cast<std::size_t>(key.k); }
    };

    BitGraph graph_;
    std::unordered_map<Key, bool, KeyHash> memo_;
    std::unordered_map<Key, VdCertificate, KeyHash> certs_;
};

bool is_vd(const Graph& g, int k);
int max_vd(const Graph& g);
std::optional<VdCertificate> find_certificate(const Graph& g, int k);

struct VerifyResult {
    bool ok = true;
    /// Slash-separated branch path from the root to the failing node ("root/del/link").
    std::string path;
    std::string reason;
    explicit operator bool() const { return ok; }
};

/// Checks the derivation at the certificate's own claimed level.
VerifyResult verify_certificate(const Graph& g, const VdCertificate& cert);
/// Additionally requires the claimed root level to equal `level`.
VerifyResult verify_certificate(const Graph& g, const VdCertificate& cert, int level);

/// Builds certificates from the structural rules over one root graph:
/// edgeless graphs, the isolated-vertex lift, and the neighbourhood-chain
/// assembly. All results are cached, so repeated subproblems share nodes.
class CertificateBuilder {
public:
    explicit CertificateBuilder(const BitGraph& graph) : graph_(graph) {}

    const BitGraph& graph() const { return graph_; }

    /// Edgeless induced subgraph on `m` with |m| >= k.
    VdCertificate edgeless(const VertexMask& m, int k);
    /// Any non-empty graph is VD_1.
    VdCertificate level_one(const VertexMask& m);
    /// `v` is isolated in the subgraph on `m` and `cert` certifies m \ v at
    /// level k-1; returns a certificate for m at level k.
    VdCertificate lift_isolated(const VertexMask& m, const VdCertificate& cert, int v);
    /// Neighbourhood-chain assembly around `pivot` with neighbours
    /// u_1..u_n (in this order) inside `m`:
    ///   closed    certifies m \ N•(pivot)                          at level-1
    ///   arms[l]   certifies m \ (N•(u_l) ∪ {u_1..u_{l-1}})          at level-1
    /// Result certifies m at `level`.
    VdCertificate chain(const VertexMask& m, int pivot, const std::vector<int>& neighbours,
                        const std::vector<VdCertificate>& arms, const VdCertificate& closed, int level);

private:
    struct LiftKey {
        const void* cert;
        VertexMask mask;
        int v;
        friend bool operator==(const LiftKey&, const LiftKey&) = default;
    };
    struct LiftHash {
        std::size_t operator()(const LiftKey& k) const {
            return k.mask.hash() ^ (std::hash<const void*>{}(k.cert) * 131) ^ static_cast<std::size_t>(k.v);
        }
    };
    struct LevelKey {
        VertexMask mask;
        int k;
        friend bool operator==(const LevelKey&, const LevelKey&) = default;
    };
    struct LevelHash {
        std::size_t operator()(const LevelKey& key) const { return key.mask.hash() * 31 + static_cast<std::size_t>(key.k); }
    };

    const BitGraph& graph_;
    std::unordered_map<LevelKey, VdCertificate, LevelHash> edgeless_;
    std::unordered_map<VertexMask, VdCertificate, VertexMaskHash> level_one_;
    std::unordered_map<LiftKey, VdCertificate, LiftHash> lifts_;
    // keeps lifted inputs alive so their addresses stay unique keys
    std::vector<VdCertificate> pinned_;
};

/// Certificate at level ⌊n/2Δ⌋ following the inductive proof of the
/// ⌊n/2Δ⌋ degree bound (pivot = smallest label). Δ = 0 yields
/// the edgeless leaf.
VdCertificate build_certificate_degree_bound(const Graph& g);

/// Certificate for G at level k+1 from a certificate of G \ v at level k.
/// Throws DomainError if v is not isolated or `cert` does not verify on G \ v.
VdCertificate lift_isolated(const Graph& g, const VdCertificate& cert, Vertex v);

/// Nested JSON form {"level":k,"node":{"pivot":v,"del":..,"link":..}} |
/// {"level":0,"leaf":"any"} | {"level":k,"leaf":"edgeless","vertices":[..]},
/// keys sorted, written without materializing the expanded tree.
void write_certificate_json(std::ostream& out, const VdCertificate& cert);
std::string certificate_to_json_string(const VdCertificate& cert);
VdCertificate certificate_from_json(const nlohmann::json& j);
VdCertificate read_certificate_file(const std::string& path);

} // namespace tvf
