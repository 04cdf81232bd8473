#include "tvf/vd.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "tvf/error.hpp"

namespace tvf {

struct VdCertificate::Rep {
    Kind kind = Kind::any;
    int level = 0;
    Vertex pivot = -1;
    std::vector<Vertex> vertices;
    std::unique_ptr<VdCertificate> del_handle;
    std::unique_ptr<VdCertificate> link_handle;
};

VdCertificate::VdCertificate() {
    static const auto zero = [] {
        auto r = std::make_shared<Rep>();
        r->kind = Kind::any;
        return std::shared_ptr<const Rep>(r);
    }();
    rep_ = zero;
}
VdCertificate::VdCertificate(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}

VdCertificate VdCertificate::any(int level) {
    if (level == 0) return VdCertificate();
    auto r = std::make_shared<Rep>();
    r->kind = Kind::any;
    r->level = level;
    return VdCertificate(std::move(r));
}

VdCertificate VdCertificate::edgeless(std::vector<Vertex> vertices) {
    const int level = static_cast<int>(vertices.size());
    return edgeless(std::move(vertices), level);
}

VdCertificate VdCertificate::edgeless(std::vector<Vertex> vertices, int level) {
    auto r = std::make_shared<Rep>();
    r->kind = Kind::edgeless;
    r->level = level;
    std::sort(vertices.begin(), vertices.end());
    r->vertices = std::move(vertices);
    return VdCertificate(std::move(r));
}

VdCertificate VdCertificate::node(Vertex pivot, VdCertificate del, VdCertificate link, int level) {
    auto r = std::make_shared<Rep>();
    r->kind = Kind::node;
    r->level = level;
    r->pivot = pivot;
    r->del_handle = std::make_unique<VdCertificate>(std::move(del));
    r->link_handle = std::make_unique<VdCertificate>(std::move(link));
    return VdCertificate(std::move(r));
}

VdCertificate::Kind VdCertificate::kind() const { return rep_->kind; }
int VdCertificate::level() const { return rep_->level; }
Vertex VdCertificate::pivot() const { return rep_->pivot; }
const std::vector<Vertex>& VdCertificate::vertices() const { return rep_->vertices; }

const VdCertificate& VdCertificate::del() const {
    if (rep_->kind != Kind::node) throw DomainError("del() on a leaf certificate");
    return *rep_->del_handle;
}

const VdCertificate& VdCertificate::link() const {
    if (rep_->kind != Kind::node) throw DomainError("link() on a leaf certificate");
    return *rep_->link_handle;
}

const void* VdCertificate::id() const { return rep_.get(); }

std::size_t VdCertificate::distinct_nodes() const {
    std::unordered_set<const void*> seen;
    std::vector<const VdCertificate*> stack{this};
    while (!stack.empty()) {
        const auto* c = stack.back();
        stack.pop_back();
        if (!seen.insert(c->id()).second) continue;
        if (c->kind() == Kind::node) {
            stack.push_back(&c->del());
            stack.push_back(&c->link());
        }
    }
    return seen.size();
}

std::size_t VdCertificate::expanded_size() const {
    std::unordered_map<const void*, std::size_t> memo;
    constexpr auto kMax = std::numeric_limits<std::size_t>::max();
    auto rec = [&](auto&& self, const VdCertificate& c) -> std::size_t {
        if (c.kind() != Kind::node) return 1;
        if (auto it = memo.find(c.id()); it != memo.end()) return it->second;
        std::size_t a = self(self, c.del()), b = self(self, c.link());
        std::size_t total = (a > kMax - 1 - b) ? kMax : a + b + 1;
        memo.emplace(c.id(), total);
        return total;
    };
    return rec(rec, *this);
}

bool structurally_equal(const VdCertificate& a, const VdCertificate& b) {
    if (a.id() == b.id()) return true;
    if (a.kind() != b.kind() || a.level() != b.level()) return false;
    switch (a.kind()) {
    case VdCertificate::Kind::any:
        return true;
    case VdCertificate::Kind::edgeless:
        return a.vertices() == b.vertices();
    case VdCertificate::Kind::node:
        return a.pivot() == b.pivot() && structurally_equal(a.del(), b.del()) && structurally_equal(a.link(), b.link());
    }
    return false;
}

// ---------------------------------------------------------------------------
// Exhaustive decision

VdDecider::VdDecider(const Graph& g) : graph_(g) {}

bool VdDecider::decide(const VertexMask& m, int k) {
    if (k < 0) throw DomainError("VD level must be non-negative");
    if (k == 0) return true;
    const int n = m.count();
    if (n < k) return false;
    // an edgeless graph on n >= k vertices is VD_k (delete down to k vertices)
    if (graph_.edgeless(m)) return true;

    const Key key{m, k};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    std::vector<int> order;
    order.reserve(n);
    m.for_each([&](int i) { order.push_back(i); });
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return graph_.degree_in(a, m) > graph_.degree_in(b, m); });

    bool result = false;
    for (int v : order) {
        VertexMask del = m;
        del.reset(v);
        if (decide(del, k) && decide(m - graph_.closed_neighbors(v), k - 1)) {
            result = true;
            break;
        }
    }
    memo_.emplace(key, result);
    return result;
}

int VdDecider::max_level(const VertexMask& m) {
    int k = 0;
    const int n = m.count();
    while (k < n && decide(m, k + 1)) ++k;
    return k;
}

std::optional<VdCertificate> VdDecider::certificate(const VertexMask& m, int k) {
    if (!decide(m, k)) return std::nullopt;
    if (k == 0) return VdCertificate::any();
    const Key key{m, k};
    if (auto it = certs_.find(key); it != certs_.end()) return it->second;

    std::optional<VdCertificate> out;
    if (m.count() == k && graph_.edgeless(m)) {
        auto labels = graph_.labels_of(m);
        out = VdCertificate::edgeless(std::vector<Vertex>(labels.begin(), labels.end()));
    } else {
        for (int v = m.lowest(); v >= 0; v = m.next(v)) {
            VertexMask del = m;
            del.reset(v);
            const VertexMask link = m - graph_.closed_neighbors(v);
            if (decide(del, k) && decide(link, k - 1)) {
                out = VdCertificate::node(graph_.label(v), *certificate(del, k), *certificate(link, k - 1), k);
                break;
            }
        }
    }
    if (!out) throw TheoremViolation("decision and certificate search disagree");
    certs_.emplace(key, *out);
    return out;
}

bool is_vd(const Graph& g, int k) {
    VdDecider d(g);
    return d.decide(d.graph().all(), k);
}

int max_vd(const Graph& g) {
    VdDecider d(g);
    return d.max_level(d.graph().all());
}

std::optional<VdCertificate> find_certificate(const Graph& g, int k) {
    VdDecider d(g);
    return d.certificate(d.graph().all(), k);
}

// ---------------------------------------------------------------------------
// Verification

namespace {

struct PairHash {
    std::size_t operator()(const std::pair<const void*, VertexMask>& p) const {
        return p.second.hash() ^ (std::hash<const void*>{}(p.first) * 0x9e3779b97f4a7c15ULL);
    }
};

class Verifier {
public:
    explicit Verifier(const BitGraph& g) : g_(g) {}

    VerifyResult run(const VdCertificate& cert, int level) {
        VerifyResult res;
        path_.assign(1, "root");
        if (!visit(cert, g_.all(), level, res)) res.ok = false;
        return res;
    }

private:
    bool fail(VerifyResult& res, std::string reason) {
        res.ok = false;
        res.reason = std::move(reason);
        res.path.clear();
        for (std::size_t i = 0; i < path_.size(); ++i) {
            if (i) res.path += '/';
            res.path += path_[i];
        }
        return false;
    }

    bool visit(const VdCertificate& c, const VertexMask& m, int expected, VerifyResult& res) {
        if (c.level() != expected)
            return fail(res, "claimed level " + std::to_string(c.level()) + ", expected " + std::to_string(expected));
        if (expected < 0) return fail(res, "negative level");
        if (ok_.count({c.id(), m})) return true;
        switch (c.kind()) {
        case VdCertificate::Kind::any:
            if (c.level() != 0) return fail(res, "leaf 'any' above level 0");
            break;
        case VdCertificate::Kind::edgeless: {
            if (static_cast<int>(c.vertices().size()) != c.level())
                return fail(res, "edgeless leaf lists " + std::to_string(c.vertices().size()) + " vertices at level " +
                                     std::to_string(c.level()));
            VertexMask listed;
            for (Vertex v : c.vertices()) {
                if (!std::binary_search(labels_begin(), labels_end(), v))
                    return fail(res, "edgeless leaf lists unknown vertex " + std::to_string(v));
                listed.set(g_.position(v));
            }
            if (listed != m) return fail(res, "edgeless leaf vertex list differs from the subgraph");
            if (!g_.edgeless(m)) return fail(res, "edgeless leaf on a subgraph with edges");
            break;
        }
        case VdCertificate::Kind::node: {
            if (c.level() < 1) return fail(res, "node at level 0");
            const Vertex p = c.pivot();
            if (!std::binary_search(labels_begin(), labels_end(), p) || !m.test(g_.position(p)))
                return fail(res, "pivot " + std::to_string(p) + " not in the subgraph");
            const int pos = g_.position(p);
            VertexMask del = m;
            del.reset(pos);
            path_.push_back("del");
            if (!visit(c.del(), del, c.level(), res)) return false;
            path_.back() = "link";
            if (!visit(c.link(), m - g_.closed_neighbors(pos), c.level() - 1, res)) return false;
            path_.pop_back();
            break;
        }
        }
        ok_.insert({c.id(), m});
        return true;
    }

    const Vertex* labels_begin() const { return labels_.data(); }
    const Vertex* labels_end() const { return labels_.data() + labels_.size(); }

    const BitGraph& g_;
    std::vector<Vertex> labels_ = [this] {
        std::vector<Vertex> out;
        for (int i = 0; i < g_.order(); ++i) out.push_back(g_.label(i));
        return out;
    }();
    std::vector<std::string> path_;
    std::unordered_set<std::pair<const void*, VertexMask>, PairHash> ok_;
};

} // namespace

VerifyResult verify_certificate(const Graph& g, const VdCertificate& cert) {
    return verify_certificate(g, cert, cert.level());
}

VerifyResult verify_certificate(const Graph& g, const VdCertificate& cert, int level) {
    BitGraph bg(g);
    return Verifier(bg).run(cert, level);
}

// ---------------------------------------------------------------------------
// Constructive builders

VdCertificate CertificateBuilder::edgeless(const VertexMask& m, int k) {
    if (k == 0) return VdCertificate::any();
    if (m.count() < k) throw DomainError("edgeless graph has fewer than k vertices");
    const LevelKey key{m, k};
    if (auto it = edgeless_.find(key); it != edgeless_.end()) return it->second;
    VdCertificate out;
    if (m.count() == k) {
        auto labels = graph_.labels_of(m);
        out = VdCertificate::edgeless(std::vector<Vertex>(labels.begin(), labels.end()));
    } else {
        const int p = m.lowest();
        VertexMask rest = m;
        rest.reset(p);
        out = VdCertificate::node(graph_.label(p), edgeless(rest, k), edgeless(rest, k - 1), k);
    }
    edgeless_.emplace(key, out);
    return out;
}

VdCertificate CertificateBuilder::level_one(const VertexMask& m) {
    if (m.empty()) throw DomainError("the empty graph is not VD_1");
    if (auto it = level_one_.find(m); it != level_one_.end()) return it->second;
    VdCertificate out;
    if (graph_.edgeless(m)) {
        out = edgeless(m, 1);
    } else {
        const int p = m.lowest();
        VertexMask rest = m;
        rest.reset(p);
        out = VdCertificate::node(graph_.label(p), level_one(rest), VdCertificate::any(), 1);
    }
    level_one_.emplace(m, out);
    return out;
}

VdCertificate CertificateBuilder::lift_isolated(const VertexMask& m, const VdCertificate& cert, int v) {
    const LiftKey key{cert.id(), m, v};
    if (auto it = lifts_.find(key); it != lifts_.end()) return it->second;
    if (graph_.neighbors(v).intersects(m)) throw DomainError("lift: vertex is not isolated");

    const int k = cert.level() + 1;
    VdCertificate out;
    if (graph_.edgeless(m)) {
        out = edgeless(m, k);
    } else {
        switch (cert.kind()) {
        case VdCertificate::Kind::any:
            if (cert.level() != 0) throw DomainError("lift: leaf 'any' above level 0");
            out = level_one(m);
            break;
        case VdCertificate::Kind::edgeless:
            throw DomainError("lift: edgeless leaf does not match a graph with edges");
        case VdCertificate::Kind::node: {
            const int u = graph_.position(cert.pivot());
            if (u == v || !m.test(u)) throw DomainError("lift: pivot outside the subgraph");
            VertexMask del = m;
            del.reset(u);
            out = VdCertificate::node(cert.pivot(), lift_isolated(del, cert.del(), v),
                                      lift_isolated(m - graph_.closed_neighbors(u), cert.link(), v), k);
            break;
        }
        }
    }
    pinned_.push_back(cert);
    lifts_.emplace(key, out);
    return out;
}

VdCertificate CertificateBuilder::chain(const VertexMask& m, int pivot, const std::vector<int>& neighbours,
                                        const std::vector<VdCertificate>& arms, const VdCertificate& closed,
                                        int level) {
    if (arms.size() != neighbours.size()) throw DomainError("chain: one arm certificate per neighbour required");
    VertexMask rest = m;
    for (int u : neighbours) rest.reset(u);
    VdCertificate out = lift_isolated(rest, closed, pivot);
    for (std::size_t l = neighbours.size(); l-- > 0;)
        out = VdCertificate::node(graph_.label(neighbours[l]), out, arms[l], level);
    return out;
}

VdCertificate build_certificate_degree_bound(const Graph& g) {
    const int delta = g.max_degree();
    if (delta == 0) return VdCertificate::edgeless(g.vertices());
    BitGraph bg(g);
    CertificateBuilder builder(bg);
    std::unordered_map<VertexMask, VdCertificate, VertexMaskHash> memo;  // level is a function of the root level

    auto build = [&](auto&& self, const VertexMask& m, int k) -> VdCertificate {
        if (k == 0) return VdCertificate::any();
        if (bg.edgeless(m)) return builder.edgeless(m, k);
        if (auto it = memo.find(m); it != memo.end() && it->second.level() == k) return it->second;
        const int v = m.lowest();
        std::vector<int> nbrs;
        (bg.neighbors(v) & m).for_each([&](int u) { nbrs.push_back(u); });
        const VdCertificate closed = self(self, m - bg.closed_neighbors(v), k - 1);
        std::vector<VdCertificate> arms;
        VertexMask earlier;
        for (int u : nbrs) {
            arms.push_back(self(self, m - bg.closed_neighbors(u) - earlier, k - 1));
            earlier.set(u);
        }
        auto out = builder.chain(m, v, nbrs, arms, closed, k);
        memo.insert_or_assign(m, out);
        return out;
    };
    const int n = static_cast<int>(g.order());
    return build(build, bg.all(), n / (2 * delta));
}

VdCertificate lift_isolated(const Graph& g, const VdCertificate& cert, Vertex v) {
    if (!g.contains(v)) throw DomainError("lift: unknown vertex " + std::to_string(v));
    if (g.degree(v) != 0) throw DomainError("lift: vertex " + std::to_string(v) + " is not isolated");
    const auto rest = delete_vertices(g, {v});
    if (auto res = verify_certificate(rest, cert); !res)
        throw DomainError("lift: certificate does not verify on G \\ v (" + res.path + ": " + res.reason + ")");
    BitGraph bg(g);
    CertificateBuilder builder(bg);
    return builder.lift_isolated(bg.all(), cert, bg.position(v));
}

// ---------------------------------------------------------------------------
// JSON

void write_certificate_json(std::ostream& out, const VdCertificate& cert) {
    switch (cert.kind()) {
    case VdCertificate::Kind::any:
        out << R"({"leaf":"any","level":)" << cert.level() << '}';
        return;
    case VdCertificate::Kind::edgeless:
        out << R"({"leaf":"edgeless","level":)" << cert.level() << R"(,"vertices":[)";
        for (std::size_t i = 0; i < cert.vertices().size(); ++i) out << (i ? "," : "") << cert.vertices()[i];
        out << "]}";
        return;
    case VdCertificate::Kind::node:
        out << R"({"level":)" << cert.level() << R"(,"node":{"del":)";
        write_certificate_json(out, cert.del());
        out << R"(,"link":)";
        write_certificate_json(out, cert.link());
        out << R"(,"pivot":)" << cert.pivot() << "}}";
        return;
    }
}

std::string certificate_to_json_string(const VdCertificate& cert) {
    std::ostringstream os;
    write_certificate_json(os, cert);
    return os.str();
}

namespace {

VdCertificate parse_certificate(const nlohmann::json& j, std::optional<int> expected) {
    if (!j.is_object()) throw DomainError("certificate: expected an object");
    std::optional<int> level = expected;
    if (j.contains("level")) level = j.at("level").get<int>();
    if (j.contains("leaf")) {
        const auto leaf = j.at("leaf").get<std::string>();
        if (leaf == "any") return VdCertificate::any(level.value_or(0));
        if (leaf == "edgeless") {
            auto vs = j.at("vertices").get<std::vector<Vertex>>();
            const int lv = level.value_or(static_cast<int>(vs.size()));
            return VdCertificate::edgeless(std::move(vs), lv);
        }
        throw DomainError("certificate: unknown leaf kind '" + leaf + "'");
    }
    if (!j.contains("node")) throw DomainError("certificate: object is neither a leaf nor a node");
    if (!level) throw DomainError("certificate: node without a level");
    const auto& n = j.at("node");
    return VdCertificate::node(n.at("pivot").get<Vertex>(), parse_certificate(n.at("del"), *level),
                               parse_certificate(n.at("link"), *level - 1), *level);
}

} // namespace

VdCertificate certificate_from_json(const nlohmann::json& j) {
    try {
        return parse_certificate(j, std::nullopt);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("certificate: ") + e.what());
    }
}

VdCertificate read_certificate_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open certificate file " + path);
    try {
        return certificate_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw DomainError("certificate file " + path + ": " + e.what());
    }
}

} // namespace tvf
