#include "tvf/complex.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "tvf/error.hpp"
#include "tvf/rational.hpp"
#include "tvf/vd.hpp"

namespace tvf {

namespace {

std::vector<VertexMask> maximal_sets(std::vector<VertexMask> sets) {
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    std::stable_sort(sets.begin(), sets.end(),
                     [](const VertexMask& a, const VertexMask& b) { return a.count() > b.count(); });
    std::vector<VertexMask> kept;
    for (const auto& s : sets) {
        bool covered = false;
        for (const auto& k : kept)
            if (k.count() > s.count() && s.subset_of(k)) {
                covered = true;
                break;
            }
        if (!covered) kept.push_back(s);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

void check_label(Vertex v) {
    if (v < 0 || v >= VertexMask::kCapacity)
        throw DomainError("complex vertex " + std::to_string(v) + " outside 0.." + std::to_string(VertexMask::kCapacity - 1));
}

// Calls f on every subset of `set` with exactly `size` elements.
template <class F>
void for_each_subset(const VertexMask& set, int size, F&& f) {
    const auto items = mask_labels(set);
    const int n = static_cast<int>(items.size());
    if (size < 0 || size > n) return;
    std::vector<int> idx(size);
    for (int i = 0; i < size; ++i) idx[i] = i;
    while (true) {
        VertexMask m;
        for (int i : idx) m.set(items[i]);
        f(m);
        int i = size - 1;
        while (i >= 0 && idx[i] == n - size + i) --i;
        if (i < 0) return;
        ++idx[i];
        for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
}

} // namespace

std::vector<Vertex> mask_labels(const VertexMask& m) {
    std::vector<Vertex> out;
    m.for_each([&](int i) { out.push_back(i); });
    return out;
}

SimplicialComplex::SimplicialComplex() : facets_{VertexMask{}} {}

SimplicialComplex SimplicialComplex::from_facets(std::vector<VertexMask> facets) {
    SimplicialComplex s;
    if (facets.empty()) return s;
    s.facets_ = maximal_sets(std::move(facets));
    for (const auto& f : s.facets_) s.vertices_ |= f;
    return s;
}

SimplicialComplex SimplicialComplex::simplex(const std::vector<Vertex>& vertices) {
    VertexMask m;
    for (Vertex v : vertices) {
        check_label(v);
        m.set(v);
    }
    return from_facets({m});
}

std::vector<Vertex> SimplicialComplex::vertices() const { return mask_labels(vertices_); }

bool SimplicialComplex::has_vertex(Vertex v) const {
    return v >= 0 && v < VertexMask::kCapacity && vertices_.test(v);
}

int SimplicialComplex::dimension() const {
    int d = -1;
    for (const auto& f : facets_) d = std::max(d, f.count() - 1);
    return d;
}

bool SimplicialComplex::is_pure() const {
    const int d = dimension();
    return std::all_of(facets_.begin(), facets_.end(), [&](const VertexMask& f) { return f.count() - 1 == d; });
}

bool SimplicialComplex::contains(const VertexMask& face) const {
    return std::any_of(facets_.begin(), facets_.end(), [&](const VertexMask& f) { return face.subset_of(f); });
}

std::vector<VertexMask> SimplicialComplex::faces(int dim, std::uint64_t budget) const {
    if (dim < -1) return {};
    if (dim == -1) return {VertexMask{}};
    std::unordered_set<VertexMask, VertexMaskHash> seen;
    for (const auto& f : facets_) {
        for_each_subset(f, dim + 1, [&](const VertexMask& m) {
            seen.insert(m);
            if (seen.size() > budget)
                throw ResourceError("face budget " + std::to_string(budget) + " exceeded in dimension " +
                                    std::to_string(dim));
        });
    }
    std::vector<VertexMask> out(seen.begin(), seen.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint64_t> SimplicialComplex::f_vector(std::uint64_t budget) const {
    std::vector<std::uint64_t> f;
    std::uint64_t total = 0;
    for (int d = -1; d <= dimension(); ++d) {
        f.push_back(faces(d, budget - std::min(total, budget)).size());
        total += f.back();
    }
    return f;
}

SimplicialComplex independence_complex(const Graph& g) {
    for (Vertex v : g.vertices()) check_label(v);
    if (g.order() == 0) return SimplicialComplex();
    BitGraph bg(g);
    // maximal independent sets = maximal cliques of the complement (Bron–Kerbosch with pivoting)
    std::vector<VertexMask> non_nbr(bg.order());
    for (int i = 0; i < bg.order(); ++i) {
        non_nbr[i] = bg.all();
        non_nbr[i] -= bg.closed_neighbors(i);
    }
    std::vector<VertexMask> facets;
    auto expand = [&](auto&& self, VertexMask r, VertexMask p, VertexMask x) -> void {
        if (p.empty() && x.empty()) {
            VertexMask labels;
            r.for_each([&](int i) { labels.set(bg.label(i)); });
            facets.push_back(labels);
            return;
        }
        VertexMask px = p;
        px |= x;
        int pivot = -1, best = -1;
        px.for_each([&](int u) {
            const int c = (p & non_nbr[u]).count();
            if (c > best) best = c, pivot = u;
        });
        VertexMask candidates = p;
        candidates -= non_nbr[pivot];
        candidates.for_each([&](int v) {
            VertexMask r2 = r;
            r2.set(v);
            self(self, r2, p & non_nbr[v], x & non_nbr[v]);
            p.reset(v);
            x.set(v);
        });
    };
    expand(expand, VertexMask{}, bg.all(), VertexMask{});
    return SimplicialComplex::from_facets(std::move(facets));
}

SimplicialComplex skeleton(const SimplicialComplex& s, int k, std::uint64_t budget) {
    if (k < -1) throw DomainError("skeleton dimension must be >= -1");
    if (k >= s.dimension()) return s;
    std::unordered_set<VertexMask, VertexMaskHash> out;
    for (const auto& f : s.facets()) {
        if (f.count() <= k + 1) {
            out.insert(f);
            continue;
        }
        for_each_subset(f, k + 1, [&](const VertexMask& m) {
            out.insert(m);
            if (out.size() > budget) throw ResourceError("face budget " + std::to_string(budget) + " exceeded by skeleton");
        });
    }
    return SimplicialComplex::from_facets(std::vector<VertexMask>(out.begin(), out.end()));
}

SimplicialComplex link(const SimplicialComplex& s, Vertex v) {
    if (!s.has_vertex(v)) throw DomainError("vertex " + std::to_string(v) + " is not in the complex");
    std::vector<VertexMask> out;
    for (const auto& f : s.facets())
        if (f.test(v)) {
            VertexMask g = f;
            g.reset(v);
            out.push_back(g);
        }
    return SimplicialComplex::from_facets(std::move(out));
}

SimplicialComplex deletion(const SimplicialComplex& s, Vertex v) {
    if (!s.has_vertex(v)) throw DomainError("vertex " + std::to_string(v) + " is not in the complex");
    std::vector<VertexMask> out;
    for (auto f : s.facets()) {
        f.reset(v);
        out.push_back(f);
    }
    return SimplicialComplex::from_facets(std::move(out));
}

namespace {

struct FacetsHash {
    std::size_t operator()(const std::vector<VertexMask>& v) const {
        std::size_t h = v.size();
        for (const auto& m : v) h = h * 1000003 ^ m.hash();
        return h;
    }
};

class ComplexVd {
public:
    VdResult decide(const SimplicialComplex& s) {
        if (!s.is_pure()) return {};
        if (s.dimension() == -1) return {true, {VertexMask{}}};
        if (auto it = memo_.find(s.facets()); it != memo_.end()) return it->second;
        VdResult result;
        for (Vertex v : s.vertices()) {
            const VdResult lk = decide(link(s, v));
            if (!lk.decomposable) continue;
            const VdResult del = decide(deletion(s, v));
            if (!del.decomposable) continue;
            result.decomposable = true;
            for (const auto& f : del.shelling)
                if (std::binary_search(s.facets().begin(), s.facets().end(), f)) result.shelling.push_back(f);
            for (auto f : lk.shelling) {
                f.set(v);
                result.shelling.push_back(f);
            }
            break;
        }
        memo_.emplace(s.facets(), result);
        return result;
    }

private:
    std::unordered_map<std::vector<VertexMask>, VdResult, FacetsHash> memo_;
};

} // namespace

VdResult is_vertex_decomposable(const SimplicialComplex& s) {
    ComplexVd vd;
    return vd.decide(s);
}

bool is_shelling_order(const SimplicialComplex& s, const std::vector<VertexMask>& order) {
    auto sorted = order;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != s.facets()) return false;
    for (std::size_t i = 1; i < order.size(); ++i) {
        std::vector<VertexMask> meets;
        for (std::size_t j = 0; j < i; ++j) meets.push_back(order[i] & order[j]);
        const int want = order[i].count() - 1;
        for (const auto& m : maximal_sets(std::move(meets)))
            if (m.count() != want) return false;
    }
    return true;
}

namespace {

using SparseRow = std::map<int, Rational>;

// Rank over Q by incremental row reduction; rows arrive as sparse vectors.
class RankCounter {
public:
    void add(SparseRow row) {
        while (!row.empty()) {
            auto lead = row.begin();
            auto it = pivots_.find(lead->first);
            if (it == pivots_.end()) {
                pivots_.emplace(lead->first, std::move(row));
                return;
            }
            const SparseRow& p = it->second;
            const Rational factor = lead->second / p.begin()->second;
            for (const auto& [col, val] : p) {
                auto [pos, inserted] = row.try_emplace(col, 0);
                pos->second -= factor * val;
                if (pos->second == 0) row.erase(pos);
            }
        }
    }
    std::uint64_t rank() const { return pivots_.size(); }

private:
    std::map<int, SparseRow> pivots_;
};

} // namespace

std::vector<std::uint64_t> reduced_betti(const SimplicialComplex& s, std::uint64_t budget) {
    const int top = s.dimension();
    std::vector<std::vector<VertexMask>> faces;
    std::uint64_t total = 0;
    for (int d = -1; d <= top; ++d) {
        faces.push_back(s.faces(d, budget - std::min(total, budget)));
        total += faces.back().size();
        if (total > budget) throw ResourceError("face budget " + std::to_string(budget) + " exceeded");
    }
    // rank[d+1] = rank of the boundary map from dimension d to d-1
    std::vector<std::uint64_t> rank(faces.size() + 1, 0);
    for (int d = 0; d <= top; ++d) {
        std::unordered_map<VertexMask, int, VertexMaskHash> index;
        const auto& lower = faces[d];
        for (int i = 0; i < static_cast<int>(lower.size()); ++i) index.emplace(lower[i], i);
        RankCounter counter;
        for (const auto& f : faces[d + 1]) {
            SparseRow row;
            int sign = 1;
            f.for_each([&](int v) {
                VertexMask g = f;
                g.reset(v);
                row.emplace(index.at(g), sign);
                sign = -sign;
            });
            counter.add(std::move(row));
        }
        rank[d + 1] = counter.rank();
    }
    std::vector<std::uint64_t> betti;
    for (std::size_t i = 0; i < faces.size(); ++i) betti.push_back(faces[i].size() - rank[i] - rank[i + 1]);
    return betti;
}

std::int64_t reduced_euler(const std::vector<std::uint64_t>& f) {
    std::int64_t chi = 0;
    for (std::size_t i = 0; i < f.size(); ++i) chi += (i % 2 == 0 ? -1 : 1) * static_cast<std::int64_t>(f[i]);
    return chi;
}

PropReport check_prop_isvd(const Graph& g, int k, std::uint64_t budget) {
    if (k < 0) throw DomainError("k must be non-negative");
    if (!is_vd(g, k)) throw DomainError("graph is not VD_" + std::to_string(k));
    PropReport r;
    r.k = k;
    const SimplicialComplex s = skeleton(independence_complex(g), k - 1, budget);
    r.dimension = s.dimension();
    r.pure = s.is_pure();
    const VdResult vd = is_vertex_decomposable(s);
    r.decomposable = vd.decomposable;
    r.shelling = vd.shelling;
    r.shelling_valid = vd.decomposable && is_shelling_order(s, vd.shelling);
    r.betti = reduced_betti(s, budget);
    r.betti_concentrated = true;
    for (int i = -1; i < k - 1; ++i)
        if (r.betti[i + 1] != 0) r.betti_concentrated = false;
    r.euler = reduced_euler(s.f_vector(budget));
    std::int64_t alternating = 0;
    for (std::size_t i = 0; i < r.betti.size(); ++i)
        alternating += (i % 2 == 0 ? -1 : 1) * static_cast<std::int64_t>(r.betti[i]);
    r.euler_matches = alternating == r.euler;
    return r;
}

SimplicialComplex read_facets(std::istream& in) {
    std::vector<VertexMask> facets;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string tok;
        VertexMask f;
        bool any = false, explicit_empty = false;
        while (ls >> tok) {
            if (tok == "{}") {
                explicit_empty = true;
                continue;
            }
            std::size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size()) throw DomainError("facet file line " + std::to_string(lineno) + ": bad label '" + tok + "'");
            check_label(v);
            f.set(v);
            any = true;
        }
        if (any || explicit_empty) facets.push_back(f);
    }
    return SimplicialComplex::from_facets(std::move(facets));
}

SimplicialComplex read_facets_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open facet file '" + path + "'");
    return read_facets(in);
}

namespace {

nlohmann::json mask_list(const std::vector<VertexMask>& v) {
    auto out = nlohmann::json::array();
    for (const auto& m : v) out.push_back(mask_labels(m));
    return out;
}

} // namespace

nlohmann::json complex_to_json(const SimplicialComplex& s) {
    return {{"vertices", s.vertices()},
            {"facets", mask_list(s.facets())},
            {"dimension", s.dimension()},
            {"pure", s.is_pure()}};
}

nlohmann::json prop_report_to_json(const PropReport& r) {
    return {{"k", r.k},
            {"dimension", r.dimension},
            {"pure", r.pure},
            {"vertex_decomposable", r.decomposable},
            {"shelling_valid", r.shelling_valid},
            {"shelling", mask_list(r.shelling)},
            {"betti", r.betti},
            {"betti_concentrated", r.betti_concentrated},
            {"reduced_euler", r.euler},
            {"euler_matches", r.euler_matches},
            {"ok", r.ok()}};
}

} // namespace tvf
