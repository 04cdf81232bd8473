// Audits a removal trace from scratch: rebuilds every residual as a label set
// and re-derives the membership conditions, the body condition and the
// dynamic row rule without touching the engine's bitsets.
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "tvf/squid.hpp"

namespace audit {

using namespace tvf;

struct TraceAudit {
    bool ok = true;
    std::string problem;
    std::size_t nodes = 0;
    std::size_t squids = 0;
    std::size_t isolated_pivots = 0;  // closed squid {p} with p isolated in H
    std::size_t block_starts = 0;

    void fail(const std::string& why) {
        if (ok) problem = why;
        ok = false;
    }
};

inline TraceAudit audit_trace(const RemovalTrace& t) {
    TraceAudit a;
    const ProductLayout layout(t.initial.graph, t.initial.q);
    const Graph& product = layout.product();
    VertexSet root(product.vertices().begin(), product.vertices().end());
    for (const auto& s : t.initial.squids)
        for (const auto& c : s.cells()) root.erase(layout.label(c));

    std::map<std::size_t, VertexSet> seen;
    auto visit = [&](auto&& self, std::size_t id, const VertexSet& h) -> void {
        if (auto it = seen.find(id); it != seen.end()) {
            if (it->second != h) a.fail("node " + std::to_string(id) + " shared by different residuals");
            return;
        }
        seen.emplace(id, h);
        ++a.nodes;
        const TraceNode& node = t.nodes.at(id);
        if (node.residual_count != static_cast<int>(h.size())) a.fail("residual count mismatch at " + std::to_string(id));
        if (node.level == 0) return;
        if (h.empty()) a.fail("empty residual above level 0");
        if (!node.pivot) {
            a.fail("missing pivot");
            return;
        }
        const ProductVertex p = *node.pivot;
        const Vertex pl = layout.label(p);
        if (!h.count(pl)) a.fail("pivot outside the residual at node " + std::to_string(id));

        if (t.algorithm == Algorithm::df1 && pl != *h.begin()) a.fail("DF1 pivot is not the smallest residual vertex");
        if (node.block) {
            const BlockInfo& b = *node.block;
            if (b.starts_block) {
                ++a.block_starts;
                std::vector<int> preserved(t.initial.q, 0);
                for (Vertex v : h) ++preserved[layout.locate(v).row - 1];
                int expect = -1;
                for (int r = 1; r <= t.initial.q; ++r) {
                    if (std::count(b.previous_rows.begin(), b.previous_rows.end(), r)) continue;
                    if (expect < 0 || preserved[r - 1] > preserved[expect - 1]) expect = r;
                }
                if (b.row != expect) a.fail("row rule violated at block " + std::to_string(b.index));
                if (b.preserved != preserved) a.fail("preserved counts differ at block " + std::to_string(b.index));
            }
            if (p.row != b.row) a.fail("pivot off the block row");
            for (Vertex v : h) {
                const ProductVertex pv = layout.locate(v);
                if (pv.row == b.row && layout.label(pv) < pl) a.fail("block pivot is not the smallest base in its row");
            }
        }

        const Graph hg = induced_subgraph(product, h);
        for (const TraceChild& ch : node.children) {
            ++a.squids;
            VertexSet s;
            for (const auto& c : ch.squid.cells()) s.insert(layout.label(c));
            if (!std::includes(h.begin(), h.end(), s.begin(), s.end())) a.fail("squid leaves the residual");
            if (!is_valid_squid(layout, ch.squid)) a.fail("malformed squid at node " + std::to_string(id));
            if (!admissible_successor(layout, h, p, s)) {
                if (s == VertexSet{pl} && hg.degree(pl) == 0) ++a.isolated_pivots;
                else a.fail("squid violates both membership conditions at node " + std::to_string(id));
            }
            VertexSet rest;
            std::set_difference(h.begin(), h.end(), s.begin(), s.end(), std::inserter(rest, rest.end()));
            for (int r = 1; r <= t.initial.q; ++r)
                if (rest.count(layout.label({ch.squid.body, r}))) a.fail("body column survives at node " + std::to_string(id));
            self(self, ch.child, rest);
        }
    };
    visit(visit, 0, root);
    return a;
}

} // namespace audit
