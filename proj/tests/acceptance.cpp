// Acceptance gate: one PASS/FAIL line per criterion, with the measured time
// and the runtime ceiling it must respect. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "oracles.hpp"
#include "trace_checks.hpp"
#include "tvf/complex.hpp"
#include "tvf/error.hpp"
#include "tvf/lp.hpp"
#include "tvf/random.hpp"
#include "tvf/scheme.hpp"
#include "tvf/squid.hpp"
#include "tvf/tverberg.hpp"
#include "tvf/vd.hpp"

using namespace tvf;

namespace {

constexpr std::uint64_t kSeed = 20240611;
constexpr std::uint64_t kFaceBudget = 2'000'000;

struct Outcome {
    bool pass = true;
    std::string detail;
    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

int run(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.pass && secs > limit_s) o.fail("took longer than the limit");
    std::printf("%s %d %-28s %8.2fs (limit %gs)  %s\n", o.pass ? "PASS" : "FAIL", id, name, secs, limit_s,
                o.detail.c_str());
    std::fflush(stdout);
    return o.pass ? 0 : 1;
}

Outcome vd_oracle() {
    Outcome o;
    std::size_t graphs = 0;
    for (int n = 0; n <= 7; ++n)
        for (const Graph& g : oracle::graphs_up_to_iso(n)) {
            ++graphs;
            oracle::VdOracle ref(g);
            int ref_max = 0;
            for (int k = 0; k <= n + 1; ++k) {
                const bool want = ref.vd(k);
                if (want) ref_max = k;
                if (is_vd(g, k) != want) o.fail("is_vd disagrees at n=" + std::to_string(n) + ", k=" + std::to_string(k));
            }
            const int ours = max_vd(g);
            if (ours != ref_max) o.fail("max_vd disagrees at n=" + std::to_string(n));
            const int delta = g.max_degree();
            if (delta > 0 && ours < n / (2 * delta)) o.fail("degree bound violated at n=" + std::to_string(n));
        }
    if (o.pass) o.detail = std::to_string(graphs) + " graphs, k = 0..n+1";
    return o;
}

Outcome skeleton_property() {
    Outcome o;
    std::size_t graphs = 0;
    for (int n = 1; n <= 6; ++n)
        for (const Graph& g : oracle::graphs_up_to_iso(n)) {
            ++graphs;
            const int k = max_vd(g);
            const PropReport r = check_prop_isvd(g, k, kFaceBudget);
            // the shelling is re-validated here, not taken from the report
            const SimplicialComplex sk = skeleton(independence_complex(g), k - 1, kFaceBudget);
            if (!r.ok() || !is_shelling_order(sk, r.shelling)) o.fail("property fails on a graph with n=" + std::to_string(n));
            for (int i = 0; i < k && i < static_cast<int>(r.betti.size()); ++i)
                if (r.betti[i] != 0) o.fail("homology below degree k-1 at n=" + std::to_string(n));
        }
    if (o.pass) o.detail = std::to_string(graphs) + " graphs at k = max_vd";
    return o;
}

Outcome df1_end_to_end() {
    Outcome o;
    auto one = [&](const Graph& g, int q, const std::string& what) {
        const RemovalTrace t = run_df1(g, q);
        const VdCertificate cert = extract_certificate(t);
        const ProductLayout layout(g, q);
        const int level = static_cast<int>(g.order());
        if (cert.level() != level) o.fail(what + ": certificate level " + std::to_string(cert.level()));
        const VerifyResult v = verify_certificate(layout.product(), cert, level);
        if (!v.ok) o.fail(what + ": " + v.reason + " at " + v.path);
        const audit::TraceAudit a = audit::audit_trace(t);
        if (!a.ok) o.fail(what + ": " + a.problem);
        return t.nodes.size();
    };
    const std::size_t c5 = one(Graph::cycle(5), 7, "C5 q=7");
    std::size_t small = 0;
    for (int n = 1; n <= 3; ++n)
        for (const Graph& g : oracle::graphs_up_to_iso(n)) {
            one(g, df1_threshold(g) + 1, "n=" + std::to_string(n));
            ++small;
        }
    if (o.pass) o.detail = "C5xK7 level 5 (" + std::to_string(c5) + " trace nodes); " + std::to_string(small) + " small graphs";
    return o;
}

Outcome scheme_numerics() {
    Outcome o;
    const EpsilonConstants c3 = epsilon_constants(3.0);
    if (std::abs(c3.k_epsilon - (1.0 + std::log(2.0))) > 1e-9) o.fail("K_eps(3) off by more than 1e-9");
    // grid at q = ⌈K·Δ⌉ + 1 for the given constant; returns passing cells
    auto grid = [](bool consistent, std::string& first_bad) {
        int good = 0;
        for (const char* eps : {"1/2", "1", "3"})
            for (std::int64_t delta : {5, 10, 20})
                for (std::int64_t n : {1000, 10000}) {
                    const Rational e = parse_rational(eps);
                    const EpsilonConstants c = epsilon_constants(to_double(e));
                    const double k = consistent ? c.k_epsilon_consistent : c.k_epsilon;
                    const std::int64_t q = static_cast<std::int64_t>(std::ceil(k * delta)) + 1;
                    const std::string where =
                        "eps=" + std::string(eps) + " delta=" + std::to_string(delta) + " N=" + std::to_string(n) + " q=" +
                        std::to_string(q);
                    try {
                        const SchemeBuild b = build_scheme(e, n, delta, q);
                        const bool valid = validate_scheme(b.scheme).ok;
                        const bool near = b.coverage >= n - 10 * static_cast<std::int64_t>(b.scheme.sizes.size());
                        const bool exact = b.coverage_before_rounding >= static_cast<double>(n);
                        if (valid && near && exact) {
                            ++good;
                            continue;
                        }
                        if (first_bad.empty())
                            first_bad = where + (valid ? "" : " invalid") + (near ? "" : " short") + (exact ? "" : " pre-rounding<N");
                    } catch (const DomainError& err) {
                        if (first_bad.empty()) first_bad = where + ": " + err.what();
                    }
                }
        return good;
    };
    std::string first_bad, unused;
    const int good = grid(false, first_bad);
    if (good != 18) {
        // diagnostic only: the same grid with q from 1/(a-1) + 2γ
        const int alt = grid(true, unused);
        o.fail(std::to_string(good) + "/18 grid cells; first: " + first_bad + " [with 1/(a-1)+2γ: " + std::to_string(alt) +
               "/18]");
    } else {
        o.detail = "K_eps(3) = 1+ln2; 18 grid cells";
    }
    return o;
}

Outcome dynamic_run() {
    Outcome o;
    const Graph p4 = Graph::path(4);
    const int q = 5;
    std::size_t runs = 0, starts = 0, row_empty = 0;
    auto one = [&](const std::vector<std::int64_t>& sizes, std::int64_t n, bool must_finish) {
        std::string name = "(";
        std::int64_t total = 0;
        for (auto s : sizes) name += std::to_string(s) + (&s == &sizes.back() ? ")" : ",");
        for (auto s : sizes) total += s;
        name += " n=" + std::to_string(n);
        RemovalTrace t;
        try {
            t = run_dynamic(p4, q, SizeScheme{sizes, n, q, 2});
        } catch (const SchemeInfeasible& e) {
            // a row running dry is the documented diagnostic, not a wrong certificate
            if (must_finish) o.fail(name + ": " + e.what());
            ++row_empty;
            return;
        }
        const VdCertificate cert = extract_certificate(t);
        const VerifyResult v = verify_certificate(ProductLayout(p4, q).product(), cert, static_cast<int>(total));
        const audit::TraceAudit a = audit::audit_trace(t);
        if (!v.ok) o.fail(name + ": " + v.reason);
        if (!a.ok) o.fail(name + ": " + a.problem);
        if (a.block_starts < sizes.size()) o.fail(name + ": missing block boundaries");
        ++runs;
        starts += a.block_starts;
    };
    // the worked example, and every scheme valid for the row size n = |V(P4)|
    one({1, 1}, 20, true);
    one({1}, 4, true);
    // every scheme valid for n = |V(P4 □ K5)| with total <= |V(P4)|
    std::vector<std::vector<std::int64_t>> pending{{}};
    while (!pending.empty()) {
        const auto sizes = pending.back();
        pending.pop_back();
        std::int64_t total = 0;
        for (auto s : sizes) total += s;
        for (std::int64_t s = 1; total + s <= 4; ++s) {
            auto next = sizes;
            next.push_back(s);
            pending.push_back(next);
        }
        if (!sizes.empty() && validate_scheme(sizes, 20, q, 2).ok) one(sizes, 20, false);
    }
    if (o.pass)
        o.detail = std::to_string(runs) + " runs verified, row rule held at " + std::to_string(starts) + " block starts; " +
                   std::to_string(row_empty) + " schemes stopped on an empty row";
    return o;
}

// coefficient-level recheck, independent of verify_witness
bool recheck(const PointConfiguration& cfg, int q, const TverbergWitness& w) {
    if (static_cast<int>(w.barycentric.size()) != q) return false;
    for (int c = 0; c < q; ++c) {
        Point sum(cfg.d, Rational(0));
        Rational weight = 0;
        for (const auto& [v, x] : w.barycentric[c]) {
            if (x < 0 || w.coloring.at(v) != c + 1) return false;
            weight += x;
            for (int i = 0; i < cfg.d; ++i) sum[i] += x * cfg.points.at(v)[i];
        }
        if (weight != 1 || sum != w.common_point) return false;
    }
    return true;
}

Outcome tverberg_witnesses() {
    Outcome o;
    Rng rng(kSeed);
    for (int trial = 0; trial < 20; ++trial) {
        const PointConfiguration cfg = random_configuration(7, 2, rng);
        const Graph g = Graph::edgeless(7);
        const auto w = search_witness(g, cfg, 3, configured_budget());
        if (!w) o.fail("no witness on trial " + std::to_string(trial));
        else if (!verify_witness(g, cfg, 3, *w).ok || !recheck(cfg, 3, *w)) o.fail("witness rejected on trial " + std::to_string(trial));
    }
    int meets = 0;
    for (int trial = 0; trial < 100; ++trial) {
        // 3/2/2 splits rarely meet, so every other instance is a 4/3 split
        const bool three = trial % 2 == 0;
        std::vector<std::vector<Point>> parts(three ? 3 : 2);
        std::vector<std::vector<oracle::P2>> ref(parts.size());
        const int split3[7] = {0, 0, 0, 1, 1, 2, 2}, split2[7] = {0, 0, 0, 0, 1, 1, 1};
        for (int i = 0; i < 7; ++i) {
            const int part = three ? split3[i] : split2[i];
            Point p{rng.rational(6, 3), rng.rational(6, 3)};
            ref[part].emplace_back(p[0], p[1]);
            parts[part].push_back(std::move(p));
        }
        const auto h = hulls_intersect(parts);
        if (h.has_value() != oracle::planar_hulls_meet(ref)) o.fail("oracle disagreement on instance " + std::to_string(trial));
        meets += h.has_value();
    }
    PointConfiguration line{1, {}};
    for (int i = 0; i < 3; ++i) line.points.emplace(i, Point{Rational(i)});
    if (search_witness(Graph::complete(3), line, 2, configured_budget())) o.fail("witness for K3 on a line");
    if (o.pass) o.detail = "20 witnesses; 100 hull instances (" + std::to_string(meets) + " meet); K3 collinear none";
    return o;
}

/// Every JSON artifact a seeded pipeline produces, concatenated.
std::string pipelines(std::uint64_t seed) {
    Rng rng(seed);
    std::string out;
    const Graph g = random_graph(6, 40, rng);
    out += certificate_to_json_string(*find_certificate(g, max_vd(g))) + "\n";
    out += certificate_to_json_string(build_certificate_degree_bound(g)) + "\n";
    out += complex_to_json(independence_complex(g)).dump() + "\n";
    out += prop_report_to_json(check_prop_isvd(g, max_vd(g), kFaceBudget)).dump() + "\n";
    const Graph small = random_graph(3, 50, rng);
    const RemovalTrace t = run_df1(small, df1_threshold(small) + 1);
    out += trace_to_json(t).dump() + "\n" + certificate_to_json_string(extract_certificate(t)) + "\n";
    const RemovalTrace d = run_dynamic(Graph::path(4), 5, SizeScheme{{2, 1}, 20, 5, 2});
    out += trace_to_json(d).dump() + "\n";
    out += build_to_json(build_scheme(Rational(3), 1000, 10, 40)).dump() + "\n";
    const PointConfiguration cfg = random_configuration(7, 2, rng);
    out += witness_to_json(*search_witness(Graph::edgeless(7), cfg, 3, configured_budget())).dump() + "\n";
    out += corollary_to_json(corollary_pipeline(Graph::edgeless(7), cfg, 3, Rational(1, 5), configured_budget())).dump() + "\n";
    return out;
}

Outcome determinism() {
    Outcome o;
    for (std::uint64_t seed : {std::uint64_t{0}, std::uint64_t{1}, kSeed}) {
        const std::string a = pipelines(seed), b = pipelines(seed);
        if (a != b) o.fail("seed " + std::to_string(seed) + " produced different bytes");
    }
    if (pipelines(0) == pipelines(1)) o.fail("seed has no effect");
    if (o.pass) o.detail = "3 seeds, 10 artifacts each, byte-identical";
    return o;
}

} // namespace

// --known-failure N marks a criterion that is expected to fail; it still
// prints FAIL but does not count toward the exit status. A known failure
// that starts passing does count, so the list cannot go stale.
int main(int argc, char** argv) {
    std::set<int> known;
    for (int i = 1; i + 1 < argc; i += 2)
        if (std::string(argv[i]) == "--known-failure") known.insert(std::atoi(argv[i + 1]));

    const std::vector<std::tuple<const char*, double, Outcome (*)()>> criteria{
        {"vd-oracle-equivalence", 300, vd_oracle},   {"skeleton-property", 300, skeleton_property},
        {"df1-end-to-end", 600, df1_end_to_end},     {"size-scheme-numerics", 60, scheme_numerics},
        {"dynamic-scheme-run", 60, dynamic_run},     {"tverberg-witnesses", 600, tverberg_witnesses},
        {"determinism", 600, determinism},
    };
    int failed = 0, unexpected = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        const auto& [name, limit, body] = criteria[i];
        const bool fail = run(id, name, limit, body) != 0;
        failed += fail;
        if (fail != static_cast<bool>(known.count(id))) {
            ++unexpected;
            if (!fail) std::printf("     %d was listed as a known failure but passed\n", id);
        }
    }
    std::printf("%d of %zu criteria failed; %d unexpected\n", failed, criteria.size(), unexpected);
    return unexpected;
}
