// Command-line front end. Every run records a manifest (argv, input digests,
// seed, version, timing, result digest); `replay` re-executes one in memory
// and compares digests.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "digest.hpp"
#include "tvf/complex.hpp"
#include "tvf/error.hpp"
#include "tvf/graph.hpp"
#include "tvf/random.hpp"
#include "tvf/scheme.hpp"
#include "tvf/squid.hpp"
#include "tvf/tverberg.hpp"
#include "tvf/vd.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tvf;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitDomain = 1;
constexpr int kExitResource = 2;
constexpr int kExitUsage = 64;

/// Everything a command reads and produces; files are only written by main,
/// so replay keeps them in memory.
struct Session {
    std::vector<std::string> argv;
    std::uint64_t seed = 0;
    std::string manifest_path;
    bool ran = false;
    int status = 0;

    std::string out_text;
    std::vector<std::pair<std::string, std::string>> files;
    std::map<std::string, std::string> inputs;

    std::string read_input(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw DomainError("cannot open '" + path + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        inputs[path] = cli::sha256_hex(ss.str());
        return ss.str();
    }
    Graph graph(const std::string& path) {
        std::istringstream in(read_input(path));
        return read_edge_list(in);
    }
    void print(const std::string& text) { out_text += text; }
    void print_json(const json& j) { out_text += j.dump(2) + "\n"; }
    void write(const std::string& path, std::string content) { files.emplace_back(path, std::move(content)); }
    /// Writes to `path` when given, else prints.
    void emit(const std::string& path, std::string content) {
        if (path.empty()) print(content);
        else write(path, std::move(content));
    }

    std::string result_digest() const {
        std::string all = "stdout\n" + out_text;
        for (const auto& [path, content] : files) all += "\n" + path + "\n" + content;
        return cli::sha256_hex(all);
    }
};

std::string edge_list_text(const Graph& g) {
    std::ostringstream out;
    write_edge_list(out, g);
    return out.str();
}

std::string cert_text(const VdCertificate& cert) { return certificate_to_json_string(cert) + "\n"; }

json verify_json(const VerifyResult& r, int level) {
    return {{"ok", r.ok}, {"level", level}, {"path", r.path}, {"reason", r.reason}};
}

void fail_unless(bool ok, Session& s) {
    if (!ok) s.status = kExitDomain;
}

/// Builds the command tree; `action` receives the selected command.
void build_app(CLI::App& app, Session& s, std::function<void()>& action) {
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    app.add_option("--seed", s.seed, "seed for every random choice")->default_val(0);
    app.add_option("--manifest", s.manifest_path, "write the run manifest here instead of stderr");

    auto set = [&action](CLI::App* sub, std::function<void()> f) {
        sub->callback([&action, f] { action = f; });
    };
    // option storage lives as long as the app
    auto store = std::make_shared<std::map<std::string, std::string>>();
    auto ints = std::make_shared<std::map<std::string, std::int64_t>>();
    auto sizes = std::make_shared<std::vector<std::int64_t>>();
    auto str = [store](const std::string& k) -> std::string& { return (*store)[k]; };
    auto num = [ints](const std::string& k) -> std::int64_t& { return (*ints)[k]; };

    // graph ---------------------------------------------------------------
    auto* graph = app.add_subcommand("graph", "graph utilities")->require_subcommand(1);
    {
        auto* c = graph->add_subcommand("product", "edge list of G □ K_q (label = index·q + row - 1)");
        c->add_option("--graph", str("graph"))->required();
        c->add_option("--q", num("q"))->required();
        c->add_option("--out", str("out"));
        set(c, [&s, str, num] {
            const Graph g = s.graph(str("graph"));
            if (num("q") < 1) throw DomainError("q must be positive");
            s.emit(str("out"), edge_list_text(cartesian_product(g, Graph::complete(static_cast<int>(num("q"))))));
        });
    }
    {
        auto* c = graph->add_subcommand("info", "basic invariants");
        c->add_option("--graph", str("graph"))->required();
        set(c, [&s, str] {
            const Graph g = s.graph(str("graph"));
            s.print_json({{"vertices", g.order()},
                          {"edges", g.edges().size()},
                          {"max_degree", g.max_degree()},
                          {"df1_threshold_walk", df1_threshold(g, TwoStepMode::walk)},
                          {"df1_threshold_distance", df1_threshold(g, TwoStepMode::distance)}});
        });
    }
    {
        auto* c = graph->add_subcommand("random", "G(n, p) edge list from --seed");
        c->add_option("--n", num("n"))->required();
        c->add_option("--percent", num("percent"), "edge probability in percent")->default_val(50);
        c->add_option("--out", str("out"));
        set(c, [&s, str, num] {
            Rng rng(s.seed);
            s.emit(str("out"), edge_list_text(random_graph(static_cast<int>(num("n")), static_cast<int>(num("percent")), rng)));
        });
    }

    // vd ------------------------------------------------------------------
    auto* vd = app.add_subcommand("vd", "VD_k decisions and certificates")->require_subcommand(1);
    {
        auto* c = vd->add_subcommand("check", "is G VD_k?");
        c->add_option("--graph", str("graph"))->required();
        c->add_option("--k", num("k"))->required();
        set(c, [&s, str, num] {
            const Graph g = s.graph(str("graph"));
            s.print_json({{"k", num("k")}, {"vd", is_vd(g, static_cast<int>(num("k")))}});
        });
    }
    {
        auto* c = vd->add_subcommand("max", "largest k with G VD_k");
        c->add_option("--graph", str("graph"))->required();
        set(c, [&s, str] { s.print(std::to_string(max_vd(s.graph(str("graph")))) + "\n"); });
    }
    {
        auto* c = vd->add_subcommand("build", "emit a certificate");
        c->add_option("--graph", str("graph"))->required();
        c->add_option("--k", num("k"), "level (default: max_vd; search method only)")->default_val(-1);
        c->add_option("--method", str("method"), "search | degree-bound")->default_val("search");
        c->add_option("--out", str("out"));
        set(c, [&s, str, num] {
            const Graph g = s.graph(str("graph"));
            VdCertificate cert;
            if (str("method") == "degree-bound") {
                cert = build_certificate_degree_bound(g);
            } else if (str("method") == "search") {
                const int k = num("k") >= 0 ? static_cast<int>(num("k")) : max_vd(g);
                auto found = find_certificate(g, k);
                if (!found) throw DomainError("graph is not VD_" + std::to_string(k));
                cert = *found;
            } else {
                throw DomainError("unknown method '" + str("method") + "'");
            }
            if (auto r = verify_certificate(g, cert); !r)
                throw TheoremViolation("built certificate does not verify at " + r.path + ": " + r.reason);
            s.emit(str("out"), cert_text(cert));
        });
    }
    {
        auto* c = vd->add_subcommand("verify", "check a certificate against G or G □ K_q");
        auto* g_opt = c->add_option("--graph", str("graph"));
        auto* p_opt = c->add_option("--graph-product", str("product"));
        g_opt->excludes(p_opt);
        c->add_option("--q", num("q"))->needs(p_opt);
        c->add_option("--cert", str("cert"))->required();
        c->add_option("--k", num("k"), "required root level")->default_val(-1);
        set(c, [&s, str, num] {
            Graph host;
            if (!str("graph").empty()) {
                host = s.graph(str("graph"));
            } else if (!str("product").empty()) {
                if (num("q") < 1) throw DomainError("--graph-product needs --q >= 1");
                host = cartesian_product(s.graph(str("product")), Graph::complete(static_cast<int>(num("q"))));
            } else {
                throw DomainError("one of --graph or --graph-product is required");
            }
            const VdCertificate cert = certificate_from_json(json::parse(s.read_input(str("cert"))));
            const VerifyResult r = num("k") >= 0 ? verify_certificate(host, cert, static_cast<int>(num("k")))
                                                 : verify_certificate(host, cert);
            s.print_json(verify_json(r, cert.level()));
            fail_unless(r.ok, s);
        });
    }

    // squid ---------------------------------------------------------------
    auto* squid = app.add_subcommand("squid", "squid-removal engines")->require_subcommand(1);
    auto finish_trace = [&s](const RemovalTrace& trace, const std::string& out, std::string cert_path) {
        if (cert_path.empty()) cert_path = (fs::path(out).parent_path() / "cert.json").string();
        const VdCertificate cert = extract_certificate(trace);
        const int level = trace.initial.m - static_cast<int>(trace.initial.squids.size());
        const VerifyResult r = verify_certificate(trace_host(trace), cert, level);
        if (!r) throw TheoremViolation("extracted certificate fails at " + r.path + ": " + r.reason);
        s.write(out, trace_to_json(trace).dump() + "\n");
        s.write(cert_path, cert_text(cert));
        s.print_json({{"trace", out},
                      {"certificate", cert_path},
                      {"nodes", trace.nodes.size()},
                      {"level", level},
                      {"verified", true}});
    };
    {
        auto* c = squid->add_subcommand("df1", "DF1 removal on G □ K_q");
        c->add_option("--graph", str("graph"))->required();
        c->add_option("--q", num("q"))->required();
        c->add_option("--mode", str("mode"), "two-step set: walk | distance")->default_val("walk");
        c->add_option("--out", str("out"))->required();
        c->add_option("--cert", str("cert"), "default: cert.json next to --out");
        set(c, [&s, str, num, finish_trace] {
            const Graph g = s.graph(str("graph"));
            finish_trace(run_df1(g, static_cast<int>(num("q")), parse_two_step_mode(str("mode"))), str("out"), str("cert"));
        });
    }
    {
        auto* c = squid->add_subcommand("dynamic", "block-wise removal following a size scheme");
        c->add_option("--graph", str("graph"))->required();
        c->add_option("--q", num("q"))->required();
        c->add_option("--sizes", *sizes)->required()->delimiter(',');
        c->add_option("--n", num("n"), "scheme budget n (default |V(G □ K_q)|)")->default_val(-1);
        c->add_option("--delta", num("delta"), "scheme Δ (default: maximal degree)")->default_val(-1);
        c->add_option("--out", str("out"))->required();
        c->add_option("--cert", str("cert"), "default: cert.json next to --out");
        set(c, [&s, str, num, sizes, finish_trace] {
            const Graph g = s.graph(str("graph"));
            const std::int64_t q = num("q");
            SizeScheme scheme{*sizes, num("n") >= 0 ? num("n") : static_cast<std::int64_t>(g.order()) * q, q,
                              num("delta") >= 0 ? num("delta") : g.max_degree()};
            finish_trace(run_dynamic(g, static_cast<int>(q), scheme), str("out"), str("cert"));
        });
    }
    {
        auto* c = squid->add_subcommand("extract", "certificate from a saved trace");
        c->add_option("--trace", str("trace"))->required();
        c->add_option("--out", str("out"));
        set(c, [&s, str] {
            const RemovalTrace trace = trace_from_json(json::parse(s.read_input(str("trace"))));
            const VdCertificate cert = extract_certificate(trace);
            const int level = trace.initial.m - static_cast<int>(trace.initial.squids.size());
            const VerifyResult r = verify_certificate(trace_host(trace), cert, level);
            if (!r) throw TheoremViolation("extracted certificate fails at " + r.path + ": " + r.reason);
            s.emit(str("out"), cert_text(cert));
        });
    }

    // scheme --------------------------------------------------------------
    auto* scheme = app.add_subcommand("scheme", "dynamic size schemes")->require_subcommand(1);
    {
        auto* c = scheme->add_subcommand("constants", "a, γ and K_ε for ε");
        c->add_option("--epsilon", str("epsilon"))->required();
        set(c, [&s, str] { s.print_json(constants_to_json(epsilon_constants(to_double(parse_rational(str("epsilon")))))); });
    }
    {
        auto* c = scheme->add_subcommand("build", "integer scheme covering N");
        c->add_option("--epsilon", str("epsilon"))->required();
        c->add_option("--n,--N", num("N"), "target N")->required();
        c->add_option("--delta", num("delta"))->required();
        c->add_option("--q", num("q"))->required();
        set(c, [&s, str, num] {
            const SchemeBuild b = build_scheme(parse_rational(str("epsilon")), num("N"), num("delta"), num("q"));
            s.print_json(build_to_json(b));
            fail_unless(b.coverage >= b.target, s);
        });
    }
    {
        auto* c = scheme->add_subcommand("validate", "exact check of a size scheme");
        auto* file = c->add_option("--file", str("file"), "scheme JSON {sizes, n, q, delta}");
        auto* inline_sizes = c->add_option("--sizes", *sizes)->delimiter(',')->excludes(file);
        c->add_option("--n", num("n"))->needs(inline_sizes);
        c->add_option("--q", num("q"))->needs(inline_sizes);
        c->add_option("--delta", num("delta"))->needs(inline_sizes);
        c->require_option(1, 4);
        set(c, [&s, str, num, sizes] {
            SizeScheme sc;
            if (!str("file").empty()) sc = scheme_from_json(json::parse(s.read_input(str("file"))));
            else sc = SizeScheme{*sizes, num("n"), num("q"), num("delta")};
            const SchemeCheck r = validate_scheme(sc.sizes, sc.n, sc.q, sc.delta);
            s.print_json({{"ok", r.ok}, {"failing_index", r.failing_index}, {"reason", r.reason}});
            fail_unless(r.ok, s);
        });
    }

    // complex -------------------------------------------------------------
    auto* cx = app.add_subcommand("complex", "simplicial complexes")->require_subcommand(1);
    auto load_complex = [&s, str, num]() {
        SimplicialComplex c;
        if (!str("facets").empty()) {
            std::istringstream in(s.read_input(str("facets")));
            c = read_facets(in);
        } else if (!str("graph").empty()) {
            c = independence_complex(s.graph(str("graph")));
        } else {
            throw DomainError("one of --facets or --graph is required");
        }
        if (num("k") >= -1) c = skeleton(c, static_cast<int>(num("k")), configured_budget());
        return c;
    };
    auto complex_source = [str, num](CLI::App* c) {
        auto* f = c->add_option("--facets", str("facets"), "facet list file");
        auto* g = c->add_option("--graph", str("graph"), "use Ind(G)");
        f->excludes(g);
        c->add_option("--k", num("k"), "restrict to the k-skeleton")->default_val(-2);
    };
    {
        auto* c = cx->add_subcommand("ind", "independence complex of G");
        c->add_option("--graph", str("graph"))->required();
        c->add_option("--k", num("k"), "restrict to the k-skeleton")->default_val(-2);
        set(c, [&s, load_complex] { s.print_json(complex_to_json(load_complex())); });
    }
    {
        auto* c = cx->add_subcommand("betti", "reduced rational Betti numbers");
        complex_source(c);
        set(c, [&s, load_complex] {
            const SimplicialComplex c = load_complex();
            const auto f = c.f_vector(configured_budget());
            s.print_json({{"dimension", c.dimension()},
                          {"betti", reduced_betti(c, configured_budget())},
                          {"f_vector", f},
                          {"reduced_euler", reduced_euler(f)}});
        });
    }
    {
        auto* c = cx->add_subcommand("vd", "vertex decomposability with shelling order");
        complex_source(c);
        set(c, [&s, load_complex] {
            const SimplicialComplex c = load_complex();
            const VdResult r = is_vertex_decomposable(c);
            auto shelling = json::array();
            for (const auto& f : r.shelling) shelling.push_back(mask_labels(f));
            s.print_json({{"vertex_decomposable", r.decomposable},
                          {"shelling", shelling},
                          {"shelling_valid", r.decomposable && is_shelling_order(c, r.shelling)}});
        });
    }
    {
        auto* c = cx->add_subcommand("check-prop", "skeleton of Ind(G) for a VD_k graph");
        c->add_option("--graph", str("graph"))->required();
        c->add_option("--k", num("k"))->required();
        set(c, [&s, str, num] {
            const PropReport r = check_prop_isvd(s.graph(str("graph")), static_cast<int>(num("k")), configured_budget());
            s.print_json(prop_report_to_json(r));
            fail_unless(r.ok(), s);
        });
    }

    // tverberg ------------------------------------------------------------
    auto* tv = app.add_subcommand("tverberg", "affine Tverberg colorings")->require_subcommand(1);
    auto points = [&s](const std::string& path) {
        std::istringstream in(s.read_input(path));
        return read_points(in);
    };
    {
        auto* c = tv->add_subcommand("search", "first proper q-coloring with intersecting hulls");
        c->add_option("--graph", str("graph"))->required();
        c->add_option("--points", str("points"))->required();
        c->add_option("--q", num("q"))->required();
        set(c, [&s, str, num, points] {
            const Graph g = s.graph(str("graph"));
            const PointConfiguration cfg = points(str("points"));
            SearchStats stats;
            auto w = search_witness(g, cfg, static_cast<int>(num("q")), configured_budget(), &stats);
            if (w) {
                auto check = verify_witness(g, cfg, static_cast<int>(num("q")), *w);
                if (!check) throw TheoremViolation("witness fails re-verification: " + check.reason);
            }
            s.print_json({{"witness", w ? witness_to_json(*w) : json(nullptr)},
                          {"search_nodes", stats.nodes},
                          {"lp_calls", stats.lp_calls}});
        });
    }
    {
        auto* c = tv->add_subcommand("corollary", "prime reduction and greedy extension");
        c->add_option("--graph", str("graph"))->required();
        c->add_option("--points", str("points"))->required();
        c->add_option("--q", num("q"))->required();
        c->add_option("--epsilon", str("epsilon"))->required();
        set(c, [&s, str, num, points] {
            const CorollaryReport r = corollary_pipeline(s.graph(str("graph")), points(str("points")), num("q"),
                                                         parse_rational(str("epsilon")), configured_budget());
            s.print_json(corollary_to_json(r));
            fail_unless(r.ok(), s);
        });
    }
    {
        auto* c = tv->add_subcommand("primes", "prime-power test and largest prime <= q");
        c->add_option("--q", num("q"))->required();
        set(c, [&s, num] {
            const PrimeInfo p = prime_utilities(num("q"));
            s.print_json({{"q", num("q")},
                          {"prime_power", p.prime_power},
                          {"base", p.base},
                          {"exponent", p.exponent},
                          {"bertrand_prime", p.bertrand_prime}});
        });
    }
    {
        auto* c = tv->add_subcommand("random", "random rational point file from --seed");
        c->add_option("--n", num("n"))->required();
        c->add_option("--d", num("d"))->required();
        c->add_option("--range", num("range"))->default_val(10);
        c->add_option("--max-den", num("max_den"))->default_val(4);
        c->add_option("--out", str("out"));
        set(c, [&s, str, num] {
            Rng rng(s.seed);
            std::ostringstream out;
            write_points(out, random_configuration(static_cast<int>(num("n")), static_cast<int>(num("d")), rng, num("range"),
                                                   num("max_den")));
            s.emit(str("out"), out.str());
        });
    }
}

json manifest_json(const Session& s, double wall_ms) {
    json artifacts = json::object();
    for (const auto& [path, content] : s.files) artifacts[path] = cli::sha256_hex(content);
    return {{"command", s.argv},
            {"inputs", s.inputs},
            {"seed", s.seed},
            {"version", kVersion},
            {"timing", {{"wall_ms", wall_ms}}},
            {"exit_code", s.status},
            {"stdout_digest", cli::sha256_hex(s.out_text)},
            {"artifacts", artifacts},
            {"result_digest", s.result_digest()}};
}

/// Parses and runs one command line (without the program name).
int execute(Session& s) {
    CLI::App app{"Vertex-decomposability and Tverberg-coloring toolkit", "tvf"};
    std::function<void()> action;
    build_app(app, s, action);
    std::vector<std::string> args = s.argv;
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    s.ran = true;
    try {
        action();
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const TheoremViolation& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return kExitDomain;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const json::exception& e) {
        std::cerr << "error: malformed JSON input: " << e.what() << "\n";
        return kExitDomain;
    }
    return s.status;
}

void flush(const Session& s) {
    for (const auto& [path, content] : s.files) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DomainError("cannot write '" + path + "'");
        out << content;
    }
    std::cout << s.out_text;
}

int replay(const std::vector<std::string>& args) {
    CLI::App app{"re-run a manifest and compare digests", "tvf replay"};
    std::string manifest_path;
    app.add_option("--manifest", manifest_path)->required();
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : kExitUsage;
    }
    std::ifstream in(manifest_path);
    if (!in) {
        std::cerr << "error: cannot open manifest '" << manifest_path << "'\n";
        return kExitDomain;
    }
    json m;
    try {
        m = json::parse(in);
    } catch (const json::exception& e) {
        std::cerr << "error: malformed manifest: " << e.what() << "\n";
        return kExitDomain;
    }
    Session s;
    s.argv = m.at("command").get<std::vector<std::string>>();
    if (!s.argv.empty() && s.argv[0] == "replay") {
        std::cerr << "error: refusing to replay a replay\n";
        return kExitDomain;
    }
    const int code = execute(s);
    const bool match = s.result_digest() == m.at("result_digest").get<std::string>();
    json artifacts = json::object();
    for (const auto& [path, content] : s.files) artifacts[path] = cli::sha256_hex(content);
    std::cout << json{{"command", s.argv},
                      {"exit_code", code},
                      {"result_digest", s.result_digest()},
                      {"result_digest_match", match},
                      {"artifacts", artifacts}}
                     .dump(2)
              << "\n";
    return match ? 0 : kExitDomain;
}

} // namespace

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (!args.empty() && args[0] == "replay") return replay({args.begin() + 1, args.end()});

    Session s;
    s.argv = args;
    const auto start = std::chrono::steady_clock::now();
    int code = execute(s);
    const double wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (!s.ran) return code;  // usage errors and --help
    try {
        flush(s);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    const std::string manifest = manifest_json(s, wall_ms).dump(2) + "\n";
    if (s.manifest_path.empty()) {
        std::cerr << manifest;
    } else {
        std::ofstream out(s.manifest_path);
        out << manifest;
    }
    return code;
}
