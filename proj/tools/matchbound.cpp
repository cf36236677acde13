#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifdef MATCHBOUND_CLI11_SINGLE_HEADER
#include "CLI11.hpp"
#else
#include <CLI/CLI.hpp>
#endif

#include "matchbound/bounds.hpp"
#include "matchbound/campaign.hpp"
#include "matchbound/correspondence.hpp"
#include "matchbound/count.hpp"
#include "matchbound/io.hpp"
#include "matchbound/prooflab.hpp"

namespace mb = matchbound;

namespace {

enum Exit { kOk = 0, kUsage = 1, kInfeasible = 2, kViolation = 3 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string graph_path;
    std::string format = "auto";
    std::string ell = "all";
    std::uint64_t seed = 1;
    std::string out;
    bool json = false;
    bool csv = false;
    bool strict = false;
    std::string phi_interp = "gamma";
    // campaign
    std::string conjecture = "umc";
    int d = 0;
    int n = 0;
    int samples = 100;
    int m = 0;
    double p = 0.6;
    std::string family = "random";
    // prooflab
    bool catalog = false;
};

struct Input {
    std::string id;
    std::vector<mb::Graph> graphs;          // general graphs
    std::optional<mb::BipartiteGraph> bip;  // set for bipartite input
};

std::string read_all(const std::string& path) {
    if (path.empty()) throw UsageError("--graph is required");
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string detect_format(const std::string& path, const std::string& text) {
    const std::string ext = std::filesystem::path(path).extension().string();
    if (ext == ".g6") return "g6";
    if (ext == ".edges") return "edges";
    if (ext == ".bip") return "bipartite";
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (first == "B") return "bipartite";
        return first.find_first_not_of("0123456789") == std::string::npos ? "edges" : "g6";
    }
    throw UsageError("empty graph input");
}

Input load_input(const Options& o) {
    const std::string text = read_all(o.graph_path);
    const std::string fmt = o.format == "auto" ? detect_format(o.graph_path, text) : o.format;
    Input in;
    in.id = o.graph_path == "-" ? "stdin" : std::filesystem::path(o.graph_path).stem().string();
    if (fmt == "edges") {
        in.graphs.push_back(mb::parse_edge_list(text));
    } else if (fmt == "bipartite") {
        in.bip = mb::parse_bipartite(text);
        in.graphs.push_back(in.bip->to_graph());
    } else if (fmt == "g6") {
        std::istringstream ss(text);
        std::string line;
        while (std::getline(ss, line))
            if (line.find_first_not_of(" \t\r") != std::string::npos) in.graphs.push_back(mb::parse_graph6(line));
        if (in.graphs.empty()) throw UsageError("no graph6 lines");
    } else {
        throw UsageError("unknown format " + fmt);
    }
    return in;
}

std::string graph_id(const Input& in, std::size_t i) {
    return in.graphs.size() == 1 ? in.id : in.id + "#" + std::to_string(i);
}

/// --ell: "all" gives lo..hi, otherwise a single value.
std::vector<int> ell_values(const std::string& spec, int lo, int hi) {
    std::vector<int> out;
    if (spec == "all") {
        for (int l = lo; l <= hi; ++l) out.push_back(l);
        return out;
    }
    long long v = 0;
    if (!mb::detail::parse_int(spec, v)) throw UsageError("--ell must be an integer or all");
    out.push_back(static_cast<int>(v));
    return out;
}

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw UsageError("cannot write " + path);
        }
    }
    std::ostream& get() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

int cmd_count(const Options& o) {
    const Input in = load_input(o);
    const mb::CountOptions opts = mb::count_options_from_env();
    Output out(o.out);
    nlohmann::json all = nlohmann::json::array();
    for (std::size_t i = 0; i < in.graphs.size(); ++i) {
        const mb::MatchingProfile prof = mb::matching_profile(in.graphs[i], opts);
        if (o.json) {
            all.push_back({{"graphId", graph_id(in, i)}, {"profile", mb::to_json(prof)}});
            continue;
        }
        if (in.graphs.size() > 1) out.get() << "# " << graph_id(in, i) << '\n';
        out.get() << "l\tPhi_l\n";
        for (std::size_t l = 0; l <= prof.max_matching_size(); ++l) out.get() << l << '\t' << prof.at(l).str() << '\n';
    }
    if (o.json) out.get() << nlohmann::json{{"schema", mb::kReportSchema}, {"results", all}}.dump(2) << '\n';
    return kOk;
}

int cmd_bounds(const Options& o) {
    const Input in = load_input(o);
    const mb::CountOptions opts = mb::count_options_from_env();
    const mb::PhiInterp interp = mb::parse_phi_interp(o.phi_interp);
    std::vector<mb::BoundReport> reports;
    if (in.bip) {
        const int top = std::min(in.bip->size_x(), in.bip->size_y());
        for (int l : ell_values(o.ell, 1, top)) reports.push_back(mb::bound_report(*in.bip, l, in.id, interp, opts));
    } else {
        for (std::size_t i = 0; i < in.graphs.size(); ++i) {
            const std::string id = graph_id(in, i);
            if (const auto bip = mb::bipartition(in.graphs[i])) {
                const int top = std::min(bip->size_x(), bip->size_y());
                for (int l : ell_values(o.ell, 1, top)) reports.push_back(mb::bound_report(*bip, l, id, interp, opts));
                continue;
            }
            for (int l : ell_values(o.ell, 1, in.graphs[i].n() / 2))
                reports.push_back(mb::bound_report(in.graphs[i], l, id, opts));
        }
    }
    Output out(o.out);
    if (o.json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : reports) arr.push_back(mb::to_json(r));
        out.get() << nlohmann::json{{"schema", mb::kReportSchema}, {"reports", arr}}.dump(2) << '\n';
    } else {
        out.get() << mb::kBoundCsvHeader << '\n';
        for (const auto& r : reports) out.get() << mb::to_csv_rows(r);
    }
    return kOk;
}

int cmd_marginals(const Options& o) {
    const Input in = load_input(o);
    if (!in.bip) throw UsageError("marginals needs bipartite input");
    const int ell = o.ell == "all" ? in.bip->size_x() : ell_values(o.ell, 0, 0).front();
    const mb::MarginalTable t = mb::matching_marginals(*in.bip, ell, mb::count_options_from_env());
    Output out(o.out);
    if (o.json) {
        nlohmann::json j = mb::to_json(t);
        j["schema"] = mb::kReportSchema;
        j["graphId"] = in.id;
        out.get() << j.dump(2) << '\n';
        return kOk;
    }
    out.get() << "Phi_l = " << t.total.str() << '\n' << "x\\y";
    for (int y = 0; y < in.bip->size_y(); ++y) out.get() << '\t' << y;
    out.get() << "\tH(f(x))\n";
    for (std::size_t x = 0; x < t.p.size(); ++x) {
        out.get() << x;
        for (const auto& v : t.p[x]) out.get() << '\t' << mb::to_string(v);
        out.get() << '\t' << t.h_edge[x] << '\n';
    }
    out.get() << "mu";
    for (const auto& v : t.mu) out.get() << '\t' << mb::to_string(v);
    out.get() << '\n';
    return kOk;
}

int cmd_double_cover(const Options& o) {
    const Input in = load_input(o);
    if (in.graphs.size() != 1) throw UsageError("double-cover takes a single graph");
    Output out(o.out);
    out.get() << mb::emit_bipartite(mb::bipartite_double_cover(in.graphs.front()));
    return kOk;
}

int cmd_fibers(const Options& o) {
    const Input in = load_input(o);
    nlohmann::json arr = nlohmann::json::array();
    bool all_pass = true;
    for (std::size_t i = 0; i < in.graphs.size(); ++i) {
        for (int l : ell_values(o.ell, 0, in.graphs[i].n() / 2)) {
            const mb::AuditReport r = mb::verify_fibers(in.graphs[i], l, graph_id(in, i));
            all_pass = all_pass && r.pass();
            arr.push_back(mb::to_json(r));
        }
    }
    Output out(o.out);
    out.get() << nlohmann::json{{"schema", mb::kReportSchema}, {"audits", arr}}.dump(2) << '\n';
    return !all_pass && o.strict ? kViolation : kOk;
}

nlohmann::json prooflab_instance(const mb::BipartiteGraph& b, int ell, const std::string& id, bool& pass) {
    nlohmann::json j;
    const mb::ChainAudit chain = mb::inequality_chain_audit(b, ell, id);
    pass = pass && chain.pass;
    j["chain"] = mb::to_json(chain);
    j["distributions"] = nlohmann::json::array();
    j["rk"] = nlohmann::json::array();
    const mb::ProofLabSpace space(b, ell);
    for (mb::Vertex x = 0; x < ell; ++x) {
        const mb::DistributionAudit d = mb::zx_distribution_audit(b, ell, x);
        pass = pass && d.pass();
        j["distributions"].push_back(mb::to_json(d));
        for (mb::Vertex y : b.neighbors_x(x)) {
            if (space.p(x, y) == 0) continue;
            const mb::DistributionAudit r = mb::rk_formula_audit(b, ell, x, y);
            pass = pass && r.pass();
            j["rk"].push_back(mb::to_json(r));
        }
    }
    return j;
}

int cmd_prooflab(const Options& o) {
    bool pass = true;
    nlohmann::json arr = nlohmann::json::array();
    if (o.catalog) {
        for (const auto& e : mb::tiny_bipartite_catalog(o.seed)) arr.push_back(prooflab_instance(e.graph, e.ell, e.id, pass));
    } else {
        const Input in = load_input(o);
        if (!in.bip) throw UsageError("prooflab needs bipartite input or --catalog");
        const int ell = o.ell == "all" ? in.bip->size_x() : ell_values(o.ell, 0, 0).front();
        arr.push_back(prooflab_instance(*in.bip, ell, in.id, pass));
    }
    Output out(o.out);
    out.get() << nlohmann::json{{"schema", mb::kReportSchema}, {"pass", pass}, {"instances", arr}}.dump(2) << '\n';
    return !pass && o.strict ? kViolation : kOk;
}

int cmd_campaign(const Options& o) {
    mb::CampaignConfig cfg;
    cfg.conjecture = mb::parse_conjecture(o.conjecture);
    cfg.samples = o.samples;
    cfg.seed = o.seed;
    cfg.count = mb::count_options_from_env();
    if (cfg.conjecture == mb::Conjecture::umc) {
        cfg.n = o.n;
        cfg.d = o.d;
        if (o.ell != "all") cfg.ells = ell_values(o.ell, 0, 0);
    } else {
        if (o.ell == "all") throw UsageError("genminc/wild campaigns need --ell");
        cfg.ell = ell_values(o.ell, 0, 0).front();
        cfg.m = o.m;
        cfg.p = o.p;
        cfg.family = o.family;
        cfg.interp = mb::parse_phi_interp(o.phi_interp);
    }
    const mb::CampaignReport r = mb::run_campaign(cfg);
    Output out(o.out);
    out.get() << mb::to_json(r).dump(2) << '\n';
    std::cerr << "campaign: " << r.instances.size() << " instances, " << r.violations.size() << " violations, "
              << r.runtime_seconds << " s\n";
    return !r.violations.empty() && o.strict ? kViolation : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact matching counts, bounds and conjecture campaigns"};
    app.require_subcommand(1);
    Options o;

    auto add_graph = [&](CLI::App* sub) {
        sub->add_option("--graph", o.graph_path, "Graph file, or - for stdin");
        sub->add_option("--format", o.format, "g6, edges or bipartite (default: detect)")
            ->check(CLI::IsMember({"auto", "g6", "edges", "bipartite"}));
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--ell", o.ell, "Matching size, or all");
        sub->add_option("--seed", o.seed, "Seed");
        sub->add_option("--out", o.out, "Output file (default stdout)");
        sub->add_flag("--json", o.json, "JSON output");
        sub->add_flag("--csv", o.csv, "CSV output");
        sub->add_flag("--strict", o.strict, "Exit 3 when a violation or failed check is found");
        sub->add_option("--phi-interp", o.phi_interp, "gamma or literal")->check(CLI::IsMember({"gamma", "literal"}));
    };

    struct Sub {
        const char* name;
        const char* help;
        int (*run)(const Options&);
    };
    const Sub subs[] = {
        {"count", "Matching profile", cmd_count},
        {"bounds", "Bound table", cmd_bounds},
        {"marginals", "Edge marginals of the uniform X-saturating matching", cmd_marginals},
        {"double-cover", "Bipartite double cover", cmd_double_cover},
        {"fibers", "Double-cover fiber audit", cmd_fibers},
        {"prooflab", "Entropy-proof audits on tiny bipartite graphs", cmd_prooflab},
        {"campaign", "Seeded conjecture campaign", cmd_campaign},
    };
    std::vector<std::pair<CLI::App*, int (*)(const Options&)>> handlers;
    for (const Sub& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        add_graph(sub);
        add_common(sub);
        handlers.emplace_back(sub, s.run);
        if (std::string(s.name) == "prooflab") sub->add_flag("--catalog", o.catalog, "Run the built-in catalog");
        if (std::string(s.name) == "campaign") {
            sub->add_option("--conjecture", o.conjecture, "umc, genminc or wild")
                ->check(CLI::IsMember({"umc", "genminc", "wild"}));
            sub->add_option("--d", o.d, "Degree (umc)");
            sub->add_option("--N", o.n, "Vertex count (umc)");
            sub->add_option("--samples", o.samples, "Sample count");
            sub->add_option("--M", o.m, "|Y| (genminc, wild)");
            sub->add_option("--p", o.p, "Edge probability (random family)");
            sub->add_option("--family", o.family, "random or sharp")->check(CLI::IsMember({"random", "sharp"}));
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }
    if (o.json && o.csv) {
        std::cerr << "error: --json and --csv are exclusive\n";
        return kUsage;
    }

    try {
        for (const auto& [sub, run] : handlers)
            if (sub->parsed()) return run(o);
    } catch (const mb::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
