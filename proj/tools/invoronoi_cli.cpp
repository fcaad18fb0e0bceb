// Command-line front end: generate | reconstruct | bench | validate.
//
// Exit codes: 0 ok, 2 usage, 3 algorithmic failure, 4 consistency failure, 5 I/O or parse error.

#include "invoronoi/anchor.hpp"
#include "invoronoi/baselines.hpp"
#include "invoronoi/bench.hpp"
#include "invoronoi/forward.hpp"
#include "invoronoi/propagate.hpp"
#include "invoronoi/solver.hpp"
#include "invoronoi/tessellation.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace invoronoi;

enum Exit : int {
    kOk = 0,
    kUsage = 2,
    kAlgorithm = 3,
    kInconsistent = 4,
    kIo = 5,
};

struct GenerateOptions {
    std::size_t n = 0;
    std::uint64_t seed = 1;
    std::string out;
};

struct ReconstructOptions {
    std::string in;
    std::string method = "anchor";
    std::string frontier = "first";
    std::string merge = "first";
    std::string anchor_policy = "best";
    std::uint64_t seed = 1;
    std::string out;
    std::string report;
    double perturb = kDefaultPerturbation;
};

struct BenchOptions {
    std::vector<std::size_t> ns;
    std::size_t nsim = 100;
    std::vector<std::string> methods{"anchor"};
    std::string frontier = "random";
    std::string merge = "first";
    std::string anchor_policy = "random";
    std::size_t workers = 1;
    std::uint64_t seed = 1;
    std::string csv;
    std::string detail;
    bool append = false;
    bool timing = false;
};

struct ValidateOptions {
    std::string in;
};

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text))
        throw IoError("cannot write " + path);
}

FrontierPolicy frontier_from(const std::string& name, std::uint64_t seed)
{
    if (name == "random")
        return RandomFrontier{seed};
    if (name == "longest")
        return LongestRidge{};
    return FirstAvailable{};
}

MergePolicy merge_from(const std::string& name)
{
    return name == "weighted" ? MergePolicy::ridge_length_weighted_mean : MergePolicy::first_wins;
}

int run_generate(const GenerateOptions& o)
{
    BuiltDiagram built;
    try {
        built = make_tessellation(o.n, o.seed);
    } catch (const std::invalid_argument& e) {
        std::cerr << "generate: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "generate: build failed: " << e.what() << '\n';
        return kAlgorithm;
    }
    try {
        save(built.tessellation, &built.truth, o.out);
    } catch (const std::exception& e) {
        std::cerr << "generate: " << e.what() << '\n';
        return kIo;
    }
    std::cout << "cells " << built.tessellation.cells.size() << " ridges " << built.tessellation.ridges.size()
              << " vertices " << built.tessellation.vertices.size() << '\n';
    return kOk;
}

std::string generators_json(const std::string& method, const std::vector<Point2>& g)
{
    std::string s = "{\n  \"version\": 1,\n  \"method\": \"" + method + "\",\n  \"generators\": [";
    for (std::size_t i = 0; i < g.size(); ++i)
        s += (i ? ",\n    [" : "\n    [") + format_real(g[i].x) + "," + format_real(g[i].y) + "]";
    s += "\n  ]\n}\n";
    return s;
}

int run_reconstruct(const ReconstructOptions& o)
{
    TessellationFile file;
    try {
        file = load(o.in);
    } catch (const std::exception& e) {
        std::cerr << "reconstruct: " << e.what() << '\n';
        return kIo;
    }
    const Tessellation& t = file.tessellation;

    std::vector<Point2> generators;
    std::ostringstream report;
    report << "{\n  \"method\": \"" << o.method << "\",\n  \"cells\": " << t.cell_count();
    bool consistent = true;
    try {
        if (o.method == "anchor") {
            const AnchorPolicy policy =
                o.anchor_policy == "random" ? AnchorPolicy{RandomEligible{o.seed}} : AnchorPolicy{BestScore{}};
            const CellId anchor = select_anchor(t, policy);
            const PatchSolution patch = solve_patch(assemble_patch(t, anchor));
            consistent = patch.consistent();
            report << ",\n  \"anchor\": " << anchor << ",\n  \"residual_norm\": " << format_real(patch.residual_norm)
                   << ",\n  \"consistency_threshold\": " << format_real(kConsistencyTolerance * patch.b_norm)
                   << ",\n  \"condition_estimate\": " << format_real(patch.condition_estimate);
            if (consistent) {
                Reconstruction rec = reconstruct_all(t, patch, frontier_from(o.frontier, o.seed), merge_from(o.merge));
                report << ",\n  \"depth\": " << rec.trace.depth
                       << ",\n  \"max_candidate_spread\": " << format_real(rec.trace.max_candidate_spread);
                generators = std::move(rec.generators);
            }
        } else if (o.method == "brute") {
            const auto entries = brute_force_all(t);
            double worst = 0.0;
            generators.resize(entries.size());
            for (const auto& e : entries) {
                generators[e.cell] = e.generator;
                if (e.solved)
                    worst = std::max(worst, e.residual);
                consistent = consistent && e.consistent;
            }
            report << ",\n  \"residual_norm\": " << format_real(worst);
        } else {
            generators = c_prime_all(t, o.perturb);
        }
    } catch (const std::exception& e) {
        std::cerr << "reconstruct: " << e.what() << '\n';
        return kAlgorithm;
    }

    report << ",\n  \"consistent\": " << (consistent ? "true" : "false");
    if (consistent && file.truth) {
        const auto err = cell_errors(generators, file.truth->generators);
        double worst = 0.0;
        for (double e : err)
            worst = std::max(worst, e);
        report << ",\n  \"rmse\": " << format_real(rmse(err)) << ",\n  \"max_rse\": " << format_real(worst);
    }
    report << "\n}\n";

    try {
        if (!o.out.empty() && consistent)
            write_text(o.out, generators_json(o.method, generators));
        if (!o.report.empty())
            write_text(o.report, report.str());
    } catch (const std::exception& e) {
        std::cerr << "reconstruct: " << e.what() << '\n';
        return kIo;
    }
    std::cout << report.str();
    if (!consistent) {
        std::cerr << "reconstruct: residual exceeds the Voronoi-consistency threshold; "
                     "the input is likely not a Voronoi tessellation\n";
        return kInconsistent;
    }
    return kOk;
}

int run_bench(const BenchOptions& o)
{
    CampaignConfig cfg;
    cfg.ns = o.ns;
    cfg.nsim = o.nsim;
    cfg.workers = o.workers;
    cfg.master_seed = o.seed;
    cfg.methods.clear();
    for (const auto& m : o.methods)
        cfg.methods.push_back(parse_method(m));
    cfg.policies.anchor = o.anchor_policy == "best" ? AnchorPolicyKind::best_score : AnchorPolicyKind::random_eligible;
    cfg.policies.frontier = o.frontier == "first"     ? SimPolicies::Frontier::first
                            : o.frontier == "longest" ? SimPolicies::Frontier::longest
                                                      : SimPolicies::Frontier::random;
    cfg.policies.merge = merge_from(o.merge);

    const auto summaries = run_campaign(cfg);
    std::size_t failures = 0;
    std::cout << "n\tmethod\tnsim\tfailed\tlog10_mean_rmse\tlog10_max_rse\tmean_depth";
    if (o.timing)
        std::cout << "\tmean_propagate_ms";
    std::cout << '\n';
    for (const auto& s : summaries) {
        failures += s.failures.size();
        std::cout << s.n << '\t' << to_string(s.method) << '\t' << s.nsim << '\t' << s.failures.size() << '\t'
                  << format_6g(s.log10_mean_rmse) << '\t' << format_6g(s.log10_max_rse) << '\t'
                  << format_6g(s.mean_depth);
        if (o.timing)
            std::cout << '\t' << format_6g(s.mean_propagate_ms);
        std::cout << '\n';
    }
    // Paired difference against C' on shared seeds.
    for (const auto& s : summaries) {
        if (s.method == Method::cprime)
            continue;
        for (const auto& c : summaries)
            if (c.method == Method::cprime && c.n == s.n)
                std::cout << "dif n=" << s.n << ' ' << to_string(s.method) << "-cprime "
                          << format_6g(s.log10_mean_rmse - c.log10_mean_rmse) << '\n';
    }
    for (const auto& s : summaries)
        for (const auto& f : s.failures)
            std::cerr << "failed: " << f.message << '\n';

    try {
        if (!o.csv.empty())
            export_csv(summaries, o.csv, o.append, o.timing);
        if (!o.detail.empty())
            export_detail_csv(summaries, o.detail);
    } catch (const std::exception& e) {
        std::cerr << "bench: " << e.what() << '\n';
        return kIo;
    }
    return failures == 0 ? kOk : kAlgorithm;
}

int run_validate(const ValidateOptions& o)
{
    TessellationFile file;
    try {
        file = load(o.in);
    } catch (const std::exception& e) {
        std::cerr << "validate: " << e.what() << '\n';
        return kIo;
    }
    const auto violations = validate(file.tessellation);
    for (const auto& v : violations)
        std::cout << v << '\n';
    std::cout << violations.size() << " violations\n";
    return violations.empty() ? kOk : kInconsistent;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Recover Voronoi generators from a tessellation"};
    app.require_subcommand(1);

    GenerateOptions gen;
    auto* g = app.add_subcommand("generate", "Sample sites and write their Voronoi tessellation");
    g->add_option("--n", gen.n, "number of cells")->required()->check(CLI::Range(std::size_t{2}, std::size_t{1} << 26));
    g->add_option("--seed", gen.seed, "RNG seed");
    g->add_option("--out", gen.out, "output tessellation file")->required();

    ReconstructOptions rec;
    auto* r = app.add_subcommand("reconstruct", "Recover generators from a tessellation file");
    r->add_option("--in", rec.in, "input tessellation file")->required();
    r->add_option("--method", rec.method)->check(CLI::IsMember({"anchor", "brute", "cprime"}));
    r->add_option("--frontier", rec.frontier)->check(CLI::IsMember({"first", "random", "longest"}));
    r->add_option("--merge", rec.merge)->check(CLI::IsMember({"first", "weighted"}));
    r->add_option("--anchor-policy", rec.anchor_policy)->check(CLI::IsMember({"best", "random"}));
    r->add_option("--seed", rec.seed, "seed for random policies");
    r->add_option("--perturb", rec.perturb, "C' slope perturbation (radians)")->check(CLI::NonNegativeNumber);
    r->add_option("--out", rec.out, "recovered generators file");
    r->add_option("--report", rec.report, "JSON report file");

    BenchOptions bench;
    auto* b = app.add_subcommand("bench", "Monte Carlo accuracy campaign");
    b->add_option("--ns", bench.ns, "cell counts, comma separated")->required()->delimiter(',')->check(
        CLI::Range(std::size_t{10}, std::size_t{1} << 24));
    b->add_option("--nsim", bench.nsim, "simulations per n")->check(CLI::PositiveNumber);
    b->add_option("--method", bench.methods, "anchor, brute, cprime (comma separated)")
        ->delimiter(',')
        ->check(CLI::IsMember({"anchor", "brute", "cprime"}));
    b->add_option("--frontier", bench.frontier)->check(CLI::IsMember({"first", "random", "longest"}));
    b->add_option("--merge", bench.merge)->check(CLI::IsMember({"first", "weighted"}));
    b->add_option("--anchor-policy", bench.anchor_policy)->check(CLI::IsMember({"best", "random"}));
    b->add_option("--workers", bench.workers)->check(CLI::PositiveNumber);
    b->add_option("--seed", bench.seed, "campaign master seed");
    b->add_option("--csv", bench.csv, "summary CSV");
    b->add_option("--detail", bench.detail, "per-simulation CSV");
    b->add_flag("--append", bench.append, "append to an existing summary CSV");
    b->add_flag("--timing", bench.timing, "report propagation wall time (output is no longer reproducible)");

    ValidateOptions val;
    auto* v = app.add_subcommand("validate", "Check a tessellation file's structural invariants");
    v->add_option("--in", val.in, "input tessellation file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*g)
            return run_generate(gen);
        if (*r)
            return run_reconstruct(rec);
        if (*b)
            return run_bench(bench);
        return run_validate(val);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kAlgorithm;
    }
}
