// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "invoronoi/anchor.hpp"
#include "invoronoi/baselines.hpp"
#include "invoronoi/bench.hpp"
#include "invoronoi/forward.hpp"
#include "invoronoi/propagate.hpp"
#include "invoronoi/solver.hpp"

#include "oracles.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>

using namespace invoronoi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::size_t worker_count()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string& args, const fs::path& stdout_file)
{
    const std::string cmd =
        std::string("\"") + INVORONOI_CLI + "\" " + args + " >\"" + stdout_file.string() + "\" 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome round_trip_accuracy()
{
    CampaignConfig cfg;
    cfg.ns = {10, 100, 500, 1000};
    cfg.nsim = 100;
    cfg.workers = worker_count();
    cfg.master_seed = 20240601;
    bool ok = true;
    std::string detail;
    for (const CampaignSummary& s : run_campaign(cfg)) {
        // failed draws (e.g. ten sites in convex position) are excluded from the aggregates
        ok = ok && s.rows.size() > 0 && s.log10_mean_rmse <= -10.0 && s.log10_max_rse <= -6.0;
        detail += "n=" + std::to_string(s.n) + " " + fmt("%.2f", s.log10_mean_rmse) + "/" +
                  fmt("%.2f", s.log10_max_rse);
        if (!s.failures.empty())
            detail += " (" + std::to_string(s.failures.size()) + " draws excluded)";
        detail += "; ";
    }
    return {ok, detail};
}

Outcome oracle_equivalence()
{
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const SimResult a = run_simulation(200, seed, Method::anchor);
        const SimResult b = run_simulation(200, seed, Method::brute);
        for (std::size_t i = 0; i < a.generators.size(); ++i)
            worst = std::max(worst, distance(a.generators[i], b.generators[i]));
    }
    return {worst < 1e-8, "max per-cell distance " + fmt("%.3g", worst)};
}

Outcome fixture_exactness()
{
    const auto d = oracle::diamond();
    const PatchSolution sol = solve_patch(assemble_patch(d.t, 0));
    double worst = 0.0;
    for (const auto& [cell, g] : sol.generators)
        worst = std::max(worst, distance(g, d.truth.generators[cell]));
    const bool ok = sol.generators.size() == 5 && worst < 1e-10;
    return {ok, std::to_string(sol.generators.size()) + " generators, max error " + fmt("%.3g", worst)};
}

Outcome uniqueness()
{
    Tessellation t;
    t.vertices = {{0, 1}, {4, 1}, {0, 2}, {4, 2}, {0, 3}, {4, 3}};
    t.ridges.push_back({{0, 1}, FiniteRidge{0, 1}});
    t.ridges.push_back({{0, 2}, FiniteRidge{2, 3}});
    t.ridges.push_back({{0, 3}, FiniteRidge{4, 5}});
    t.cells = {{{0, 1, 2}, true}, {{0}, false}, {{1}, false}, {{2}, false}};
    bool singular = false;
    try {
        solve_patch(assemble_system(t, {0, 1, 2, 3}, {{1, 0, 0}, {2, 0, 1}, {3, 0, 2}, {2, 1, 1}}, 1));
    } catch (const SingularSystemError&) {
        singular = true;
    }

    double smallest = std::numeric_limits<double>::infinity();
    for (std::uint64_t k = 0; k < 100; ++k) {
        const auto d = make_tessellation(100 + 5 * k, 500 + k);
        const CellId a = select_anchor(d.tessellation, RandomEligible{k});
        smallest = std::min(smallest, solve_patch(assemble_patch(d.tessellation, a)).smallest_singular_value);
    }
    return {singular && smallest > 1e-8, std::string("parallel system ") + (singular ? "singular" : "NOT singular") +
                                             "; min sigma over 100 anchors " + fmt("%.3g", smallest)};
}

Outcome bisector_property()
{
    double worst = 0.0;
    std::size_t ridges = 0;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const std::size_t n = 10 + (seed * 37) % 491;
        const auto d = make_tessellation(n, seed);
        const Tessellation& t = d.tessellation;
        for (const Ridge& r : t.ridges) {
            std::vector<VertexId> vs;
            if (const auto* f = std::get_if<FiniteRidge>(&r.geometry))
                vs = {f->v0, f->v1};
            else
                vs = {std::get<RayRidge>(r.geometry).v0};
            for (VertexId v : vs) {
                const double a = distance(t.vertices[v], d.truth.generators[r.cells[0]]);
                const double b = distance(t.vertices[v], d.truth.generators[r.cells[1]]);
                worst = std::max(worst, std::abs(a - b) / std::max(a, b));
            }
            ++ridges;
        }
    }
    return {worst <= 1e-10, std::to_string(ridges) + " ridges over 60 seeds, max relative gap " + fmt("%.3g", worst)};
}

Outcome linear_time()
{
    SimPolicies p;
    p.anchor = AnchorPolicyKind::best_score;
    p.frontier = SimPolicies::Frontier::first;
    p.timing_repeats = 7;
    std::vector<double> ratios;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const double t1 = run_simulation(1000, seed, Method::anchor, p).propagate_ms;
        const double t2 = run_simulation(2000, seed + 100, Method::anchor, p).propagate_ms;
        ratios.push_back(t2 / t1);
    }
    const double m = median(ratios);
    return {m <= 3.5, "median t(2000)/t(1000) = " + fmt("%.3f", m)};
}

Outcome depth_scaling()
{
    SimPolicies p;
    p.anchor = AnchorPolicyKind::best_score;
    p.frontier = SimPolicies::Frontier::first;
    std::vector<double> ratios;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto small = run_simulation(500, seed, Method::anchor, p).depth;
        const auto large = run_simulation(2000, seed + 1000, Method::anchor, p).depth;
        ratios.push_back(static_cast<double>(large) / static_cast<double>(small));
    }
    const double m = median(ratios);
    return {m >= 1.4 && m <= 3.2, "median depth(2000)/depth(500) = " + fmt("%.3f", m)};
}

Outcome c_prime_sanity()
{
    double worst = 0.0, anchor_sum = 0.0, cprime_sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const SimResult c = run_simulation(100, seed, Method::cprime);
        const SimResult a = run_simulation(100, seed, Method::anchor);
        worst = std::max(worst, c.max_rse);
        anchor_sum += a.rmse;
        cprime_sum += c.rmse;
    }
    const bool accurate = worst < 1e-6;
    const bool anchor_better = anchor_sum < cprime_sum;
    return {accurate && anchor_better, std::string("C' max error ") + fmt("%.3g", worst) +
                                           (accurate ? " (ok)" : " (too large)") + "; mean RMSE anchor " +
                                           fmt("%.3g", anchor_sum / 20) + " vs C' " + fmt("%.3g", cprime_sum / 20) +
                                           (anchor_better ? " (anchor lower)" : " (anchor NOT lower)")};
}

Outcome determinism()
{
    const fs::path dir = fs::path(INVORONOI_TEST_TMP) / "acceptance";
    fs::create_directories(dir);
    std::vector<std::string> mismatches;

    // library campaign across worker counts
    CampaignConfig cfg;
    cfg.ns = {50, 200};
    cfg.nsim = 16;
    cfg.methods = {Method::anchor, Method::brute, Method::cprime};
    std::string first;
    for (std::size_t w : {1u, 2u, 8u}) {
        cfg.workers = w;
        const fs::path p = dir / ("lib_" + std::to_string(w) + ".csv");
        export_detail_csv(run_campaign(cfg), p);
        const std::string text = slurp(p);
        if (first.empty())
            first = text;
        else if (text != first)
            mismatches.push_back("campaign workers=" + std::to_string(w));
    }

    // CLI commands run twice, and bench across worker counts
    const std::vector<std::pair<std::string, std::vector<std::string>>> commands{
        {"generate", {"generate --n 300 --seed 9 --out " + (dir / "g.json").string()}},
        {"reconstruct", {"reconstruct --in " + (dir / "g.json").string() +
                         " --frontier random --anchor-policy random --seed 3 --out " + (dir / "r.json").string()}},
        {"reconstruct cprime",
         {"reconstruct --in " + (dir / "g.json").string() + " --method cprime --out " + (dir / "c.json").string()}},
        {"bench", {"bench --ns 20,80 --nsim 10 --method anchor,cprime --workers 1 --csv " + (dir / "b.csv").string(),
                   "bench --ns 20,80 --nsim 10 --method anchor,cprime --workers 8 --csv " + (dir / "b.csv").string()}},
    };
    const std::vector<fs::path> products{dir / "g.json", dir / "r.json", dir / "c.json", dir / "b.csv"};
    for (std::size_t i = 0; i < commands.size(); ++i) {
        const auto& [name, variants] = commands[i];
        std::string ref_out, ref_file;
        for (int rep = 0; rep < 2; ++rep)
            for (const std::string& args : variants) {
                fs::remove(products[i]);
                const fs::path out = dir / "stdout.txt";
                if (run_cli(args, out) != 0) {
                    mismatches.push_back(name + " failed");
                    continue;
                }
                const std::string o = slurp(out), f = slurp(products[i]);
                if (ref_out.empty() && ref_file.empty()) {
                    ref_out = o;
                    ref_file = f;
                } else if (o != ref_out || f != ref_file) {
                    mismatches.push_back(name);
                }
            }
    }
    std::string detail = mismatches.empty() ? "campaign (workers 1/2/8) and 4 CLI commands byte-identical" : "differs:";
    for (const auto& m : mismatches)
        detail += " " + m;
    return {mismatches.empty(), detail};
}

Outcome path_independence()
{
    double worst = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto d = make_tessellation(500, seed);
        const Tessellation& t = d.tessellation;
        const PatchSolution patch = solve_patch(assemble_patch(t, select_anchor(t, BestScore{})));
        const auto a = reconstruct_all(t, patch, FirstAvailable{}, MergePolicy::first_wins);
        const auto b = reconstruct_all(t, patch, FirstAvailable{}, MergePolicy::ridge_length_weighted_mean);
        for (CellId c = 0; c < t.cell_count(); ++c)
            worst = std::max(worst, distance(a.generators[c], b.generators[c]));
    }
    return {worst < 1e-8, "max first/weighted distance " + fmt("%.3g", worst)};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"round-trip accuracy (n = 10..1000, 100 sims each)", round_trip_accuracy},
        {"anchor vs brute force (n = 200, 20 seeds)", oracle_equivalence},
        {"diamond fixture exactness", fixture_exactness},
        {"uniqueness and conditioning", uniqueness},
        {"bisector property (60 seeds, n <= 500)", bisector_property},
        {"linear-time propagation", linear_time},
        {"depth scaling", depth_scaling},
        {"C' comparison (n = 100, 20 seeds)", c_prime_sanity},
        {"determinism across runs and workers", determinism},
        {"path independence of merge policies", path_independence},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %zu. %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%zu criteria, %d failed\n", criteria.size(), failed);
    return failed == 0 ? 0 : 1;
}
