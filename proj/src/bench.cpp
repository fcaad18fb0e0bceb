#include "invoronoi/bench.hpp"

#include "invoronoi/baselines.hpp"
#include "invoronoi/forward.hpp"
#include "invoronoi/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <thread>

namespace invoronoi {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start)
{
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

FrontierPolicy frontier_for(const SimPolicies& p, std::uint64_t seed)
{
    switch (p.frontier) {
    case SimPolicies::Frontier::first:
        return FirstAvailable{};
    case SimPolicies::Frontier::longest:
        return LongestRidge{};
    case SimPolicies::Frontier::random:
        break;
    }
    return RandomFrontier{splitmix64(seed ^ 0xf00dull)};
}

} // namespace

std::string to_string(Method m)
{
    switch (m) {
    case Method::anchor:
        return "anchor";
    case Method::brute:
        return "brute";
    case Method::cprime:
        return "cprime";
    }
    return "?";
}

Method parse_method(const std::string& s)
{
    if (s == "anchor")
        return Method::anchor;
    if (s == "brute")
        return Method::brute;
    if (s == "cprime")
        return Method::cprime;
    throw std::invalid_argument("unknown method '" + s + "' (expected anchor, brute or cprime)");
}

std::vector<double> cell_errors(const std::vector<Point2>& recovered, const std::vector<Point2>& truth)
{
    if (recovered.size() != truth.size())
        throw std::invalid_argument("recovered and true generator counts differ");
    std::vector<double> err(truth.size());
    for (std::size_t i = 0; i < truth.size(); ++i)
        err[i] = distance(recovered[i], truth[i]);
    return err;
}

double rmse(const std::vector<double>& errors)
{
    if (errors.empty())
        return 0.0;
    double ss = 0.0;
    for (double e : errors)
        ss += e * e;
    return std::sqrt(ss / static_cast<double>(errors.size()));
}

std::uint64_t simulation_seed(std::uint64_t master, std::size_t n, std::size_t index)
{
    return splitmix64((master ^ splitmix64(static_cast<std::uint64_t>(n))) + static_cast<std::uint64_t>(index));
}

SimResult run_simulation(std::size_t n, std::uint64_t seed, Method method, const SimPolicies& policies)
{
    if (n < 10)
        throw std::invalid_argument("run_simulation needs n >= 10");
    SimResult r;
    r.n = n;
    r.seed = seed;
    r.method = method;
    try {
        auto t0 = Clock::now();
        const BuiltDiagram built = make_tessellation(n, seed);
        r.build_ms = ms_since(t0);
        const Tessellation& t = built.tessellation;

        switch (method) {
        case Method::anchor: {
            const AnchorPolicy ap = policies.anchor == AnchorPolicyKind::best_score
                                        ? AnchorPolicy{BestScore{}}
                                        : AnchorPolicy{RandomEligible{splitmix64(seed ^ 0xa11c0ull)}};
            t0 = Clock::now();
            const CellId anchor = select_anchor(t, ap);
            const PatchSolution patch = solve_patch(assemble_patch(t, anchor));
            r.assemble_solve_ms = ms_since(t0);
            r.anchor = anchor;
            r.residual_norm = patch.residual_norm;

            const FrontierPolicy fp = frontier_for(policies, seed);
            Reconstruction rec;
            r.propagate_ms = std::numeric_limits<double>::infinity();
            for (int rep = 0; rep < std::max(1, policies.timing_repeats); ++rep) {
                t0 = Clock::now();
                rec = reconstruct_all(t, patch, fp, policies.merge);
                r.propagate_ms = std::min(r.propagate_ms, ms_since(t0));
            }
            r.depth = rec.trace.depth;
            r.generators = std::move(rec.generators);
            break;
        }
        case Method::brute: {
            t0 = Clock::now();
            const auto entries = brute_force_all(t);
            r.assemble_solve_ms = ms_since(t0);
            r.generators.resize(entries.size());
            for (const auto& e : entries) {
                r.generators[e.cell] = e.generator;
                if (e.solved)
                    r.residual_norm = std::max(r.residual_norm, e.residual);
            }
            break;
        }
        case Method::cprime: {
            t0 = Clock::now();
            r.generators = c_prime_all(t);
            r.assemble_solve_ms = ms_since(t0);
            break;
        }
        }

        const auto err = cell_errors(r.generators, built.truth.generators);
        r.rmse = rmse(err);
        r.max_rse = err.empty() ? 0.0 : *std::max_element(err.begin(), err.end());
    } catch (const std::exception& e) {
        throw std::runtime_error("simulation n=" + std::to_string(n) + " seed=" + std::to_string(seed) +
                                 " method=" + to_string(method) + ": " + e.what());
    }
    return r;
}

CampaignSummary summarize(std::size_t n, Method method, std::vector<SimResult> rows, std::vector<SimFailure> failures)
{
    CampaignSummary s;
    s.n = n;
    s.method = method;
    s.nsim = rows.size() + failures.size();
    double sum_rmse = 0.0, max_rse = 0.0, sum_depth = 0.0, sum_prop = 0.0;
    for (const SimResult& r : rows) {
        sum_rmse += r.rmse;
        max_rse = std::max(max_rse, r.max_rse);
        sum_depth += static_cast<double>(r.depth);
        sum_prop += r.propagate_ms;
    }
    const double m = static_cast<double>(rows.size());
    if (rows.empty()) {
        s.log10_mean_rmse = s.log10_max_rse = std::numeric_limits<double>::quiet_NaN();
    } else {
        s.log10_mean_rmse = std::log10(sum_rmse / m);
        s.log10_max_rse = std::log10(max_rse);
        s.mean_depth = sum_depth / m;
        s.mean_propagate_ms = sum_prop / m;
    }
    s.rows = std::move(rows);
    s.failures = std::move(failures);
    return s;
}

std::vector<CampaignSummary> run_campaign(const CampaignConfig& config)
{
    if (config.nsim < 1)
        throw std::invalid_argument("campaign needs nsim >= 1");
    struct Job {
        std::size_t n;
        Method method;
        std::size_t index;
    };
    std::vector<Job> jobs;
    for (std::size_t n : config.ns)
        for (Method m : config.methods)
            for (std::size_t i = 0; i < config.nsim; ++i)
                jobs.push_back({n, m, i});

    struct Outcome {
        std::optional<SimResult> result;
        std::string error;
    };
    std::vector<Outcome> outcomes(jobs.size());
    std::atomic<std::size_t> cursor{0};
    auto worker = [&] {
        for (std::size_t j = cursor++; j < jobs.size(); j = cursor++) {
            const Job& job = jobs[j];
            const std::uint64_t seed = simulation_seed(config.master_seed, job.n, job.index);
            try {
                outcomes[j].result = run_simulation(job.n, seed, job.method, config.policies);
                outcomes[j].result->generators.clear();
                outcomes[j].result->generators.shrink_to_fit();
            } catch (const std::exception& e) {
                outcomes[j].error = e.what();
            }
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, std::min(config.workers, jobs.size()));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }

    std::vector<CampaignSummary> out;
    std::size_t j = 0;
    for (std::size_t n : config.ns)
        for (Method m : config.methods) {
            std::vector<SimResult> rows;
            std::vector<SimFailure> failures;
            for (std::size_t i = 0; i < config.nsim; ++i, ++j) {
                if (outcomes[j].result)
                    rows.push_back(std::move(*outcomes[j].result));
                else
                    failures.push_back({simulation_seed(config.master_seed, n, i), outcomes[j].error});
            }
            out.push_back(summarize(n, m, std::move(rows), std::move(failures)));
        }
    return out;
}

std::string format_6g(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

void export_csv(const std::vector<CampaignSummary>& summaries, const std::filesystem::path& path, bool append,
                bool with_timing)
{
    const bool has_content = append && std::filesystem::exists(path) && std::filesystem::file_size(path) > 0;
    std::ofstream out(path, std::ios::binary | (append ? std::ios::app : std::ios::trunc));
    if (!out)
        throw IoError("cannot write " + path.string());
    if (!has_content)
        out << kCsvHeader << '\n';
    for (const CampaignSummary& s : summaries) {
        out << s.n << ',' << s.nsim << ',' << to_string(s.method) << ',' << format_6g(s.log10_mean_rmse) << ','
            << format_6g(s.log10_max_rse) << ',' << format_6g(s.mean_depth) << ','
            << (with_timing ? format_6g(s.mean_propagate_ms) : std::string()) << '\n';
    }
    if (!out)
        throw IoError("write failed for " + path.string());
}

void export_detail_csv(const std::vector<CampaignSummary>& summaries, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << "n,seed,method,rmse,max_rse,depth,residual_norm\n";
    for (const CampaignSummary& s : summaries)
        for (const SimResult& r : s.rows)
            out << r.n << ',' << r.seed << ',' << to_string(r.method) << ',' << format_6g(r.rmse) << ','
                << format_6g(r.max_rse) << ',' << r.depth << ',' << format_6g(r.residual_norm) << '\n';
    if (!out)
        throw IoError("write failed for " + path.string());
}

} // namespace invoronoi
