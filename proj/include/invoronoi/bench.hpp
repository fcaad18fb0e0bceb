#pragma once

// Monte Carlo campaigns: sample -> build -> reconstruct -> measure.

#include "invoronoi/anchor.hpp"
#include "invoronoi/propagate.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace invoronoi {

enum class Method { anchor, brute, cprime };

std::string to_string(Method m);
/// Parses "anchor" | "brute" | "cprime"; throws std::invalid_argument otherwise.
Method parse_method(const std::string& s);

enum class AnchorPolicyKind { best_score, random_eligible };

struct SimPolicies {
    AnchorPolicyKind anchor = AnchorPolicyKind::random_eligible;
    enum class Frontier { first, random, longest } frontier = Frontier::random;
    MergePolicy merge = MergePolicy::first_wins;
    /// Propagation is re-run this many times and the fastest run is reported.
    int timing_repeats = 1;
};

struct SimResult {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    Method method = Method::anchor;
    double rmse = 0.0;
    double max_rse = 0.0;
    std::size_t depth = 0;
    double build_ms = 0.0;
    double assemble_solve_ms = 0.0;
    double propagate_ms = 0.0;
    double residual_norm = 0.0;
    std::optional<CellId> anchor;
    std::vector<Point2> generators; ///< recovered, by CellId
};

/// Per-cell reconstruction errors ||g_hat - g||.
std::vector<double> cell_errors(const std::vector<Point2>& recovered, const std::vector<Point2>& truth);
/// sqrt(mean squared error) over all cells.
double rmse(const std::vector<double>& errors);

/// Full pipeline for one seeded tessellation. Throws std::invalid_argument for n < 10;
/// sub-module failures are rethrown as std::runtime_error naming (n, seed, method).
SimResult run_simulation(std::size_t n, std::uint64_t seed, Method method, const SimPolicies& policies = {});

/// Counter-based per-simulation seed, so any simulation can be replayed alone.
std::uint64_t simulation_seed(std::uint64_t master, std::size_t n, std::size_t index);

struct SimFailure {
    std::uint64_t seed;
    std::string message;
};

struct CampaignSummary {
    std::size_t n = 0;
    std::size_t nsim = 0;
    Method method = Method::anchor;
    double log10_mean_rmse = 0.0;
    double log10_max_rse = 0.0;
    double mean_depth = 0.0;
    double mean_propagate_ms = 0.0;
    std::vector<SimResult> rows; ///< successful sims, in seed-index order
    std::vector<SimFailure> failures;
};

struct CampaignConfig {
    std::vector<std::size_t> ns;
    std::size_t nsim = 1;
    std::vector<Method> methods{Method::anchor};
    SimPolicies policies;
    std::size_t workers = 1;
    std::uint64_t master_seed = 1;
};

/// One summary per (n, method), ordered by n then method. Results do not depend on `workers`.
std::vector<CampaignSummary> run_campaign(const CampaignConfig& config);

/// Aggregates successful rows (and keeps failures) into one summary.
CampaignSummary summarize(std::size_t n, Method method, std::vector<SimResult> rows, std::vector<SimFailure> failures);

inline constexpr const char* kCsvHeader = "n,nsim,method,log10_mean_rmse,log10_max_rse,mean_depth,mean_propagate_ms";

/// Writes one row per summary. With `append`, the header is skipped if the file already
/// has content. `mean_propagate_ms` stays empty unless `with_timing`.
void export_csv(const std::vector<CampaignSummary>& summaries, const std::filesystem::path& path, bool append = false,
                bool with_timing = false);
/// One row per simulation: n,seed,method,rmse,max_rse,depth,residual_norm.
void export_detail_csv(const std::vector<CampaignSummary>& summaries, const std::filesystem::path& path);

/// "%.6g".
std::string format_6g(double v);

} // namespace invoronoi
