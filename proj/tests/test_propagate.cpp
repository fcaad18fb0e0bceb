#include "invoronoi/anchor.hpp"
#include "invoronoi/forward.hpp"
#include "invoronoi/propagate.hpp"
#include "invoronoi/solver.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace invoronoi;

namespace {

const std::vector<FrontierPolicy> kFrontiers{FirstAvailable{}, RandomFrontier{7}, LongestRidge{}};
const std::vector<MergePolicy> kMerges{MergePolicy::first_wins, MergePolicy::ridge_length_weighted_mean};

PatchSolution best_patch(const Tessellation& t)
{
    return solve_patch(assemble_patch(t, select_anchor(t, BestScore{})));
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

} // namespace

TEST_CASE("reflect_into: hand examples")
{
    // a single finite ridge on x + y = 3, and one on x + y = 1
    Tessellation t;
    t.vertices = {{3, 0}, {0, 3}, {1, 0}, {0, 1}};
    t.ridges.push_back({{0, 1}, FiniteRidge{0, 1}});
    t.ridges.push_back({{0, 2}, FiniteRidge{2, 3}});
    t.cells = {{{0, 1}, true}, {{0}, false}, {{1}, false}};
    CHECK(distance(reflect_into({1, 1}, 0, t), Point2{2, 2}) < 1e-15);
    CHECK(distance(reflect_into({1, 1}, 1, t), Point2{0, 0}) < 1e-15);

    const auto d = oracle::diamond();
    // the ray below the diamond lies on x = 1
    CHECK(distance(reflect_into({0, 0}, 4, d.t), Point2{2, 0}) < 1e-15);
}

TEST_CASE("diamond: the patch covers every cell")
{
    const auto d = oracle::diamond();
    const Reconstruction rec = reconstruct_all(d.t, solve_patch(assemble_patch(d.t, 0)), FirstAvailable{},
                                               MergePolicy::first_wins);
    CHECK(rec.trace.order.empty());
    CHECK(rec.trace.depth == 0);
    for (CellId c = 0; c < 5; ++c)
        CHECK(distance(rec.generators[c], d.truth.generators[c]) < 1e-10);
}

TEST_CASE("single known generator spreads through the diamond")
{
    const auto d = oracle::diamond();
    const Reconstruction rec = reconstruct_from(d.t, {{1, {0, 0}}}, FirstAvailable{}, MergePolicy::first_wins);
    CHECK(rec.trace.depth == 2);
    CHECK(rec.trace.order.size() == 4);
    for (CellId c = 0; c < 5; ++c)
        CHECK(distance(rec.generators[c], d.truth.generators[c]) < 1e-14);
    // the center and the two corners sharing rays with cell 1 form layer 1
    CHECK(rec.trace.layer_of == std::vector<std::size_t>{1, 0, 1, 1, 2});
}

TEST_CASE("every frontier and merge policy recovers n = 100")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto d = make_tessellation(100, seed);
        const PatchSolution patch = best_patch(d.tessellation);
        for (const auto& fp : kFrontiers)
            for (MergePolicy mp : kMerges) {
                const Reconstruction rec = reconstruct_all(d.tessellation, patch, fp, mp);
                REQUIRE(rec.generators.size() == 100);
                for (CellId c = 0; c < 100; ++c)
                    CHECK(distance(rec.generators[c], d.truth.generators[c]) < 1e-9);
            }
    }
}

TEST_CASE("each cell is resolved exactly once")
{
    const auto d = make_tessellation(400, 9);
    const PatchSolution patch = best_patch(d.tessellation);
    for (const auto& fp : kFrontiers)
        for (MergePolicy mp : kMerges) {
            const Reconstruction rec = reconstruct_all(d.tessellation, patch, fp, mp);
            const PropagationTrace& tr = rec.trace;
            CHECK(tr.order.size() + patch.generators.size() == 400);
            std::vector<int> hits(400, 0);
            for (const auto& [c, g] : patch.generators)
                ++hits[c];
            for (const PropagationStep& s : tr.order) {
                ++hits[s.cell];
                // the source was resolved one layer earlier, across a shared ridge
                CHECK(tr.layer_of[s.source] + 1 == tr.layer_of[s.cell]);
                CHECK(d.tessellation.shared_ridge(s.cell, s.source) == s.ridge);
            }
            CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
            CHECK(tr.reflections <= 2 * d.tessellation.ridges.size());
            if (mp == MergePolicy::first_wins)
                CHECK(tr.reflections <= d.tessellation.ridges.size());
            CHECK(tr.depth == *std::max_element(tr.layer_of.begin(), tr.layer_of.end()));
            CHECK(tr.mean_candidates >= 1.0);
            CHECK(tr.mean_candidates <= static_cast<double>(tr.max_candidates));
        }
}

TEST_CASE("candidate reflections agree: path independence")
{
    for (std::uint64_t seed = 40; seed < 45; ++seed) {
        const auto d = make_tessellation(500, seed);
        const Reconstruction rec =
            reconstruct_all(d.tessellation, best_patch(d.tessellation), FirstAvailable{}, MergePolicy::first_wins);
        CHECK(rec.trace.max_candidates >= 2);
        CHECK(rec.trace.max_candidate_spread < 1e-8);
    }
}

TEST_CASE("merge policies agree on exact input")
{
    const auto d = make_tessellation(500, 77);
    const PatchSolution patch = best_patch(d.tessellation);
    const auto a = reconstruct_all(d.tessellation, patch, FirstAvailable{}, MergePolicy::first_wins);
    const auto b = reconstruct_all(d.tessellation, patch, FirstAvailable{}, MergePolicy::ridge_length_weighted_mean);
    const auto c = reconstruct_all(d.tessellation, patch, LongestRidge{}, MergePolicy::first_wins);
    for (CellId i = 0; i < 500; ++i) {
        CHECK(distance(a.generators[i], b.generators[i]) < 1e-8);
        CHECK(distance(a.generators[i], c.generators[i]) < 1e-8);
    }
}

TEST_CASE("random frontier is reproducible")
{
    const auto d = make_tessellation(300, 3);
    const PatchSolution patch = best_patch(d.tessellation);
    const auto a = reconstruct_all(d.tessellation, patch, RandomFrontier{5}, MergePolicy::first_wins);
    const auto b = reconstruct_all(d.tessellation, patch, RandomFrontier{5}, MergePolicy::first_wins);
    CHECK(a.generators == b.generators);
    REQUIRE(a.trace.order.size() == b.trace.order.size());
    for (std::size_t i = 0; i < a.trace.order.size(); ++i)
        CHECK(a.trace.order[i].source == b.trace.order[i].source);
}

TEST_CASE("disconnected cells are reported")
{
    auto d = oracle::diamond();
    // cut cell 4 loose from everything
    for (RidgeId r : {2u, 5u, 6u})
        for (Cell& c : d.t.cells)
            std::erase(c.ridges, static_cast<RidgeId>(r));
    try {
        reconstruct_from(d.t, {{0, {1, 1}}}, FirstAvailable{}, MergePolicy::first_wins);
        FAIL("expected UnreachableCellsError");
    } catch (const UnreachableCellsError& e) {
        CHECK(e.cells() == std::vector<CellId>{4});
    }
}

TEST_CASE("depth grows like sqrt(n)")
{
    std::vector<double> ratios;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto small = make_tessellation(250, seed);
        const auto large = make_tessellation(1000, seed + 1000);
        const auto ds = reconstruct_all(small.tessellation, best_patch(small.tessellation), FirstAvailable{},
                                        MergePolicy::first_wins)
                            .trace.depth;
        const auto dl = reconstruct_all(large.tessellation, best_patch(large.tessellation), FirstAvailable{},
                                        MergePolicy::first_wins)
                            .trace.depth;
        ratios.push_back(static_cast<double>(dl) / static_cast<double>(ds));
    }
    const double m = median(ratios);
    CAPTURE(m);
    CHECK(m >= 1.5);
    CHECK(m <= 3.0);
}

TEST_CASE("frontier policies agree at n = 2000")
{
    const auto d = make_tessellation(2000, 31);
    const PatchSolution patch = best_patch(d.tessellation);
    const auto a = reconstruct_all(d.tessellation, patch, FirstAvailable{}, MergePolicy::first_wins);
    const auto b = reconstruct_all(d.tessellation, patch, RandomFrontier{2}, MergePolicy::first_wins);
    const auto c = reconstruct_all(d.tessellation, patch, LongestRidge{}, MergePolicy::first_wins);
    double worst = 0.0;
    for (CellId i = 0; i < 2000; ++i)
        worst = std::max({worst, distance(a.generators[i], b.generators[i]), distance(a.generators[i], c.generators[i]),
                          distance(b.generators[i], c.generators[i])});
    CHECK(worst < 1e-8);
}
