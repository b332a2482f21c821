#include "slabeling/core.hpp"

#include "common/test_support.hpp"
#include "oracle/oracle.hpp"
#include "slabeling/samplers.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace slabeling;

namespace {

ScheduleOverrides fixed_overrides(double h1, int n_min, std::optional<double> h2 = {}) {
  ScheduleOverrides ov;
  ov.h_par[1] = h1;
  ov.n_min[1] = n_min;
  if (h2) {
    ov.h_par[2] = *h2;
    ov.n_min[2] = n_min;
  }
  return ov;
}

bool same_result(const StratificationResult& a, const StratificationResult& b) {
  if (a.k_hat != b.k_hat || a.residual != b.residual || a.layers.size() != b.layers.size())
    return false;
  for (size_t i = 0; i < a.layers.size(); ++i) {
    const auto& la = a.layers[i];
    const auto& lb = b.layers[i];
    if (la.dim != lb.dim || la.tuples != lb.tuples || la.labeled != lb.labeled ||
        la.pruned != lb.pruned)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("core: segment cloud is recovered as one 1-d layer") {
  const PointCloud cloud = generate_scene(scene_preset("segment"), 30, 0);
  // spacing 1/29; make the slab wide enough to hold n_min points
  ScheduleOverrides ov = fixed_overrides(0.2, 4);
  ov.d_max = 1;
  const ParamSchedule sched = practical_schedule(30, 2, ov);
  const StratificationResult res = run(cloud.points, sched);

  CHECK(res.k_hat == 1);
  CHECK(res.dims() == std::vector<int>{1});
  CHECK(res.layers[0].labeled.size() == 30);
  CHECK(res.residual.empty());

  // brute-force enumeration agrees exactly
  CHECK(same_result(res, oracle::brute_force_run(cloud.points, sched)));
}

TEST_CASE("core: too few points for the count threshold") {
  CounterRng rng(2, 0);
  const Matrix pts = testing::random_gaussian(rng, 2, 5);
  ScheduleOverrides ov = fixed_overrides(10.0, 6);  // n_min exceeds the cloud size
  ov.d_max = 1;
  const StratificationResult res = run(pts, practical_schedule(5, 2, ov));
  CHECK(res.k_hat == 0);
  CHECK(res.residual.size() == 5);
}

TEST_CASE("core: a pair co-detects itself") {
  Matrix pts(2, 2);
  pts.col(0) = Vector{{0.0, 0.0}};
  pts.col(1) = Vector{{1.0, 0.0}};
  ScheduleOverrides ov = fixed_overrides(5.0, 2);  // huge slab, threshold 2
  ov.d_max = 1;
  const StratificationResult res = run(pts, practical_schedule(10, 2, ov));
  CHECK(res.k_hat == 1);
  CHECK(res.dims() == std::vector<int>{1});
  CHECK(res.layers[0].labeled == std::vector<int>{0, 1});
}

TEST_CASE("core: codetect unit cases") {
  // three collinear points: only the outer pair's slab holds all three
  Matrix pts(2, 3);
  pts.col(0) = Vector{{0.0, 0.0}};
  pts.col(1) = Vector{{0.5, 0.0}};
  pts.col(2) = Vector{{1.0, 0.0}};
  DimParams params;
  params.h_par = 0.6;
  params.h_perp = 0.36;
  params.r = 0.6;
  params.n_min = 3;
  params.delta = 0.36;
  params.kappa = 1.0;

  std::vector<int> active = {0, 1, 2};
  const GridIndex index(pts, params.r, active);
  const auto [tuples, labeled] = codetect_dimension(pts, active, 1, params, index, {});
  CHECK(tuples == std::vector<int>{0, 2});
  CHECK(labeled == std::vector<int>{0, 2});

  // the midpoint joins through the pruning pass
  const auto pruned = prune_pass(pts, {1}, tuples, 1, params.delta);
  CHECK(pruned == std::vector<int>{1});

  // clusters farther than 2 r never mix
  Matrix split(2, 4);
  split.col(0) = Vector{{0.0, 0.0}};
  split.col(1) = Vector{{0.1, 0.0}};
  split.col(2) = Vector{{10.0, 0.0}};
  split.col(3) = Vector{{10.1, 0.0}};
  DimParams sp = params;
  sp.n_min = 2;
  std::vector<int> all = {0, 1, 2, 3};
  const GridIndex index2(split, sp.r, all);
  const auto [tuples2, labeled2] = codetect_dimension(split, all, 1, sp, index2, {});
  REQUIRE(tuples2.size() == 4);
  CHECK(tuples2 == std::vector<int>{0, 1, 2, 3});  // pairs (0,1) and (2,3) only

  // fewer than d+1 active points
  const GridIndex index3(split, sp.r, {0});
  CHECK(codetect_dimension(split, {0}, 1, sp, index3, {}).first.empty());
}

TEST_CASE("core: prune pass unit cases") {
  Matrix pts(2, 4);
  pts.col(0) = Vector{{0.0, 0.0}};
  pts.col(1) = Vector{{1.0, 0.0}};
  pts.col(2) = Vector{{0.5, 0.05}};
  pts.col(3) = Vector{{0.5, 0.2}};
  const std::vector<int> tuples = {0, 1};

  CHECK(prune_pass(pts, {2, 3}, tuples, 1, 0.1) == std::vector<int>{2});
  CHECK(prune_pass(pts, {2, 3}, {}, 1, 0.1).empty());
  // a point coinciding with a hull vertex joins for any delta
  Matrix with_dup = pts;
  with_dup.col(3) = pts.col(0);
  CHECK(prune_pass(with_dup, {3}, tuples, 1, 1e-300) == std::vector<int>{3});
  // distance exactly 1.5 delta stays out
  CHECK(prune_pass(pts, {3}, tuples, 1, 0.2 / 1.5).empty());
}

TEST_CASE("core: determinism across threads and shuffles") {
  const Scene scene = scene_preset("circle_sphere");
  const PointCloud cloud = generate_scene(scene, 260, 17);
  ScheduleOverrides ov = fixed_overrides(0.45, 8, 0.8);
  ov.d_max = 2;
  const ParamSchedule sched = practical_schedule(260, 3, ov);

  RunOptions opt1, opt2, opt8;
  opt1.threads = 1;
  opt2.threads = 2;
  opt8.threads = 8;
  const StratificationResult r1 = run(cloud.points, sched, opt1);
  const StratificationResult r2 = run(cloud.points, sched, opt2);
  const StratificationResult r8 = run(cloud.points, sched, opt8);
  CHECK(same_result(r1, r2));
  CHECK(same_result(r1, r8));

  // shuffled input, canonicalized back through the permutation
  CounterRng rng(99, 0);
  std::vector<int> perm(static_cast<size_t>(cloud.size()));
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  for (size_t i = perm.size(); i > 1; --i)
    std::swap(perm[i - 1], perm[rng.next_u64() % i]);
  Matrix shuffled(cloud.points.rows(), cloud.points.cols());
  for (size_t i = 0; i < perm.size(); ++i)
    shuffled.col(perm[i]) = cloud.points.col(static_cast<int>(i));
  const StratificationResult rs = run(shuffled, sched, opt2);

  auto canonical_sets = [&](const StratificationResult& r, bool mapped) {
    std::vector<std::vector<int>> sets;
    for (const auto& layer : r.layers) {
      std::vector<int> s;
      for (int idx : layer.labeled) s.push_back(mapped ? idx : perm[static_cast<size_t>(idx)]);
      std::sort(s.begin(), s.end());
      sets.push_back(std::move(s));
    }
    return sets;
  };
  CHECK(canonical_sets(r1, false) == canonical_sets(rs, true));
}

TEST_CASE("core: co-detection soundness on flat data") {
  // points exactly on a 2-flat in R^4: every tuple span aligns with the flat
  CounterRng rng(55, 0);
  const Subspace flat = testing::random_subspace(rng, 4, 2);
  Matrix pts(4, 60);
  for (int i = 0; i < 60; ++i)
    pts.col(i) = flat.basis * (0.5 * testing::random_gaussian(rng, 2, 1).col(0));
  ScheduleOverrides ov;
  ov.d_max = 2;
  ov.h_par[1] = 0.05;  // keep d=1 slabs too thin to trigger
  ov.n_min[1] = 61;
  ov.h_par[2] = 1.0;
  ov.n_min[2] = 10;
  const ParamSchedule sched = practical_schedule(60, 4, ov);
  const StratificationResult res = run(pts, sched);
  REQUIRE(res.k_hat == 1);
  REQUIRE(res.layers[0].dim == 2);
  for (long t = 0; t < res.layers[0].tuple_count(); ++t) {
    const auto tuple = make_simplex_tuple(pts, res.layers[0].tuple_at(t));
    REQUIRE(tuple.has_value());
    CHECK(subspace_angle(tuple->span, flat) <= 1e-9);
  }
}

TEST_CASE("core: oracle equivalence on mixed scenes") {
  for (int scenario = 0; scenario < 3; ++scenario) {
    const Scene scene =
        scene_preset(scenario == 0 ? "circle" : (scenario == 1 ? "circle_sphere" : "figure_eight"));
    const int ambient = scene.specs.front().ambient;
    const long n = 90 + 25 * scenario;
    const PointCloud cloud = generate_scene(scene, n, 100 + scenario);
    ScheduleOverrides ov = fixed_overrides(0.4 + 0.1 * scenario, 6 + scenario);
    if (ambient > 2) {
      ov.h_par[2] = 0.9;
      ov.n_min[2] = 8;
      ov.d_max = 2;
    } else {
      ov.d_max = 1;
    }
    const ParamSchedule sched = practical_schedule(n, ambient, ov);
    const StratificationResult fast = run(cloud.points, sched);
    const StratificationResult brute = oracle::brute_force_run(cloud.points, sched);
    CHECK(same_result(fast, brute));
  }
}

TEST_CASE("core: cap is recorded and keeps lexicographic prefixes") {
  const PointCloud cloud = generate_scene(scene_preset("circle"), 120, 4);
  ScheduleOverrides ov = fixed_overrides(0.5, 5);
  ov.d_max = 1;
  const ParamSchedule sched = practical_schedule(120, 2, ov);

  RunOptions capped;
  capped.max_tuples_per_anchor = 2;
  const StratificationResult with_cap = run(cloud.points, sched, capped);
  const StratificationResult without = run(cloud.points, sched);
  CHECK(with_cap.metadata.cap_hit);
  CHECK_FALSE(without.metadata.cap_hit);
  CHECK(with_cap.layers[0].tuple_count() < without.layers[0].tuple_count());

  // capped tuples per anchor are the lexicographically smallest accepted ones
  std::map<int, std::vector<std::vector<int>>> by_anchor_cap, by_anchor_all;
  for (long t = 0; t < with_cap.layers[0].tuple_count(); ++t) {
    auto ids = with_cap.layers[0].tuple_at(t);
    by_anchor_cap[ids[0]].push_back(ids);
  }
  for (long t = 0; t < without.layers[0].tuple_count(); ++t) {
    auto ids = without.layers[0].tuple_at(t);
    by_anchor_all[ids[0]].push_back(ids);
  }
  for (const auto& [anchor, capped_tuples] : by_anchor_cap) {
    CHECK(capped_tuples.size() <= 2);
    const auto& all = by_anchor_all[anchor];
    REQUIRE(all.size() >= capped_tuples.size());
    for (size_t i = 0; i < capped_tuples.size(); ++i) CHECK(capped_tuples[i] == all[i]);
  }
}

TEST_CASE("core: brute force guard") {
  const Matrix pts = Matrix::Random(2, 501);
  CHECK_THROWS_AS(oracle::brute_force_run(pts, practical_schedule(501, 2)),
                  oracle::TooLarge);
}

TEST_CASE("core: result schema checks") {
  const PointCloud cloud = generate_scene(scene_preset("circle"), 80, 9);
  ScheduleOverrides ov = fixed_overrides(0.5, 5);
  ov.d_max = 1;
  const StratificationResult res = run(cloud.points, practical_schedule(80, 2, ov));
  CHECK_NOTHROW(res.check_partition(80));
  const auto owners = res.point_layer(80);
  for (int idx : res.residual) CHECK(owners[static_cast<size_t>(idx)] == 0);
  for (int idx : res.layers[0].labeled) CHECK(owners[static_cast<size_t>(idx)] == 1);
}
