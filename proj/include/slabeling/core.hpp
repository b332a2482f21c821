#pragma once

#include "slabeling/geometry.hpp"
#include "slabeling/grid_index.hpp"
#include "slabeling/params.hpp"

#include <cstdint>
#include <vector>

namespace slabeling {

struct RunOptions {
  int threads = 0;  // 0 = hardware concurrency
  // Per-anchor cap on accepted tuples (lexicographically smallest kept);
  // < 0 disables the cap. A binding cap breaks exact oracle equivalence and
  // is recorded in the result metadata.
  long max_tuples_per_anchor = -1;
  std::uint64_t cloud_seed = 0;  // carried into the result metadata
};

/// One detected layer: the co-detected tuple list U^(d) and the labeled set.
struct LayerDetection {
  int dim = 0;
  std::vector<int> tuples;    // flat, stride dim+1, lexicographically sorted
  std::vector<int> labeled;   // ascending; includes the pruned points
  std::vector<int> pruned;    // ascending; subset of labeled

  long tuple_count() const { return static_cast<long>(tuples.size()) / (dim + 1); }
  std::vector<int> tuple_at(long t) const {
    const long s = dim + 1;
    return {tuples.begin() + t * s, tuples.begin() + (t + 1) * s};
  }
};

struct RunMetadata {
  int threads = 1;
  long max_tuples_per_anchor = -1;
  bool cap_hit = false;
  std::uint64_t cloud_seed = 0;
  double wall_ms = 0.0;
};

struct StratificationResult {
  int k_hat = 0;
  std::vector<LayerDetection> layers;  // ascending dim
  std::vector<int> residual;           // ascending; never-labeled indices
  ParamSchedule params_used;
  RunMetadata metadata;

  std::vector<int> dims() const;
  /// 1-based layer position of each point, 0 for residual.
  std::vector<int> point_layer(long n) const;
  void check_partition(long n) const;  // throws on a violated invariant
};

/// Ascending-dimension co-detection with hull pruning over the cloud
/// columns. Deterministic for any thread count; enumeration order is
/// lexicographic on index tuples.
StratificationResult run(const Matrix& points, const ParamSchedule& sched,
                         const RunOptions& options = {});

/// One dimension step: all nondegenerate (d+1)-subsets of `active` with
/// enclosing-ball radius <= r whose slab holds >= n_min active points.
/// Returns the flat tuple list and the ascending union of tuple vertices.
std::pair<std::vector<int>, std::vector<int>> codetect_dimension(
    const Matrix& points, const std::vector<int>& active, int d, const DimParams& params,
    const GridIndex& index, const RunOptions& options, bool* cap_hit = nullptr);

/// Unlabeled actives within closed distance delta of some tuple hull.
std::vector<int> prune_pass(const Matrix& points, const std::vector<int>& unlabeled,
                            const std::vector<int>& tuples_flat, int d, double delta,
                            int threads = 0);

}  // namespace slabeling
