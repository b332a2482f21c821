#include "slabeling/core.hpp"

#include "slabeling/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace slabeling {

namespace {

// relative slack applied to candidate-generation radii; the exact predicates
// (rad, slab membership, hull distance) decide afterwards
constexpr double kQuerySlack = 1.0 + 1e-12;

struct AnchorOutput {
  std::vector<int> tuples;  // flat, stride d+1
  bool cap_hit = false;
};

// Enumerates the (d)-subsets of `neighbors` lexicographically and emits the
// co-detected tuples anchored at `anchor`.
class AnchorScanner {
 public:
  AnchorScanner(const Matrix& points, const GridIndex& index, const DimParams& params, int d,
                long cap)
      : points_(points),
        index_(index),
        params_(params),
        d_(d),
        cap_(cap),
        vertices_(points.rows(), d + 1),
        diffs_(points.rows(), d),
        count_radius_(std::hypot(params.h_par, params.h_perp) * kQuerySlack),
        pair_radius2_(4.0 * params.r * params.r * kQuerySlack) {}

  AnchorOutput scan(int anchor, const std::vector<int>& neighbors) {
    AnchorOutput out;
    chosen_.assign(static_cast<size_t>(d_), 0);
    vertices_.col(0) = points_.col(anchor);
    if (static_cast<long>(neighbors.size()) < d_) return out;
    descend(anchor, neighbors, 0, 0, out);
    return out;
  }

 private:
  void descend(int anchor, const std::vector<int>& nbrs, int level, size_t start,
               AnchorOutput& out) {
    if (out.cap_hit) return;
    if (level == d_) {
      try_tuple(anchor, out);
      return;
    }
    for (size_t i = start; i + (static_cast<size_t>(d_) - level - 1) < nbrs.size(); ++i) {
      const int cand = nbrs[i];
      bool ok = true;
      for (int l = 0; l < level; ++l) {
        if ((points_.col(cand) - points_.col(chosen_[static_cast<size_t>(l)])).squaredNorm() >
            pair_radius2_) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      chosen_[static_cast<size_t>(level)] = cand;
      vertices_.col(level + 1) = points_.col(cand);
      descend(anchor, nbrs, level + 1, i + 1, out);
      if (out.cap_hit) return;
    }
  }

  void try_tuple(int anchor, AnchorOutput& out) {
    if (min_enclosing_ball_radius(vertices_) > params_.r) return;
    for (int j = 0; j < d_; ++j) diffs_.col(j) = vertices_.col(j + 1) - vertices_.col(0);
    const auto span = orthonormalize(diffs_);
    if (!span) return;  // degenerate tuple, skipped
    const Vector barycenter = vertices_.rowwise().mean();

    int hits = 0;
    index_.for_each_in_ball(barycenter, count_radius_, [&](int idx) {
      if (slab_contains(span->basis, barycenter, params_.h_par, params_.h_perp,
                        points_.col(idx), ws_))
        if (++hits >= params_.n_min) return false;
      return true;
    });
    if (hits < params_.n_min) return;

    out.tuples.push_back(anchor);
    out.tuples.insert(out.tuples.end(), chosen_.begin(), chosen_.end());
    if (cap_ >= 0 && static_cast<long>(out.tuples.size()) / (d_ + 1) >= cap_) out.cap_hit = true;
  }

  const Matrix& points_;
  const GridIndex& index_;
  const DimParams& params_;
  const int d_;
  const long cap_;
  Matrix vertices_, diffs_;
  std::vector<int> chosen_;
  SlabWorkspace ws_;
  const double count_radius_;
  const double pair_radius2_;
};

}  // namespace

std::pair<std::vector<int>, std::vector<int>> codetect_dimension(
    const Matrix& points, const std::vector<int>& active, int d, const DimParams& params,
    const GridIndex& index, const RunOptions& options, bool* cap_hit) {
  const long n_anchors = static_cast<long>(active.size());
  std::vector<AnchorOutput> per_anchor(static_cast<size_t>(n_anchors));

  parallel_for(n_anchors, options.threads, [&](long a) {
    const int anchor = active[static_cast<size_t>(a)];
    AnchorScanner scanner(points, index, params, d, options.max_tuples_per_anchor);
    std::vector<int> nbrs =
        index.neighbors_within(points.col(anchor), 2.0 * params.r * kQuerySlack);
    // keep strictly larger indices: every tuple is generated exactly once,
    // anchored at its smallest index
    nbrs.erase(std::remove_if(nbrs.begin(), nbrs.end(), [&](int i) { return i <= anchor; }),
               nbrs.end());
    per_anchor[static_cast<size_t>(a)] = scanner.scan(anchor, nbrs);
  });

  std::vector<int> tuples;
  std::vector<char> in_layer(static_cast<size_t>(points.cols()), 0);
  bool hit = false;
  for (const AnchorOutput& out : per_anchor) {
    tuples.insert(tuples.end(), out.tuples.begin(), out.tuples.end());
    for (int idx : out.tuples) in_layer[static_cast<size_t>(idx)] = 1;
    hit = hit || out.cap_hit;
  }
  if (cap_hit) *cap_hit = hit;

  std::vector<int> labeled;
  for (int idx : active)
    if (in_layer[static_cast<size_t>(idx)]) labeled.push_back(idx);
  return {std::move(tuples), std::move(labeled)};
}

std::vector<int> prune_pass(const Matrix& points, const std::vector<int>& unlabeled,
                            const std::vector<int>& tuples_flat, int d, double delta,
                            int threads) {
  if (tuples_flat.empty() || unlabeled.empty()) return {};
  const int stride = d + 1;
  const long n_tuples = static_cast<long>(tuples_flat.size()) / stride;

  Matrix barycenters(points.rows(), n_tuples);
  std::vector<double> radius(static_cast<size_t>(n_tuples));
  double max_radius = 0.0;
  for (long t = 0; t < n_tuples; ++t) {
    Vector bc = Vector::Zero(points.rows());
    for (int j = 0; j < stride; ++j) bc += points.col(tuples_flat[t * stride + j]);
    bc /= stride;
    double rad = 0.0;
    for (int j = 0; j < stride; ++j)
      rad = std::max(rad, (points.col(tuples_flat[t * stride + j]) - bc).norm());
    barycenters.col(t) = bc;
    radius[static_cast<size_t>(t)] = rad;
    max_radius = std::max(max_radius, rad);
  }
  const GridIndex bc_index(barycenters, std::max(delta + max_radius, 1e-300));
  const double query_radius = (delta + max_radius) * kQuerySlack;

  std::vector<char> keep(unlabeled.size(), 0);
  parallel_for(static_cast<long>(unlabeled.size()), threads, [&](long zi) {
    const Vector z = points.col(unlabeled[static_cast<size_t>(zi)]);
    Matrix verts(points.rows(), stride);
    bool hit = false;
    bc_index.for_each_in_ball(z, query_radius, [&](int t) {
      // a hull within delta has its barycenter within delta + radius of z
      if ((z - barycenters.col(t)).norm() > delta + radius[static_cast<size_t>(t)] + 1e-12)
        return true;
      for (int j = 0; j < stride; ++j) verts.col(j) = points.col(tuples_flat[t * stride + j]);
      if (dist_to_simplex(z, verts) <= delta) {
        hit = true;
        return false;
      }
      return true;
    });
    keep[static_cast<size_t>(zi)] = hit ? 1 : 0;
  });

  std::vector<int> pruned;
  for (size_t i = 0; i < unlabeled.size(); ++i)
    if (keep[i]) pruned.push_back(unlabeled[i]);
  return pruned;
}

std::vector<int> StratificationResult::dims() const {
  std::vector<int> out;
  out.reserve(layers.size());
  for (const LayerDetection& l : layers) out.push_back(l.dim);
  return out;
}

std::vector<int> StratificationResult::point_layer(long n) const {
  std::vector<int> owner(static_cast<size_t>(n), 0);
  for (size_t k = 0; k < layers.size(); ++k)
    for (int idx : layers[k].labeled) owner[static_cast<size_t>(idx)] = static_cast<int>(k) + 1;
  return owner;
}

void StratificationResult::check_partition(long n) const {
  std::vector<char> seen(static_cast<size_t>(n), 0);
  long covered = 0;
  auto mark = [&](int idx) {
    if (idx < 0 || idx >= n || seen[static_cast<size_t>(idx)])
      throw std::logic_error("StratificationResult: labeled sets do not partition the cloud");
    seen[static_cast<size_t>(idx)] = 1;
    ++covered;
  };
  int prev_dim = 0;
  for (const LayerDetection& layer : layers) {
    if (layer.dim <= prev_dim)
      throw std::logic_error("StratificationResult: layer dims not strictly increasing");
    prev_dim = layer.dim;
    if (layer.tuples.empty())
      throw std::logic_error("StratificationResult: reported layer without tuples");
    for (int idx : layer.labeled) mark(idx);
    std::vector<char> in_layer(static_cast<size_t>(n), 0);
    for (int idx : layer.labeled) in_layer[static_cast<size_t>(idx)] = 1;
    for (int idx : layer.tuples)
      if (!in_layer[static_cast<size_t>(idx)])
        throw std::logic_error("StratificationResult: tuple vertex outside labeled set");
    for (int idx : layer.pruned)
      if (!in_layer[static_cast<size_t>(idx)])
        throw std::logic_error("StratificationResult: pruned point outside labeled set");
  }
  for (int idx : residual) mark(idx);
  if (covered != n) throw std::logic_error("StratificationResult: indices missing from partition");
  if (k_hat != static_cast<int>(layers.size()))
    throw std::logic_error("StratificationResult: k_hat mismatch");
}

StratificationResult run(const Matrix& points, const ParamSchedule& sched,
                         const RunOptions& options) {
  if (points.cols() == 0) throw std::invalid_argument("run: empty cloud");
  sched.validate();
  if (sched.d_max > points.rows() - 1)
    throw InvalidDims("run: schedule d_max exceeds D-1");
  const auto t0 = std::chrono::steady_clock::now();

  StratificationResult result;
  result.params_used = sched;
  result.metadata.threads = resolve_threads(options.threads);
  result.metadata.max_tuples_per_anchor = options.max_tuples_per_anchor;
  result.metadata.cloud_seed = options.cloud_seed;

  std::vector<int> active(static_cast<size_t>(points.cols()));
  for (size_t i = 0; i < active.size(); ++i) active[i] = static_cast<int>(i);

  for (int d = 1; d <= sched.d_max && !active.empty(); ++d) {
    const DimParams& params = sched.at(d);
    const GridIndex index(points, params.r, active);
    bool cap_hit = false;
    auto [tuples, labeled] =
        codetect_dimension(points, active, d, params, index, options, &cap_hit);
    result.metadata.cap_hit = result.metadata.cap_hit || cap_hit;

    std::vector<int> unlabeled;
    std::set_difference(active.begin(), active.end(), labeled.begin(), labeled.end(),
                        std::back_inserter(unlabeled));
    std::vector<int> pruned =
        prune_pass(points, unlabeled, tuples, d, params.delta, options.threads);

    if (labeled.empty() && pruned.empty()) continue;
    LayerDetection layer;
    layer.dim = d;
    layer.tuples = std::move(tuples);
    layer.pruned = std::move(pruned);
    std::merge(labeled.begin(), labeled.end(), layer.pruned.begin(), layer.pruned.end(),
               std::back_inserter(layer.labeled));

    std::vector<int> remaining;
    std::set_difference(active.begin(), active.end(), layer.labeled.begin(),
                        layer.labeled.end(), std::back_inserter(remaining));
    active = std::move(remaining);
    result.layers.push_back(std::move(layer));
  }

  result.residual = std::move(active);
  result.k_hat = static_cast<int>(result.layers.size());
  result.metadata.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  result.check_partition(points.cols());
  return result;
}

}  // namespace slabeling
