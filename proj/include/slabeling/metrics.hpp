#pragma once

#include "slabeling/core.hpp"
#include "slabeling/grid_index.hpp"
#include "slabeling/samplers.hpp"

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace slabeling {

struct EmptyLayer : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct MissingLabels : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Piecewise-linear layer reconstruction: the union of co-detected convex
/// hulls, with exact distance queries accelerated by a barycenter grid.
class HullComplex {
 public:
  HullComplex(const Matrix& points, const LayerDetection& layer);

  int dim() const { return dim_; }
  long simplex_count() const { return static_cast<long>(radius_.size()); }
  const Matrix& vertices_of(long t) const { return verts_[static_cast<size_t>(t)]; }
  const Subspace& span_of(long t) const { return spans_[static_cast<size_t>(t)]; }

  /// Exact min over simplices of dist_to_simplex(p, simplex).
  double distance(const Eigen::Ref<const Vector>& p) const;

  /// Simplex ids whose hull meets the closed ball B(p, r).
  std::vector<long> simplices_within(const Eigen::Ref<const Vector>& p, double r) const;

  /// Streams a barycentric lattice on every simplex with point spacing
  /// <= spacing; fn(simplex_id, point).
  template <typename Fn>
  void for_each_sample(double spacing, Fn&& fn) const {
    Vector point(barycenters_.rows());
    std::vector<int> comp;
    for (long t = 0; t < simplex_count(); ++t) {
      const Matrix& v = verts_[static_cast<size_t>(t)];
      double max_edge = 0.0;
      for (int i = 0; i < v.cols(); ++i)
        for (int j = i + 1; j < v.cols(); ++j)
          max_edge = std::max(max_edge, (v.col(i) - v.col(j)).norm());
      const int m = std::max(1, static_cast<int>(std::ceil(max_edge / spacing)));
      comp.assign(static_cast<size_t>(v.cols()), 0);
      comp[0] = m;
      for (;;) {  // compositions of m into v.cols() parts
        point.setZero();
        for (int i = 0; i < v.cols(); ++i)
          if (comp[static_cast<size_t>(i)] > 0)
            point += (double(comp[static_cast<size_t>(i)]) / m) * v.col(i);
        fn(t, point);
        int i = 0;
        while (i + 1 < v.cols() && comp[static_cast<size_t>(i)] == 0) ++i;
        if (i + 1 >= v.cols()) break;
        const int take = comp[static_cast<size_t>(i)];
        comp[static_cast<size_t>(i)] = 0;
        comp[0] = take - 1;
        ++comp[static_cast<size_t>(i) + 1];
      }
    }
  }

 private:
  int dim_;
  std::vector<Matrix> verts_;
  std::vector<Subspace> spans_;
  Matrix barycenters_;
  std::vector<double> radius_;
  double max_radius_ = 0.0;
  double bbox_diameter_ = 0.0;
  std::unique_ptr<GridIndex> index_;
};

/// K_hat and the ascending detected dimensions.
std::pair<int, std::vector<int>> extract_structure(const StratificationResult& res);

HullComplex reconstruct_layer(const Matrix& points, const LayerDetection& layer);

/// Two-sided Hausdorff proxy between the manifold and the complex, certified
/// up to the net resolution: max of (net -> complex) and (simplex samples ->
/// manifold) sup-distances.
double hausdorff_layer_error(const ManifoldSpec& spec, const HullComplex& complex,
                             double resolution, int threads = 0);

/// Per-true-layer symmetric-difference counts over max(N_k, 1). Detected
/// layers are matched to true layers by dimension value; indices listed in
/// truth.ambiguous are excluded on both sides.
std::vector<double> clustering_error(const StratificationResult& res, const PointCloud& truth);

/// Localized tangent loss: max of the two sup-inf angle deviations between
/// the analytic tangents and the complex spans, with tolerance radius delta.
/// Points whose ball B(x, delta) meets no candidate contribute 1.
double tangent_error(const ManifoldSpec& spec, const HullComplex& complex, double delta,
                     double net_resolution, double sample_spacing, int threads = 0);

/// Fraction of points whose assigned dimension d_hat satisfies
/// min{dim_k : dist(X_i | M_k) <= thresholds[k]} <= d_hat <= dim_{Y_i};
/// residual points count as d_hat = d_max + 1.
double dimension_label_check(const StratificationResult& res, const PointCloud& truth,
                             const std::vector<double>& thresholds);

/// One evaluated layer, as reported by the CLI.
struct LayerEvaluation {
  int layer = 0;  // true layer index k (1-based)
  int dim = 0;
  bool dims_correct = false;
  double hausdorff_error = std::numeric_limits<double>::quiet_NaN();
  double clustering_err = 0.0;
  double tangent_err = std::numeric_limits<double>::quiet_NaN();
  double delta_used = 0.0;
  double resolution = 0.0;
};

/// Slope of log(median error) against log(n / log n).
struct RateFit {
  int dim = 0;
  std::string loss;
  double slope = 0.0;
  double stderr_ = 0.0;
  int n_points = 0;
};

struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvalRecord {
  long n = 0;
  std::uint64_t seed = 0;
  int layer = 0;
  int dim = 0;
  double hausdorff_error = 0.0;
  double clustering_err = 0.0;
  double tangent_err = 0.0;
  double delta = 0.0;
  double resolution = 0.0;
  double wall_ms = 0.0;
};

/// Least-squares rate fits per (dim, loss); requires >= 4 distinct n with
/// >= 3 seeds each. Losses with nonpositive medians are skipped.
std::vector<RateFit> fit_rate_slopes(const std::vector<EvalRecord>& records);

}  // namespace slabeling
