#include "slabeling/metrics.hpp"

#include "slabeling/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace slabeling {

HullComplex::HullComplex(const Matrix& points, const LayerDetection& layer) : dim_(layer.dim) {
  const long count = layer.tuple_count();
  if (count == 0) throw EmptyLayer("HullComplex: layer has no tuples");
  const int stride = layer.dim + 1;
  verts_.reserve(static_cast<size_t>(count));
  spans_.reserve(static_cast<size_t>(count));
  radius_.reserve(static_cast<size_t>(count));
  barycenters_.resize(points.rows(), count);
  for (long t = 0; t < count; ++t) {
    Matrix v(points.rows(), stride);
    for (int j = 0; j < stride; ++j) v.col(j) = points.col(layer.tuples[t * stride + j]);
    Matrix diffs = v.rightCols(stride - 1).colwise() - v.col(0);
    auto span = orthonormalize(diffs);
    if (!span) throw std::logic_error("HullComplex: degenerate recorded tuple");
    const Vector bc = v.rowwise().mean();
    double rad = 0.0;
    for (int j = 0; j < stride; ++j) rad = std::max(rad, (v.col(j) - bc).norm());
    barycenters_.col(t) = bc;
    radius_.push_back(rad);
    max_radius_ = std::max(max_radius_, rad);
    verts_.push_back(std::move(v));
    spans_.push_back(std::move(*span));
  }
  const Vector lo = barycenters_.rowwise().minCoeff();
  const Vector hi = barycenters_.rowwise().maxCoeff();
  bbox_diameter_ = (hi - lo).norm() + 2.0 * max_radius_;
  const double cell = std::max(2.0 * max_radius_, bbox_diameter_ / 64.0);
  index_ = std::make_unique<GridIndex>(barycenters_, std::max(cell, 1e-300));
}

double HullComplex::distance(const Eigen::Ref<const Vector>& p) const {
  double best = std::numeric_limits<double>::infinity();
  // expand the candidate ball until no farther simplex can improve on best
  const double full_radius = bbox_diameter_ + (p - barycenters_.col(0)).norm() + 1.0;
  double r = std::min(full_radius, std::max(max_radius_ + index_->cell_size(), 1e-300));
  for (;;) {
    index_->for_each_in_ball(p, r, [&](int t) {
      const double lower = (p - barycenters_.col(t)).norm() - radius_[static_cast<size_t>(t)];
      if (lower < best)
        best = std::min(best, dist_to_simplex(p, verts_[static_cast<size_t>(t)]));
      return true;
    });
    if (best <= r - max_radius_ || r >= full_radius) return best;
    r = std::min(full_radius, std::max(2.0 * r, best + max_radius_ * 1.0000001));
  }
}

std::vector<long> HullComplex::simplices_within(const Eigen::Ref<const Vector>& p,
                                                double r) const {
  std::vector<long> out;
  index_->for_each_in_ball(p, (r + max_radius_) * (1.0 + 1e-12), [&](int t) {
    if ((p - barycenters_.col(t)).norm() <= r + radius_[static_cast<size_t>(t)] + 1e-12)
      if (dist_to_simplex(p, verts_[static_cast<size_t>(t)]) <= r) out.push_back(t);
    return true;
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<int, std::vector<int>> extract_structure(const StratificationResult& res) {
  return {res.k_hat, res.dims()};
}

HullComplex reconstruct_layer(const Matrix& points, const LayerDetection& layer) {
  return HullComplex(points, layer);
}

double hausdorff_layer_error(const ManifoldSpec& spec, const HullComplex& complex,
                             double resolution, int threads) {
  if (!(resolution > 0)) throw std::invalid_argument("hausdorff_layer_error: resolution <= 0");
  const Matrix net = dense_reference_sample(spec, resolution);

  std::vector<double> sup_net(static_cast<size_t>(net.cols()), 0.0);
  parallel_for(net.cols(), threads, [&](long i) {
    sup_net[static_cast<size_t>(i)] = complex.distance(net.col(i));
  });
  double manifold_to_complex = 0.0;
  for (double v : sup_net) manifold_to_complex = std::max(manifold_to_complex, v);

  double complex_to_manifold = 0.0;
  complex.for_each_sample(resolution, [&](long, const Vector& y) {
    complex_to_manifold = std::max(complex_to_manifold, dist_to_manifold(spec, y));
  });
  return std::max(manifold_to_complex, complex_to_manifold);
}

std::vector<double> clustering_error(const StratificationResult& res, const PointCloud& truth) {
  if (truth.labels.empty()) throw MissingLabels("clustering_error: truth labels required");
  if (truth.specs.empty()) throw MissingLabels("clustering_error: truth specs required");
  const long n = truth.size();
  std::vector<char> skip(static_cast<size_t>(n), 0);
  for (int i : truth.ambiguous) skip[static_cast<size_t>(i)] = 1;

  const int true_layers = static_cast<int>(truth.specs.size());
  std::vector<double> errors(static_cast<size_t>(true_layers), 0.0);
  for (int k = 0; k < true_layers; ++k) {
    const int want_dim = truth.specs[static_cast<size_t>(k)].dim;
    const LayerDetection* detected = nullptr;
    for (const LayerDetection& layer : res.layers)
      if (layer.dim == want_dim) detected = &layer;
    std::vector<char> in_detected(static_cast<size_t>(n), 0);
    if (detected)
      for (int idx : detected->labeled) in_detected[static_cast<size_t>(idx)] = 1;

    long n_k = 0, sym_diff = 0;
    for (long i = 0; i < n; ++i) {
      if (skip[static_cast<size_t>(i)]) continue;
      const bool truly_k = truth.labels[static_cast<size_t>(i)] == k + 1;
      n_k += truly_k ? 1 : 0;
      if (truly_k != (in_detected[static_cast<size_t>(i)] != 0)) ++sym_diff;
    }
    errors[static_cast<size_t>(k)] = double(sym_diff) / double(std::max<long>(n_k, 1));
  }
  return errors;
}

double tangent_error(const ManifoldSpec& spec, const HullComplex& complex, double delta,
                     double net_resolution, double sample_spacing, int threads) {
  if (!(delta > 0)) throw std::invalid_argument("tangent_error: delta <= 0");
  const ReferenceNet net = dense_reference_net(spec, net_resolution);

  // manifold -> complex: candidates are the simplices meeting B(x, delta)
  std::vector<double> one_sided(static_cast<size_t>(net.points.cols()), 1.0);
  parallel_for(net.points.cols(), threads, [&](long i) {
    const auto cands = complex.simplices_within(net.points.col(i), delta);
    double inf = 1.0;
    const Subspace tx{net.tangents[static_cast<size_t>(i)]};
    for (long t : cands) inf = std::min(inf, subspace_angle(tx, complex.span_of(t)));
    one_sided[static_cast<size_t>(i)] = cands.empty() ? 1.0 : inf;
  });
  double m_to_c = 0.0;
  for (double v : one_sided) m_to_c = std::max(m_to_c, v);

  // complex -> manifold: sample each simplex, candidates are net points in
  // B(y, delta) carrying their analytic tangents
  const GridIndex net_index(net.points, std::max(delta, 1e-300));
  double c_to_m = 0.0;
  complex.for_each_sample(sample_spacing, [&](long t, const Vector& y) {
    double inf = 1.0;
    bool any = false;
    net_index.for_each_in_ball(y, delta, [&](int xi) {
      any = true;
      inf = std::min(inf, subspace_angle(complex.span_of(t),
                                         Subspace{net.tangents[static_cast<size_t>(xi)]}));
      return inf > 0.0;  // cannot improve below zero
    });
    c_to_m = std::max(c_to_m, any ? inf : 1.0);
  });

  return std::max(m_to_c, c_to_m);
}

double dimension_label_check(const StratificationResult& res, const PointCloud& truth,
                             const std::vector<double>& thresholds) {
  if (truth.labels.empty()) throw MissingLabels("dimension_label_check: labels required");
  if (truth.specs.empty()) throw MissingLabels("dimension_label_check: specs required");
  if (thresholds.size() != truth.specs.size())
    throw std::invalid_argument("dimension_label_check: one threshold per true layer");
  const long n = truth.size();

  std::vector<int> d_hat(static_cast<size_t>(n), res.params_used.d_max + 1);
  for (const LayerDetection& layer : res.layers)
    for (int idx : layer.labeled) d_hat[static_cast<size_t>(idx)] = layer.dim;

  long pass = 0;
  for (long i = 0; i < n; ++i) {
    int lower = std::numeric_limits<int>::max();
    for (size_t k = 0; k < truth.specs.size(); ++k) {
      if (truth.specs[k].dim >= lower) continue;
      if (dist_to_manifold(truth.specs[k], truth.points.col(i)) <= thresholds[k])
        lower = truth.specs[k].dim;
    }
    const int upper = truth.specs[static_cast<size_t>(truth.labels[static_cast<size_t>(i)] - 1)].dim;
    const int dh = d_hat[static_cast<size_t>(i)];
    if (lower <= dh && dh <= upper) ++pass;
  }
  return double(pass) / double(n);
}

std::vector<RateFit> fit_rate_slopes(const std::vector<EvalRecord>& records) {
  std::set<int> dims;
  for (const EvalRecord& r : records) dims.insert(r.dim);
  if (dims.empty()) throw InsufficientData("fit_rate_slopes: no records");

  std::vector<RateFit> fits;
  for (int dim : dims) {
    std::map<long, long> rows_per_n;
    for (const EvalRecord& r : records)
      if (r.dim == dim) ++rows_per_n[r.n];
    long usable_n = 0;
    for (const auto& [n, count] : rows_per_n)
      if (count >= 3) ++usable_n;
    if (usable_n < 4)
      throw InsufficientData("fit_rate_slopes: need >= 4 distinct n with >= 3 seeds each");

    const std::vector<std::pair<std::string, double EvalRecord::*>> losses = {
        {"hausdorff", &EvalRecord::hausdorff_error},
        {"clustering", &EvalRecord::clustering_err},
        {"tangent", &EvalRecord::tangent_err},
    };
    for (const auto& [name, field] : losses) {
      std::map<long, std::vector<double>> by_n;
      for (const EvalRecord& r : records) {
        if (r.dim != dim) continue;
        const double v = r.*field;
        if (std::isfinite(v)) by_n[r.n].push_back(v);
      }
      std::vector<double> xs, ys;
      for (auto& [n, vals] : by_n) {
        if (vals.size() < 3) continue;
        std::sort(vals.begin(), vals.end());
        const size_t m = vals.size();
        const double median = (m % 2) ? vals[m / 2] : 0.5 * (vals[m / 2 - 1] + vals[m / 2]);
        if (!(median > 0.0)) continue;  // flat-zero losses carry no rate
        xs.push_back(std::log(double(n) / std::log(double(n))));
        ys.push_back(std::log(median));
      }
      if (xs.size() < 2) continue;
      const auto m = static_cast<double>(xs.size());
      double sx = 0, sy = 0;
      for (size_t i = 0; i < xs.size(); ++i) sx += xs[i], sy += ys[i];
      const double mx = sx / m, my = sy / m;
      double sxx = 0, sxy = 0;
      for (size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
      }
      const double slope = sxy / sxx;
      const double intercept = my - slope * mx;
      double sse = 0;
      for (size_t i = 0; i < xs.size(); ++i) {
        const double e = ys[i] - (intercept + slope * xs[i]);
        sse += e * e;
      }
      const double var = (xs.size() > 2) ? sse / (m - 2.0) : 0.0;
      RateFit fit;
      fit.dim = dim;
      fit.loss = name;
      fit.slope = slope;
      fit.stderr_ = std::sqrt(var / sxx);
      fit.n_points = static_cast<int>(xs.size());
      fits.push_back(std::move(fit));
    }
  }
  return fits;
}

}  // namespace slabeling
