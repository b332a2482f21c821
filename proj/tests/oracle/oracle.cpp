#include "oracle.hpp"

#include "slabeling/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace slabeling::oracle {

namespace {

// next (d+1)-combination of {0, .., n-1} in lexicographic order
bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  for (int i = k - 1; i >= 0; --i) {
    if (c[i] < n - (k - i)) {
      ++c[i];
      for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

StratificationResult brute_force_run(const Matrix& points, const ParamSchedule& sched) {
  if (points.cols() > 500) throw TooLarge("brute_force_run: guarded to n <= 500");
  if (points.cols() == 0) throw std::invalid_argument("brute_force_run: empty cloud");
  sched.validate();

  StratificationResult result;
  result.params_used = sched;
  result.metadata.threads = 1;

  std::vector<int> active(static_cast<size_t>(points.cols()));
  for (size_t i = 0; i < active.size(); ++i) active[i] = static_cast<int>(i);

  for (int d = 1; d <= sched.d_max && !active.empty(); ++d) {
    const DimParams& params = sched.at(d);
    const int n_active = static_cast<int>(active.size());

    std::vector<int> tuples;
    std::vector<char> in_layer(static_cast<size_t>(points.cols()), 0);
    if (n_active >= d + 1) {
      std::vector<int> combo(static_cast<size_t>(d) + 1);
      for (int i = 0; i <= d; ++i) combo[static_cast<size_t>(i)] = i;
      do {
        std::vector<int> ids(combo.size());
        for (size_t j = 0; j < combo.size(); ++j) ids[j] = active[static_cast<size_t>(combo[j])];
        Matrix vertices(points.rows(), d + 1);
        for (int j = 0; j <= d; ++j) vertices.col(j) = points.col(ids[static_cast<size_t>(j)]);
        if (min_enclosing_ball_radius(vertices) > params.r) continue;
        auto tuple = make_simplex_tuple(points, ids);
        if (!tuple) continue;  // degenerate, skipped
        const Slab slab = tuple_slab(*tuple, params.h_par, params.h_perp);
        int hits = 0;
        for (int idx : active)
          if (slab.contains(points.col(idx))) ++hits;
        if (hits < params.n_min) continue;
        tuples.insert(tuples.end(), ids.begin(), ids.end());
        for (int idx : ids) in_layer[static_cast<size_t>(idx)] = 1;
      } while (next_combination(combo, n_active));
    }

    std::vector<int> labeled;
    for (int idx : active)
      if (in_layer[static_cast<size_t>(idx)]) labeled.push_back(idx);

    std::vector<int> pruned;
    if (!tuples.empty()) {
      const long n_tuples = static_cast<long>(tuples.size()) / (d + 1);
      for (int z : active) {
        if (in_layer[static_cast<size_t>(z)]) continue;
        for (long t = 0; t < n_tuples; ++t) {
          Matrix verts(points.rows(), d + 1);
          for (int j = 0; j <= d; ++j) verts.col(j) = points.col(tuples[t * (d + 1) + j]);
          if (dist_to_simplex(points.col(z), verts) <= params.delta) {
            pruned.push_back(z);
            break;
          }
        }
      }
    }

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
  result.check_partition(points.cols());
  return result;
}

double unit_ball_volume(int d) {
  return std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
}

MonteCarloEstimate mc_section_volume(const Subspace& t, const Subspace& t2, double h_par,
                                     double h_perp, long samples, std::uint64_t seed) {
  if (t.dim() < t2.dim())
    throw std::invalid_argument("mc_section_volume: need dim T >= dim T2");
  if (!(h_par >= h_perp) || !(h_perp > 0))
    throw std::invalid_argument("mc_section_volume: need 0 < h_perp <= h_par");
  if (samples < 1000) throw std::invalid_argument("mc_section_volume: samples >= 1000");

  const int d = t.dim();
  const double sample_radius = 2.0 * h_par;  // the section lies in B(0, 2 h_par)
  const double domain_volume = unit_ball_volume(d) * std::pow(sample_radius, d);
  const Vector center = Vector::Zero(t.ambient_dim());

  CounterRng rng(seed, 0x5ec710eull);
  SlabWorkspace ws;
  Vector y(d);
  long hits = 0;
  for (long s = 0; s < samples; ++s) {
    double norm2;
    do {
      for (int i = 0; i < d; ++i) y(i) = rng.next_normal();
      norm2 = y.squaredNorm();
    } while (norm2 < 1e-24);
    const double radius = sample_radius * std::pow(rng.next_double_open(), 1.0 / d);
    const Vector v = t.basis * ((radius / std::sqrt(norm2)) * y);
    if (slab_contains(t2.basis, center, h_par, h_perp, v, ws)) ++hits;
  }
  const double p = double(hits) / double(samples);
  MonteCarloEstimate est;
  est.value = p * domain_volume;
  est.std_error = domain_volume * std::sqrt(std::max(p * (1.0 - p), 0.0) / double(samples));
  est.samples = samples;
  return est;
}

GridMin grid_min(const std::function<double(const Vector&)>& f, const Vector& lo,
                 const Vector& hi, int steps, double lipschitz) {
  const int dims = static_cast<int>(lo.size());
  Vector step = (hi - lo) / double(steps);
  std::vector<int> idx(static_cast<size_t>(dims), 0);
  Vector x(dims);
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    for (int d = 0; d < dims; ++d) x(d) = lo(d) + step(d) * idx[static_cast<size_t>(d)];
    best = std::min(best, f(x));
    int d = 0;
    while (d < dims && ++idx[static_cast<size_t>(d)] > steps) idx[static_cast<size_t>(d)] = 0, ++d;
    if (d == dims) break;
  }
  GridMin out;
  out.value = best;
  out.error_bound = lipschitz * 0.5 * step.norm();
  return out;
}

double meb_radius_grid(const Eigen::Ref<const Matrix>& pts, int levels, int steps) {
  auto radius = [&](const Vector& c) {
    double r = 0.0;
    for (Eigen::Index i = 0; i < pts.cols(); ++i) r = std::max(r, (pts.col(i) - c).norm());
    return r;
  };
  const int dims = static_cast<int>(pts.rows());
  Vector lo = pts.rowwise().minCoeff();
  Vector hi = pts.rowwise().maxCoeff();
  Vector best_c = 0.5 * (lo + hi);
  double best = radius(best_c);

  auto sweep = [&](const Vector& box_lo, const Vector& box_hi, int s) {
    const Vector step = (box_hi - box_lo) / double(s);
    std::vector<int> idx(static_cast<size_t>(dims), 0);
    Vector x(dims);
    for (;;) {
      for (int d = 0; d < dims; ++d) x(d) = box_lo(d) + step(d) * idx[static_cast<size_t>(d)];
      const double r = radius(x);
      if (r < best) { best = r; best_c = x; }
      int d = 0;
      while (d < dims && ++idx[static_cast<size_t>(d)] > s) idx[static_cast<size_t>(d)] = 0, ++d;
      if (d == dims) break;
    }
    return step;
  };

  // phase 1: localize with the distance bound for near-optimal centers
  // (value gap g puts the optimum within sqrt(2 f g) + 2 g); stalls once the
  // window stops shrinking, at box width of order f / steps
  for (int level = 0; level < levels; ++level) {
    const Vector step = sweep(lo, hi, 3 * steps);
    const double gap = 0.5 * step.norm();
    const double window = 2.0 * gap + std::sqrt(2.0 * best * gap) + step.maxCoeff();
    const double prev = 0.5 * (hi - lo).maxCoeff();
    if (window >= 0.9 * prev) break;
    lo = best_c.array() - window;
    hi = best_c.array() + window;
  }

  // phase 2: directional polish. A 1-d grid search along any line sees a
  // convex unimodal section, so window refinement cannot stall there; at a
  // non-optimal center some direction descends strictly (convexity), and a
  // direction sample over the sphere finds one. Candidate directions: the
  // min-of-max-slope direction over the active gradients, their pairwise
  // differences, and the coordinate axes.
  auto line_search = [&](const Vector& dir) {
    const Vector u = dir.normalized();
    double t_best = 0.0, window = std::max(best, 1e-6);
    for (int level = 0; level < 24 && window > 1e-15; ++level) {
      const int s = 64;
      const double step = 2.0 * window / s;
      double local = std::numeric_limits<double>::infinity();
      double local_t = t_best;
      int best_i = -1;
      for (int i = 0; i <= s; ++i) {
        const double t = t_best - window + step * i;
        const double r = radius(best_c + t * u);
        if (r < local) { local = r; local_t = t; best_i = i; }
      }
      if (local < best) { best = local; }
      t_best = local_t;
      window = (best_i == 0 || best_i == 64) ? 2.0 * window : 2.0 * step;
    }
    if (t_best != 0.0) best_c += t_best * u;
    best = radius(best_c);
  };

  // minimum-norm point of conv(columns), by face enumeration
  auto min_norm_point = [](const Matrix& cols) {
    const int m = static_cast<int>(cols.cols());
    Vector best_p = cols.col(0);
    double best_n2 = best_p.squaredNorm();
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
      std::vector<int> face;
      for (int i = 0; i < m; ++i)
        if (mask & (1u << i)) face.push_back(i);
      Vector candidate;
      if (face.size() == 1) {
        candidate = cols.col(face[0]);
      } else {
        Matrix diffs(cols.rows(), face.size() - 1);
        for (size_t i = 0; i + 1 < face.size(); ++i)
          diffs.col(static_cast<Eigen::Index>(i)) = cols.col(face[i + 1]) - cols.col(face[0]);
        Eigen::CompleteOrthogonalDecomposition<Matrix> cod(diffs.transpose() * diffs);
        if (cod.rank() < static_cast<Eigen::Index>(face.size()) - 1) continue;
        const Vector mu = cod.solve(diffs.transpose() * (-cols.col(face[0])));
        if (mu.minCoeff() < -1e-14 || 1.0 - mu.sum() < -1e-14) continue;
        candidate = cols.col(face[0]) + diffs * mu;
      }
      const double n2 = candidate.squaredNorm();
      if (n2 < best_n2) { best_n2 = n2; best_p = candidate; }
    }
    return best_p;
  };

  for (int round = 0; round < 50; ++round) {
    // epsilon-active set with a tightening value gap
    const double gap = std::max(best * std::pow(10.0, -1.0 - 0.25 * round), 1e-14);
    std::vector<Eigen::Index> active;
    for (Eigen::Index i = 0; i < pts.cols(); ++i)
      if ((pts.col(i) - best_c).norm() >= best - gap) active.push_back(i);

    if (active.size() == 1) {
      line_search(pts.col(active[0]) - best_c);
      continue;
    }
    Matrix grads(dims, static_cast<Eigen::Index>(active.size()));
    for (size_t j = 0; j < active.size(); ++j)
      grads.col(static_cast<Eigen::Index>(j)) = (best_c - pts.col(active[j])).normalized();
    // exact steepest descent for the max of the active distances
    const Vector p = min_norm_point(grads);
    if (p.norm() > 1e-15) line_search(-p);
    for (size_t a = 0; a < active.size(); ++a)
      for (size_t b = a + 1; b < active.size(); ++b) {
        const Vector diff = grads.col(static_cast<Eigen::Index>(a)) -
                            grads.col(static_cast<Eigen::Index>(b));
        if (diff.norm() > 1e-12) line_search(diff);
      }
  }
  return best;
}

double dist_to_simplex_faces(const Eigen::Ref<const Vector>& p,
                             const Eigen::Ref<const Matrix>& vertices) {
  const int m = static_cast<int>(vertices.cols());
  double best2 = std::numeric_limits<double>::infinity();
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<int> face;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) face.push_back(i);
    if (face.size() == 1) {
      best2 = std::min(best2, (p - vertices.col(face[0])).squaredNorm());
      continue;
    }
    Matrix diffs(vertices.rows(), face.size() - 1);
    for (size_t i = 0; i + 1 < face.size(); ++i)
      diffs.col(static_cast<Eigen::Index>(i)) =
          vertices.col(face[i + 1]) - vertices.col(face[0]);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(diffs.transpose() * diffs);
    if (cod.rank() < static_cast<Eigen::Index>(face.size()) - 1) continue;
    const Vector mu = cod.solve(diffs.transpose() * (p - vertices.col(face[0])));
    if (mu.minCoeff() < -1e-12 || 1.0 - mu.sum() < -1e-12) continue;
    best2 = std::min(best2, (p - vertices.col(face[0]) - diffs * mu).squaredNorm());
  }
  return std::sqrt(best2);
}

}  // namespace slabeling::oracle
