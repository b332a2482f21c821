#include "slabeling/geometry.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace slabeling {

namespace {

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

}  // namespace

double Subspace::orthonormality_defect() const {
  const Matrix g = basis.transpose() * basis;
  return (g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

Slab make_slab(Vector center, Subspace flat, double h_par, double h_perp) {
  if (!(h_par > 0.0) || !(h_perp > 0.0))
    throw std::invalid_argument("make_slab: widths must be positive");
  if (h_perp > h_par) {
    // h_perp <= h_par is the intended regime (h_perp ~ kappa h_par^2 << h_par);
    // warn once, do not reject.
    static std::atomic_flag warned = ATOMIC_FLAG_INIT;
    if (!warned.test_and_set())
      std::fprintf(stderr, "slabeling: warning: slab with h_perp > h_par (%.3g > %.3g)\n",
                   h_perp, h_par);
  }
  return Slab{std::move(center), std::move(flat), h_par, h_perp};
}

bool slab_contains(const Matrix& basis, const Vector& center, double h_par, double h_perp,
                   const Eigen::Ref<const Vector>& p, SlabWorkspace& ws) {
  ws.diff = p - center;
  ws.coeffs.noalias() = basis.transpose() * ws.diff;
  if (ws.coeffs.norm() > h_par) return false;
  ws.residual = ws.diff;
  ws.residual.noalias() -= basis * ws.coeffs;
  return ws.residual.norm() <= h_perp;
}

bool Slab::contains(const Eigen::Ref<const Vector>& p) const {
  thread_local SlabWorkspace ws;
  return slab_contains(flat.basis, center, h_par, h_perp, p, ws);
}

std::optional<Subspace> orthonormalize(const Eigen::Ref<const Matrix>& vectors,
                                       double rank_tol) {
  const auto m = vectors.cols();
  if (m < 1 || m > vectors.rows())
    throw std::invalid_argument("orthonormalize: need 1 <= count <= D vectors");
  Eigen::JacobiSVD<Matrix> svd(vectors, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0.0) || sv(m - 1) < rank_tol * sv(0)) return std::nullopt;
  return Subspace{svd.matrixU().leftCols(m)};
}

std::optional<SimplexTuple> make_simplex_tuple(const Eigen::Ref<const Matrix>& points,
                                               std::vector<int> indices,
                                               double rank_tol) {
  const auto m = static_cast<Eigen::Index>(indices.size());
  Matrix vertices(points.rows(), m);
  for (Eigen::Index j = 0; j < m; ++j) vertices.col(j) = points.col(indices[j]);
  Matrix diffs = vertices.rightCols(m - 1).colwise() - vertices.col(0);
  auto span = orthonormalize(diffs, rank_tol);
  if (!span) return std::nullopt;
  Vector barycenter = vertices.rowwise().mean();
  return SimplexTuple{std::move(indices), std::move(vertices), std::move(*span),
                      std::move(barycenter)};
}

Slab tuple_slab(const SimplexTuple& t, double h_par, double h_perp) {
  return make_slab(t.barycenter, t.span, h_par, h_perp);
}

// Cosines come from the singular values of A^T B, sines from those of
// (I - pi_B) A with A the larger-dimensional basis. Each angle is taken from
// whichever route is well conditioned for it.
Vector principal_angles(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw std::invalid_argument("principal_angles: ambient dimensions differ");
  const bool a_large = a.dim() >= b.dim();
  const Matrix& large = a_large ? a.basis : b.basis;
  const Matrix& small = a_large ? b.basis : a.basis;
  const int dmax = static_cast<int>(large.cols());
  const int dmin = static_cast<int>(small.cols());

  Eigen::JacobiSVD<Matrix> cos_svd(small.transpose() * large);
  const Vector cosines = cos_svd.singularValues();  // descending, size dmin

  const Matrix residual = large - small * (small.transpose() * large);
  Eigen::JacobiSVD<Matrix> sin_svd(residual);
  const Vector sines = sin_svd.singularValues();  // descending, size dmax

  Vector angles(dmax);
  for (int k = 0; k < dmax; ++k) {
    const double c = (k < dmin) ? clamp01(cosines(k)) : 0.0;
    const double s = clamp01(sines(dmax - 1 - k));
    angles(k) = (c * c >= 0.5) ? std::asin(s) : std::acos(c);
  }
  std::sort(angles.begin(), angles.end());
  return angles;
}

double subspace_angle(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw std::invalid_argument("subspace_angle: ambient dimensions differ");
  if (a.dim() != b.dim()) return 1.0;
  const Matrix residual = a.basis - b.basis * (b.basis.transpose() * a.basis);
  const Eigen::Index d = residual.cols();
  // sigma_max(residual) = sin of the largest principal angle.
  if (d == 1) return std::min(1.0, residual.col(0).norm());
  const Matrix gram = residual.transpose() * residual;
  if (d == 2) {
    const double tr = gram(0, 0) + gram(1, 1);
    const double det = gram(0, 0) * gram(1, 1) - gram(0, 1) * gram(1, 0);
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
    return std::min(1.0, std::sqrt(std::max(0.0, tr / 2.0 + disc)));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  return std::min(1.0, std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff())));
}

double cone_angle_one_sided(std::span<const Subspace> a, std::span<const Subspace> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("cone_angle_one_sided: empty flat list");
  double sup = 0.0;
  for (const Subspace& t : a) {
    double inf = 1.0;
    for (const Subspace& t2 : b) inf = std::min(inf, subspace_angle(t, t2));
    sup = std::max(sup, inf);
  }
  return sup;
}

double cone_angle(std::span<const Subspace> a, std::span<const Subspace> b) {
  return std::max(cone_angle_one_sided(a, b), cone_angle_one_sided(b, a));
}

namespace {

struct Ball {
  Vector center;
  double r2 = -1.0;  // negative marks the empty ball

  bool contains(const Eigen::Ref<const Vector>& p) const {
    if (r2 < 0.0) return false;
    return (p - center).squaredNorm() <= r2 * (1.0 + 1e-12) + 1e-300;
  }
};

// Smallest ball with all boundary points on its sphere: the center lies in
// their affine hull and is equidistant to all of them.
Ball circumball(const std::vector<Vector>& boundary, Eigen::Index dim) {
  Ball ball;
  const auto m = static_cast<Eigen::Index>(boundary.size());
  if (m == 0) return ball;
  if (m == 1) return Ball{boundary[0], 0.0};
  Matrix diffs(dim, m - 1);
  Vector rhs(m - 1);
  for (Eigen::Index i = 0; i + 1 < m; ++i) {
    diffs.col(i) = boundary[i + 1] - boundary[0];
    rhs(i) = 0.5 * diffs.col(i).squaredNorm();
  }
  const Matrix gram = diffs.transpose() * diffs;
  const Vector lambda = gram.completeOrthogonalDecomposition().solve(rhs);
  ball.center = boundary[0] + diffs * lambda;
  ball.r2 = 0.0;
  for (const Vector& b : boundary)
    ball.r2 = std::max(ball.r2, (b - ball.center).squaredNorm());
  return ball;
}

Ball welzl(std::vector<Eigen::Index>& order, Eigen::Index n,
           std::vector<Vector>& boundary, const Eigen::Ref<const Matrix>& pts) {
  Ball ball = circumball(boundary, pts.rows());
  if (static_cast<Eigen::Index>(boundary.size()) == pts.rows() + 1) return ball;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (ball.contains(pts.col(order[i]))) continue;
    boundary.push_back(pts.col(order[i]));
    ball = welzl(order, i, boundary, pts);
    boundary.pop_back();
    // move-to-front
    const Eigen::Index idx = order[i];
    for (Eigen::Index j = i; j > 0; --j) order[j] = order[j - 1];
    order[0] = idx;
  }
  return ball;
}

}  // namespace

double min_enclosing_ball_radius(const Eigen::Ref<const Matrix>& pts) {
  const Eigen::Index m = pts.cols();
  if (m < 1) throw std::invalid_argument("min_enclosing_ball_radius: empty input");
  if (m == 1) return 0.0;
  if (m == 2) return 0.5 * (pts.col(0) - pts.col(1)).norm();
  std::vector<Eigen::Index> order(m);
  for (Eigen::Index i = 0; i < m; ++i) order[i] = i;
  std::vector<Vector> boundary;
  boundary.reserve(static_cast<size_t>(pts.rows()) + 1);
  const Ball ball = welzl(order, m, boundary, pts);
  return ball.r2 > 0.0 ? std::sqrt(ball.r2) : 0.0;
}

namespace {

// Projection of p onto the affine hull of the vertex subset `face`; returns
// squared distance, or nullopt if the subset is affinely dependent or the
// projection leaves the relative interior (negative barycentric weight).
std::optional<double> face_projection(const Eigen::Ref<const Vector>& p,
                                      const Eigen::Ref<const Matrix>& vertices,
                                      const std::vector<int>& face) {
  const auto m = static_cast<Eigen::Index>(face.size());
  if (m == 1) return (p - vertices.col(face[0])).squaredNorm();
  Matrix diffs(vertices.rows(), m - 1);
  for (Eigen::Index i = 0; i + 1 < m; ++i)
    diffs.col(i) = vertices.col(face[i + 1]) - vertices.col(face[0]);
  const Matrix gram = diffs.transpose() * diffs;
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(gram);
  if (cod.rank() < m - 1) return std::nullopt;  // degenerate face, covered by a sub-face
  const Vector mu = cod.solve(diffs.transpose() * (p - vertices.col(face[0])));
  constexpr double tol = -1e-12;
  if (mu.minCoeff() < tol || 1.0 - mu.sum() < tol) return std::nullopt;
  return (p - vertices.col(face[0]) - diffs * mu).squaredNorm();
}

double dist_by_face_enumeration(const Eigen::Ref<const Vector>& p,
                                const Eigen::Ref<const Matrix>& vertices) {
  const int m = static_cast<int>(vertices.cols());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> face;
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    face.clear();
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) face.push_back(i);
    if (auto d2 = face_projection(p, vertices, face)) best = std::min(best, *d2);
  }
  return std::sqrt(best);
}

// Active-set minimization of ||p - V lambda||^2 over the unit simplex.
double dist_by_active_set(const Eigen::Ref<const Vector>& p,
                          const Eigen::Ref<const Matrix>& vertices) {
  const int m = static_cast<int>(vertices.cols());
  constexpr double tol = 1e-12;

  // start at the nearest vertex
  Vector lambda = Vector::Zero(m);
  {
    int best = 0;
    double bd = (p - vertices.col(0)).squaredNorm();
    for (int i = 1; i < m; ++i) {
      const double d = (p - vertices.col(i)).squaredNorm();
      if (d < bd) { bd = d; best = i; }
    }
    lambda(best) = 1.0;
  }
  std::vector<bool> active(m, true);  // constrained to zero
  for (int i = 0; i < m; ++i) active[i] = lambda(i) == 0.0;

  for (int iter = 0; iter < 8 * m * m + 64; ++iter) {
    // equality-constrained minimizer on the current support
    std::vector<int> support;
    for (int i = 0; i < m; ++i)
      if (!active[i]) support.push_back(i);
    Vector target = Vector::Zero(m);
    if (support.size() == 1) {
      target(support[0]) = 1.0;
    } else {
      Matrix diffs(vertices.rows(), support.size() - 1);
      for (size_t i = 0; i + 1 < support.size(); ++i)
        diffs.col(i) = vertices.col(support[i + 1]) - vertices.col(support[0]);
      const Vector mu = (diffs.transpose() * diffs)
                            .completeOrthogonalDecomposition()
                            .solve(diffs.transpose() * (p - vertices.col(support[0])));
      target(support[0]) = 1.0 - mu.sum();
      for (size_t i = 0; i + 1 < support.size(); ++i) target(support[i + 1]) = mu(i);
    }

    double min_target = 0.0;
    for (int i : support) min_target = std::min(min_target, target(i));
    if (min_target >= -tol) {
      lambda = target;
      for (int i = 0; i < m; ++i) lambda(i) = std::max(lambda(i), 0.0);
      // KKT check: multipliers of the zeroed coordinates must be nonnegative
      const Vector grad = 2.0 * (vertices.transpose() * (vertices * lambda - p));
      double nu = std::numeric_limits<double>::infinity();
      for (int i : support) nu = std::min(nu, grad(i));
      int enter = -1;
      double worst = -1e-10 * (1.0 + std::abs(nu));
      for (int i = 0; i < m; ++i) {
        if (!active[i]) continue;
        if (grad(i) - nu < worst) { worst = grad(i) - nu; enter = i; }
      }
      if (enter < 0) return (p - vertices * lambda).norm();
      active[enter] = false;
    } else {
      // step toward the target until the first coordinate hits zero
      double alpha = 1.0;
      int blocking = -1;
      for (int i : support) {
        if (target(i) >= 0.0) continue;
        const double a = lambda(i) / (lambda(i) - target(i));
        if (a < alpha) { alpha = a; blocking = i; }
      }
      lambda += alpha * (target - lambda);
      if (blocking >= 0) { lambda(blocking) = 0.0; active[blocking] = true; }
    }
  }
  return (p - vertices * lambda).norm();  // unreachable for sane inputs
}

}  // namespace

double dist_to_simplex(const Eigen::Ref<const Vector>& p,
                       const Eigen::Ref<const Matrix>& vertices) {
  const Eigen::Index m = vertices.cols();
  if (m < 1) throw std::invalid_argument("dist_to_simplex: empty vertex set");
  if (m == 1) return (p - vertices.col(0)).norm();
  if (m <= 4) return dist_by_face_enumeration(p, vertices);
  return dist_by_active_set(p, vertices);
}

double hausdorff_one_sided(const Eigen::Ref<const Matrix>& a,
                           const Eigen::Ref<const Matrix>& b) {
  if (a.cols() == 0 || b.cols() == 0)
    throw std::invalid_argument("hausdorff: empty point set");
  double max2 = 0.0;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    double min2 = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      const double d2 = (a.col(i) - b.col(j)).squaredNorm();
      if (d2 < min2) {
        min2 = d2;
        if (min2 <= max2) break;  // cannot raise the sup
      }
    }
    if (min2 > max2) max2 = min2;
  }
  return std::sqrt(max2);
}

double hausdorff(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b) {
  return std::max(hausdorff_one_sided(a, b), hausdorff_one_sided(b, a));
}

}  // namespace slabeling
