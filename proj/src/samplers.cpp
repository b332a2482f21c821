#include "slabeling/samplers.hpp"

#include "slabeling/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slabeling {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// ---- Lemniscate of Gerono -------------------------------------------------
// Base curve g(t) = (cos t, sin t cos t). The canonical figure-eight is
// K0 * g(t) with K0 the base max curvature, so its own max curvature is 1.

Eigen::Vector2d gerono_base(double t) { return {std::cos(t), std::sin(t) * std::cos(t)}; }

Eigen::Vector2d gerono_base_d1(double t) { return {-std::sin(t), std::cos(2.0 * t)}; }

double gerono_base_curvature(double t) {
  const double num =
      std::abs(2.0 * std::sin(t) * std::sin(2.0 * t) + std::cos(t) * std::cos(2.0 * t));
  const double sp = std::sin(t) * std::sin(t) + std::cos(2.0 * t) * std::cos(2.0 * t);
  return num / std::pow(sp, 1.5);
}

struct GeronoData {
  double k0;                    // base max curvature
  double base_length;           // arc length of g over [0, 2pi)
  std::vector<double> cum_len;  // cumulative arc length at grid nodes
  std::vector<double> t_grid;

  GeronoData() {
    const int m = 1 << 15;
    // max curvature: dense grid plus golden polish around the best node
    double best_t = 0.0, best_k = 0.0;
    for (int i = 0; i < m; ++i) {
      const double t = kTwoPi * i / m;
      const double k = gerono_base_curvature(t);
      if (k > best_k) { best_k = k; best_t = t; }
    }
    double lo = best_t - kTwoPi / m, hi = best_t + kTwoPi / m;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
      const double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
      if (gerono_base_curvature(a) > gerono_base_curvature(b)) hi = b; else lo = a;
    }
    k0 = gerono_base_curvature(0.5 * (lo + hi));

    t_grid.resize(m + 1);
    cum_len.resize(m + 1);
    cum_len[0] = 0.0;
    t_grid[0] = 0.0;
    double prev_speed = gerono_base_d1(0.0).norm();
    for (int i = 1; i <= m; ++i) {
      const double t = kTwoPi * i / m;
      const double speed = gerono_base_d1(t).norm();
      t_grid[i] = t;
      cum_len[i] = cum_len[i - 1] + 0.5 * (prev_speed + speed) * (kTwoPi / m);
      prev_speed = speed;
    }
    base_length = cum_len[m];
  }

  double t_of_arclength(double s) const {
    s = std::fmod(s, base_length);
    if (s < 0) s += base_length;
    const auto it = std::upper_bound(cum_len.begin(), cum_len.end(), s);
    const auto i = std::max<std::ptrdiff_t>(1, it - cum_len.begin());
    const double s0 = cum_len[i - 1], s1 = cum_len[i];
    const double w = (s1 > s0) ? (s - s0) / (s1 - s0) : 0.0;
    return t_grid[i - 1] + w * (t_grid[i] - t_grid[i - 1]);
  }
};

const GeronoData& gerono() {
  static const GeronoData data;
  return data;
}

Matrix default_basis(int ambient, int canonical) {
  return Matrix::Identity(ambient, ambient).leftCols(canonical);
}

// tangent space of the unit sphere at u: Householder complement of u
Matrix sphere_tangent_basis(const Eigen::Ref<const Vector>& u) {
  const auto n = u.size();
  Vector v = u;
  v(0) -= 1.0;
  const double vn2 = v.squaredNorm();
  Matrix h = Matrix::Identity(n, n);
  if (vn2 > 1e-24) h -= (2.0 / vn2) * (v * v.transpose());
  return h.rightCols(n - 1);
}

}  // namespace

std::string kind_name(ManifoldKind k) {
  switch (k) {
    case ManifoldKind::circle: return "circle";
    case ManifoldKind::sphere: return "sphere";
    case ManifoldKind::torus: return "torus";
    case ManifoldKind::figure_eight: return "figure_eight";
    case ManifoldKind::flat_circle_product: return "flat_circle_product";
  }
  throw std::logic_error("kind_name: unknown kind");
}

ManifoldKind kind_from_name(const std::string& name) {
  if (name == "circle") return ManifoldKind::circle;
  if (name == "sphere") return ManifoldKind::sphere;
  if (name == "torus") return ManifoldKind::torus;
  if (name == "figure_eight") return ManifoldKind::figure_eight;
  if (name == "flat_circle_product") return ManifoldKind::flat_circle_product;
  throw std::invalid_argument("unknown manifold kind: " + name);
}

int ManifoldSpec::canonical_dim() const {
  switch (kind) {
    case ManifoldKind::circle: return 2;
    case ManifoldKind::sphere: return dim + 1;
    case ManifoldKind::torus: return 3;
    case ManifoldKind::figure_eight: return 2;
    case ManifoldKind::flat_circle_product: return 4;
  }
  throw std::logic_error("canonical_dim: unknown kind");
}

double ManifoldSpec::curvature() const {
  double canonical = 1.0;
  switch (kind) {
    case ManifoldKind::circle:
    case ManifoldKind::sphere:
    case ManifoldKind::figure_eight:
      canonical = 1.0;
      break;
    case ManifoldKind::torus:
      canonical = std::max(1.0 / minor_radius, 1.0 / (major_radius - minor_radius));
      break;
    case ManifoldKind::flat_circle_product:
      canonical = std::max(1.0 / major_radius, 1.0 / minor_radius);
      break;
  }
  return canonical / scale;
}

double ManifoldSpec::canonical_diameter() const {
  switch (kind) {
    case ManifoldKind::circle:
    case ManifoldKind::sphere: return 2.0;
    case ManifoldKind::torus: return 2.0 * (major_radius + minor_radius);
    case ManifoldKind::figure_eight: return 2.0 * gerono().k0;
    case ManifoldKind::flat_circle_product:
      return 2.0 * std::hypot(major_radius, minor_radius);
  }
  throw std::logic_error("canonical_diameter: unknown kind");
}

void ManifoldSpec::validate() const {
  const int expected_dim = [&] {
    switch (kind) {
      case ManifoldKind::circle: return 1;
      case ManifoldKind::sphere: return dim;  // free, checked against ambient below
      case ManifoldKind::torus: return 2;
      case ManifoldKind::figure_eight: return 1;
      case ManifoldKind::flat_circle_product: return 2;
    }
    return -1;
  }();
  if (dim != expected_dim) throw std::invalid_argument("ManifoldSpec: dim inconsistent with kind");
  if (dim < 1) throw std::invalid_argument("ManifoldSpec: dim must be >= 1");
  if (canonical_dim() > ambient)
    throw std::invalid_argument("ManifoldSpec: canonical frame exceeds ambient dimension");
  if (!(scale > 0)) throw std::invalid_argument("ManifoldSpec: scale must be positive");
  if (kind == ManifoldKind::torus && !(major_radius > minor_radius && minor_radius > 0))
    throw std::invalid_argument("ManifoldSpec: torus needs 0 < minor < major");
  if (kind == ManifoldKind::flat_circle_product && !(major_radius > 0 && minor_radius > 0))
    throw std::invalid_argument("ManifoldSpec: product radii must be positive");
  if (basis.rows() != ambient || basis.cols() != canonical_dim())
    throw std::invalid_argument("ManifoldSpec: basis must be D x D'");
  if (translation.size() != ambient)
    throw std::invalid_argument("ManifoldSpec: translation must have ambient size");
  const Matrix gram = basis.transpose() * basis;
  if ((gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("ManifoldSpec: basis columns must be orthonormal");
}

ManifoldSpec ManifoldSpec::circle(int ambient, Vector translation, double scale, Matrix basis) {
  ManifoldSpec s;
  s.kind = ManifoldKind::circle;
  s.dim = 1;
  s.ambient = ambient;
  s.scale = scale;
  s.translation = std::move(translation);
  s.basis = basis.size() ? std::move(basis) : default_basis(ambient, 2);
  s.validate();
  return s;
}

ManifoldSpec ManifoldSpec::sphere(int dim, int ambient, Vector translation, double scale,
                                  Matrix basis) {
  ManifoldSpec s;
  s.kind = ManifoldKind::sphere;
  s.dim = dim;
  s.ambient = ambient;
  s.scale = scale;
  s.translation = std::move(translation);
  s.basis = basis.size() ? std::move(basis) : default_basis(ambient, dim + 1);
  s.validate();
  return s;
}

ManifoldSpec ManifoldSpec::torus(int ambient, Vector translation, double major, double minor,
                                 double scale, Matrix basis) {
  ManifoldSpec s;
  s.kind = ManifoldKind::torus;
  s.dim = 2;
  s.ambient = ambient;
  s.scale = scale;
  s.major_radius = major;
  s.minor_radius = minor;
  s.translation = std::move(translation);
  s.basis = basis.size() ? std::move(basis) : default_basis(ambient, 3);
  s.validate();
  return s;
}

ManifoldSpec ManifoldSpec::figure_eight(int ambient, Vector translation, double scale,
                                        Matrix basis) {
  ManifoldSpec s;
  s.kind = ManifoldKind::figure_eight;
  s.dim = 1;
  s.ambient = ambient;
  s.scale = scale;
  s.translation = std::move(translation);
  s.basis = basis.size() ? std::move(basis) : default_basis(ambient, 2);
  s.validate();
  return s;
}

ManifoldSpec ManifoldSpec::flat_circle_product(int ambient, Vector translation, double r1,
                                               double r2, double scale, Matrix basis) {
  ManifoldSpec s;
  s.kind = ManifoldKind::flat_circle_product;
  s.dim = 2;
  s.ambient = ambient;
  s.scale = scale;
  s.major_radius = r1;
  s.minor_radius = r2;
  s.translation = std::move(translation);
  s.basis = basis.size() ? std::move(basis) : default_basis(ambient, 4);
  s.validate();
  return s;
}

namespace {

// canonical point + tangent frame for one draw
void draw_canonical(const ManifoldSpec& spec, CounterRng& rng, Vector& point, Matrix& tangent) {
  switch (spec.kind) {
    case ManifoldKind::circle: {
      const double t = kTwoPi * rng.next_double();
      point = Vector{{std::cos(t), std::sin(t)}};
      tangent = Matrix{{-std::sin(t)}, {std::cos(t)}};
      return;
    }
    case ManifoldKind::sphere: {
      const int n = spec.dim + 1;
      Vector g(n);
      do {
        for (int i = 0; i < n; ++i) g(i) = rng.next_normal();
      } while (g.norm() < 1e-12);
      point = g / g.norm();
      tangent = sphere_tangent_basis(point);
      return;
    }
    case ManifoldKind::torus: {
      const double big_r = spec.major_radius, small_r = spec.minor_radius;
      const double u = kTwoPi * rng.next_double();
      double v;
      do {
        v = kTwoPi * rng.next_double();
      } while (rng.next_double() > (big_r + small_r * std::cos(v)) / (big_r + small_r));
      const double ring = big_r + small_r * std::cos(v);
      point = Vector{{ring * std::cos(u), ring * std::sin(u), small_r * std::sin(v)}};
      tangent = Matrix(3, 2);
      tangent.col(0) = Vector{{-std::sin(u), std::cos(u), 0.0}};
      tangent.col(1) =
          Vector{{-std::sin(v) * std::cos(u), -std::sin(v) * std::sin(u), std::cos(v)}};
      return;
    }
    case ManifoldKind::figure_eight: {
      const GeronoData& gd = gerono();
      const double s = gd.base_length * rng.next_double();
      const double t = gd.t_of_arclength(s);
      point = gd.k0 * Vector{{std::cos(t), std::sin(t) * std::cos(t)}};
      const Eigen::Vector2d d1 = gerono_base_d1(t);
      tangent = Matrix(2, 1);
      tangent.col(0) = d1.normalized();
      return;
    }
    case ManifoldKind::flat_circle_product: {
      const double u = kTwoPi * rng.next_double();
      const double v = kTwoPi * rng.next_double();
      const double r1 = spec.major_radius, r2 = spec.minor_radius;
      point = Vector{{r1 * std::cos(u), r1 * std::sin(u), r2 * std::cos(v), r2 * std::sin(v)}};
      tangent = Matrix::Zero(4, 2);
      tangent.col(0).head<2>() = Eigen::Vector2d(-std::sin(u), std::cos(u));
      tangent.col(1).tail<2>() = Eigen::Vector2d(-std::sin(v), std::cos(v));
      return;
    }
  }
  throw std::logic_error("draw_canonical: unknown kind");
}

}  // namespace

PointCloud sample_mixture(const std::vector<ManifoldSpec>& specs,
                          const std::vector<double>& weights, long n, std::uint64_t seed) {
  if (specs.empty() || specs.size() != weights.size())
    throw WeightError("sample_mixture: specs/weights size mismatch");
  if (n < 1) throw std::invalid_argument("sample_mixture: n must be >= 1");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0.0)) throw WeightError("sample_mixture: weights must be positive");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw WeightError("sample_mixture: weights must sum to 1");
  const int ambient = specs.front().ambient;
  for (const ManifoldSpec& s : specs) {
    s.validate();
    if (s.ambient != ambient)
      throw std::invalid_argument("sample_mixture: mixed ambient dimensions");
  }

  PointCloud cloud;
  cloud.points.resize(ambient, n);
  cloud.labels.resize(static_cast<size_t>(n));
  cloud.tangents.resize(static_cast<size_t>(n));
  cloud.specs = specs;
  cloud.weights = weights;
  cloud.seed = seed;

  for (long i = 0; i < n; ++i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    const double u = rng.next_double();
    size_t k = 0;
    double acc = weights[0];
    while (k + 1 < weights.size() && u >= acc) acc += weights[++k];
    const ManifoldSpec& spec = specs[k];
    Vector canonical;
    Matrix tangent_c;
    draw_canonical(spec, rng, canonical, tangent_c);
    cloud.points.col(i) = spec.translation + spec.scale * (spec.basis * canonical);
    cloud.tangents[static_cast<size_t>(i)] = spec.basis * tangent_c;
    cloud.labels[static_cast<size_t>(i)] = static_cast<int>(k) + 1;
  }
  return cloud;
}

namespace {

// canonical nets with tangent frames
void net_circle(double rho, std::vector<Vector>& pts, std::vector<Matrix>& tans) {
  const long m = std::max<long>(4, static_cast<long>(std::ceil(kTwoPi / rho)));
  for (long i = 0; i < m; ++i) {
    const double t = kTwoPi * i / m;
    pts.push_back(Vector{{std::cos(t), std::sin(t)}});
    tans.push_back(Matrix{{-std::sin(t)}, {std::cos(t)}});
  }
}

void net_sphere_rec(int dim, double rho, std::vector<Vector>& out) {
  if (dim == 1) {
    const long m = std::max<long>(4, static_cast<long>(std::ceil(kTwoPi / rho)));
    for (long i = 0; i < m; ++i)
      out.push_back(Vector{{std::cos(kTwoPi * i / m), std::sin(kTwoPi * i / m)}});
    return;
  }
  const long rings = std::max<long>(2, static_cast<long>(std::ceil(M_PI / (rho / 2.0))));
  for (long j = 0; j <= rings; ++j) {
    const double theta = M_PI * j / rings;
    const double s = std::sin(theta), c = std::cos(theta);
    if (j == 0 || j == rings) {
      Vector pole = Vector::Zero(dim + 1);
      pole(0) = (j == 0) ? 1.0 : -1.0;
      out.push_back(pole);
      continue;
    }
    std::vector<Vector> ring;
    net_sphere_rec(dim - 1, std::min(M_PI, rho / (2.0 * s)), ring);
    for (const Vector& y : ring) {
      Vector p(dim + 1);
      p(0) = c;
      p.tail(dim) = s * y;
      out.push_back(p);
    }
  }
}

void net_sphere(int dim, double rho, std::vector<Vector>& pts, std::vector<Matrix>& tans) {
  std::vector<Vector> raw;
  net_sphere_rec(dim, rho, raw);
  for (Vector& p : raw) {
    p.normalize();
    tans.push_back(sphere_tangent_basis(p));
    pts.push_back(std::move(p));
  }
}

void net_torus(const ManifoldSpec& spec, double rho, std::vector<Vector>& pts,
               std::vector<Matrix>& tans) {
  const double big_r = spec.major_radius, small_r = spec.minor_radius;
  const long nu = std::max<long>(4, static_cast<long>(std::ceil(kTwoPi * (big_r + small_r) / rho)));
  const long nv = std::max<long>(4, static_cast<long>(std::ceil(kTwoPi * small_r / rho)));
  for (long i = 0; i < nu; ++i) {
    const double u = kTwoPi * i / nu;
    for (long j = 0; j < nv; ++j) {
      const double v = kTwoPi * j / nv;
      const double ring = big_r + small_r * std::cos(v);
      pts.push_back(Vector{{ring * std::cos(u), ring * std::sin(u), small_r * std::sin(v)}});
      Matrix t(3, 2);
      t.col(0) = Vector{{-std::sin(u), std::cos(u), 0.0}};
      t.col(1) = Vector{{-std::sin(v) * std::cos(u), -std::sin(v) * std::sin(u), std::cos(v)}};
      tans.push_back(std::move(t));
    }
  }
}

void net_figure_eight(double rho, std::vector<Vector>& pts, std::vector<Matrix>& tans) {
  const GeronoData& gd = gerono();
  const double len = gd.k0 * gd.base_length;
  const long m = std::max<long>(8, static_cast<long>(std::ceil(len / rho)));
  for (long i = 0; i < m; ++i) {
    const double t = gd.t_of_arclength(gd.base_length * i / m);
    pts.push_back(gd.k0 * Vector{{std::cos(t), std::sin(t) * std::cos(t)}});
    Matrix tan(2, 1);
    tan.col(0) = Vector{{-std::sin(t), std::cos(2.0 * t)}}.normalized();
    tans.push_back(std::move(tan));
  }
}

void net_product(const ManifoldSpec& spec, double rho, std::vector<Vector>& pts,
                 std::vector<Matrix>& tans) {
  const double r1 = spec.major_radius, r2 = spec.minor_radius;
  const long nu = std::max<long>(4, static_cast<long>(std::ceil(kTwoPi * r1 / rho)));
  const long nv = std::max<long>(4, static_cast<long>(std::ceil(kTwoPi * r2 / rho)));
  for (long i = 0; i < nu; ++i) {
    const double u = kTwoPi * i / nu;
    for (long j = 0; j < nv; ++j) {
      const double v = kTwoPi * j / nv;
      pts.push_back(Vector{{r1 * std::cos(u), r1 * std::sin(u), r2 * std::cos(v), r2 * std::sin(v)}});
      Matrix t = Matrix::Zero(4, 2);
      t.col(0).head<2>() = Eigen::Vector2d(-std::sin(u), std::cos(u));
      t.col(1).tail<2>() = Eigen::Vector2d(-std::sin(v), std::cos(v));
      tans.push_back(std::move(t));
    }
  }
}

}  // namespace

ReferenceNet dense_reference_net(const ManifoldSpec& spec, double resolution) {
  if (!(resolution > 0)) throw std::invalid_argument("dense_reference_net: resolution <= 0");
  spec.validate();
  const double rho = resolution / spec.scale;
  std::vector<Vector> pts;
  std::vector<Matrix> tans;
  switch (spec.kind) {
    case ManifoldKind::circle: net_circle(rho, pts, tans); break;
    case ManifoldKind::sphere: net_sphere(spec.dim, rho, pts, tans); break;
    case ManifoldKind::torus: net_torus(spec, rho, pts, tans); break;
    case ManifoldKind::figure_eight: net_figure_eight(rho, pts, tans); break;
    case ManifoldKind::flat_circle_product: net_product(spec, rho, pts, tans); break;
  }
  ReferenceNet net;
  net.points.resize(spec.ambient, static_cast<Eigen::Index>(pts.size()));
  net.tangents.reserve(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    net.points.col(static_cast<Eigen::Index>(i)) =
        spec.translation + spec.scale * (spec.basis * pts[i]);
    net.tangents.push_back(spec.basis * tans[i]);
  }
  return net;
}

Matrix dense_reference_sample(const ManifoldSpec& spec, double resolution) {
  return dense_reference_net(spec, resolution).points;
}

namespace {

double gerono_canonical_dist(const Eigen::Ref<const Vector>& a) {
  const GeronoData& gd = gerono();
  const Eigen::Vector2d q(a(0) / gd.k0, a(1) / gd.k0);  // work on the base curve
  const int m = 4096;
  std::vector<double> f(m);
  for (int i = 0; i < m; ++i)
    f[i] = (gerono_base(kTwoPi * i / m) - q).squaredNorm();
  double best = std::numeric_limits<double>::infinity();
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < m; ++i) {
    const double prev = f[(i + m - 1) % m], next = f[(i + 1) % m];
    if (f[i] > prev || f[i] > next) continue;  // refine discrete local minima only
    double lo = kTwoPi * (i - 1) / m, hi = kTwoPi * (i + 1) / m;
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
      const double x = hi - gr * (hi - lo), y = lo + gr * (hi - lo);
      if ((gerono_base(x) - q).squaredNorm() < (gerono_base(y) - q).squaredNorm()) hi = y;
      else lo = x;
    }
    best = std::min(best, (gerono_base(0.5 * (lo + hi)) - q).squaredNorm());
  }
  return gd.k0 * std::sqrt(best);
}

double canonical_dist(const ManifoldSpec& spec, const Eigen::Ref<const Vector>& a) {
  switch (spec.kind) {
    case ManifoldKind::circle:
    case ManifoldKind::sphere: return std::abs(a.norm() - 1.0);
    case ManifoldKind::torus: {
      const double rho = std::hypot(a(0), a(1));
      return std::abs(std::hypot(rho - spec.major_radius, a(2)) - spec.minor_radius);
    }
    case ManifoldKind::figure_eight: return gerono_canonical_dist(a);
    case ManifoldKind::flat_circle_product:
      return std::hypot(std::hypot(a(0), a(1)) - spec.major_radius,
                        std::hypot(a(2), a(3)) - spec.minor_radius);
  }
  throw std::logic_error("canonical_dist: unknown kind");
}

}  // namespace

double dist_to_manifold(const ManifoldSpec& spec, const Eigen::Ref<const Vector>& p) {
  const Vector v = (p - spec.translation) / spec.scale;
  const Vector a = spec.basis.transpose() * v;
  const double off2 = (v - spec.basis * a).squaredNorm();
  const double dc = canonical_dist(spec, a);
  return spec.scale * std::sqrt(dc * dc + off2);
}

Scene scene_preset(const std::string& name) {
  Scene scene;
  scene.name = name;
  if (name == "circle") {
    scene.specs = {ManifoldSpec::circle(2, Vector::Zero(2))};
    scene.weights = {1.0};
  } else if (name == "circle_sphere") {
    Vector c1(3), c2(3);
    c1 << 4.0, 0.0, 0.0;
    c2 << -4.0, 0.0, 0.0;
    scene.specs = {ManifoldSpec::circle(3, c1), ManifoldSpec::sphere(2, 3, c2)};
    scene.weights = {0.5, 0.5};
  } else if (name == "torus") {
    scene.specs = {ManifoldSpec::torus(3, Vector::Zero(3))};
    scene.weights = {1.0};
  } else if (name == "figure_eight") {
    scene.specs = {ManifoldSpec::figure_eight(2, Vector::Zero(2))};
    scene.weights = {1.0};
  } else if (name == "tangential_contact") {
    // circle of radius 1/2 inside the sphere's equator plane, touching the
    // sphere tangentially at (1,0,0): the no-reach regime
    Vector cc(3);
    cc << 0.5, 0.0, 0.0;
    scene.specs = {ManifoldSpec::circle(3, cc, 0.5), ManifoldSpec::sphere(2, 3, Vector::Zero(3))};
    scene.weights = {0.5, 0.5};
    scene.contact_point = Vector{{1.0, 0.0, 0.0}};
    scene.ambiguous_radius = 0.15;
  } else if (name == "segment") {
    scene.deterministic = true;
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return scene;
}

std::vector<std::string> scene_preset_names() {
  return {"circle", "circle_sphere", "torus", "figure_eight", "tangential_contact", "segment"};
}

PointCloud generate_scene(const Scene& scene, long n, std::uint64_t seed) {
  if (scene.deterministic) {
    // unit segment in the plane, equally spaced; labels all 1
    if (n < 1) throw std::invalid_argument("generate_scene: n must be >= 1");
    PointCloud cloud;
    cloud.points = Matrix::Zero(2, n);
    for (long i = 0; i < n; ++i) cloud.points(0, i) = (n == 1) ? 0.0 : double(i) / double(n - 1);
    cloud.labels.assign(static_cast<size_t>(n), 1);
    cloud.tangents.assign(static_cast<size_t>(n), Matrix{{1.0}, {0.0}});
    cloud.seed = seed;
    return cloud;
  }
  PointCloud cloud = sample_mixture(scene.specs, scene.weights, n, seed);
  if (scene.ambiguous_radius > 0.0 && scene.contact_point.size() == cloud.ambient_dim()) {
    for (long i = 0; i < n; ++i)
      if ((cloud.points.col(i) - scene.contact_point).norm() <= scene.ambiguous_radius)
        cloud.ambiguous.push_back(static_cast<int>(i));
  }
  return cloud;
}

}  // namespace slabeling
