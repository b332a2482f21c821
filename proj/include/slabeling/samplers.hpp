#pragma once

#include "slabeling/geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace slabeling {

struct WeightError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class ManifoldKind { circle, sphere, torus, figure_eight, flat_circle_product };

std::string kind_name(ManifoldKind k);
ManifoldKind kind_from_name(const std::string& name);

/// A compact immersed manifold with analytic parametrization, placed in R^D
/// by x = translation + scale * basis * canonical(theta).
struct ManifoldSpec {
  ManifoldKind kind = ManifoldKind::circle;
  int dim = 1;               // intrinsic dimension
  int ambient = 2;           // D
  Matrix basis;              // D x D', orthonormal columns (canonical frame)
  Vector translation;        // D
  double scale = 1.0;
  double major_radius = 2.0; // torus R / product first radius
  double minor_radius = 0.5; // torus r / product second radius

  int canonical_dim() const;       // D' of the canonical parametrization
  double curvature() const;        // max directional curvature after scaling
  double canonical_diameter() const;
  void validate() const;

  static ManifoldSpec circle(int ambient, Vector translation, double scale = 1.0,
                             Matrix basis = {});
  static ManifoldSpec sphere(int dim, int ambient, Vector translation, double scale = 1.0,
                             Matrix basis = {});
  static ManifoldSpec torus(int ambient, Vector translation, double major = 2.0,
                            double minor = 0.5, double scale = 1.0, Matrix basis = {});
  static ManifoldSpec figure_eight(int ambient, Vector translation, double scale = 1.0,
                                   Matrix basis = {});
  static ManifoldSpec flat_circle_product(int ambient, Vector translation, double r1 = 1.0,
                                          double r2 = 1.0, double scale = 1.0,
                                          Matrix basis = {});
};

/// Sample points with optional ground truth attached.
struct PointCloud {
  Matrix points;                    // D x n
  std::vector<int> labels;          // 1-based layer index; empty when absent
  std::vector<Matrix> tangents;     // D x d_i tangent basis per point; may be empty
  std::vector<ManifoldSpec> specs;  // mixture components; may be empty
  std::vector<double> weights;
  std::vector<int> ambiguous;       // indices excluded from strict clustering scores
  std::uint64_t seed = 0;

  long size() const { return points.cols(); }
  int ambient_dim() const { return static_cast<int>(points.rows()); }
};

/// i.i.d. mixture draw with labels and analytic tangent frames recorded.
/// Weights must be positive and sum to 1 within 1e-12.
PointCloud sample_mixture(const std::vector<ManifoldSpec>& specs,
                          const std::vector<double>& weights, long n, std::uint64_t seed);

/// Deterministic quasi-uniform net with ambient covering radius <= resolution.
Matrix dense_reference_sample(const ManifoldSpec& spec, double resolution);

/// Same net, with the analytic tangent basis at every net point.
struct ReferenceNet {
  Matrix points;                 // D x m
  std::vector<Matrix> tangents;  // D x d per point
};
ReferenceNet dense_reference_net(const ManifoldSpec& spec, double resolution);

/// Exact ambient distance for circle/sphere/torus/product; figure-eight by
/// certified 1-d minimization.
double dist_to_manifold(const ManifoldSpec& spec, const Eigen::Ref<const Vector>& p);

/// Named experiment scenes.
struct Scene {
  std::string name;
  std::vector<ManifoldSpec> specs;
  std::vector<double> weights;
  bool deterministic = false;  // segment preset: equally spaced, ignores randomness
  // tangential_contact: points within this ambient radius of the contact
  // point get listed as ambiguous in the generated cloud.
  double ambiguous_radius = 0.0;
  Vector contact_point;
};

Scene scene_preset(const std::string& name);
std::vector<std::string> scene_preset_names();

/// Cloud for a scene: mixture sample, or the deterministic construction for
/// the segment preset.
PointCloud generate_scene(const Scene& scene, long n, std::uint64_t seed);

}  // namespace slabeling
