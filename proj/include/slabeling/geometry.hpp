#pragma once

#include <Eigen/Core>

#include <optional>
#include <span>
#include <vector>

namespace slabeling {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Ratio smallest/largest singular value below which a vector family is
// treated as rank-deficient.
inline constexpr double kRankTol = 1e-8;

/// A linear subspace of R^D stored as an orthonormal basis (columns).
struct Subspace {
  Matrix basis;  // D x d, orthonormal columns

  int dim() const { return static_cast<int>(basis.cols()); }
  int ambient_dim() const { return static_cast<int>(basis.rows()); }

  /// Orthogonal projection of v onto the subspace.
  Vector project(const Eigen::Ref<const Vector>& v) const {
    return basis * (basis.transpose() * v);
  }

  /// Max column deviation from pairwise orthonormality.
  double orthonormality_defect() const;
};

/// Reusable buffers for slab membership tests.
struct SlabWorkspace {
  Vector diff, coeffs, residual;
};

/// Closed membership test against the slab (center, basis, h_par, h_perp);
/// all callers share this routine so results agree bit for bit.
bool slab_contains(const Matrix& basis, const Vector& center, double h_par, double h_perp,
                   const Eigen::Ref<const Vector>& p, SlabWorkspace& ws);

/// Thickened low-dimensional ball: center + B_T(0,h_par) + B_{T^perp}(0,h_perp).
struct Slab {
  Vector center;
  Subspace flat;
  double h_par = 0.0;
  double h_perp = 0.0;

  /// Closed membership test.
  bool contains(const Eigen::Ref<const Vector>& p) const;
};

Slab make_slab(Vector center, Subspace flat, double h_par, double h_perp);

/// A (d+1)-tuple of cloud points together with its affine frame.
struct SimplexTuple {
  std::vector<int> indices;  // d+1 distinct point indices, ascending
  Matrix vertices;           // D x (d+1), columns ordered as indices
  Subspace span;             // span(v_1-v_0, ..., v_d-v_0), dim d
  Vector barycenter;
};

/// Builds the tuple frame from cloud columns; nullopt if the difference
/// vectors are numerically rank deficient.
std::optional<SimplexTuple> make_simplex_tuple(const Eigen::Ref<const Matrix>& points,
                                               std::vector<int> indices,
                                               double rank_tol = kRankTol);

Slab tuple_slab(const SimplexTuple& t, double h_par, double h_perp);

/// Orthonormal basis of span(columns). nullopt when the smallest singular
/// value falls below rank_tol times the largest (degenerate input).
std::optional<Subspace> orthonormalize(const Eigen::Ref<const Matrix>& vectors,
                                       double rank_tol = kRankTol);

/// Canonical angles between two subspaces, ascending, length
/// max(dim, dim'), padded with pi/2 past the smaller dimension.
Vector principal_angles(const Subspace& a, const Subspace& b);

/// Operator norm of the projector difference, in [0,1]. Equals the sine of
/// the largest principal angle for equal dimensions, 1 otherwise.
double subspace_angle(const Subspace& a, const Subspace& b);

/// sup over `a` of inf over `b` of subspace_angle.
double cone_angle_one_sided(std::span<const Subspace> a, std::span<const Subspace> b);

/// Symmetrized max of the two one-sided cone angles.
double cone_angle(std::span<const Subspace> a, std::span<const Subspace> b);

/// Exact radius of the smallest ball enclosing the columns of pts
/// (move-to-front algorithm; intended for <= D+1 points).
double min_enclosing_ball_radius(const Eigen::Ref<const Matrix>& pts);

/// Euclidean distance from p to the convex hull of the columns of vertices.
/// Exact face enumeration up to 4 vertices, active-set solve above.
double dist_to_simplex(const Eigen::Ref<const Vector>& p,
                       const Eigen::Ref<const Matrix>& vertices);

/// sup over columns of A of the distance to the column set of B.
double hausdorff_one_sided(const Eigen::Ref<const Matrix>& a,
                           const Eigen::Ref<const Matrix>& b);

/// Symmetric Hausdorff distance between two finite column sets.
double hausdorff(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b);

}  // namespace slabeling
