#pragma once

#include "slabeling/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace slabeling {

/// Uniform-grid index over (a subset of) a point cloud, supporting exact
/// closed-ball radius queries. Immutable after build; queries are
/// concurrent-safe.
class GridIndex {
 public:
  /// Indexes the listed columns of `points` (all columns when `subset` is
  /// empty). Keeps a reference to `points`, which must outlive the index.
  /// Throws std::invalid_argument on a nonpositive or nonfinite cell size
  /// or an empty cloud.
  GridIndex(const Matrix& points, double cell_size, std::vector<int> subset = {});

  double cell_size() const { return cell_size_; }
  std::size_t cell_count() const { return cells_.size(); }
  std::size_t point_count() const { return count_; }

  /// Indices with ||x_i - p|| <= r, ascending. Equals a brute-force scan.
  std::vector<int> neighbors_within(const Eigen::Ref<const Vector>& p, double r) const;

  /// Streams indices with ||x_i - p|| <= r in unspecified order; stop early
  /// by returning false from fn.
  template <typename Fn>
  bool for_each_in_ball(const Eigen::Ref<const Vector>& p, double r, Fn&& fn) const {
    const int dims = static_cast<int>(points_->rows());
    const double r2 = r * r;
    Key lo(dims), hi(dims), cur(dims);
    for (int d = 0; d < dims; ++d) {
      lo[d] = lattice_clamped(p(d) - r, cell_min_[d], cell_max_[d]);
      hi[d] = lattice_clamped(p(d) + r, cell_min_[d], cell_max_[d]);
      if (std::floor((p(d) + r) / cell_size_) < double(cell_min_[d]) ||
          std::floor((p(d) - r) / cell_size_) > double(cell_max_[d]))
        return true;  // ball misses the occupied box
      cur[d] = lo[d];
    }
    for (;;) {
      if (auto it = cells_.find(cur); it != cells_.end()) {
        for (int idx : it->second) {
          if ((points_->col(idx) - p).squaredNorm() <= r2)
            if (!fn(idx)) return false;
        }
      }
      int d = 0;
      while (d < dims && ++cur[d] > hi[d]) cur[d] = lo[d], ++d;
      if (d == dims) return true;
    }
  }

 private:
  using Key = std::vector<int64_t>;

  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      std::uint64_t h = 0xcbf29ce484222325ull;
      for (int64_t v : k) {
        h ^= static_cast<std::uint64_t>(v);
        h *= 0x100000001b3ull;
        h ^= h >> 29;
      }
      return static_cast<std::size_t>(h);
    }
  };

  int64_t lattice(double x) const { return static_cast<int64_t>(std::floor(x / cell_size_)); }
  int64_t lattice_clamped(double x, int64_t lo, int64_t hi) const {
    const double c = std::floor(x / cell_size_);
    if (!(c > double(lo))) return lo;
    if (!(c < double(hi))) return hi;
    return static_cast<int64_t>(c);
  }
  Key key_of(const Eigen::Ref<const Vector>& p) const;

  const Matrix* points_;
  double cell_size_;
  std::size_t count_ = 0;
  std::unordered_map<Key, std::vector<int>, KeyHash> cells_;
  std::vector<int64_t> cell_min_, cell_max_;  // occupied lattice bounds per dim
};

}  // namespace slabeling
