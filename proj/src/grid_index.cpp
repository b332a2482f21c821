#include "slabeling/grid_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace slabeling {

GridIndex::GridIndex(const Matrix& points, double cell_size, std::vector<int> subset)
    : points_(&points), cell_size_(cell_size) {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size))
    throw std::invalid_argument("GridIndex: cell_size must be positive and finite");
  if (points.cols() == 0) throw std::invalid_argument("GridIndex: empty cloud");

  const int dims = static_cast<int>(points.rows());
  cell_min_.assign(dims, std::numeric_limits<int64_t>::max());
  cell_max_.assign(dims, std::numeric_limits<int64_t>::min());

  auto insert = [&](int idx) {
    Key key(dims);
    for (int d = 0; d < dims; ++d) {
      key[d] = lattice(points(d, idx));
      cell_min_[d] = std::min(cell_min_[d], key[d]);
      cell_max_[d] = std::max(cell_max_[d], key[d]);
    }
    cells_[key].push_back(idx);
    ++count_;
  };

  if (subset.empty()) {
    for (int i = 0; i < static_cast<int>(points.cols()); ++i) insert(i);
  } else {
    for (int i : subset) insert(i);
  }
}

GridIndex::Key GridIndex::key_of(const Eigen::Ref<const Vector>& p) const {
  Key key(p.size());
  for (Eigen::Index d = 0; d < p.size(); ++d) key[d] = lattice(p(d));
  return key;
}

std::vector<int> GridIndex::neighbors_within(const Eigen::Ref<const Vector>& p,
                                             double r) const {
  if (r < 0.0) throw std::invalid_argument("neighbors_within: negative radius");
  std::vector<int> result;
  for_each_in_ball(p, r, [&](int idx) {
    result.push_back(idx);
    return true;
  });
  std::sort(result.begin(), result.end());
  return result;
}

}  // namespace slabeling
