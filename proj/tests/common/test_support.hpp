#pragma once

#include "slabeling/geometry.hpp"
#include "slabeling/rng.hpp"

#include <Eigen/Dense>

namespace slabeling::testing {

inline Matrix random_gaussian(CounterRng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r) m(r, c) = rng.next_normal();
  return m;
}

inline Subspace random_subspace(CounterRng& rng, int ambient, int dim) {
  for (;;) {
    auto s = orthonormalize(random_gaussian(rng, ambient, dim));
    if (s) return *s;
  }
}

/// Haar-ish random rotation via QR with sign fix.
inline Matrix random_rotation(CounterRng& rng, int n) {
  const Matrix g = random_gaussian(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i)
    if (r(i, i) < 0) q.col(i) = -q.col(i);
  return q;
}

inline Vector random_unit(CounterRng& rng, int n) {
  for (;;) {
    Vector v = random_gaussian(rng, n, 1).col(0);
    if (v.norm() > 1e-9) return v.normalized();
  }
}

}  // namespace slabeling::testing
