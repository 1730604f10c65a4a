#pragma once

#include <Eigen/Dense>

#include <cstdlib>
#include <utility>
#include <vector>

namespace fbc {

using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

inline IntMatrix int_identity(int n) { return IntMatrix::Identity(n, n); }

inline IntMatrix int_power(const IntMatrix& m, int r) {
  IntMatrix out = int_identity(static_cast<int>(m.rows()));
  for (int i = 0; i < r; ++i) out = out * m;
  return out;
}

/// (M - I)^n = 0 for an n x n integer matrix.
inline bool is_unipotent(const IntMatrix& m) {
  const int n = static_cast<int>(m.rows());
  IntMatrix nil = m - int_identity(n);
  return int_power(nil, n).isZero();
}

inline bool congruent_identity_mod(const IntMatrix& m, long long p) {
  IntMatrix d = m - int_identity(static_cast<int>(m.rows()));
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (d(i, j) % p != 0) return false;
    }
  }
  return true;
}

/// Whether v lies in the Z-span of the columns of a. Column-echelon
/// reduction with Euclidean column operations, then forward substitution.
inline bool in_integer_column_span(IntMatrix a, IntVector v) {
  const Eigen::Index rows = a.rows();
  Eigen::Index pivot = 0;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pivots;  // (row, col)
  for (Eigen::Index r = 0; r < rows && pivot < a.cols(); ++r) {
    while (true) {
      Eigen::Index best = -1;
      for (Eigen::Index c = pivot; c < a.cols(); ++c) {
        if (a(r, c) != 0 && (best < 0 || std::llabs(a(r, c)) < std::llabs(a(r, best)))) best = c;
      }
      if (best < 0) break;
      a.col(pivot).swap(a.col(best));
      bool done = true;
      for (Eigen::Index c = pivot + 1; c < a.cols(); ++c) {
        if (a(r, c) == 0) continue;
        long long q = a(r, c) / a(r, pivot);
        a.col(c) -= q * a.col(pivot);
        if (a(r, c) != 0) done = false;
      }
      if (done) {
        pivots.emplace_back(r, pivot);
        ++pivot;
        break;
      }
    }
  }
  std::size_t next = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (next < pivots.size() && pivots[next].first == r) {
      Eigen::Index c = pivots[next].second;
      if (v(r) % a(r, c) != 0) return false;
      v -= (v(r) / a(r, c)) * a.col(c);
      ++next;
    } else if (v(r) != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace fbc
