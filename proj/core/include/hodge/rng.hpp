#pragma once

// Deterministic random data for property suites and resampling checks.

#include <cstdint>
#include <random>

#include "hodge/matrix.hpp"

namespace hodge {

class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}

  int64_t int_in(int64_t lo, int64_t hi) {
    return std::uniform_int_distribution<int64_t>(lo, hi)(eng_);
  }

  Rat rational(int64_t max_num = 5, int64_t max_den = 4) {
    return rat(int_in(-max_num, max_num), int_in(1, max_den));
  }

  Rat positive_rational(int64_t max_num = 7, int64_t max_den = 4) {
    return rat(int_in(1, max_num), int_in(1, max_den));
  }

  Gauss gauss(int64_t max_num = 5, int64_t max_den = 4) {
    return Gauss(rational(max_num, max_den), rational(max_num, max_den));
  }

  QMat matrix(int rows, int cols, int64_t max_num = 3, int64_t max_den = 2) {
    QMat m(rows, cols);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m(i, j) = rational(max_num, max_den);
    return m;
  }

  QVec vector(int n, int64_t max_num = 3, int64_t max_den = 2) {
    QVec v(n);
    for (int i = 0; i < n; ++i) v[i] = rational(max_num, max_den);
    return v;
  }

  QVec int_vector(int n, int64_t bound) {
    QVec v(n);
    for (int i = 0; i < n; ++i) v[i] = rat(int_in(-bound, bound));
    return v;
  }

  QMat invertible(int n, int64_t max_num = 3) {
    for (;;) {
      QMat m = matrix(n, n, max_num, 2);
      if (sgn(m.det()) != 0) return m;
    }
  }

  // random Jordan type conjugated by a random invertible matrix
  QMat nilpotent(int n, int64_t max_num = 3) {
    QMat J(n, n);
    int filled = 0;
    while (filled < n) {
      int block = static_cast<int>(int_in(1, n - filled));
      for (int i = 1; i < block; ++i)
        J(filled + i, filled + i - 1) = Rat(1);  // e_k -> e_{k+1} within block
      filled += block;
    }
    QMat P = invertible(n, max_num);
    return P * J * *P.inverse();
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace hodge
