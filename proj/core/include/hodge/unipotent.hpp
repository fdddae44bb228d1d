#pragma once

// Exact exponential / logarithm between nilpotent and unipotent matrices.
// The series terminate; nilpotency is checked and violations throw.

#include "hodge/matrix.hpp"

namespace hodge {

template <class K>
int nilpotency_index(const Mat<K>& N) {
  if (N.rows() != N.cols()) throw DimensionMismatch("nilpotency of non-square");
  Mat<K> p = N;
  for (int k = 1; k <= N.rows(); ++k) {
    if (p.is_zero()) return k;
    p = p * N;
  }
  if (p.is_zero()) return N.rows();
  throw InvalidInput("matrix is not nilpotent");
}

template <class K>
bool is_nilpotent(const Mat<K>& N) {
  if (N.rows() != N.cols()) return false;
  return N.pow(N.rows()).is_zero();
}

template <class K>
Mat<K> exp_nilpotent(const Mat<K>& N) {
  static_assert(FieldTraits<K>::exact, "exact exponential only");
  int n = N.rows();
  Mat<K> sum = Mat<K>::identity(n);
  Mat<K> term = Mat<K>::identity(n);
  for (int k = 1; k <= n; ++k) {
    term = scalar_from_rat<K>(Rat(1, k)) * (term * N);
    if (term.is_zero()) return sum;
    sum += term;
  }
  if (!(term * N).is_zero()) throw InvalidInput("exp of a non-nilpotent matrix");
  return sum;
}

template <class K>
Mat<K> log_unipotent(const Mat<K>& U) {
  static_assert(FieldTraits<K>::exact, "exact logarithm only");
  int n = U.rows();
  Mat<K> D = U - Mat<K>::identity(n);
  if (!is_nilpotent(D)) throw InvalidInput("log of a non-unipotent matrix");
  Mat<K> sum(n, n);
  Mat<K> p = Mat<K>::identity(n);
  for (int k = 1; k <= n; ++k) {
    p = p * D;
    if (p.is_zero()) break;
    Rat c = (k % 2 == 1) ? Rat(1, k) : Rat(-1, k);
    sum += scalar_from_rat<K>(c) * p;
  }
  return sum;
}

template <class K>
Mat<K> unipotent_sqrt(const Mat<K>& U) {
  Mat<K> half = scalar_from_rat<K>(Rat(1, 2)) * log_unipotent(U);
  return exp_nilpotent(half);
}

}  // namespace hodge
