#pragma once

// Shared construction shorthands for the test suite.

#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "hodge/filtration.hpp"
#include "hodge/matrix.hpp"
#include "hodge/rational.hpp"
#include "hodge/subspace.hpp"

namespace hodge::testing {

inline QMat qm(std::initializer_list<std::initializer_list<long>> rows) {
  QMat m(static_cast<int>(rows.size()),
         rows.size() == 0 ? 0 : static_cast<int>(rows.begin()->size()));
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (long x : r) m(i, j++) = Rat(x);
    ++i;
  }
  return m;
}

inline QVec qv(std::initializer_list<long> xs) {
  QVec v;
  for (long x : xs) v.push_back(Rat(x));
  return v;
}

inline GVec gv(std::initializer_list<Gauss> xs) { return GVec(xs); }

inline Gauss gi(long re, long im) { return Gauss(Rat(re), Rat(im)); }

inline GSub gspan(std::initializer_list<GVec> rows, int n) {
  return GSub::span(std::vector<GVec>(rows), n);
}

inline QSub qspan(std::initializer_list<QVec> rows, int n) {
  return QSub::span(std::vector<QVec>(rows), n);
}

// Q(u, v) = u^T Q v over the rationals.
inline Rat form(const QMat& Q, const QVec& u, const QVec& v) {
  QVec w = Q * v;
  Rat acc(0);
  for (size_t i = 0; i < u.size(); ++i) acc += u[i] * w[i];
  return acc;
}

}  // namespace hodge::testing
