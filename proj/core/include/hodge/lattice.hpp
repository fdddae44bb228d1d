#pragma once

// Integer-lattice machinery: rational points of conjugation-stable
// subspaces, saturated integral bases, exact LDL^T positivity, and
// bounded-norm enumeration by branch and bound.

#include <vector>

#include "hodge/subspace.hpp"

namespace hodge {

// Rational vectors spanning S ∩ conj(S); when S is conjugation-stable the
// result spans S over Q(i).
QSub rational_points(const GSub& S);

bool is_integral(const QMat& m);
bool is_integral(const QVec& v);

// Smallest positive multiple with integer entries, divided by the gcd.
QVec primitive_integer_vector(const QVec& v);

// Z-basis (rows) of the saturated lattice S ∩ Z^n of a rational subspace.
QMat saturated_lattice(const QSub& S);

// Z-basis (rows) of {x ∈ Z^n : M x = 0} for integral M.
QMat integer_kernel(const QMat& M);

struct ExactLdlt {
  bool positive = false;  // all pivots positive (form positive definite)
  std::vector<Rat> diag;
  QMat lower;  // unit lower-triangular L with G = L D L^T
};

ExactLdlt ldlt(const QMat& G);  // G symmetric rational

// All integer vectors c with c^T G c <= K, G positive definite; includes 0.
std::vector<QVec> enumerate_bounded(const QMat& G, const Rat& K);

}  // namespace hodge
