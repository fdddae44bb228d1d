#pragma once

// Pure Hodge structures of weight w on Q^n, given by a decreasing filtration
// F on the complexification (entries in Q(i)) together with a rational
// bilinear form Q with Q^T = (-1)^w Q.
//
// Conventions: V^{p,q} = F^p ∩ conj(F^q) with p + q = w; the Weil operator
// acts on V^{p,q} as i^{p-q}; the associated hermitian form is
// h(u,v) = Q(C u, conj v), encoded by the Gram matrix M = C^T Q so that
// h(u,v) = u^T M conj(v).  All positivity checks are exact (Sylvester minors
// of the hermitian Gram matrix, which are real rationals).

#include <map>
#include <string>

#include "hodge/grading.hpp"

namespace hodge {

// Integral bilinear form of a fixed parity: Q^T = (-1)^w Q, nondegenerate,
// integer entries.  Aggregate construction performs no checks (reports need
// to describe broken data); make_lattice validates.
struct PolarizedLattice {
  int rank = 0;
  int weight = 0;
  QMat Q;
};

// Throws InvalidInput naming the first violated lattice invariant.
PolarizedLattice make_lattice(int weight, QMat Q);

struct HodgeStructure {
  PolarizedLattice lattice;
  GFilt F;  // decreasing filtration on the complexification

  int weight() const { return lattice.weight; }
  const QMat& Q() const { return lattice.Q; }
  int dim() const { return F.ambient_dim(); }
};

inline HodgeStructure make_hodge_structure(int weight, QMat Q, GFilt F) {
  return HodgeStructure{PolarizedLattice{Q.rows(), weight, std::move(Q)}, std::move(F)};
}

bool is_weight_symmetric(const QMat& Q, int weight);  // Q^T == (-1)^w Q
bool is_nondegenerate(const QMat& Q);

// F^p ⊕ conj(F^{w+1-p}) = V for every p.
bool is_pure(const GFilt& F, int weight);

// Grading by p with pieces V^{p, w-p}; throws VerificationFailure when the
// pieces fail to give a direct sum decomposition.
GGrading hodge_decomposition(const GFilt& F, int weight);

std::map<int, int> hodge_numbers(const GFilt& F, int weight);  // p -> h^{p,w-p}

GMat weil_operator(const GFilt& F, int weight);

// Gram matrix M = C^T Q of h(u,v) = Q(Cu, conj v).
GMat hodge_gram(const QMat& Q, const GFilt& F, int weight);

// Q(F^p, F^{w-p+1}) = 0 for every p.
bool first_bilinear_relation(const QMat& Q, const GFilt& F, int weight);

// M = M^† and all leading principal minors (real rationals) positive.
bool is_hermitian(const GMat& M);
bool hermitian_positive_definite(const GMat& M);

struct PolarizationReport {
  bool integral = false;
  bool symmetry_ok = false;
  bool nondegenerate = false;
  bool pure = false;
  bool orthogonality_ok = false;
  bool positive = false;
  bool ok() const { return integral && ok_over_field(); }
  // Forms induced on graded or primitive pieces live over Q, not over the
  // lattice; they are judged without the integrality requirement.
  bool ok_over_field() const {
    return symmetry_ok && nondegenerate && pure && orthogonality_ok && positive;
  }
  std::string describe() const;
};

PolarizationReport check_polarization(const HodgeStructure& h);
inline bool is_polarized(const HodgeStructure& h) {
  return check_polarization(h).ok();
}

}  // namespace hodge
