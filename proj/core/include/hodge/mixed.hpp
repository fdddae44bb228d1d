#pragma once

// Mixed Hodge structures (W increasing and rational, F decreasing over Q(i)),
// graded purity checks, the canonical bigrading I^{p,q} splitting both
// filtrations, and alignment of two mixed structures sharing W.

#include <utility>
#include <vector>

#include "hodge/hodge_structure.hpp"

namespace hodge {

struct MixedHodgeStructure {
  QFilt W;  // increasing, rational
  GFilt F;  // decreasing, Gaussian-rational
  int dim() const { return F.ambient_dim(); }
};

// Gr^W_k presented by an echelon complement, with the induced filtration in
// quotient coordinates.
struct GradedPiece {
  int weight = 0;
  QuotientMap<Gauss> quotient;
  GFilt induced_F;
};

GradedPiece graded_piece(const MixedHodgeStructure& m, int k);

struct GradedVerdict {
  int weight = 0;
  int dim = 0;
  bool pure = false;
};

struct MhsReport {
  bool shapes_ok = false;  // W rational increasing, F decreasing, nested
  std::vector<GradedVerdict> graded;
  bool ok() const {
    if (!shapes_ok) return false;
    for (const auto& g : graded)
      if (!g.pure) return false;
    return true;
  }
  std::string describe() const;
};

MhsReport is_mhs(const MixedHodgeStructure& m);

// The two-index grading I^{p,q}.
struct Bigrading {
  int n = 0;
  std::map<std::pair<int, int>, GSub> pieces;

  GSub piece(int p, int q) const {
    auto it = pieces.find({p, q});
    return it == pieces.end() ? GSub::zero(n) : it->second;
  }

  GGrading by_weight() const;  // index p+q; splits W
  GGrading by_p() const;       // index p;   splits F

  // dims keyed by (p,q); zero pieces omitted
  std::map<std::pair<int, int>, int> dimension_pattern() const;
};

// Closed-formula bigrading; verifies the direct-sum property and both
// splitting identities (and conj(I^{p,q}) = I^{q,p} modulo lower terms)
// before returning.
Bigrading deligne_bigrading(const MixedHodgeStructure& m);

// p-degree-r component of the endomorphism X relative to the bigrading
// (maps I^{p,q} into the p+r column).
GMat end_p_component(const Bigrading& big, const GMat& X, int r);

// X lies in ⊕_{r<0} (p-degree r) — the lowering algebra of the MHS.
bool in_lowering_algebra(const Bigrading& big, const GMat& X);

// dim(W_w ∩ F^p) for w over W's support and p in [plo, phi] (defaulting to
// F's own support); used for the alignment precondition and for
// semicontinuity tests.
std::map<std::pair<int, int>, int> intersection_pattern(const QFilt& W,
                                                        const GFilt& F);
std::map<std::pair<int, int>, int> intersection_pattern(const QFilt& W,
                                                        const GFilt& F,
                                                        int plo, int phi);

// Invertible g with g·W = W and g·F = F2, built by matching the echelon
// bases of the two bigradings piece by piece.  Throws InvalidInput when the
// intersection-dimension patterns disagree, VerificationFailure if the
// asserted identities fail afterwards (which indicates invalid input).
GMat align_mhs(const QFilt& W, const GFilt& F, const GFilt& F2);

}  // namespace hodge
