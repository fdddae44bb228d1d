#pragma once

// Commuting SL(2) model variations: standard triples acting on a polarized
// lattice, functorial constructions (symmetric powers, tensors, duals,
// twists), orbit evaluation, weight multi-gradings, and the Hodge-norm
// band checks.

#include <optional>
#include <string>
#include <vector>

#include "hodge/hodge_structure.hpp"
#include "hodge/nilpotent.hpp"
#include "hodge/orbit.hpp"

namespace hodge {

// d commuting copies of sl2 acting on (V, Q).  For each factor j the triple
// (lower[j], Y[j], raise[j]) satisfies [Y,E] = 2E, [Y,N] = -2N, [E,N] = Y,
// every generator is an infinitesimal isometry of Q, and generators of
// distinct factors commute.  F anchors the model at the base point
// (i, ..., i): it is the Hodge filtration of a genuine polarized structure,
// and the model evaluates as
//   Phi(z) = exp(sum_j (z_j - i) lower[j]) . F
struct SL2Rep {
  int d = 0;
  int weight = 0;
  QMat Q;
  std::vector<QMat> lower;
  std::vector<QMat> raise;
  std::vector<QMat> Y;
  GFilt F;

  int dim() const { return Q.rows(); }
};

// Checks the commutation relations, isometry conditions and shape of `rep`;
// throws InvalidInput naming the first violated identity.
void validate_sl2(const SL2Rep& rep);

// Weight-1 rank-2 model: Phi(z) = span((1, z)).
SL2Rep elliptic_variation();

// Phi(z) for exact Gaussian-rational z (dimension d).
GFilt sl2_orbit_eval(const SL2Rep& rep, const GVec& z);

// Anchor filtration Phi(i, ..., i).
GFilt fsharp(const SL2Rep& rep);

// Joint eigenspace decomposition of the Y[j]; exact, verified direct sum.
MultiGrading weight_grading(const SL2Rep& rep);

// Functorial constructions; each validates its result.
SL2Rep sym_power(const SL2Rep& rep, int n);
SL2Rep tensor(const SL2Rep& a, const SL2Rep& b);      // same factors, diagonal action
SL2Rep box_tensor(const SL2Rep& a, const SL2Rep& b);  // disjoint factors, d = a.d + b.d
SL2Rep dual(const SL2Rep& rep);                       // requires unimodular Q
SL2Rep twist(const SL2Rep& rep, const HodgeStructure& H);  // tensor by a constant structure
SL2Rep tate_twist(const SL2Rep& rep, int k);               // weight -> weight - 2k
SL2Rep end_rep(const SL2Rep& rep);                         // tensor(rep, dual(rep))

// The model as a nilpotent orbit (N_j = lower[j], limit filtration F).
NilpotentOrbit as_orbit(const SL2Rep& rep);

struct NormBandRow {
  std::vector<double> y;
  double norm_sq = 0;        // |a|^2 in the metric of Phi(iy)
  double graded_sum = 0;     // sum_l (prod_j y_j^{l_j}) |a^l|^2 at the anchor
  double ratio = 0;
};

struct NormBandReport {
  std::vector<std::vector<NormBandRow>> rows;  // one trace per input vector
  double min_ratio = 0;
  double max_ratio = 0;
  double band_constant = 0;  // max(max_ratio, 1/min_ratio)
  bool bounded = false;      // ratios stayed positive and finite
};

// Compares the Hodge norm of each vector along Phi(iy), y in `grid`, with
// the graded comparison sum; the two-sided bound is the content of the
// norm-asymptotics statement for these models.  The bound only holds in the
// ordered growth regime, so each grid point must satisfy
// y_1 >= y_2 >= ... >= y_d and consecutive points must increase strictly in
// every coordinate; anything else is rejected as "grid not in regime".
NormBandReport norm_asymptotics_check(const SL2Rep& rep,
                                      const std::vector<QVec>& vectors,
                                      const std::vector<std::vector<double>>& grid);

struct InvarianceReport {
  QSub cut;         // real class-type part of F# meeting every W^j_0
  QSub invariants;  // joint kernel of all generators
  bool contained = false;
  std::vector<bool> candidate_in_cut;        // per supplied candidate
  std::vector<bool> candidate_invariant;     // per supplied candidate
  std::string detail;
};

// Real class-type vectors in the anchor filtration (level ceil(weight/2))
// lying in weight <= 0 for every partial diagonal embedding are fixed by the
// whole group: checks the inclusion exactly.  For odd weight the cut is
// forced to zero, so the inclusion is automatic there.
// Optional candidate vectors are classified individually: membership in the
// cut, and invariance under every generator.
InvarianceReport invariance_check_310(const SL2Rep& rep,
                                      const std::vector<QVec>& candidates = {});

}  // namespace hodge
