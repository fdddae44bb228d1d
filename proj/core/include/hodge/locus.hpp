#pragma once

// The Hodge-locus engine: locus equations for a class on a variation, exact
// solving on nilpotent orbits, the monodromy-fixing criterion, bounded-norm
// integral class enumeration at exact points, nearby-point projection, and
// the finiteness/membership verification harness.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hodge/orbit.hpp"

namespace hodge {

// The condition "v stays of type (0,0)" in coordinates: one scalar equation
// per ambient coordinate alpha,
//   sum_j linear(alpha, j) z_j + gamma^alpha(s) = 0,
// with rational linear part linear(alpha, j) = (N_j v)_alpha and truncated
// series part gamma(s) = (degree -1 part of Gamma(s)) applied to v.
struct LocusSystem {
  QVec v;
  QMat linear;  // (dim V) x r
  int vars = 0;
  int order = 0;
  std::map<std::vector<int>, GVec> series;  // multi-degree -> coefficient vector

  bool empty() const;  // no equation has a nonzero term
  GVec residual(const GVec& z, const GVec& s) const;
};

// Requires v (promoted) to lie in the (0,0) piece of the limiting bigrading;
// errors otherwise (re-center the family before calling).
LocusSystem locus_equations(const VariationSample& sample, const QVec& v);

// Exact solution set {z : sum_j z_j N_j v = 0} as a rational subspace of the
// parameter space, verified by an exact membership test at a sample point of
// the solution set.  Requires v in the (0,0) piece of the limiting bigrading.
QSub orbit_locus_solve(const NilpotentOrbit& orbit, const QVec& v);

// True iff sum_i m_i N_i v = 0; the equivalent fixed-point statement
// exp(sum_i m_i N_i) v = v is computed independently and compared.
bool monodromy_fixes(const NilpotentOrbit& orbit, const QVec& v, const QVec& m);

struct WitnessReport {
  CVec z;                       // projected point with sum z_j N_j v = 0
  bool snapped = false;         // coordinates rationalized within 1e-9
  std::optional<GVec> z_exact;  // present when snapped
  bool exact_member = false;    // v in Phi^0_un(z_exact), verified exactly
  double residual = 0;          // float sine of the angle to F^0 after untwisting
};

struct HodgeClassHit {
  QVec v;
  EvaluationPoint z;
  Rat q_norm;
  bool in_w0 = false;
  std::optional<WitnessReport> witness;
};

// All integral classes v in the rational (0,0) subspace at the exact point z
// with Q(v,v) <= K, including v = 0, sorted by (q_norm, lex v).  Requires
// weight 0 (Tate-twist first) and errors when Q fails to be positive
// definite on that subspace.
std::vector<HodgeClassHit> enumerate_classes(const NilpotentOrbit& orbit,
                                             const GVec& z, const Rat& K);
// Enumeration on the orbit part of the sample (the series part is analyzed
// by the float scans and decay diagnostics, never exactly).
std::vector<HodgeClassHit> enumerate_classes(const VariationSample& sample,
                                             const GVec& z, const Rat& K);

// Nearest point of {z' : sum_j z'_j N_j v = 0}: z' = z - x with x the
// minimum-norm solution of T x = T z, T = (N_1 v | ... | N_r v).
CVec project_nearby(const NilpotentOrbit& orbit, const QVec& v, const CVec& z);

// True iff the sine of the angle between v and F^0 of H, in the Hodge metric
// of H, is at most exp(-alpha * sup_j Im z_j).
bool near_class_test(const QVec& v, const EvaluationPoint& z, double alpha,
                     const HodgeStructure& H);

struct Thm25Report {
  std::vector<std::vector<HodgeClassHit>> per_point;  // one list per exact z
  std::vector<QVec> classes;     // union over exact points, sorted
  std::vector<QVec> persistent;  // classes hit at every exact point
  std::vector<QVec> transient;   // union minus persistent (non-asymptotic)
  int stabilization_index = -1;  // first exact point reaching the final union
  bool stabilized = false;       // the final exact point added no new class
  bool persistent_all_in_w0 = false;
  std::vector<WitnessReport> witnesses;  // one per persistent class, deepest z
  std::vector<std::vector<double>> float_sines;  // float points x persistent
  std::vector<std::vector<bool>> float_near;     // near-class verdicts
  std::string describe() const;
};

// Runs the enumeration at every exact point of the sequence (real parts in
// [0,1], strictly increasing inf Im), collects union/persistent classes,
// checks exact W_0 membership of the persistent ones, searches limiting
// witnesses at the deepest point, and scans float points for near-classes.
Thm25Report verify_thm25(const NilpotentOrbit& orbit,
                         const std::vector<EvaluationPoint>& zs, const Rat& K,
                         double alpha);
// Same harness with the float scans evaluated on the full variation.
Thm25Report verify_thm25(const VariationSample& sample,
                         const std::vector<EvaluationPoint>& zs, const Rat& K,
                         double alpha);

// Best rational p/q with |x - p/q| <= tol and q <= max_den, via continued
// fractions; empty when no such approximation exists.
std::optional<Rat> rationalize(double x, double tol, long max_den = 1000000);

}  // namespace hodge
