#pragma once

// Nilpotent orbits and truncated-series variations: validated orbit data,
// exact evaluation of the period map, limiting mixed Hodge structures with
// graded polarization checks, rescalings, and decay diagnostics.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hodge/hodge_structure.hpp"
#include "hodge/mixed.hpp"
#include "hodge/nilpotent.hpp"
#include "hodge/numeric.hpp"

namespace hodge {

CVec to_complex(const GVec& v);
CMat to_complex(const GMat& m);

// Truncated power series in `vars` variables with matrix coefficients; all
// terms of total degree > order are unknown and bounded via tail_bound.
struct PowerSeries {
  int vars = 0;
  int dim = 0;    // coefficients are dim x dim
  int order = 0;  // truncation order (max stored total degree)
  std::map<std::vector<int>, GMat> coeffs;  // multi-degree -> coefficient

  bool zero() const;
  GMat eval(const GVec& s) const;
  CMat eval(const CVec& s) const;
  double coefficient_bound() const;      // max entry magnitude over terms
  double tail_bound(double rho) const;   // bound on dropped terms, |s_j| <= rho
};

PowerSeries zero_series(int vars, int dim);

// Evaluation points carry exact coordinates when available; the punctured
// coordinates s_j = exp(2 pi i z_j) exist only as floats.
struct EvaluationPoint {
  std::optional<GVec> exact;
  CVec z;

  int r() const { return static_cast<int>(z.size()); }
  CVec s() const;
  static EvaluationPoint at(const GVec& z);
  static EvaluationPoint at(const CVec& z);
};

struct NilpotentOrbit {
  PolarizedLattice lattice;
  std::vector<QMat> N;  // commuting integral nilpotents, infinitesimal isometries
  GFilt F;              // limiting Hodge filtration

  int r() const { return static_cast<int>(N.size()); }
  int weight() const { return lattice.weight; }
  int dim() const { return lattice.rank; }
  QMat cone_sum() const;
};

// Validates shapes, lattice invariants, integrality, nilpotency, pairwise
// commutation, the isometry condition N^T Q + Q N = 0, horizontality
// N F^p ⊆ F^{p-1}, and that every N_j has type (-1,-1) for the limiting
// mixed Hodge structure; throws naming the first failure.
NilpotentOrbit make_orbit(PolarizedLattice lattice, std::vector<QMat> N, GFilt F);

GFilt evaluate_orbit(const NilpotentOrbit& orbit, const GVec& z);
CFilt evaluate_orbit_float(const NilpotentOrbit& orbit, const CVec& z);

struct LimitingMhs {
  MixedHodgeStructure mhs;  // (shifted cone weight filtration, F)
  MhsReport mhs_report;
  struct PrimitivePart {
    int level = 0;           // l >= 0: piece sits in weight w + l
    int graded_dim = 0;      // dim Gr_{w+l}
    GSub primitive;          // kernel of N^{l+1} in Gr_{w+l} coordinates
    bool form_well_defined = false;  // Q(., N^l .) descends to the quotient
    PolarizationReport report;       // judged over Q (integrality exempt)
  };
  std::vector<PrimitivePart> primitives;

  bool polarized() const;
  std::string describe() const;
};

// Limiting mixed Hodge structure of the orbit together with the primitive
// polarization checks for N = sum of the generators.
LimitingMhs limiting_mhs(const NilpotentOrbit& orbit);

struct OrbitPolarizationReport {
  struct Row {
    Rat y;
    PolarizationReport polarization;
  };
  std::vector<Row> rows;
  std::optional<Rat> first_all_pass_y;  // smallest sampled y from which on all pass
  bool all_pass() const;
  std::string describe() const;
};

// Samples z = i y (1,...,1) with y = y_threshold * 2^t, t < samples, and runs
// the full polarization check on the evaluated filtration at each point.
OrbitPolarizationReport is_polarized_orbit(const NilpotentOrbit& orbit,
                                           const Rat& y_threshold, int samples);

struct VariationSample {
  NilpotentOrbit orbit;
  PowerSeries gamma;  // Gamma(0) = 0, coefficients in the lowering algebra
};

// Verifies Gamma(0) = 0 and that every coefficient lies in the lowering
// algebra b = ⊕_{p<0} g^p of the orbit's limiting mixed Hodge structure.
VariationSample make_sample(NilpotentOrbit orbit, PowerSeries gamma);

// Float evaluation at z; errors with NumericalUnderflow when the series
// tail bound at |s| exceeds 1e-12.
CFilt evaluate_variation(const VariationSample& sample, const CVec& z);
// Exact evaluation with the punctured coordinates supplied directly.
GFilt evaluate_variation_exact(const VariationSample& sample, const GVec& z,
                               const GVec& s);

struct DecayReport {
  std::vector<double> t_grid;
  std::vector<double> inf_y;
  std::vector<double> distances;
  bool exact_match = false;  // Gamma = 0: distances identically zero
  SlopeFit fit;              // log(distance) against -2 pi inf_y; slope ~ 1
  double exponent = 0;       // fitted decay rate per unit inf_y (~ 2 pi)
  std::string describe() const;
};

// Distance between the variation and its orbit part along the ray
// z(t) = z0 + i t * direction, measured in the Hodge metric at the
// variation's point; the difference vectors are formed structurally from
// the series so deep-ray distances do not cancel away.
DecayReport decay_check(const VariationSample& sample, const CVec& z0,
                        const std::vector<double>& direction,
                        const std::vector<double>& t_grid);

// Multiplication by prod_j tau_j^{l_j/2} on the graded piece A^l.  The exact
// overloads require every tau_j to be a square of a rational.
QMat rescaling_matrix(const MultiGrading& A, const std::vector<Rat>& tau);
QVec apply_rescaling(const MultiGrading& A, const std::vector<Rat>& tau, const QVec& v);
GFilt apply_rescaling(const MultiGrading& A, const std::vector<Rat>& tau, const GFilt& F);
CVec apply_rescaling(const MultiGrading& A, const std::vector<double>& tau, const CVec& v);

}  // namespace hodge
