#pragma once

// Float-only linear algebra: principal angles, metric projections, Hodge
// metrics at float flags, minimum-norm solves, and slope fits.  The dense
// complex kernels live in the matching translation unit; no third-party
// types appear in this interface.

#include <map>
#include <vector>

#include "hodge/filtration.hpp"
#include "hodge/matrix.hpp"

namespace hodge {

struct SlopeFit {
  double slope = 0;
  double intercept = 0;
  double rms_residual = 0;
  int points = 0;
};

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);

bool hermitian_positive_definite_float(const CMat& M, double tol = 1e-9);

// |v - proj_S(v)| / |v| in the metric's inner product, in [0, 1].
double angle_sine(const CVec& v, const CSub& S, const CMat& metric);
double angle_sine(const GVec& v, const GSub& S, const GMat& metric);

// Largest principal angle between A and B (radians); pi/2 on dim mismatch.
double largest_principal_angle(const CSub& A, const CSub& B, const CMat& metric);

// max over p of the largest principal angle between F1^p and F2^p.
double filtration_distance(const CFilt& F1, const CFilt& F2, const CMat& metric);

// First-order distance between base and the flag whose piece-p basis rows are
// perturbed by the rows of diffs[p]; stable when the perturbations are many
// orders below the float resolution of the base (no cancellation).
double flag_perturbation_distance(const CFilt& base,
                                  const std::map<int, CMat>& diffs,
                                  const CMat& metric);

CMat weil_operator_float(const CFilt& F, int weight);
CMat hodge_gram_float(const QMat& Q, const CFilt& F, int weight);

// Minimum-norm x with T x = w (least-squares when w is off the range).
CVec min_norm_preimage(const CMat& T, const CVec& w);

}  // namespace hodge
