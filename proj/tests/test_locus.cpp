#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "hodge/error.hpp"
#include "hodge/fixtures.hpp"
#include "hodge/lattice.hpp"
#include "hodge/locus.hpp"
#include "hodge/mixed.hpp"
#include "hodge/numeric.hpp"
#include "hodge/rng.hpp"

using namespace hodge;
using namespace hodge::testing;

namespace {

// Independent enumeration oracle: scan the integer box [-B, B]^n, keep the
// vectors that lie in the (0,0) subspace at z (exact membership in the
// evaluated F^0, which for rational vectors of a weight-0 structure is the
// whole type condition) with Q(v, v) <= K.
std::vector<QVec> brute_box_hits(const NilpotentOrbit& orbit, const GVec& z,
                                 const Rat& K, long B) {
  GSub f0 = evaluate_orbit(orbit, z).piece(0);
  const int n = orbit.dim();
  std::vector<QVec> out;
  std::vector<long> c(static_cast<size_t>(n), -B);
  for (;;) {
    QVec v(static_cast<size_t>(n));
    GVec g(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      v[static_cast<size_t>(i)] = Rat(c[static_cast<size_t>(i)]);
      g[static_cast<size_t>(i)] = Gauss(Rat(c[static_cast<size_t>(i)]));
    }
    if (form(orbit.lattice.Q, v, v) <= K && f0.contains(g)) out.push_back(v);
    int i = 0;
    while (i < n && c[static_cast<size_t>(i)] == B) c[static_cast<size_t>(i++)] = -B;
    if (i == n) break;
    ++c[static_cast<size_t>(i)];
  }
  return out;
}

bool lex_lt(const QVec& a, const QVec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::vector<QVec> sorted_vs(const std::vector<HodgeClassHit>& hits) {
  std::vector<QVec> out;
  for (const auto& h : hits) out.push_back(h.v);
  std::sort(out.begin(), out.end(), lex_lt);
  return out;
}

const QVec kId = {Rat(1), Rat(0), Rat(0), Rat(1)};
const QVec kJ = {Rat(0), Rat(-1), Rat(1), Rat(0)};
// multiplication by 2i on the lattice with period ratio 2i
const QVec kMul2i = {Rat(0), Rat(1), Rat(-4), Rat(0)};

}  // namespace

TEST_CASE("locus equations vanish identically for invariant classes") {
  VariationSample sample = fixture_sample("end_elliptic");
  LocusSystem sys = locus_equations(sample, kId);
  CHECK(sys.empty());
  GVec res = sys.residual(GVec{gi(2, 5)}, GVec{Gauss()});
  for (const auto& x : res) CHECK(x.is_zero());
}

TEST_CASE("locus equations require a class of limiting type (0,0)") {
  VariationSample sample = fixture_sample("end_elliptic");
  CHECK_THROWS_AS(locus_equations(sample, kJ), InvalidInput);
}

TEST_CASE("locus equations of a one-sided series carry its coefficients") {
  NilpotentOrbit orbit = fixture_orbit("box_e_dual");
  PowerSeries gamma;
  gamma.vars = 2;
  gamma.dim = 4;
  gamma.order = 3;
  gamma.coeffs[{1, 0}] = promote(orbit.N[0]);
  VariationSample sample = make_sample(orbit, gamma);
  LocusSystem sys = locus_equations(sample, kId);
  CHECK_FALSE(sys.empty());
  // residual at a solution of z1 + s1 = z2: zero exactly
  GVec z = {gi(3, 0), gi(4, 0)};
  GVec s = {gi(1, 0), gi(0, 0)};  // only s1 enters
  GVec res = sys.residual(z, s);
  for (const auto& x : res) CHECK(x.is_zero());
  GVec res2 = sys.residual(GVec{gi(3, 0), gi(3, 0)}, s);
  bool nonzero = false;
  for (const auto& x : res2) nonzero = nonzero || !x.is_zero();
  CHECK(nonzero);
}

TEST_CASE("exact locus solve: full space and proper diagonal") {
  NilpotentOrbit endo = fixture_orbit("end_elliptic");
  QSub full = orbit_locus_solve(endo, kId);
  CHECK(full.is_full());

  NilpotentOrbit box = fixture_orbit("box_e_dual");
  QSub diag = orbit_locus_solve(box, kId);
  CHECK(diag.dim() == 1);
  CHECK(diag.contains(qv({1, 1})));
  CHECK_FALSE(diag.contains(qv({1, 0})));
}

TEST_CASE("monodromy fixing matches the solved locus") {
  NilpotentOrbit e = fixture_orbit("elliptic");
  CHECK_FALSE(monodromy_fixes(e, qv({1, 0}), qv({1})));  // N e1 = e2
  CHECK(monodromy_fixes(e, qv({0, 1}), qv({1})));
  CHECK(monodromy_fixes(e, qv({1, 0}), qv({0})));  // trivial translation

  NilpotentOrbit box = fixture_orbit("box_e_dual");
  CHECK(monodromy_fixes(box, kId, qv({2, 2})));
  CHECK_FALSE(monodromy_fixes(box, kId, qv({1, 0})));
  CHECK_THROWS_AS(monodromy_fixes(box, kId, {rat(1, 2), Rat(0)}), InvalidInput);
}

TEST_CASE("random classes: translation invariance iff the solution contains m") {
  Rng rng(0xfee1d);
  for (const char* name : {"elliptic", "sym2_elliptic", "box_ee", "box_e_dual"}) {
    CAPTURE(name);
    NilpotentOrbit orbit = fixture_orbit(name);
    Bigrading big = deligne_bigrading(limiting_mhs(orbit).mhs);
    QSub u00 = rational_points(big.piece(0, 0));
    for (int trial = 0; trial < 25; ++trial) {
      QVec v(static_cast<size_t>(orbit.dim()), Rat(0));
      for (int i = 0; i < u00.dim(); ++i) {
        Rat c = Rat(rng.int_in(-2, 2));
        for (int j = 0; j < orbit.dim(); ++j)
          v[static_cast<size_t>(j)] += c * u00.basis()(i, j);
      }
      QVec m = rng.int_vector(orbit.r(), 3);
      QSub sol = orbit_locus_solve(orbit, v);
      CHECK(monodromy_fixes(orbit, v, m) == sol.contains(m));
    }
  }
}

TEST_CASE("enumeration matches the brute-force box oracle") {
  NilpotentOrbit endo = fixture_orbit("end_elliptic");
  GVec z2i = {gi(0, 2)};
  GVec zi = {gi(0, 1)};
  for (long k : {1L, 4L, 9L}) {
    CAPTURE(k);
    auto hits2i = enumerate_classes(endo, z2i, Rat(k));
    CHECK(sorted_vs(hits2i) == [&] {
      auto b = brute_box_hits(endo, z2i, Rat(k), 5);
      std::sort(b.begin(), b.end(), lex_lt);
      return b;
    }());
    auto hitsi = enumerate_classes(endo, zi, Rat(k));
    CHECK(sorted_vs(hitsi) == [&] {
      auto b = brute_box_hits(endo, zi, Rat(k), 5);
      std::sort(b.begin(), b.end(), lex_lt);
      return b;
    }());
  }
}

TEST_CASE("hits at the generic-looking point are identity multiples up to K=4") {
  NilpotentOrbit endo = fixture_orbit("end_elliptic");
  GVec z = {gi(0, 2)};
  CHECK(enumerate_classes(endo, z, Rat(1)).size() == 1);  // only v = 0
  auto hits4 = enumerate_classes(endo, z, Rat(4));
  CHECK(hits4.size() == 3);  // 0, +-identity
  for (const auto& h : hits4) {
    bool multiple = false;
    for (long c = -2; c <= 2; ++c) {
      QVec cid = kId;
      for (auto& x : cid) x *= Rat(c);
      multiple = multiple || h.v == cid;
    }
    CHECK(multiple);
    CHECK(h.in_w0);
  }
  // The period ratio 2i has complex multiplication by 2i: its endomorphism
  // enters the hit set once K reaches its norm 8.
  auto hits9 = enumerate_classes(endo, z, Rat(9));
  CHECK(hits9.size() == 7);
  bool found_cm = false;
  for (const auto& h : hits9) {
    if (h.v == kMul2i) {
      found_cm = true;
      CHECK(h.q_norm == Rat(8));
    }
  }
  CHECK(found_cm);
}

TEST_CASE("the CM point i carries extra classes beyond identity multiples") {
  NilpotentOrbit endo = fixture_orbit("end_elliptic");
  auto hits = enumerate_classes(endo, GVec{gi(0, 1)}, Rat(4));
  bool found_j = false, found_id = false;
  for (const auto& h : hits) {
    if (h.v == kJ) {
      found_j = true;
      CHECK(h.q_norm == Rat(2));
      CHECK_FALSE(h.in_w0);  // not asymptotic: dies along the ray
    }
    if (h.v == kId) found_id = true;
  }
  CHECK(found_j);
  CHECK(found_id);
  CHECK(hits.size() >
        enumerate_classes(endo, GVec{gi(0, 2)}, Rat(4)).size());
}

TEST_CASE("hits are sorted by norm then lexicographically, starting at 0") {
  NilpotentOrbit endo = fixture_orbit("end_elliptic");
  auto hits = enumerate_classes(endo, GVec{gi(0, 2)}, Rat(4));
  REQUIRE(!hits.empty());
  for (const auto& x : hits.front().v) CHECK(x == Rat(0));
  for (size_t i = 1; i < hits.size(); ++i)
    CHECK(hits[i - 1].q_norm <= hits[i].q_norm);
}

TEST_CASE("every hit pairs to its own Hodge norm: Q(v,v) = h(v,v)") {
  NilpotentOrbit endo = fixture_orbit("end_elliptic");
  GVec z = {gi(0, 1)};
  GMat gram = hodge_gram(endo.lattice.Q, evaluate_orbit(endo, z), 0);
  for (const auto& h : enumerate_classes(endo, z, Rat(4))) {
    GVec gv_(h.v.size());
    for (size_t i = 0; i < h.v.size(); ++i) gv_[i] = Gauss(h.v[i]);
    GVec mg = gram * gv_;  // conj(v) = v for rational v
    Gauss hv;
    for (size_t i = 0; i < gv_.size(); ++i) hv = hv + gv_[i] * mg[i];
    CHECK(hv == Gauss(h.q_norm));
  }
}

TEST_CASE("weight-0 is required for enumeration") {
  NilpotentOrbit e = fixture_orbit("elliptic");
  CHECK_THROWS_AS(enumerate_classes(e, GVec{gi(0, 1)}, Rat(1)), InvalidInput);
}

TEST_CASE("trivial rank-1 enumeration counts integer points") {
  NilpotentOrbit t = fixture_orbit("trivial_rank1");
  auto hits = enumerate_classes(t, GVec{gi(0, 3)}, Rat(4));
  CHECK(hits.size() == 5);  // 0, +-1, +-2
}

TEST_CASE("nearby-point projection: fixed classes and pointlike loci") {
  NilpotentOrbit endo = fixture_orbit("end_elliptic");
  CVec z = {CD(0.25, 3.0)};
  CVec same = project_nearby(endo, kId, z);  // locus is everything
  CHECK(std::abs(same[0] - z[0]) < 1e-12);
  CVec origin = project_nearby(endo, kJ, z);  // locus is the origin
  CHECK(std::abs(origin[0]) < 1e-12);
}

TEST_CASE("projection distance decays at the first Fourier rate on a ray") {
  // One-sided series: the true locus of the invariant class sits at
  // z1 + s1 = z2, a transcendental perturbation of the diagonal.
  NilpotentOrbit orbit = fixture_orbit("box_e_dual");
  PowerSeries gamma;
  gamma.vars = 2;
  gamma.dim = 4;
  gamma.order = 6;
  gamma.coeffs[{1, 0}] = promote(orbit.N[0]);
  VariationSample sample = make_sample(orbit, gamma);

  std::vector<double> ts = {2, 3, 4, 5, 6}, logd;
  for (double t : ts) {
    // Solve z1 + exp(2 pi i z1) = i t by fixed-point iteration.
    CD z2(0, t);
    CD z1 = z2;
    for (int it = 0; it < 8; ++it)
      z1 = z2 - std::exp(CD(0, 2 * M_PI) * z1);
    CVec z = {z1, z2};
    // The class is genuinely of type (0,0) at z for the full variation.
    CFilt at = evaluate_variation(sample, z);
    CMat metric = hodge_gram_float(orbit.lattice.Q, at, 0);
    CVec idf = promote_float(kId);
    CHECK(angle_sine(idf, at.piece(0), metric) < 1e-9);

    CVec proj = project_nearby(orbit, kId, z);
    double d = std::sqrt(std::norm(proj[0] - z[0]) + std::norm(proj[1] - z[1]));
    CHECK(d > 0);
    logd.push_back(std::log(d));
  }
  SlopeFit fit = fit_slope(ts, logd);
  CHECK(std::abs(-fit.slope - 2 * M_PI) < 0.1 * 2 * M_PI);
}

TEST_CASE("near-class test separates held classes from far ones") {
  NilpotentOrbit endo = fixture_orbit("end_elliptic");
  GVec z = {gi(0, 2)};
  HodgeStructure h = make_hodge_structure(0, endo.lattice.Q,
                                          evaluate_orbit(endo, z));
  EvaluationPoint pt = EvaluationPoint::at(z);
  CHECK(near_class_test(kId, pt, 1.0, h));
  CHECK_FALSE(near_class_test(kJ, pt, 1.0, h));
  CHECK_THROWS_AS(near_class_test(kId, pt, -1.0, h), InvalidInput);
}

TEST_CASE("finiteness harness: persistence, stabilization, exact witnesses") {
  NilpotentOrbit endo = fixture_orbit("end_elliptic");
  std::vector<EvaluationPoint> zs;
  for (int n = 1; n <= 6; ++n)
    zs.push_back(EvaluationPoint::at(GVec{gi(0, n)}));
  zs.push_back(EvaluationPoint::at(CVec{CD(0.0, 7.5)}));

  Thm25Report rep = verify_thm25(endo, zs, Rat(4), 1.0);
  REQUIRE(rep.per_point.size() == 6);
  // CM point i: all integer a*id + b*J with 2(a^2 + b^2) <= 4
  CHECK(rep.per_point[0].size() == 9);
  for (size_t t = 1; t < rep.per_point.size(); ++t)
    CHECK(rep.per_point[t].size() == 3);
  CHECK(rep.classes.size() == 9);
  CHECK(rep.persistent.size() == 3);
  CHECK(rep.transient.size() == 6);
  CHECK(rep.stabilization_index == 0);
  CHECK(rep.stabilized);
  CHECK(rep.persistent_all_in_w0);

  REQUIRE(rep.witnesses.size() == rep.persistent.size());
  for (const auto& w : rep.witnesses) {
    CHECK(w.snapped);
    CHECK(w.exact_member);
    CHECK(w.residual < 1e-9);
  }

  REQUIRE(rep.float_sines.size() == 1);  // one float point supplied
  CHECK(rep.float_sines[0].size() == rep.persistent.size());
  REQUIRE(rep.float_near.size() == 1);
  for (bool nearby : rep.float_near[0]) CHECK(nearby);
}

TEST_CASE("harness rejects malformed point sequences") {
  NilpotentOrbit endo = fixture_orbit("end_elliptic");
  std::vector<EvaluationPoint> bad1 = {EvaluationPoint::at(GVec{gi(2, 1)})};
  CHECK_THROWS_AS(verify_thm25(endo, bad1, Rat(4), 1.0), InvalidInput);
  std::vector<EvaluationPoint> bad2 = {EvaluationPoint::at(GVec{gi(0, 2)}),
                                       EvaluationPoint::at(GVec{gi(0, 1)})};
  CHECK_THROWS_AS(verify_thm25(endo, bad2, Rat(4), 1.0), InvalidInput);
}

TEST_CASE("sample harness scans floats against the full variation") {
  VariationSample sample = fixture_sample("decay_box");
  std::vector<EvaluationPoint> zs;
  for (int n = 1; n <= 4; ++n)
    zs.push_back(EvaluationPoint::at(GVec{gi(0, n), gi(0, n)}));
  zs.push_back(EvaluationPoint::at(CVec{CD(0, 4.5), CD(0, 4.5)}));
  Thm25Report rep = verify_thm25(sample, zs, Rat(4), 1.0);
  CHECK(rep.stabilized);
  CHECK(rep.persistent_all_in_w0);
  REQUIRE(rep.float_sines.size() == 1);
  for (bool nearby : rep.float_near[0]) CHECK(nearby);
}

TEST_CASE("continued-fraction rationalization") {
  CHECK(rationalize(0.5, 1e-9).value() == rat(1, 2));
  CHECK(rationalize(1.0 / 3.0, 1e-9).value() == rat(1, 3));
  CHECK(rationalize(-2.0, 1e-9).value() == Rat(-2));
  CHECK_FALSE(rationalize(0.1234567, 1e-9, 10).has_value());
}
