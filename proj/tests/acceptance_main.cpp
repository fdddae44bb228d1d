// Acceptance harness: ten end-to-end checks over the exact-arithmetic core.
// Each criterion prints one PASS/FAIL line with its wall time; the binary
// exits nonzero if any criterion fails.  Tolerances and budgets are pinned
// as constants next to the checks that use them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hodge/fixtures.hpp"
#include "hodge/json_io.hpp"
#include "hodge/lattice.hpp"
#include "hodge/locus.hpp"
#include "hodge/mixed.hpp"
#include "hodge/nilpotent.hpp"
#include "hodge/orbit.hpp"
#include "hodge/rng.hpp"
#include "hodge/sl2.hpp"
#include "hodge/unipotent.hpp"

namespace {

using namespace hodge;

constexpr double kTwoPi = 6.283185307179586;
// fitted decay exponent must land within 10% of the first Fourier mode
constexpr double kDecayRelTol = 0.10;
// norm-band constant may drift at most 5% when the grid deepens 16x
constexpr double kBandDriftTol = 0.05;
// wall-clock budgets (seconds); 0 = uncapped
constexpr double kBudgetRandomWf = 30.0;
constexpr double kBudgetLimiting = 10.0;
constexpr double kBudgetRays = 60.0;
constexpr double kBudgetDecay = 5.0;

const std::vector<std::string> kLimitingSuite = {
    "elliptic",     "sym2_elliptic", "sym3_elliptic", "sym4_elliptic",
    "end_elliptic", "box_ee",        "box_e_dual"};

Rat form(const QMat& Q, const QVec& u, const QVec& v) {
  QVec qv = Q * v;
  Rat out(0);
  for (size_t i = 0; i < u.size(); ++i) out += u[i] * qv[i];
  return out;
}

// --------------------------------------------------------------------------
// criterion 1: weight filtrations of random nilpotents
// --------------------------------------------------------------------------

bool criterion_random_wf(std::string& detail) {
  Rng rng(0xace01);
  for (int t = 0; t < 200; ++t) {
    int n = 2 + t % 9;  // dimensions 2..10
    QMat N = rng.nilpotent(n, 3);
    QFilt W = weight_filtration(N);
    if (!check_weight_filtration(N, W)) {
      detail = "characterization failed at trial " + std::to_string(t);
      return false;
    }
    for (int l = W.min_index(); l <= W.max_index(); ++l) {
      if (!W.piece(l - 2).contains(W.piece(l).image(N))) {
        detail = "shift containment failed at trial " + std::to_string(t) +
                 ", level " + std::to_string(l);
        return false;
      }
    }
  }
  return true;
}

// --------------------------------------------------------------------------
// criterion 2: limiting structures of the standard suite
// --------------------------------------------------------------------------

bool criterion_limiting(std::string& detail) {
  for (const std::string& name : kLimitingSuite) {
    LimitingMhs lim = limiting_mhs(fixture_orbit(name));
    if (!lim.mhs_report.ok()) {
      detail = name + ": limiting pair is not a mixed Hodge structure";
      return false;
    }
    if (!lim.polarized()) {
      detail = name + ": a primitive graded piece is not polarized";
      return false;
    }
    for (const auto& p : lim.primitives) {
      if (!p.form_well_defined || !p.report.ok_over_field()) {
        detail = name + ": primitive form fails at level " +
                 std::to_string(p.level);
        return false;
      }
    }
  }
  return true;
}

// --------------------------------------------------------------------------
// criterion 3: the bigrading splits both filtrations exactly
// --------------------------------------------------------------------------

bool criterion_bigrading(std::string& detail) {
  for (const std::string& name : kLimitingSuite) {
    LimitingMhs lim = limiting_mhs(fixture_orbit(name));
    Bigrading big = deligne_bigrading(lim.mhs);
    int n = fixture_orbit(name).dim();
    GGrading byw = big.by_weight();
    GFilt wprom = promote(lim.mhs.W);
    for (const auto& [l, sub] : wprom.pieces()) {
      GSub sum = GSub::zero(n);
      for (const auto& [k, piece] : byw.pieces()) {
        if (k <= l) sum = sum.sum(piece);
      }
      if (!(sum == sub)) {
        detail = name + ": weight grading misses W at level " +
                 std::to_string(l);
        return false;
      }
    }
    GGrading byp = big.by_p();
    for (const auto& [p, sub] : lim.mhs.F.pieces()) {
      GSub sum = GSub::zero(n);
      for (const auto& [k, piece] : byp.pieces()) {
        if (k >= p) sum = sum.sum(piece);
      }
      if (!(sum == sub)) {
        detail = name + ": p-grading misses F at level " + std::to_string(p);
        return false;
      }
    }
  }
  return true;
}

// --------------------------------------------------------------------------
// criterion 4: enumeration vs brute force at two evaluation points
// --------------------------------------------------------------------------

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
  std::sort(out.begin(), out.end());
  return out;
}

bool is_identity_multiple(const QVec& v) {
  return v[1] == Rat(0) && v[2] == Rat(0) && v[0] == v[3] && is_integer(v[0]);
}

bool criterion_enumeration(std::string& detail) {
  NilpotentOrbit endo = fixture_orbit("end_elliptic");
  const GVec z2i = {Gauss(Rat(0), Rat(2))};
  const GVec zi = {Gauss(Rat(0), Rat(1))};
  const QVec mul2i = {Rat(0), Rat(1), Rat(-4), Rat(0)};
  std::map<long, size_t> count_2i, count_i;

  for (long k : {1L, 4L, 9L}) {
    for (const GVec* z : {&z2i, &zi}) {
      auto hits = enumerate_classes(endo, *z, Rat(k));
      std::vector<QVec> vs;
      for (const auto& h : hits) vs.push_back(h.v);
      std::sort(vs.begin(), vs.end());
      std::vector<QVec> brute = brute_box_hits(endo, *z, Rat(k), 5);
      if (vs != brute) {
        detail = "enumeration disagrees with the box search at K = " +
                 std::to_string(k);
        return false;
      }
      (z == &z2i ? count_2i : count_i)[k] = vs.size();
      if (z == &z2i) {
        for (const QVec& v : vs) {
          if (is_identity_multiple(v)) continue;
          if (k <= 4) {
            detail = "unexpected non-scalar class below K = 9";
            return false;
          }
          if (!(v == mul2i) && !(v == QVec{Rat(0), Rat(-1), Rat(4), Rat(0)})) {
            detail = "unexpected extra class at K = 9";
            return false;
          }
        }
      } else {
        for (const QVec& v : vs) {
          // every class at the fourfold-symmetry point is a v0*id + b*J
          if (!(v[0] == v[3] && v[1] == -v[2])) {
            detail = "class at the deeper CM point leaves span{id, J}";
            return false;
          }
        }
      }
    }
  }
  bool counts_ok = count_2i[1] == 1 && count_2i[4] == 3 && count_2i[9] == 7 &&
                   count_i[1] == 1 && count_i[4] == 9 && count_i[9] == 13;
  if (!counts_ok) {
    detail = "hit counts moved off the frozen values {1,3,7} / {1,9,13}";
    return false;
  }
  detail =
      "the point 2i has complex multiplication by 2i (class norm 8), so K = 9 "
      "picks up two classes beyond the identity multiples; the box search "
      "confirms all six hit sets";
  return true;
}

// --------------------------------------------------------------------------
// criterion 5: translation invariance vs the solved locus
// --------------------------------------------------------------------------

bool criterion_monodromy(std::string& detail) {
  Rng rng(0x10c05);
  int trials = 0;
  for (const std::string& name : fixture_names()) {
    NilpotentOrbit orbit = fixture_orbit(name);
    Bigrading big = deligne_bigrading(limiting_mhs(orbit).mhs);
    QSub u00 = rational_points(big.piece(0, 0));
    for (int t = 0; t < 10; ++t) {
      QVec v(static_cast<size_t>(orbit.dim()), Rat(0));
      for (int i = 0; i < u00.dim(); ++i) {
        Rat c = Rat(rng.int_in(-3, 3));
        for (int j = 0; j < orbit.dim(); ++j)
          v[static_cast<size_t>(j)] += c * u00.basis()(i, j);
      }
      QVec m = rng.int_vector(orbit.r(), 4);
      QSub sol = orbit_locus_solve(orbit, v);
      if (monodromy_fixes(orbit, v, m) != sol.contains(m)) {
        detail = name + ": discrepancy at trial " + std::to_string(t);
        return false;
      }
      ++trials;
    }
  }
  if (trials < 100) {
    detail = "only " + std::to_string(trials) + " trials ran";
    return false;
  }
  return true;
}

// --------------------------------------------------------------------------
// criterion 6: ray persistence with exact witnesses
// --------------------------------------------------------------------------

bool ray_ok(const Thm25Report& rep, const std::string& where,
            std::string& detail) {
  if (!rep.stabilized) {
    detail = where + ": class set did not stabilize";
    return false;
  }
  if (rep.stabilization_index > 3) {
    detail = where + ": stabilization later than the fourth point";
    return false;
  }
  if (!rep.persistent_all_in_w0) {
    detail = where + ": a persistent class leaves the weight-0 subspace";
    return false;
  }
  for (const auto& w : rep.witnesses) {
    if (!w.snapped || !w.exact_member) {
      detail = where + ": witness is not exact";
      return false;
    }
  }
  return true;
}

bool criterion_rays(std::string& detail) {
  const std::vector<Rat> depths = {Rat(1),  Rat(2),  Rat(3),  Rat(4),
                                   Rat(8),  Rat(16), Rat(32), Rat(64)};
  auto ray_points = [&](int r, const Rat& x) {
    std::vector<EvaluationPoint> zs;
    for (const Rat& n : depths) {
      GVec z(static_cast<size_t>(r), Gauss(x, n));
      zs.push_back(EvaluationPoint::at(z));
    }
    return zs;
  };
  const std::vector<Rat> bases = {Rat(0), Rat(1) / 2};
  for (const char* name :
       {"trivial_rank1", "end_elliptic", "sym2_tate", "box_e_dual"}) {
    NilpotentOrbit orbit = fixture_orbit(name);
    for (const Rat& x : bases) {
      Thm25Report rep =
          verify_thm25(orbit, ray_points(orbit.r(), x), Rat(4), 1.0);
      if (!ray_ok(rep, std::string(name) + " at Re z = " + rat_string(x),
                  detail)) {
        return false;
      }
    }
  }
  VariationSample sample = fixture_sample("decay_box");
  for (const Rat& x : bases) {
    Thm25Report rep =
        verify_thm25(sample, ray_points(sample.orbit.r(), x), Rat(4), 1.0);
    if (!ray_ok(rep, std::string("decay_box at Re z = ") + rat_string(x),
                detail)) {
      return false;
    }
  }
  return true;
}

// --------------------------------------------------------------------------
// criterion 7: decay exponent of the one-parameter family
// --------------------------------------------------------------------------

bool criterion_decay(std::string& detail) {
  VariationSample sample = fixture_sample("decay_elliptic");
  std::vector<double> ts = {2, 3, 4, 5, 6, 7, 8};
  DecayReport rep = decay_check(sample, CVec{CD(0, 0)}, {1.0}, ts);
  if (rep.exact_match) {
    detail = "series part evaluated as exactly zero";
    return false;
  }
  double err = std::abs(rep.exponent - kTwoPi) / kTwoPi;
  std::ostringstream os;
  os << "fitted exponent " << rep.exponent << " vs " << kTwoPi
     << " (relative error " << err << ")";
  detail = os.str();
  return err < kDecayRelTol;
}

// --------------------------------------------------------------------------
// criterion 8: stability of the norm comparison band
// --------------------------------------------------------------------------

bool band_pair_ok(const std::string& name, int coords, std::string& detail) {
  SL2Rep rep = fixture_rep(name);
  std::vector<QVec> vectors;
  for (int k = 0; k < rep.dim(); ++k) {
    QVec e(static_cast<size_t>(rep.dim()), Rat(0));
    e[static_cast<size_t>(k)] = Rat(1);
    vectors.push_back(std::move(e));
  }
  auto grid_to = [&](double tau_max) {
    std::vector<std::vector<double>> grid;
    for (double tau = 2; tau <= tau_max; tau *= 2) {
      std::vector<double> row;
      for (int c = coords - 1; c >= 0; --c) row.push_back(tau * (c + 1));
      grid.push_back(row);
    }
    return grid;
  };
  NormBandReport a = norm_asymptotics_check(rep, vectors, grid_to(16));
  NormBandReport b = norm_asymptotics_check(rep, vectors, grid_to(256));
  if (!a.bounded || !b.bounded) {
    detail = name + ": ratios left the positive band";
    return false;
  }
  double slack = 1e-12;
  if (a.max_ratio > a.band_constant + slack ||
      1.0 / a.min_ratio > a.band_constant + slack) {
    detail = name + ": band constant does not cover both sides";
    return false;
  }
  double drift = std::abs(b.band_constant - a.band_constant) / a.band_constant;
  if (drift >= kBandDriftTol) {
    std::ostringstream os;
    os << name << ": band constant drifted by " << drift
       << " when the grid deepened from 16 to 256";
    detail = os.str();
    return false;
  }
  return true;
}

bool criterion_norm_band(std::string& detail) {
  return band_pair_ok("elliptic", 1, detail) &&
         band_pair_ok("box_ee", 2, detail);
}

// --------------------------------------------------------------------------
// criterion 9: invariant classes of random models stay inside the cut
// --------------------------------------------------------------------------

bool criterion_invariance(std::string& detail) {
  for (unsigned seed = 1; seed <= 50; ++seed) {
    SL2Rep rep = random_model(seed);
    InvarianceReport r = invariance_check_310(rep);
    if (!r.contained) {
      detail = "containment failed for the model of seed " +
               std::to_string(seed) + ": " + r.detail;
      return false;
    }
  }
  return true;
}

// --------------------------------------------------------------------------
// criterion 10: semicontinuity and exact alignment under perturbation
// --------------------------------------------------------------------------

bool criterion_alignment(std::string& detail) {
  const std::vector<std::string> pool = {"elliptic", "sym2_elliptic",
                                         "end_elliptic", "sym2_tate",
                                         "box_ee"};
  struct Entry {
    QFilt W;
    GFilt F;
    std::vector<QMat> N;
    int n = 0;
  };
  std::vector<Entry> entries;
  for (const std::string& name : pool) {
    NilpotentOrbit orbit = fixture_orbit(name);
    LimitingMhs lim = limiting_mhs(orbit);
    entries.push_back({lim.mhs.W, lim.mhs.F, orbit.N, orbit.dim()});
  }

  Rng rng(0xa11c0);

  // Semicontinuity: a small rational perturbation of F can only cut the
  // intersection dimensions with W down, never up.
  for (int t = 0; t < 100; ++t) {
    const Entry& e = entries[static_cast<size_t>(rng.int_in(
        0, static_cast<int>(entries.size()) - 1))];
    int plo = e.F.min_index(), phi = e.F.max_index();
    auto base = intersection_pattern(e.W, e.F, plo, phi);
    GMat g(e.n, e.n);
    for (;;) {
      for (int i = 0; i < e.n; ++i)
        for (int j = 0; j < e.n; ++j) g(i, j) = rng.gauss();
      g = GMat::identity(e.n) + Gauss(Rat(1, 997)) * g;
      if (g.inverse()) break;
    }
    auto pert = intersection_pattern(e.W, e.F.apply(g), plo, phi);
    for (const auto& [key, dim] : base) {
      if (pert.at(key) > dim) {
        detail = "intersection dimension grew at trial " + std::to_string(t);
        return false;
      }
    }
  }

  // Alignment: for F2 moved by an exact W-lowering automorphism, the aligner
  // must return g with g W = W and g F = F2, both as exact identities.
  for (int t = 0; t < 100; ++t) {
    const Entry& e = entries[static_cast<size_t>(rng.int_in(
        0, static_cast<int>(entries.size()) - 1))];
    QMat X(e.n, e.n);
    for (const QMat& nj : e.N) X = X + rng.rational(3, 2) * nj;
    X = X + rng.rational(3, 2) * (e.N.front() * e.N.back());
    GMat u = promote(exp_nilpotent(X));
    GFilt F2 = e.F.apply(u);
    GMat g = align_mhs(e.W, e.F, F2);
    if (!(promote(e.W).apply(g) == promote(e.W))) {
      detail = "aligned map moved W at trial " + std::to_string(t);
      return false;
    }
    if (!(e.F.apply(g) == F2)) {
      detail = "aligned map missed F2 at trial " + std::to_string(t);
      return false;
    }
  }

  // Disagreeing dimension patterns must be rejected up front.
  const Entry& e = entries.front();
  GFilt broken = e.F;
  broken.set(e.F.max_index(), GSub::zero(e.n));
  bool threw = false;
  try {
    align_mhs(e.W, e.F, broken);
  } catch (const InvalidInput&) {
    threw = true;
  }
  if (!threw) {
    detail = "alignment accepted filtrations with different patterns";
    return false;
  }
  return true;
}

}  // namespace

int main() {
  struct Row {
    int id;
    const char* label;
    std::function<bool(std::string&)> fn;
    double budget;
  };
  const std::vector<Row> rows = {
      {1, "weight filtrations of 200 random nilpotents verified",
       criterion_random_wf, kBudgetRandomWf},
      {2, "limiting structures of the standard suite are polarized",
       criterion_limiting, kBudgetLimiting},
      {3, "canonical bigrading splits W and F exactly", criterion_bigrading,
       0},
      {4, "bounded-norm enumeration matches brute-force box search",
       criterion_enumeration, 0},
      {5, "translation invariance matches the solved locus",
       criterion_monodromy, 0},
      {6, "vertical-ray persistence stabilizes with exact witnesses",
       criterion_rays, kBudgetRays},
      {7, "locus-distance decay matches the first Fourier mode",
       criterion_decay, kBudgetDecay},
      {8, "Hodge norms stay in a stable two-sided band", criterion_norm_band,
       0},
      {9, "invariant classes of random models stay in the cut",
       criterion_invariance, 0},
      {10, "intersection semicontinuity and exact alignment",
       criterion_alignment, 0},
  };

  bool all = true;
  for (const Row& row : rows) {
    auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = row.fn(detail);
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("unexpected error: ") + e.what();
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    if (ok && row.budget > 0 && secs > row.budget) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += "exceeded the " + std::to_string(row.budget) + "s budget";
    }
    std::printf("criterion %d: %s — %s [%.1fs]\n", row.id,
                ok ? "PASS" : "FAIL", row.label, secs);
    if (!detail.empty()) std::printf("  note: %s\n", detail.c_str());
    all = all && ok;
  }
  return all ? 0 : 1;
}
