#include "hodge/locus.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <set>
#include <sstream>

#include "hodge/error.hpp"
#include "hodge/lattice.hpp"
#include "hodge/unipotent.hpp"

namespace hodge {

namespace {

QMat class_map(const NilpotentOrbit& orbit, const QVec& v) {
  // column j = N_j v
  QMat T(orbit.dim(), orbit.r());
  for (int j = 0; j < orbit.r(); ++j) {
    QVec w = orbit.N[j] * v;
    for (int i = 0; i < orbit.dim(); ++i) T(i, j) = w[i];
  }
  return T;
}

void require_centered(const NilpotentOrbit& orbit, const QVec& v) {
  if (static_cast<int>(v.size()) != orbit.dim())
    throw DimensionMismatch("class has the wrong length");
  Bigrading big = deligne_bigrading(limiting_mhs(orbit).mhs);
  if (!big.piece(0, 0).contains(promote(v)))
    throw InvalidInput(
        "the class is not in the (0,0) piece of the limiting bigrading; "
        "re-center the family first");
}

QFilt limit_weight_filtration(const NilpotentOrbit& orbit) {
  return cone_weight_filtration(make_cone(orbit.N)).shifted(-orbit.weight());
}

bool lex_less(const QVec& a, const QVec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                      [](const Rat& x, const Rat& y) { return x < y; });
}

double float_abs(const Gauss& g) { return std::abs(to_complex(g)); }

// Untwists v at z' and measures its angle to F^0 with the flat metric; this
// is the uncertified evidence that v lies in the limiting filtration at z'.
double untwisted_residual(const NilpotentOrbit& orbit, const QVec& v, const CVec& zp) {
  const int n = orbit.dim();
  CMat A(n, n);
  for (int j = 0; j < orbit.r(); ++j)
    A = A + (-zp[j]) * promote_float(orbit.N[j]);
  CMat E = CMat::identity(n);
  CMat term = CMat::identity(n);
  for (int k = 1; k <= n; ++k) {
    term = term * A;
    term = CD(1.0 / k, 0) * term;
    E = E + term;
  }
  CVec u = E * promote_float(v);
  if (vec_is_zero(u, 1e-300)) return 0.0;
  return angle_sine(u, promote_float(orbit.F.piece(0)), CMat::identity(n));
}

WitnessReport witness_search(const NilpotentOrbit& orbit, const QVec& v,
                             const CVec& z) {
  WitnessReport w;
  w.z = project_nearby(orbit, v, z);
  w.residual = untwisted_residual(orbit, v, w.z);
  GVec exact(w.z.size());
  bool ok = true;
  for (std::size_t j = 0; j < w.z.size() && ok; ++j) {
    auto re = rationalize(w.z[j].real(), 1e-9);
    auto im = rationalize(w.z[j].imag(), 1e-9);
    if (!re || !im) ok = false;
    else exact[j] = Gauss(*re, *im);
  }
  if (!ok) return w;
  w.snapped = true;
  w.z_exact = exact;
  w.exact_member = evaluate_orbit(orbit, exact).piece(0).contains(promote(v));
  return w;
}

}  // namespace

bool LocusSystem::empty() const {
  if (!linear.is_zero()) return false;
  for (const auto& [deg, c] : series)
    if (!vec_is_zero(c)) return false;
  return true;
}

GVec LocusSystem::residual(const GVec& z, const GVec& s) const {
  if (static_cast<int>(z.size()) != vars || static_cast<int>(s.size()) != vars)
    throw DimensionMismatch("residual evaluated with the wrong number of variables");
  GVec out = promote(linear) * z;
  for (const auto& [deg, c] : series) {
    Gauss factor(Rat(1));
    for (int j = 0; j < vars; ++j)
      for (int k = 0; k < deg[j]; ++k) factor = factor * s[j];
    out = out + factor * c;
  }
  return out;
}

LocusSystem locus_equations(const VariationSample& sample, const QVec& v) {
  const NilpotentOrbit& orbit = sample.orbit;
  require_centered(orbit, v);
  Bigrading big = deligne_bigrading(limiting_mhs(orbit).mhs);
  LocusSystem sys;
  sys.v = v;
  sys.vars = orbit.r();
  sys.order = sample.gamma.order;
  sys.linear = class_map(orbit, v);
  GVec gv = promote(v);
  for (const auto& [deg, c] : sample.gamma.coeffs) {
    GVec w = end_p_component(big, c, -1) * gv;
    if (!vec_is_zero(w)) sys.series[deg] = w;
  }
  return sys;
}

QSub orbit_locus_solve(const NilpotentOrbit& orbit, const QVec& v) {
  require_centered(orbit, v);
  QMat T = class_map(orbit, v);
  QSub solution = QSub::span(T.kernel());
  // exact membership check at a sample point of the solution set
  QVec sample = zero_vec<Rat>(orbit.r());
  for (int i = 0; i < solution.dim(); ++i)
    sample = sample + solution.basis().row(i);
  GVec z(orbit.r());
  for (int j = 0; j < orbit.r(); ++j) z[j] = Gauss(sample[j]);
  if (!evaluate_orbit(orbit, z).piece(0).contains(promote(v)))
    throw VerificationFailure(
        "solved locus fails the membership test; the class is not centered");
  return solution;
}

bool monodromy_fixes(const NilpotentOrbit& orbit, const QVec& v, const QVec& m) {
  if (static_cast<int>(m.size()) != orbit.r())
    throw DimensionMismatch("one integer per variable is required");
  if (!is_integral(m)) throw InvalidInput("monodromy exponents must be integers");
  if (static_cast<int>(v.size()) != orbit.dim())
    throw DimensionMismatch("class has the wrong length");
  QMat A(orbit.dim(), orbit.dim());
  for (int j = 0; j < orbit.r(); ++j) A = A + m[j] * orbit.N[j];
  bool linear = vec_is_zero(A * v);
  bool fixed = exp_nilpotent(A) * v == v;
  if (linear != fixed)
    throw VerificationFailure("the two monodromy-fixing criteria disagree");
  return linear;
}

std::vector<HodgeClassHit> enumerate_classes(const NilpotentOrbit& orbit,
                                             const GVec& z, const Rat& K) {
  if (orbit.weight() != 0)
    throw InvalidInput("enumeration expects weight 0; Tate-twist the data first");
  if (!(K > 0)) throw InvalidInput("the norm bound must be positive");
  if (static_cast<int>(z.size()) != orbit.r())
    throw DimensionMismatch("evaluation point has the wrong number of variables");

  GSub F0 = evaluate_orbit(orbit, z).piece(0);
  QSub U = rational_points(F0.intersect(F0.conjugate()));
  QMat L = saturated_lattice(U);
  const int m = L.rows();
  QMat G(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      QVec Qb = orbit.lattice.Q * L.row(j);
      Rat s(0);
      for (int k = 0; k < orbit.dim(); ++k) s += L(i, k) * Qb[k];
      G(i, j) = s;
    }
  if (m > 0 && !ldlt(G).positive)
    throw InvalidInput("the form is not positive definite on the (0,0) lattice");

  QFilt W = limit_weight_filtration(orbit);
  QSub W0 = W.piece(0);
  CVec zf = promote_float(z);

  std::vector<HodgeClassHit> hits;
  for (const QVec& c : enumerate_bounded(G, K)) {
    QVec v = zero_vec<Rat>(orbit.dim());
    for (int i = 0; i < m; ++i) v = v + c[i] * L.row(i);
    HodgeClassHit hit;
    hit.v = v;
    hit.z = EvaluationPoint::at(z);
    QVec Qv = orbit.lattice.Q * v;
    Rat qn(0);
    for (int k = 0; k < orbit.dim(); ++k) qn += v[k] * Qv[k];
    hit.q_norm = qn;
    hit.in_w0 = W0.contains(v);
    hit.witness = witness_search(orbit, v, zf);
    hits.push_back(std::move(hit));
  }
  std::sort(hits.begin(), hits.end(), [](const HodgeClassHit& a, const HodgeClassHit& b) {
    if (a.q_norm != b.q_norm) return a.q_norm < b.q_norm;
    return lex_less(a.v, b.v);
  });
  return hits;
}

std::vector<HodgeClassHit> enumerate_classes(const VariationSample& sample,
                                             const GVec& z, const Rat& K) {
  return enumerate_classes(sample.orbit, z, K);
}

CVec project_nearby(const NilpotentOrbit& orbit, const QVec& v, const CVec& z) {
  if (static_cast<int>(z.size()) != orbit.r())
    throw DimensionMismatch("evaluation point has the wrong number of variables");
  if (static_cast<int>(v.size()) != orbit.dim())
    throw DimensionMismatch("class has the wrong length");
  CMat T = promote_float(class_map(orbit, v));
  CVec x = min_norm_preimage(T, T * z);
  CVec out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) out[j] = z[j] - x[j];
  return out;
}

bool near_class_test(const QVec& v, const EvaluationPoint& z, double alpha,
                     const HodgeStructure& H) {
  if (!(alpha > 0)) throw InvalidInput("the decay rate must be positive");
  double sup_y = 0;
  for (const CD& zj : z.z) sup_y = std::max(sup_y, zj.imag());
  CFilt F = promote_float(H.F);
  CMat metric = hodge_gram_float(H.Q(), F, H.weight());
  double sine = angle_sine(promote_float(v), F.piece(0), metric);
  return sine <= std::exp(-alpha * sup_y);
}

namespace {

Thm25Report verify_core(const NilpotentOrbit& orbit,
                        const std::function<CFilt(const CVec&)>& float_flag,
                        const std::vector<EvaluationPoint>& zs, const Rat& K,
                        double alpha) {
  if (zs.empty()) throw InvalidInput("the point sequence is empty");
  double last_inf = -std::numeric_limits<double>::infinity();
  for (const auto& p : zs) {
    if (static_cast<int>(p.z.size()) != orbit.r())
      throw DimensionMismatch("sequence point has the wrong number of variables");
    double inf_y = std::numeric_limits<double>::infinity();
    for (const CD& zj : p.z) {
      if (zj.real() < -1e-12 || zj.real() > 1 + 1e-12)
        throw InvalidInput("sequence real parts must lie in [0, 1]");
      inf_y = std::min(inf_y, zj.imag());
    }
    if (!(inf_y > last_inf))
      throw InvalidInput("sequence depths must be strictly increasing");
    last_inf = inf_y;
  }

  Thm25Report rep;
  std::vector<const EvaluationPoint*> exact_points, float_points;
  for (const auto& p : zs)
    (p.exact ? exact_points : float_points).push_back(&p);
  if (exact_points.empty())
    throw InvalidInput("the sequence needs at least one exact point");

  auto cmp = [](const QVec& a, const QVec& b) { return lex_less(a, b); };
  std::set<QVec, decltype(cmp)> cumulative(cmp);
  std::vector<std::set<QVec, decltype(cmp)>> per_point_sets;
  std::vector<std::size_t> union_growth;
  for (const auto* p : exact_points) {
    std::vector<HodgeClassHit> hits = enumerate_classes(orbit, *p->exact, K);
    std::set<QVec, decltype(cmp)> here(cmp);
    for (const auto& h : hits) here.insert(h.v);
    cumulative.insert(here.begin(), here.end());
    union_growth.push_back(cumulative.size());
    per_point_sets.push_back(std::move(here));
    rep.per_point.push_back(std::move(hits));
  }
  rep.classes.assign(cumulative.begin(), cumulative.end());
  for (std::size_t t = 0; t < union_growth.size(); ++t)
    if (union_growth[t] == cumulative.size()) {
      rep.stabilization_index = static_cast<int>(t);
      break;
    }
  rep.stabilized = union_growth.size() >= 2 &&
                   union_growth[union_growth.size() - 2] == cumulative.size();

  for (const QVec& v : rep.classes) {
    bool everywhere = true;
    for (const auto& s : per_point_sets) everywhere = everywhere && s.count(v) > 0;
    (everywhere ? rep.persistent : rep.transient).push_back(v);
  }

  QSub W0 = limit_weight_filtration(orbit).piece(0);
  rep.persistent_all_in_w0 = true;
  for (const QVec& v : rep.persistent)
    rep.persistent_all_in_w0 = rep.persistent_all_in_w0 && W0.contains(v);

  const CVec& deepest = zs.back().z;  // the deepest point of the sequence
  for (const QVec& v : rep.persistent)
    rep.witnesses.push_back(witness_search(orbit, v, deepest));

  for (const auto* p : float_points) {
    CFilt F = float_flag(p->z);
    CMat metric = hodge_gram_float(orbit.lattice.Q, F, orbit.weight());
    double sup_y = 0;
    for (const CD& zj : p->z) sup_y = std::max(sup_y, zj.imag());
    std::vector<double> sines;
    std::vector<bool> near;
    for (const QVec& v : rep.persistent) {
      if (vec_is_zero(v)) {
        sines.push_back(0.0);
        near.push_back(true);
        continue;
      }
      double s = angle_sine(promote_float(v), F.piece(0), metric);
      sines.push_back(s);
      near.push_back(s <= std::exp(-alpha * sup_y));
    }
    rep.float_sines.push_back(std::move(sines));
    rep.float_near.push_back(std::move(near));
  }
  return rep;
}

}  // namespace

Thm25Report verify_thm25(const NilpotentOrbit& orbit,
                         const std::vector<EvaluationPoint>& zs, const Rat& K,
                         double alpha) {
  return verify_core(
      orbit, [&](const CVec& z) { return evaluate_orbit_float(orbit, z); }, zs,
      K, alpha);
}

Thm25Report verify_thm25(const VariationSample& sample,
                         const std::vector<EvaluationPoint>& zs, const Rat& K,
                         double alpha) {
  return verify_core(
      sample.orbit, [&](const CVec& z) { return evaluate_variation(sample, z); },
      zs, K, alpha);
}

std::string Thm25Report::describe() const {
  std::ostringstream os;
  os << per_point.size() << " exact points, " << classes.size()
     << " classes in the union, " << persistent.size() << " persistent, "
     << transient.size() << " transient\n";
  os << "union stabilizes at exact point index " << stabilization_index
     << (stabilized ? " (confirmed by the final point)\n"
                    : " (final point still grew the union)\n");
  os << "persistent classes all in W_0: " << (persistent_all_in_w0 ? "yes" : "no")
     << "\n";
  int certified = 0;
  for (const auto& w : witnesses)
    if (w.exact_member) ++certified;
  os << certified << "/" << witnesses.size()
     << " persistent classes have an exactly verified limiting witness\n";
  return os.str();
}

std::optional<Rat> rationalize(double x, double tol, long max_den) {
  if (!std::isfinite(x) || std::abs(x) > 1e15) return std::nullopt;
  // continued-fraction convergents p/q until |x - p/q| <= tol
  double target = x;
  long p0 = 1, q0 = 0;  // p_{-1}/q_{-1}
  long p1 = static_cast<long>(std::floor(target)), q1 = 1;
  double frac = target - std::floor(target);
  for (int iter = 0; iter < 64; ++iter) {
    double approx = static_cast<double>(p1) / static_cast<double>(q1);
    if (std::abs(x - approx) <= tol) {
      Rat r(p1, q1);  // convergents are already coprime
      r.canonicalize();
      return r;
    }
    if (frac < 1e-18) break;
    double inv = 1.0 / frac;
    double floor_inv = std::floor(inv);
    if (floor_inv > 9e17) break;
    long a = static_cast<long>(floor_inv);
    long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den || q2 <= 0) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    frac = inv - floor_inv;
  }
  if (q1 <= max_den && std::abs(x - static_cast<double>(p1) / q1) <= tol) {
    Rat r(p1, q1);
    r.canonicalize();
    return r;
  }
  return std::nullopt;
}

}  // namespace hodge
