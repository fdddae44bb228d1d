#include "hodge/orbit.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hodge/error.hpp"
#include "hodge/lattice.hpp"
#include "hodge/unipotent.hpp"

namespace hodge {

namespace {

constexpr double kTailBudget = 1e-12;

Gauss dot(const GVec& a, const GVec& b) {
  Gauss out(Rat(0));
  for (std::size_t i = 0; i < a.size(); ++i) out = out + a[i] * b[i];
  return out;
}

Rat rat_pow(const Rat& x, int e) {
  Rat base = x;
  if (e < 0) base = Rat(1) / base;
  Rat out(1);
  for (int k = 0; k < std::abs(e); ++k) out *= base;
  return out;
}

// exp(A) - I for a (structurally) nilpotent float matrix: terms up to A^n.
CMat exp_minus_identity(const CMat& A) {
  const int n = A.rows();
  CMat term = CMat::identity(n);
  CMat out(n, n);
  for (int k = 1; k <= n; ++k) {
    term = term * A;
    term = CD(1.0 / k, 0) * term;
    out = out + term;
  }
  return out;
}

CMat exp_float(const CMat& A) { return CMat::identity(A.rows()) + exp_minus_identity(A); }

}  // namespace

CVec to_complex(const GVec& v) {
  CVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = to_complex(v[i]);
  return out;
}

CMat to_complex(const GMat& m) {
  CMat out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = to_complex(m(i, j));
  return out;
}

bool PowerSeries::zero() const {
  for (const auto& [deg, c] : coeffs)
    if (!c.is_zero()) return false;
  return true;
}

GMat PowerSeries::eval(const GVec& s) const {
  if (static_cast<int>(s.size()) != vars)
    throw DimensionMismatch("series evaluated with the wrong number of variables");
  GMat out(dim, dim);
  for (const auto& [deg, c] : coeffs) {
    Gauss factor(Rat(1));
    for (int j = 0; j < vars; ++j)
      for (int k = 0; k < deg[j]; ++k) factor = factor * s[j];
    out = out + factor * c;
  }
  return out;
}

CMat PowerSeries::eval(const CVec& s) const {
  if (static_cast<int>(s.size()) != vars)
    throw DimensionMismatch("series evaluated with the wrong number of variables");
  CMat out(dim, dim);
  for (const auto& [deg, c] : coeffs) {
    CD factor(1, 0);
    for (int j = 0; j < vars; ++j)
      for (int k = 0; k < deg[j]; ++k) factor *= s[j];
    out = out + factor * to_complex(c);
  }
  return out;
}

double PowerSeries::coefficient_bound() const {
  double bound = 0;
  for (const auto& [deg, c] : coeffs)
    for (int i = 0; i < c.rows(); ++i)
      for (int j = 0; j < c.cols(); ++j)
        bound = std::max(bound, std::abs(to_complex(c(i, j))));
  return bound;
}

double PowerSeries::tail_bound(double rho) const {
  if (zero()) return 0;
  if (!(rho >= 0)) throw InvalidInput("tail bound needs a nonnegative radius");
  if (rho >= 1) return std::numeric_limits<double>::infinity();
  // entrywise coefficient bound promoted to a crude operator-norm bound,
  // times an overcount (k+1)^{vars-1} of the degree-k monomials
  const double c0 = coefficient_bound() * dim;
  double sum = 0;
  for (int k = order + 1; k <= order + 20000; ++k) {
    double addend = c0 * std::pow(k + 1, vars - 1) * std::pow(rho, k);
    sum += addend;
    if (addend < sum * 1e-18 || addend < 1e-320) break;
  }
  return sum;
}

PowerSeries zero_series(int vars, int dim) {
  PowerSeries s;
  s.vars = vars;
  s.dim = dim;
  s.order = 0;
  return s;
}

CVec EvaluationPoint::s() const {
  CVec out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j)
    out[j] = std::exp(CD(0, 2 * std::numbers::pi) * z[j]);
  return out;
}

EvaluationPoint EvaluationPoint::at(const GVec& z) {
  EvaluationPoint p;
  p.exact = z;
  p.z = to_complex(z);
  return p;
}

EvaluationPoint EvaluationPoint::at(const CVec& z) {
  EvaluationPoint p;
  p.z = z;
  return p;
}

QMat NilpotentOrbit::cone_sum() const {
  QMat out(dim(), dim());
  for (const auto& n : N) out = out + n;
  return out;
}

NilpotentOrbit make_orbit(PolarizedLattice lattice, std::vector<QMat> N, GFilt F) {
  lattice = make_lattice(lattice.weight, lattice.Q);
  const int n = lattice.rank;
  if (N.empty()) throw InvalidInput("an orbit needs at least one variable");
  if (F.direction() != Direction::decreasing)
    throw InvalidInput("the limit filtration must be decreasing");
  if (F.ambient_dim() != n) throw DimensionMismatch("filtration does not match the lattice");
  if (!F.valid()) throw InvalidInput("the limit filtration is not nested");
  for (std::size_t j = 0; j < N.size(); ++j) {
    if (N[j].rows() != n || N[j].cols() != n)
      throw DimensionMismatch("generator has the wrong shape");
    if (!is_integral(N[j])) throw InvalidInput("generators must be integral");
    if (!is_nilpotent(N[j])) throw InvalidInput("generators must be nilpotent");
    if (!(N[j].transpose() * lattice.Q + lattice.Q * N[j]).is_zero())
      throw InvalidInput("generator is not an infinitesimal isometry of the lattice form");
  }
  for (std::size_t i = 0; i < N.size(); ++i)
    for (std::size_t j = i + 1; j < N.size(); ++j)
      if (!(N[i] * N[j] - N[j] * N[i]).is_zero())
        throw InvalidInput("generators must commute");
  for (const auto& nj : N) {
    GMat g = promote(nj);
    for (const auto& [p, piece] : F.pieces())
      if (!F.piece(p - 1).contains(piece.image(g)))
        throw InvalidInput("generator does not shift the limit filtration by -1");
  }
  NilpotentOrbit orbit{std::move(lattice), std::move(N), std::move(F)};
  // The type-(-1,-1) condition lives on the limiting mixed Hodge structure.
  QFilt W = cone_weight_filtration(make_cone(orbit.N)).shifted(-orbit.weight());
  MixedHodgeStructure m{W, orbit.F};
  MhsReport rep = is_mhs(m);
  if (!rep.ok())
    throw InvalidInput("orbit data has no limiting mixed Hodge structure: " + rep.describe());
  Bigrading big = deligne_bigrading(m);
  for (const auto& nj : orbit.N) {
    GMat g = promote(nj);
    for (const auto& [pq, piece] : big.pieces)
      if (!big.piece(pq.first - 1, pq.second - 1).contains(piece.image(g)))
        throw InvalidInput("generator is not of type (-1,-1) for the limiting mixed Hodge structure");
  }
  return orbit;
}

GFilt evaluate_orbit(const NilpotentOrbit& orbit, const GVec& z) {
  if (static_cast<int>(z.size()) != orbit.r())
    throw DimensionMismatch("evaluation point has the wrong number of variables");
  GMat A(orbit.dim(), orbit.dim());
  for (int j = 0; j < orbit.r(); ++j) A = A + z[j] * promote(orbit.N[j]);
  return orbit.F.apply(exp_nilpotent(A));
}

CFilt evaluate_orbit_float(const NilpotentOrbit& orbit, const CVec& z) {
  if (static_cast<int>(z.size()) != orbit.r())
    throw DimensionMismatch("evaluation point has the wrong number of variables");
  CMat A(orbit.dim(), orbit.dim());
  for (int j = 0; j < orbit.r(); ++j) A = A + z[j] * to_complex(promote(orbit.N[j]));
  return promote_float(orbit.F).apply(exp_float(A));
}

bool LimitingMhs::polarized() const {
  if (!mhs_report.ok()) return false;
  for (const auto& p : primitives)
    if (!p.form_well_defined || !p.report.ok_over_field()) return false;
  return true;
}

std::string LimitingMhs::describe() const {
  std::ostringstream os;
  os << "mhs: " << mhs_report.describe() << "\n";
  for (const auto& p : primitives)
    os << "primitive level " << p.level << " (dim Gr " << p.graded_dim << ", dim "
       << p.primitive.dim() << "): "
       << (p.form_well_defined ? p.report.describe() : std::string("form not well-defined"))
       << "\n";
  return os.str();
}

LimitingMhs limiting_mhs(const NilpotentOrbit& orbit) {
  const int w = orbit.weight();
  LimitingMhs out;
  QFilt W = cone_weight_filtration(make_cone(orbit.N)).shifted(-w);
  out.mhs = MixedHodgeStructure{W, orbit.F};
  out.mhs_report = is_mhs(out.mhs);
  if (!out.mhs_report.ok()) return out;

  GFilt GW = promote(W);
  QMat Ncone = orbit.cone_sum();
  GMat Ng = promote(Ncone);
  GMat Qg = promote(orbit.lattice.Q);
  int top = W.max_index();
  for (int l = 0; w + l <= top + 1; ++l) {
    if (W.graded_dim(w + l) == 0) continue;
    LimitingMhs::PrimitivePart pp;
    pp.level = l;
    pp.graded_dim = W.graded_dim(w + l);
    QuotientMap<Gauss> qhi(GW.piece(w + l - 1), GW.piece(w + l));
    QuotientMap<Gauss> qlo(GW.piece(w - l - 3), GW.piece(w - l - 2));
    GMat down = induced_map(qhi, qlo, Ng.pow(l + 1));
    pp.primitive = GSub::span(down.kernel());

    // Q(. , N^l .) must be independent of the representatives.
    GMat Nl = Ng.pow(l);
    pp.form_well_defined = true;
    const GSub& big = GW.piece(w + l);
    const GSub& small = GW.piece(w + l - 1);
    for (int i = 0; i < small.dim() && pp.form_well_defined; ++i)
      for (int j = 0; j < big.dim() && pp.form_well_defined; ++j) {
        GVec u = small.basis().row(i), v = big.basis().row(j);
        if (!dot(u, Qg * (Nl * v)).is_zero() || !dot(v, Qg * (Nl * u)).is_zero())
          pp.form_well_defined = false;
      }
    if (!pp.form_well_defined) {
      out.primitives.push_back(std::move(pp));
      continue;
    }

    // restrict the graded structure to the primitive subspace
    const int pd = pp.primitive.dim();
    std::vector<GVec> lifts;
    for (int i = 0; i < pd; ++i) lifts.push_back(qhi.lift(pp.primitive.basis().row(i)));
    GMat gram(pd, pd);
    for (int i = 0; i < pd; ++i)
      for (int j = 0; j < pd; ++j) gram(i, j) = dot(lifts[i], Qg * (Nl * lifts[j]));
    QMat gram_q = demote(gram);

    GFilt Fprim(Direction::decreasing, pd);
    for (const auto& [p, piece] : orbit.F.pieces()) {
      GSub graded = qhi.push(piece.intersect(GW.piece(w + l)));
      GSub cut = graded.intersect(pp.primitive);
      std::vector<GVec> rows;
      for (int i = 0; i < cut.dim(); ++i) {
        auto c = pp.primitive.coords(cut.basis().row(i));
        if (!c) throw VerificationFailure("primitive coordinates failed");
        rows.push_back(*c);
      }
      Fprim.set(p, GSub::span(rows, pd));
    }
    HodgeStructure hs{PolarizedLattice{pd, w + l, gram_q}, Fprim};
    pp.report = check_polarization(hs);
    out.primitives.push_back(std::move(pp));
  }
  return out;
}

bool OrbitPolarizationReport::all_pass() const {
  for (const auto& r : rows)
    if (!r.polarization.ok()) return false;
  return !rows.empty();
}

std::string OrbitPolarizationReport::describe() const {
  std::ostringstream os;
  for (const auto& r : rows)
    os << "y = " << r.y.get_str() << ": " << r.polarization.describe() << "\n";
  if (first_all_pass_y)
    os << "all checks pass from y = " << first_all_pass_y->get_str() << " on\n";
  else
    os << "no sampled depth passes all checks onward\n";
  return os.str();
}

OrbitPolarizationReport is_polarized_orbit(const NilpotentOrbit& orbit,
                                           const Rat& y_threshold, int samples) {
  if (!(y_threshold > 0)) throw InvalidInput("the depth threshold must be positive");
  if (samples < 1) throw InvalidInput("at least one sample is required");
  OrbitPolarizationReport out;
  Rat y = y_threshold;
  for (int t = 0; t < samples; ++t, y *= 2) {
    GVec z(orbit.r(), Gauss(Rat(0), y));
    HodgeStructure hs{orbit.lattice, evaluate_orbit(orbit, z)};
    out.rows.push_back({y, check_polarization(hs)});
  }
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    bool tail_ok = true;
    for (std::size_t j = i; j < out.rows.size(); ++j)
      tail_ok = tail_ok && out.rows[j].polarization.ok();
    if (tail_ok) {
      out.first_all_pass_y = out.rows[i].y;
      break;
    }
  }
  return out;
}

VariationSample make_sample(NilpotentOrbit orbit, PowerSeries gamma) {
  if (gamma.vars != orbit.r())
    throw InvalidInput("series variables must match the orbit's variables");
  if (gamma.dim != orbit.dim())
    throw DimensionMismatch("series coefficients must act on the orbit space");
  LimitingMhs lim = limiting_mhs(orbit);
  Bigrading big = deligne_bigrading(lim.mhs);
  for (const auto& [deg, c] : gamma.coeffs) {
    if (static_cast<int>(deg.size()) != gamma.vars)
      throw InvalidInput("series degree has the wrong arity");
    int total = 0;
    for (int d : deg) {
      if (d < 0) throw InvalidInput("series degrees must be nonnegative");
      total += d;
    }
    if (total == 0 && !c.is_zero())
      throw InvalidInput("the series must vanish at the origin");
    if (total > gamma.order)
      throw InvalidInput("series coefficient beyond the stated truncation order");
    if (!in_lowering_algebra(big, c))
      throw InvalidInput("series coefficient is not in the lowering algebra of the limiting mixed Hodge structure");
  }
  return VariationSample{std::move(orbit), std::move(gamma)};
}

CFilt evaluate_variation(const VariationSample& sample, const CVec& z) {
  const int n = sample.orbit.dim();
  if (static_cast<int>(z.size()) != sample.orbit.r())
    throw DimensionMismatch("evaluation point has the wrong number of variables");
  CVec s(z.size());
  double rho = 0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    s[j] = std::exp(CD(0, 2 * std::numbers::pi) * z[j]);
    rho = std::max(rho, std::abs(s[j]));
  }
  double tail = sample.gamma.tail_bound(rho);
  if (!(tail <= kTailBudget)) {
    std::ostringstream os;
    os << "series tail bound " << tail << " exceeds " << kTailBudget
       << " at |s| = " << rho;
    throw NumericalUnderflow(os.str());
  }
  CMat A(n, n);
  for (int j = 0; j < sample.orbit.r(); ++j)
    A = A + z[j] * to_complex(promote(sample.orbit.N[j]));
  CMat E = exp_float(A) * exp_float(sample.gamma.eval(s));
  return promote_float(sample.orbit.F).apply(E);
}

GFilt evaluate_variation_exact(const VariationSample& sample, const GVec& z,
                               const GVec& s) {
  const int n = sample.orbit.dim();
  if (static_cast<int>(z.size()) != sample.orbit.r())
    throw DimensionMismatch("evaluation point has the wrong number of variables");
  GMat A(n, n);
  for (int j = 0; j < sample.orbit.r(); ++j)
    A = A + z[j] * promote(sample.orbit.N[j]);
  GMat E = exp_nilpotent(A) * exp_nilpotent(sample.gamma.eval(s));
  return sample.orbit.F.apply(E);
}

std::string DecayReport::describe() const {
  std::ostringstream os;
  if (exact_match) {
    os << "series part is zero: variation coincides with its orbit exactly\n";
    return os.str();
  }
  os << "fitted slope of log(distance) against -2*pi*inf(y): " << fit.slope
     << " (rms residual " << fit.rms_residual << ", " << fit.points << " points)\n"
     << "decay exponent per unit inf(y): " << exponent << "\n";
  return os.str();
}

DecayReport decay_check(const VariationSample& sample, const CVec& z0,
                        const std::vector<double>& direction,
                        const std::vector<double>& t_grid) {
  const int r = sample.orbit.r();
  const int n = sample.orbit.dim();
  if (static_cast<int>(z0.size()) != r || static_cast<int>(direction.size()) != r)
    throw DimensionMismatch("ray data has the wrong number of variables");
  for (double d : direction)
    if (!(d > 0)) throw InvalidInput("ray direction must be strictly positive");
  if (t_grid.empty()) throw InvalidInput("empty grid");

  DecayReport out;
  out.t_grid = t_grid;
  if (sample.gamma.zero()) {
    out.exact_match = true;
    out.distances.assign(t_grid.size(), 0.0);
    for (double t : t_grid) {
      double iy = std::numeric_limits<double>::infinity();
      for (int j = 0; j < r; ++j) iy = std::min(iy, z0[j].imag() + t * direction[j]);
      out.inf_y.push_back(iy);
    }
    return out;
  }

  CFilt base = promote_float(sample.orbit.F);
  const int w = sample.orbit.weight();
  for (double t : t_grid) {
    CVec z(z0);
    for (int j = 0; j < r; ++j) z[j] += CD(0, t * direction[j]);
    CVec s(z.size());
    double rho = 0, iy = std::numeric_limits<double>::infinity();
    for (int j = 0; j < r; ++j) {
      s[j] = std::exp(CD(0, 2 * std::numbers::pi) * z[j]);
      rho = std::max(rho, std::abs(s[j]));
      iy = std::min(iy, z[j].imag());
    }
    double tail = sample.gamma.tail_bound(rho);
    if (!(tail <= kTailBudget)) {
      std::ostringstream os;
      os << "series tail bound " << tail << " exceeds " << kTailBudget
         << " at |s| = " << rho << " (t = " << t << ")";
      throw NumericalUnderflow(os.str());
    }
    CMat delta = exp_minus_identity(sample.gamma.eval(s));
    std::map<int, CMat> diffs;
    for (const auto& [p, piece] : base.pieces())
      diffs[p] = piece.basis() * delta.transpose();
    CMat A(n, n);
    for (int j = 0; j < r; ++j) A = A + z[j] * to_complex(promote(sample.orbit.N[j]));
    CMat g = exp_float(A);
    CFilt flag = base.apply(g * (CMat::identity(n) + delta));
    CMat metric = hodge_gram_float(sample.orbit.lattice.Q, flag, w);
    CMat pulled = g.conjugate().transpose() * metric * g;
    double dist = flag_perturbation_distance(base, diffs, pulled);
    if (!(dist > 0))
      throw NumericalUnderflow("distances underflow: grid too deep for float evaluation");
    out.inf_y.push_back(iy);
    out.distances.push_back(dist);
  }
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < out.distances.size(); ++i) {
    xs.push_back(-2 * std::numbers::pi * out.inf_y[i]);
    ys.push_back(std::log(out.distances[i]));
  }
  out.fit = fit_slope(xs, ys);
  out.exponent = 2 * std::numbers::pi * out.fit.slope;
  return out;
}

QMat rescaling_matrix(const MultiGrading& A, const std::vector<Rat>& tau) {
  if (static_cast<int>(tau.size()) != A.index_dim())
    throw DimensionMismatch("one scale per grading index is required");
  if (A.total_dim() != A.ambient_dim() || !A.is_direct_sum())
    throw InvalidInput("rescaling needs a grading of the whole space");
  std::vector<Rat> roots;
  for (const Rat& t : tau) {
    if (!(t > 0)) throw InvalidInput("rescaling requires positive scales");
    auto root = exact_sqrt(t);
    if (!root)
      throw InvalidInput("exact rescaling requires square scales; use the float overload");
    roots.push_back(*root);
  }
  QMat out(A.ambient_dim(), A.ambient_dim());
  for (const auto& [l, piece] : A.pieces()) {
    Rat scale(1);
    for (int j = 0; j < A.index_dim(); ++j) scale *= rat_pow(roots[j], l[j]);
    out = out + scale * A.projector(l);
  }
  return out;
}

QVec apply_rescaling(const MultiGrading& A, const std::vector<Rat>& tau, const QVec& v) {
  return rescaling_matrix(A, tau) * v;
}

GFilt apply_rescaling(const MultiGrading& A, const std::vector<Rat>& tau, const GFilt& F) {
  return F.apply(promote(rescaling_matrix(A, tau)));
}

CVec apply_rescaling(const MultiGrading& A, const std::vector<double>& tau, const CVec& v) {
  if (static_cast<int>(tau.size()) != A.index_dim())
    throw DimensionMismatch("one scale per grading index is required");
  if (A.total_dim() != A.ambient_dim() || !A.is_direct_sum())
    throw InvalidInput("rescaling needs a grading of the whole space");
  for (double t : tau)
    if (!(t > 0)) throw InvalidInput("rescaling requires positive scales");
  CVec out(v.size(), CD(0, 0));
  for (const auto& [l, piece] : A.pieces()) {
    double scale = 1;
    for (int j = 0; j < A.index_dim(); ++j) scale *= std::pow(tau[j], l[j] / 2.0);
    CVec comp = promote_float(A.projector(l)) * v;
    for (std::size_t i = 0; i < v.size(); ++i) out[i] += scale * comp[i];
  }
  return out;
}

}  // namespace hodge
