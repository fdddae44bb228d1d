#include "hodge/sl2.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "hodge/error.hpp"
#include "hodge/lattice.hpp"
#include "hodge/unipotent.hpp"

namespace hodge {

namespace {

QMat commutator(const QMat& a, const QMat& b) { return a * b - b * a; }

QMat kron(const QMat& a, const QMat& b) {
  QMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      if (sgn(a(i, j)) == 0) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    }
  return out;
}

GVec kron_vec(const GVec& a, const GVec& b) {
  GVec out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i * b.size() + j] = a[i] * b[j];
  return out;
}

// A basis of the full space adapted to F: F^p = span{vecs[i] : levels[i] >= p}.
struct LeveledBasis {
  std::vector<GVec> vecs;
  std::vector<int> levels;
};

LeveledBasis filtration_splitting(const GFilt& F) {
  const int n = F.ambient_dim();
  LeveledBasis out;
  std::vector<GVec> acc;
  auto extend_to = [&](const GSub& target, int level) {
    for (int i = 0; i < target.dim(); ++i) {
      GVec v = target.basis().row(i);
      if (GSub::span(acc, n).contains(v)) continue;
      acc.push_back(v);
      out.vecs.push_back(v);
      out.levels.push_back(level);
    }
  };
  int lo = F.min_index(), hi = F.max_index();
  for (int p = hi; p >= lo; --p) extend_to(F.piece(p), p);
  extend_to(GSub::full(n), lo - 1);
  if (static_cast<int>(out.vecs.size()) != n)
    throw VerificationFailure("filtration splitting does not span");
  return out;
}

GFilt filtration_from_levels(const std::vector<GVec>& vecs,
                             const std::vector<int>& levels, int dim) {
  int lo = levels[0], hi = levels[0];
  for (int l : levels) {
    lo = std::min(lo, l);
    hi = std::max(hi, l);
  }
  GFilt F(Direction::decreasing, dim);
  for (int p = lo; p <= hi; ++p) {
    std::vector<GVec> rows;
    for (std::size_t i = 0; i < vecs.size(); ++i)
      if (levels[i] >= p) rows.push_back(vecs[i]);
    F.set(p, GSub::span(rows, dim));
  }
  return F;
}

GFilt tensor_filtration(const GFilt& Fa, const GFilt& Fb) {
  LeveledBasis a = filtration_splitting(Fa), b = filtration_splitting(Fb);
  std::vector<GVec> vecs;
  std::vector<int> levels;
  for (std::size_t i = 0; i < a.vecs.size(); ++i)
    for (std::size_t j = 0; j < b.vecs.size(); ++j) {
      vecs.push_back(kron_vec(a.vecs[i], b.vecs[j]));
      levels.push_back(a.levels[i] + b.levels[j]);
    }
  return filtration_from_levels(vecs, levels, Fa.ambient_dim() * Fb.ambient_dim());
}

// All exponent vectors alpha >= 0 over m slots with |alpha| = n, lex order.
void list_exponents(int m, int n, std::vector<int>& prefix,
                    std::vector<std::vector<int>>& out) {
  if (static_cast<int>(prefix.size()) == m - 1) {
    prefix.push_back(n);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int k = n; k >= 0; --k) {
    prefix.push_back(k);
    list_exponents(m, n - k, prefix, out);
    prefix.pop_back();
  }
}

std::vector<std::vector<int>> exponents(int m, int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> prefix;
  list_exponents(m, n, prefix, out);
  return out;
}

// alpha as the sorted list of its repeated slot indices, |alpha| entries.
std::vector<int> slots_of(const std::vector<int>& alpha) {
  std::vector<int> s;
  for (std::size_t i = 0; i < alpha.size(); ++i)
    for (int k = 0; k < alpha[i]; ++k) s.push_back(static_cast<int>(i));
  return s;
}

// Derivation extension of X to degree-n polynomials in the slots.
QMat sym_operator(const QMat& X, const std::vector<std::vector<int>>& exps,
                  const std::map<std::vector<int>, int>& index) {
  const int D = static_cast<int>(exps.size());
  const int m = X.rows();
  QMat S(D, D);
  for (int a = 0; a < D; ++a) {
    const auto& alpha = exps[a];
    for (int i = 0; i < m; ++i) {
      if (alpha[i] == 0) continue;
      for (int k = 0; k < m; ++k) {
        if (sgn(X(k, i)) == 0) continue;
        std::vector<int> beta = alpha;
        beta[i] -= 1;
        beta[k] += 1;
        S(index.at(beta), a) += Rat(alpha[i]) * X(k, i);
      }
    }
  }
  return S;
}

// Pairing of degree-n monomials: sum over all n! slot pairings (no
// normalization, which keeps the form integral).
Rat sym_pairing(const QMat& Q, const std::vector<int>& I, const std::vector<int>& J) {
  const int n = static_cast<int>(I.size());
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  Rat total(0);
  do {
    Rat p(1);
    for (int a = 0; a < n; ++a) p *= Q(I[a], J[perm[a]]);
    total += p;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

// Coordinates of v_1 ... v_n (polynomial product) in the monomial basis.
GVec sym_product(const std::vector<GVec>& factors,
                 const std::map<std::vector<int>, int>& index, int m, int D) {
  std::map<std::vector<int>, Gauss> poly;
  poly[std::vector<int>(m, 0)] = Gauss(Rat(1));
  for (const GVec& v : factors) {
    std::map<std::vector<int>, Gauss> next;
    for (const auto& [alpha, c] : poly)
      for (int i = 0; i < m; ++i) {
        if (v[i].is_zero()) continue;
        std::vector<int> beta = alpha;
        beta[i] += 1;
        auto [it, inserted] = next.try_emplace(beta, Gauss());
        it->second = it->second + c * v[i];
      }
    poly = std::move(next);
  }
  GVec out(D);
  for (const auto& [alpha, c] : poly) out[index.at(alpha)] = c;
  return out;
}

// Multisets (i_1 <= ... <= i_n) over {0, ..., m-1}.
void list_multisets(int m, int n, int start, std::vector<int>& prefix,
                    std::vector<std::vector<int>>& out) {
  if (static_cast<int>(prefix.size()) == n) {
    out.push_back(prefix);
    return;
  }
  for (int i = start; i < m; ++i) {
    prefix.push_back(i);
    list_multisets(m, n, i, prefix, out);
    prefix.pop_back();
  }
}

Gauss pair_with_gram(const GMat& M, const GVec& u, const GVec& v) {
  Gauss out;
  for (int i = 0; i < M.rows(); ++i) {
    if (u[i].is_zero()) continue;
    for (int j = 0; j < M.cols(); ++j) out = out + u[i] * M(i, j) * conj(v[j]);
  }
  return out;
}

}  // namespace

void validate_sl2(const SL2Rep& rep) {
  const int n = rep.dim();
  if (rep.d < 1) throw InvalidInput("a model needs at least one factor");
  if (static_cast<int>(rep.lower.size()) != rep.d ||
      static_cast<int>(rep.raise.size()) != rep.d ||
      static_cast<int>(rep.Y.size()) != rep.d)
    throw InvalidInput("one generator triple per factor is required");
  PolarizedLattice lattice = make_lattice(rep.weight, rep.Q);
  for (int j = 0; j < rep.d; ++j) {
    for (const QMat* X : {&rep.lower[j], &rep.raise[j], &rep.Y[j]}) {
      if (X->rows() != n || X->cols() != n)
        throw DimensionMismatch("generator has the wrong shape");
      if (!is_integral(*X)) throw InvalidInput("generators must be integral");
      if (!(X->transpose() * rep.Q + rep.Q * *X).is_zero())
        throw InvalidInput("generator is not an infinitesimal isometry");
    }
    if (!is_nilpotent(rep.lower[j]) || !is_nilpotent(rep.raise[j]))
      throw InvalidInput("lowering and raising generators must be nilpotent");
    if (commutator(rep.Y[j], rep.raise[j]) != Rat(2) * rep.raise[j])
      throw InvalidInput("[Y, E] = 2E fails");
    if (commutator(rep.Y[j], rep.lower[j]) != Rat(-2) * rep.lower[j])
      throw InvalidInput("[Y, N] = -2N fails");
    if (commutator(rep.raise[j], rep.lower[j]) != rep.Y[j])
      throw InvalidInput("[E, N] = Y fails");
    for (int k = j + 1; k < rep.d; ++k)
      for (const QMat* A : {&rep.lower[j], &rep.raise[j], &rep.Y[j]})
        for (const QMat* B : {&rep.lower[k], &rep.raise[k], &rep.Y[k]})
          if (!commutator(*A, *B).is_zero())
            throw InvalidInput("generators of distinct factors must commute");
  }
  weight_grading(rep);  // throws when the Y's are not jointly diagonalizable
  if (rep.F.direction() != Direction::decreasing)
    throw InvalidInput("the anchor filtration must be decreasing");
  if (rep.F.ambient_dim() != n)
    throw DimensionMismatch("anchor filtration does not match the lattice");
  if (!rep.F.valid()) throw InvalidInput("the anchor filtration is not nested");
  for (int j = 0; j < rep.d; ++j) {
    GMat g = promote(rep.lower[j]);
    for (const auto& [p, piece] : rep.F.pieces())
      if (!rep.F.piece(p - 1).contains(piece.image(g)))
        throw InvalidInput("lowering generator does not shift the anchor by -1");
  }
  PolarizationReport anchor = check_polarization(HodgeStructure{lattice, rep.F});
  if (!anchor.ok())
    throw InvalidInput("the anchor is not a polarized structure: " + anchor.describe());
}

SL2Rep elliptic_variation() {
  SL2Rep rep;
  rep.d = 1;
  rep.weight = 1;
  rep.Q = QMat{{Rat(0), Rat(1)}, {Rat(-1), Rat(0)}};
  rep.lower = {QMat{{Rat(0), Rat(0)}, {Rat(1), Rat(0)}}};
  rep.raise = {QMat{{Rat(0), Rat(1)}, {Rat(0), Rat(0)}}};
  rep.Y = {QMat{{Rat(1), Rat(0)}, {Rat(0), Rat(-1)}}};
  rep.F = GFilt(Direction::decreasing, 2);
  rep.F.set(1, GSub::span({GVec{Gauss(Rat(1)), Gauss::i()}}, 2));
  validate_sl2(rep);
  return rep;
}

GFilt sl2_orbit_eval(const SL2Rep& rep, const GVec& z) {
  if (static_cast<int>(z.size()) != rep.d)
    throw DimensionMismatch("evaluation point has the wrong number of variables");
  GMat A(rep.dim(), rep.dim());
  for (int j = 0; j < rep.d; ++j)
    A = A + (z[j] - Gauss::i()) * promote(rep.lower[j]);
  return rep.F.apply(exp_nilpotent(A));
}

GFilt fsharp(const SL2Rep& rep) { return rep.F; }

MultiGrading weight_grading(const SL2Rep& rep) {
  const int n = rep.dim();
  std::vector<std::pair<MultiIndex, QSub>> parts;
  parts.push_back({MultiIndex{}, QSub::full(n)});
  for (int j = 0; j < rep.d; ++j) {
    std::vector<std::pair<MultiIndex, QSub>> next;
    for (const auto& [idx, S] : parts)
      for (int lambda = -n; lambda <= n; ++lambda) {
        QMat shifted = rep.Y[j] - Rat(lambda) * QMat::identity(n);
        QSub eig = QSub::span(shifted.kernel());
        QSub cut = S.intersect(eig);
        if (cut.dim() == 0) continue;
        MultiIndex ext = idx;
        ext.push_back(lambda);
        next.push_back({ext, cut});
      }
    parts = std::move(next);
  }
  MultiGrading g(rep.d, n);
  for (auto& [idx, S] : parts) g.set(idx, std::move(S));
  if (!g.is_direct_sum() || g.total_dim() != n)
    throw InvalidInput("the Y operators are not jointly diagonalizable over the integers");
  return g;
}

SL2Rep sym_power(const SL2Rep& rep, int n) {
  if (n < 0) throw InvalidInput("negative symmetric power");
  const int m = rep.dim();
  std::vector<std::vector<int>> exps = exponents(m, n);
  std::map<std::vector<int>, int> index;
  for (std::size_t a = 0; a < exps.size(); ++a)
    index[exps[a]] = static_cast<int>(a);
  const int D = static_cast<int>(exps.size());

  SL2Rep out;
  out.d = rep.d;
  out.weight = rep.weight * n;
  out.Q = QMat(D, D);
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b)
      out.Q(a, b) = sym_pairing(rep.Q, slots_of(exps[a]), slots_of(exps[b]));
  for (int j = 0; j < rep.d; ++j) {
    out.lower.push_back(sym_operator(rep.lower[j], exps, index));
    out.raise.push_back(sym_operator(rep.raise[j], exps, index));
    out.Y.push_back(sym_operator(rep.Y[j], exps, index));
  }

  LeveledBasis base = filtration_splitting(rep.F);
  std::vector<std::vector<int>> sets;
  std::vector<int> prefix;
  list_multisets(m, n, 0, prefix, sets);
  std::vector<GVec> vecs;
  std::vector<int> levels;
  for (const auto& s : sets) {
    std::vector<GVec> factors;
    int level = 0;
    for (int i : s) {
      factors.push_back(base.vecs[i]);
      level += base.levels[i];
    }
    vecs.push_back(sym_product(factors, index, m, D));
    levels.push_back(level);
  }
  out.F = filtration_from_levels(vecs, levels, D);
  validate_sl2(out);
  return out;
}

SL2Rep tensor(const SL2Rep& a, const SL2Rep& b) {
  if (a.d != b.d)
    throw InvalidInput("diagonal tensor requires the same number of factors");
  SL2Rep out;
  out.d = a.d;
  out.weight = a.weight + b.weight;
  out.Q = kron(a.Q, b.Q);
  QMat Ia = QMat::identity(a.dim()), Ib = QMat::identity(b.dim());
  for (int j = 0; j < a.d; ++j) {
    out.lower.push_back(kron(a.lower[j], Ib) + kron(Ia, b.lower[j]));
    out.raise.push_back(kron(a.raise[j], Ib) + kron(Ia, b.raise[j]));
    out.Y.push_back(kron(a.Y[j], Ib) + kron(Ia, b.Y[j]));
  }
  out.F = tensor_filtration(a.F, b.F);
  validate_sl2(out);
  return out;
}

SL2Rep box_tensor(const SL2Rep& a, const SL2Rep& b) {
  SL2Rep out;
  out.d = a.d + b.d;
  out.weight = a.weight + b.weight;
  out.Q = kron(a.Q, b.Q);
  QMat Ia = QMat::identity(a.dim()), Ib = QMat::identity(b.dim());
  for (int j = 0; j < a.d; ++j) {
    out.lower.push_back(kron(a.lower[j], Ib));
    out.raise.push_back(kron(a.raise[j], Ib));
    out.Y.push_back(kron(a.Y[j], Ib));
  }
  for (int j = 0; j < b.d; ++j) {
    out.lower.push_back(kron(Ia, b.lower[j]));
    out.raise.push_back(kron(Ia, b.raise[j]));
    out.Y.push_back(kron(Ia, b.Y[j]));
  }
  out.F = tensor_filtration(a.F, b.F);
  validate_sl2(out);
  return out;
}

SL2Rep dual(const SL2Rep& rep) {
  Rat dq = rep.Q.det();
  if (dq != 1 && dq != -1)
    throw InvalidInput("the dual model requires a unimodular form");
  SL2Rep out;
  out.d = rep.d;
  out.weight = -rep.weight;
  out.Q = rep.Q.inverse()->transpose();
  for (int j = 0; j < rep.d; ++j) {
    out.lower.push_back(-rep.lower[j].transpose());
    out.raise.push_back(-rep.raise[j].transpose());
    out.Y.push_back(-rep.Y[j].transpose());
  }
  out.F = GFilt(Direction::decreasing, rep.dim());
  for (const auto& [p, piece] : rep.F.pieces())
    out.F.set(1 - p, GSub::span(piece.annihilator()));
  validate_sl2(out);
  return out;
}

SL2Rep twist(const SL2Rep& rep, const HodgeStructure& H) {
  SL2Rep out;
  out.d = rep.d;
  out.weight = rep.weight + H.weight();
  out.Q = kron(rep.Q, H.Q());
  QMat Ih = QMat::identity(H.dim());
  for (int j = 0; j < rep.d; ++j) {
    out.lower.push_back(kron(rep.lower[j], Ih));
    out.raise.push_back(kron(rep.raise[j], Ih));
    out.Y.push_back(kron(rep.Y[j], Ih));
  }
  out.F = tensor_filtration(rep.F, H.F);
  validate_sl2(out);
  return out;
}

SL2Rep tate_twist(const SL2Rep& rep, int k) {
  SL2Rep out = rep;
  out.weight = rep.weight - 2 * k;
  out.F = rep.F.shifted(k);
  validate_sl2(out);
  return out;
}

SL2Rep end_rep(const SL2Rep& rep) { return tensor(rep, dual(rep)); }

NilpotentOrbit as_orbit(const SL2Rep& rep) {
  GMat A(rep.dim(), rep.dim());
  for (int j = 0; j < rep.d; ++j)
    A = A + (Gauss() - Gauss::i()) * promote(rep.lower[j]);
  GFilt limit = rep.F.apply(exp_nilpotent(A));
  return make_orbit(PolarizedLattice{rep.dim(), rep.weight, rep.Q}, rep.lower,
                    limit);
}

NormBandReport norm_asymptotics_check(const SL2Rep& rep,
                                      const std::vector<QVec>& vectors,
                                      const std::vector<std::vector<double>>& grid) {
  if (vectors.empty() || grid.empty())
    throw InvalidInput("norm comparison needs vectors and grid points");
  for (size_t t = 0; t < grid.size(); ++t) {
    const auto& y = grid[t];
    if (static_cast<int>(y.size()) != rep.d)
      throw DimensionMismatch("grid point has the wrong number of variables");
    for (double yj : y)
      if (!(yj > 0)) throw InvalidInput("grid depths must be positive");
    for (int j = 0; j + 1 < rep.d; ++j) {
      if (!(y[static_cast<size_t>(j)] >= y[static_cast<size_t>(j) + 1])) {
        throw InvalidInput(
            "grid not in regime: depths must be weakly decreasing at each "
            "point (y_1 >= ... >= y_d)");
      }
    }
    if (t > 0) {
      for (int j = 0; j < rep.d; ++j) {
        if (!(y[static_cast<size_t>(j)] >
              grid[t - 1][static_cast<size_t>(j)])) {
          throw InvalidInput(
              "grid not in regime: consecutive points must increase strictly "
              "in every coordinate");
        }
      }
    }
  }
  MultiGrading A = weight_grading(rep);
  GMat M = hodge_gram(rep.Q, rep.F, rep.weight);

  NormBandReport out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  out.max_ratio = 0;
  out.bounded = true;
  for (const QVec& a : vectors) {
    if (static_cast<int>(a.size()) != rep.dim())
      throw DimensionMismatch("vector does not live in the model space");
    if (vec_is_zero(a)) throw InvalidInput("norm comparison needs nonzero vectors");
    std::vector<MultiIndex> idx;
    std::vector<GVec> comp;
    for (const auto& [l, piece] : A.pieces()) {
      QVec al = A.project(a, l);
      if (vec_is_zero(al)) continue;
      idx.push_back(l);
      comp.push_back(promote(al));
    }
    std::vector<std::vector<CD>> pair_h(comp.size(), std::vector<CD>(comp.size()));
    for (std::size_t u = 0; u < comp.size(); ++u)
      for (std::size_t v = 0; v < comp.size(); ++v)
        pair_h[u][v] = to_complex(pair_with_gram(M, comp[u], comp[v]));

    std::vector<NormBandRow> trace;
    for (const auto& y : grid) {
      NormBandRow row;
      row.y = y;
      CD norm(0, 0);
      for (std::size_t u = 0; u < comp.size(); ++u)
        for (std::size_t v = 0; v < comp.size(); ++v) {
          double coef = 1;
          for (int j = 0; j < rep.d; ++j)
            coef *= std::pow(y[j], (idx[u][j] + idx[v][j]) / 2.0);
          norm += coef * pair_h[u][v];
        }
      row.norm_sq = norm.real();
      double graded = 0;
      for (std::size_t u = 0; u < comp.size(); ++u) {
        double coef = 1;
        for (int j = 0; j < rep.d; ++j) coef *= std::pow(y[j], idx[u][j]);
        graded += coef * pair_h[u][u].real();
      }
      row.graded_sum = graded;
      row.ratio = row.norm_sq / graded;
      if (!std::isfinite(row.ratio) || !(row.norm_sq > 0) || !(graded > 0))
        out.bounded = false;
      out.min_ratio = std::min(out.min_ratio, row.ratio);
      out.max_ratio = std::max(out.max_ratio, row.ratio);
      trace.push_back(row);
    }
    out.rows.push_back(std::move(trace));
  }
  out.band_constant = std::max(out.max_ratio, 1.0 / out.min_ratio);
  if (!std::isfinite(out.band_constant)) out.bounded = false;
  return out;
}

InvarianceReport invariance_check_310(const SL2Rep& rep,
                                      const std::vector<QVec>& candidates) {
  const int n = rep.dim();
  InvarianceReport out;
  // Class-type vectors of a weight-w structure live in filtration level
  // ceil(w/2); for odd weight the real intersection below is forced to zero.
  const int p = rep.weight >= 0 ? (rep.weight + 1) / 2 : rep.weight / 2;
  GSub F0 = rep.F.piece(p);
  QSub cut = rational_points(F0.intersect(F0.conjugate()));
  QMat diag(n, n);
  for (int j = 0; j < rep.d; ++j) {
    diag = diag + rep.lower[j];
    QFilt W = weight_filtration(diag);
    cut = cut.intersect(W.piece(0));
  }
  out.cut = cut;

  QMat stacked(3 * rep.d * n, n);
  int r = 0;
  for (int j = 0; j < rep.d; ++j)
    for (const QMat* X : {&rep.lower[j], &rep.raise[j], &rep.Y[j]}) {
      for (int i = 0; i < n; ++i, ++r)
        for (int c = 0; c < n; ++c) stacked(r, c) = (*X)(i, c);
    }
  out.invariants = QSub::span(stacked.kernel());
  out.contained = out.invariants.contains(out.cut);
  for (const QVec& v : candidates) {
    if (static_cast<int>(v.size()) != n)
      throw DimensionMismatch("candidate does not live in the model space");
    out.candidate_in_cut.push_back(out.cut.contains(v));
    out.candidate_invariant.push_back(out.invariants.contains(v));
  }
  std::ostringstream os;
  os << "cut dimension " << out.cut.dim() << ", invariant dimension "
     << out.invariants.dim() << ", containment "
     << (out.contained ? "holds" : "fails");
  if (!candidates.empty()) {
    int in_cut = 0, invariant = 0;
    for (bool b : out.candidate_in_cut) in_cut += b ? 1 : 0;
    for (bool b : out.candidate_invariant) invariant += b ? 1 : 0;
    os << "; candidates: " << in_cut << "/" << candidates.size()
       << " in the cut, " << invariant << "/" << candidates.size()
       << " invariant";
  }
  out.detail = os.str();
  return out;
}

}  // namespace hodge
