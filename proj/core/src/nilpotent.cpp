#include "hodge/nilpotent.hpp"

#include <climits>
#include <sstream>

#include "hodge/rng.hpp"

namespace hodge {

NilpotentEndo make_nilpotent(const QMat& N) {
  NilpotentEndo e;
  e.N = N;
  e.index = nilpotency_index(N) - 1;
  return e;
}

QMat Cone::combine(const QVec& lambda) const {
  if (lambda.size() != generators.size())
    throw DimensionMismatch("cone coefficient count");
  QMat s(dim(), dim());
  for (size_t j = 0; j < generators.size(); ++j)
    s += lambda[j] * generators[j];
  return s;
}

QMat Cone::sum() const {
  return combine(QVec(generators.size(), Rat(1)));
}

Cone make_cone(std::vector<QMat> generators) {
  if (generators.empty()) throw InvalidInput("cone needs at least one generator");
  int n = generators.front().rows();
  for (const auto& g : generators) {
    if (g.rows() != n || g.cols() != n)
      throw DimensionMismatch("cone generators must be square of equal size");
    if (!is_nilpotent(g))
      throw InvalidInput("cone generator is not nilpotent");
  }
  for (size_t i = 0; i < generators.size(); ++i)
    for (size_t j = i + 1; j < generators.size(); ++j)
      if (generators[i] * generators[j] != generators[j] * generators[i])
        throw InvalidInput("cone generators do not commute");
  return Cone{std::move(generators)};
}

QFilt weight_filtration(const QMat& N) {
  int n = N.rows();
  if (!is_nilpotent(N))
    throw InvalidInput("weight filtration of a non-nilpotent matrix");
  int k = nilpotency_index(N) - 1;  // weights live in [-k, k]
  std::vector<QMat> pw(k + 2);
  pw[0] = QMat::identity(n);
  for (int i = 1; i <= k + 1; ++i) pw[i] = pw[i - 1] * N;

  auto kernel_of = [&](int e) {
    return QSub::span(pw[std::min(e, k + 1)].kernel());
  };
  auto image_of = [&](int e) {
    if (e <= 0) return QSub::full(n);
    if (e > k) return QSub::zero(n);
    return QSub::full(n).image(pw[e]);
  };

  QFilt W(Direction::increasing, n);
  for (int l = -k; l <= k; ++l) {
    QSub acc = QSub::zero(n);
    for (int j = 0; j <= k; ++j)
      acc = acc.sum(kernel_of(j + 1).intersect(image_of(j - l)));
    W.set(l, acc);
  }
  if (!check_weight_filtration(N, W))
    throw VerificationFailure(
        "computed weight filtration fails its characterizing properties");
  return W;
}

bool check_weight_filtration(const QMat& N, const QFilt& W) {
  if (!is_nilpotent(N)) return false;
  if (W.direction() != Direction::increasing || !W.valid()) return false;
  int lo = W.min_index(), hi = W.max_index();
  // N lowers W-weight by 2
  for (int l = lo; l <= hi + 1; ++l)
    if (!W.piece(l - 2).contains(W.piece(l).image(N))) return false;
  // N^l induces an isomorphism Gr_l -> Gr_{-l}
  int span = std::max(std::abs(lo), std::abs(hi)) + 1;
  for (int l = 1; l <= span; ++l) {
    if (W.graded_dim(l) != W.graded_dim(-l)) return false;
    if (W.graded_dim(l) == 0) continue;
    QuotientMap<Rat> src(W.piece(l - 1), W.piece(l));
    QuotientMap<Rat> dst(W.piece(-l - 1), W.piece(-l));
    if (!induced_map(src, dst, N.pow(l)).inverse()) return false;
  }
  return true;
}

QFilt cone_weight_filtration(const Cone& c, int resamples, uint64_t seed) {
  QFilt W = weight_filtration(c.sum());
  Rng rng(seed);
  for (int t = 0; t < resamples; ++t) {
    QVec lambda(c.generators.size());
    for (auto& x : lambda) x = rng.positive_rational();
    if (weight_filtration(c.combine(lambda)) != W)
      throw VerificationFailure(
          "cone samples define different weight filtrations");
  }
  return W;
}

std::optional<QFilt> relative_weight_filtration(const QMat& N, const QFilt& W) {
  if (!is_nilpotent(N)) throw InvalidInput("endomorphism is not nilpotent");
  if (W.direction() != Direction::increasing || !W.valid())
    throw InvalidInput("expected a valid increasing filtration");
  int n = W.ambient_dim();
  int lo = W.min_index(), hi = W.max_index() + 1;
  for (int k = lo; k <= hi; ++k)
    if (!W.piece(k).contains(W.piece(k).image(N)))
      throw InvalidInput("endomorphism does not preserve the filtration");

  // candidate: lift, through the echelon splitting, the weight filtration of
  // the induced map on each graded piece, centered at its weight
  std::map<int, QuotientMap<Rat>> qs;
  std::map<int, QFilt> graded_wf;
  for (int k = lo; k <= hi; ++k) {
    if (W.graded_dim(k) == 0) continue;
    QuotientMap<Rat> q(W.piece(k - 1), W.piece(k));
    graded_wf.emplace(k, weight_filtration(q.induced(N)));
    qs.emplace(k, std::move(q));
  }
  int mlo = INT_MAX, mhi = INT_MIN;
  for (const auto& [k, wf] : graded_wf) {
    mlo = std::min(mlo, k + wf.min_index());
    mhi = std::max(mhi, k + wf.max_index());
  }
  QFilt M(Direction::increasing, n);
  for (int l = mlo; l <= mhi; ++l) {
    QSub acc = QSub::zero(n);
    for (const auto& [k, wf] : graded_wf) {
      QSub piece = wf.piece(l - k);
      if (piece.is_zero()) continue;
      std::vector<QVec> rows;
      for (int i = 0; i < piece.dim(); ++i)
        rows.push_back(qs.at(k).lift(piece.basis().row(i)));
      acc = acc.sum(QSub::span(rows, n));
    }
    M.set(l, acc);
  }

  // verification: N lowers M by 2, and M induces on each Gr^W_k the weight
  // filtration of the induced map centered at k (the latter holds by
  // construction; re-checked as a guard)
  for (int l = mlo; l <= mhi + 1; ++l)
    if (!M.piece(l - 2).contains(M.piece(l).image(N))) return std::nullopt;
  for (const auto& [k, wf] : graded_wf) {
    for (int l = mlo; l <= mhi; ++l) {
      QSub pushed = qs.at(k).push(M.piece(l).intersect(W.piece(k)));
      QSub expect = wf.piece(l - k);
      if (pushed != expect) return std::nullopt;
    }
  }
  return M;
}

// ---------------------------------------------------------------------------

void MultiGrading::set(const MultiIndex& l, QSub s) {
  if (static_cast<int>(l.size()) != d_)
    throw DimensionMismatch("multi-index length");
  if (s.ambient_dim() != n_)
    throw DimensionMismatch("grading piece ambient dimension");
  if (s.is_zero()) return;
  pieces_[l] = std::move(s);
  solver_.reset();
  layout_.clear();
}

QSub MultiGrading::piece(const MultiIndex& l) const {
  auto it = pieces_.find(l);
  return it == pieces_.end() ? QSub::zero(n_) : it->second;
}

int MultiGrading::total_dim() const {
  int d = 0;
  for (const auto& [l, s] : pieces_) d += s.dim();
  return d;
}

bool MultiGrading::is_direct_sum() const {
  if (total_dim() != n_) return false;
  QMat stacked(n_, n_);
  int r = 0;
  for (const auto& [l, s] : pieces_)
    for (int i = 0; i < s.dim(); ++i, ++r)
      for (int j = 0; j < n_; ++j) stacked(r, j) = s.basis()(i, j);
  return stacked.rank() == n_;
}

void MultiGrading::ensure_solver() const {
  if (solver_) return;
  if (total_dim() != n_)
    throw InvalidInput("grading does not span the ambient space");
  auto m = std::make_shared<QMat>(n_, n_);
  layout_.clear();
  int offset = 0;
  for (const auto& [l, s] : pieces_) {
    layout_.push_back({l, offset});
    for (int i = 0; i < s.dim(); ++i)
      for (int j = 0; j < n_; ++j) (*m)(j, offset + i) = s.basis()(i, j);
    offset += s.dim();
  }
  if (m->rank() != n_) throw InvalidInput("grading pieces are not independent");
  solver_ = std::move(m);
}

QVec MultiGrading::project(const QVec& v, const MultiIndex& l) const {
  ensure_solver();
  auto x = solver_->solve(v);
  if (!x) throw InvalidInput("projection: vector outside the grading sum");
  QVec out(n_, Rat(0));
  size_t idx = 0;
  for (const auto& [ll, s] : pieces_) {
    int offset = layout_[idx++].second;
    if (ll != l) continue;
    for (int i = 0; i < s.dim(); ++i)
      for (int j = 0; j < n_; ++j) out[j] += (*x)[offset + i] * s.basis()(i, j);
  }
  return out;
}

QMat MultiGrading::projector(const MultiIndex& l) const {
  QMat P(n_, n_);
  for (int j = 0; j < n_; ++j) {
    QVec e(n_, Rat(0));
    e[j] = Rat(1);
    QVec p = project(e, l);
    for (int i = 0; i < n_; ++i) P(i, j) = p[i];
  }
  return P;
}

QFilt MultiGrading::partial_sum_filtration(int j) const {
  if (j < 1 || j > d_) throw InvalidInput("partial-sum index out of range");
  std::map<int, QSub> acc;
  for (const auto& [l, s] : pieces_) {
    int w = 0;
    for (int i = 0; i < j; ++i) w += l[i];
    auto it = acc.find(w);
    acc[w] = it == acc.end() ? s : it->second.sum(s);
  }
  QFilt W(Direction::increasing, n_);
  QSub running = QSub::zero(n_);
  for (const auto& [w, s] : acc) {
    running = running.sum(s);
    W.set(w, running);
  }
  return W;
}

bool MultiGrading::orthogonal_under(const QMat& Q) const {
  for (const auto& [l, s] : pieces_)
    for (const auto& [m, t] : pieces_) {
      bool opposite = true;
      for (int i = 0; i < d_; ++i)
        if (l[i] + m[i] != 0) { opposite = false; break; }
      if (opposite) continue;
      if (!(s.basis() * Q * t.basis().transpose()).is_zero()) return false;
    }
  return true;
}

std::optional<std::string> distributivity_witness(
    const std::vector<QFilt>& Ws) {
  std::vector<QSub> steps;
  for (const auto& W : Ws)
    for (const auto& [k, s] : W.pieces()) {
      bool dup = false;
      for (const auto& t : steps)
        if (t == s) { dup = true; break; }
      if (!dup && !s.is_zero() && !s.is_full()) steps.push_back(s);
    }
  for (size_t a = 0; a < steps.size(); ++a)
    for (size_t b = a; b < steps.size(); ++b)
      for (size_t c = 0; c < steps.size(); ++c) {
        const QSub &X = steps[a], &Y = steps[b], &Z = steps[c];
        int lhs = X.sum(Y).intersect(Z).dim() +
                  X.intersect(Y).intersect(Z).dim();
        int rhs = X.intersect(Z).dim() + Y.intersect(Z).dim();
        if (lhs != rhs) {
          std::ostringstream os;
          os << "steps (" << a << "," << b << "," << c
             << "): dim((X+Y)∩Z)+dim(X∩Y∩Z)=" << lhs
             << " but dim(X∩Z)+dim(Y∩Z)=" << rhs;
          return os.str();
        }
      }
  return std::nullopt;
}

MultiGrading splitting_grading(const std::vector<QFilt>& Ws) {
  if (Ws.empty()) throw InvalidInput("empty filtration family");
  int n = Ws.front().ambient_dim();
  for (const auto& W : Ws) {
    if (W.direction() != Direction::increasing || !W.valid())
      throw InvalidInput("splitting expects valid increasing filtrations");
    if (W.ambient_dim() != n) throw DimensionMismatch("ambient dims disagree");
  }
  if (auto w = distributivity_witness(Ws))
    throw InvalidInput("filtration family is not distributive: " + *w);

  int d = static_cast<int>(Ws.size());
  std::vector<int> lo(d), hi(d);
  for (int j = 0; j < d; ++j) {
    lo[j] = Ws[j].min_index();
    hi[j] = Ws[j].piece(Ws[j].max_index()).is_full() ? Ws[j].max_index()
                                                     : Ws[j].max_index() + 1;
  }

  auto S = [&](const std::vector<int>& m) {
    QSub s = QSub::full(n);
    for (int j = 0; j < d; ++j) s = s.intersect(Ws[j].piece(m[j]));
    return s;
  };

  MultiGrading A(d, n);
  std::vector<int> m = lo;
  for (;;) {
    QSub Sm = S(m);
    if (!Sm.is_zero()) {
      QSub Tm = QSub::zero(n);
      for (int i = 0; i < d; ++i) {
        std::vector<int> m2 = m;
        m2[i] -= 1;
        Tm = Tm.sum(S(m2));
      }
      if (Tm.dim() < Sm.dim()) {
        MultiIndex l(d);
        l[0] = m[0];
        for (int j = 1; j < d; ++j) l[j] = m[j] - m[j - 1];
        A.set(l, Tm.complement_in(Sm));
      }
    }
    // odometer over the box
    int j = 0;
    while (j < d) {
      ++m[j];
      if (m[j] <= hi[j]) break;
      m[j] = lo[j];
      ++j;
    }
    if (j == d) break;
  }

  if (!A.is_direct_sum())
    throw VerificationFailure("splitting grading does not decompose the space");
  for (int j = 1; j <= d; ++j)
    if (A.partial_sum_filtration(j) != Ws[j - 1])
      throw VerificationFailure(
          "splitting grading fails a partial-sum identity");
  return A;
}

MultiGrading polarization_compatible_grading(const MultiGrading& A,
                                             const QMat& Q) {
  int n = A.ambient_dim();
  if (Q.rows() != n || Q.cols() != n)
    throw DimensionMismatch("bilinear form shape");
  if (sgn(Q.det()) == 0) throw InvalidInput("bilinear form is degenerate");
  if (!A.is_direct_sum()) throw InvalidInput("grading must decompose the space");

  // dual grading: D^l = annihilator under Q of the sum of A^m, m != -l
  MultiGrading D(A.index_dim(), n);
  for (const auto& [l, piece] : A.pieces()) {
    MultiIndex neg(l.size());
    for (size_t i = 0; i < l.size(); ++i) neg[i] = -l[i];
    int rows = 0;
    for (const auto& [m, s] : A.pieces())
      if (m != neg) rows += s.dim();
    QMat stacked(rows, n);
    int r = 0;
    for (const auto& [m, s] : A.pieces()) {
      if (m == neg) continue;
      for (int i = 0; i < s.dim(); ++i, ++r)
        for (int j = 0; j < n; ++j) stacked(r, j) = s.basis()(i, j);
    }
    QSub dual = QSub::span((stacked * Q).kernel());
    if (dual.dim() != piece.dim())
      throw InvalidInput(
          "dual grading dimensions disagree (graded dimensions must be "
          "symmetric under negation)");
    D.set(l, dual);
  }
  if (!D.is_direct_sum())
    throw InvalidInput("dual grading does not decompose the space");

  // comparison map g with g(A^l) = D^l and identity A^l-component
  QMat abasis(n, n), img(n, n);
  int col = 0;
  for (const auto& [l, piece] : A.pieces()) {
    const QSub dual = D.piece(l);
    // express each A^l basis vector as the A^l-component of a unique vector
    // of D^l: solve (proj_l of dual basis rows) * x = basis vector
    QMat cols(n, piece.dim());
    for (int a = 0; a < dual.dim(); ++a) {
      QVec pr = A.project(dual.basis().row(a), l);
      for (int i = 0; i < n; ++i) cols(i, a) = pr[i];
    }
    for (int i = 0; i < piece.dim(); ++i, ++col) {
      QVec b = piece.basis().row(i);
      auto x = cols.solve(b);
      if (!x)
        throw InvalidInput(
            "comparison map is not unipotent relative to the grading order");
      QVec w(n, Rat(0));
      for (int a = 0; a < dual.dim(); ++a)
        for (int j = 0; j < n; ++j) w[j] += (*x)[a] * dual.basis()(a, j);
      for (int j = 0; j < n; ++j) {
        abasis(j, col) = b[j];
        img(j, col) = w[j];
      }
    }
  }
  auto inv = abasis.inverse();
  if (!inv) throw Error("grading basis not invertible");
  QMat g = img * *inv;
  if (!is_nilpotent(g - QMat::identity(n)))
    throw InvalidInput(
        "comparison map is not unipotent relative to the grading order");

  QMat h = unipotent_sqrt(g);
  MultiGrading B(A.index_dim(), n);
  for (const auto& [l, piece] : A.pieces()) B.set(l, piece.image(h));

  if (!B.is_direct_sum())
    throw VerificationFailure("adapted grading does not decompose the space");
  if (!B.orthogonal_under(Q))
    throw VerificationFailure(
        "adapted grading fails the pairing condition: nonzero pairing off "
        "the antidiagonal");
  for (int j = 1; j <= A.index_dim(); ++j)
    if (B.partial_sum_filtration(j) != A.partial_sum_filtration(j))
      throw VerificationFailure(
          "adapted grading does not split the original filtrations");
  return B;
}

MultiIndex position(const QVec& u, const MultiGrading& A) {
  if (vec_is_zero(u)) throw InvalidInput("position of the zero vector");
  for (auto it = A.pieces().rbegin(); it != A.pieces().rend(); ++it)
    if (!vec_is_zero(A.project(u, it->first))) return it->first;
  throw InvalidInput("vector has no component in the grading");
}

}  // namespace hodge
