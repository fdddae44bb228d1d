#include "hodge/mixed.hpp"

#include <sstream>

namespace hodge {

GradedPiece graded_piece(const MixedHodgeStructure& m, int k) {
  GradedPiece g;
  g.weight = k;
  GFilt W = promote(m.W);
  g.quotient = QuotientMap<Gauss>(W.piece(k - 1), W.piece(k));
  g.induced_F = GFilt(Direction::decreasing, g.quotient.dim());
  int lo = m.F.min_index(), hi = m.F.max_index();
  GSub Wk = W.piece(k);
  for (int p = lo; p <= hi; ++p)
    g.induced_F.set(p, g.quotient.push(m.F.piece(p).intersect(Wk)));
  return g;
}

MhsReport is_mhs(const MixedHodgeStructure& m) {
  MhsReport r;
  r.shapes_ok = m.W.direction() == Direction::increasing &&
                m.F.direction() == Direction::decreasing &&
                m.W.ambient_dim() == m.F.ambient_dim() && m.W.valid() &&
                m.F.valid();
  if (!r.shapes_ok) return r;
  for (int k = m.W.min_index(); k <= m.W.max_index() + 1; ++k) {
    int d = m.W.graded_dim(k);
    if (d == 0) continue;
    GradedPiece g = graded_piece(m, k);
    GradedVerdict v;
    v.weight = k;
    v.dim = d;
    v.pure = g.induced_F.valid() && is_pure(g.induced_F, k);
    r.graded.push_back(v);
  }
  return r;
}

std::string MhsReport::describe() const {
  std::ostringstream os;
  if (!shapes_ok) return "filtration shapes invalid";
  for (const auto& g : graded)
    os << "Gr_" << g.weight << " dim " << g.dim << ": "
       << (g.pure ? "pure" : "NOT PURE") << "; ";
  return os.str();
}

GGrading Bigrading::by_weight() const {
  GGrading g(n);
  std::map<int, GSub> acc;
  for (const auto& [pq, s] : pieces) {
    int l = pq.first + pq.second;
    auto it = acc.find(l);
    acc[l] = it == acc.end() ? s : it->second.sum(s);
  }
  for (auto& [l, s] : acc) g.set(l, s);
  return g;
}

GGrading Bigrading::by_p() const {
  GGrading g(n);
  std::map<int, GSub> acc;
  for (const auto& [pq, s] : pieces) {
    auto it = acc.find(pq.first);
    acc[pq.first] = it == acc.end() ? s : it->second.sum(s);
  }
  for (auto& [p, s] : acc) g.set(p, s);
  return g;
}

std::map<std::pair<int, int>, int> Bigrading::dimension_pattern() const {
  std::map<std::pair<int, int>, int> d;
  for (const auto& [pq, s] : pieces)
    if (s.dim() > 0) d[pq] = s.dim();
  return d;
}

Bigrading deligne_bigrading(const MixedHodgeStructure& m) {
  const int n = m.dim();
  GFilt W = promote(m.W);
  Bigrading big;
  big.n = n;

  int wlo = m.W.min_index(), whi = m.W.max_index() + 1;
  int flo = m.F.min_index(), fhi = m.F.max_index();
  // F^p can only contribute pieces with p in [flo-spread, fhi]; widen the
  // p-window by the weight spread to be safe.
  int spread = whi - wlo + 1;
  for (int p = flo - spread; p <= fhi; ++p) {
    for (int k = wlo; k <= whi; ++k) {
      int q = k - p;
      // (F^p ∩ W_k) ∩ (conj(F^q) ∩ W_k + Σ_{j≥1} conj(F^{q−j}) ∩ W_{k−j−1})
      GSub left = m.F.piece(p).intersect(W.piece(k));
      if (left.is_zero()) continue;
      GSub right = m.F.piece(q).conjugate().intersect(W.piece(k));
      for (int j = 1;; ++j) {
        GSub wpart = W.piece(k - j - 1);
        if (wpart.is_zero()) break;
        right = right.sum(m.F.piece(q - j).conjugate().intersect(wpart));
      }
      GSub piece = left.intersect(right);
      if (!piece.is_zero()) big.pieces[{p, q}] = piece;
    }
  }

  // --- verification against the bigrading axioms ---
  GGrading by_l = big.by_weight();
  GGrading by_p = big.by_p();
  int total = 0;
  for (const auto& [pq, s] : big.pieces) total += s.dim();
  bool direct = total == n && by_l.is_direct_sum();
  if (!direct)
    throw VerificationFailure("bigrading pieces do not decompose the space "
                              "(input is not a mixed Hodge structure?)");
  if (!by_l.splits(W))
    throw VerificationFailure("bigrading fails to split the weight filtration");
  // by_p sums are ⊕_{a>=p}; compare against F
  GFilt FfromI = by_p.to_decreasing();
  if (FfromI != m.F)
    throw VerificationFailure("bigrading fails to split the Hodge filtration");
  // conj(I^{p,q}) = I^{q,p} modulo ⊕_{p'<q, q'<p} I^{p',q'}
  for (const auto& [pq, s] : big.pieces) {
    GSub target = big.piece(pq.second, pq.first);
    for (const auto& [ab, t] : big.pieces)
      if (ab.first < pq.second && ab.second < pq.first)
        target = target.sum(t);
    if (!target.contains(s.conjugate()))
      throw VerificationFailure("bigrading conjugation symmetry fails");
  }
  return big;
}

GMat end_p_component(const Bigrading& big, const GMat& X, int r) {
  GGrading by_p = big.by_p();
  GMat out(big.n, big.n);
  for (const auto& [p, s] : by_p.pieces()) {
    GSub target = by_p.piece(p + r);
    GMat Pp = by_p.projector(p);
    GMat Pt = target.is_zero() ? GMat(big.n, big.n) : by_p.projector(p + r);
    out += Pt * X * Pp;
  }
  return out;
}

bool in_lowering_algebra(const Bigrading& big, const GMat& X) {
  GGrading by_p = big.by_p();
  // X is lowering iff P_{p'} X P_p = 0 whenever p' >= p
  std::vector<int> levels;
  for (const auto& [p, s] : by_p.pieces()) levels.push_back(p);
  GMat low(big.n, big.n);
  for (int p : levels) {
    GMat Pp = by_p.projector(p);
    for (int t : levels)
      if (t < p) low += by_p.projector(t) * X * Pp;
  }
  return low == X;
}

std::map<std::pair<int, int>, int> intersection_pattern(const QFilt& W,
                                                        const GFilt& F,
                                                        int plo, int phi) {
  std::map<std::pair<int, int>, int> pat;
  GFilt Wg = promote(W);
  for (int w = W.min_index() - 1; w <= W.max_index() + 1; ++w)
    for (int p = plo; p <= phi; ++p)
      pat[{w, p}] = Wg.piece(w).intersect(F.piece(p)).dim();
  return pat;
}

std::map<std::pair<int, int>, int> intersection_pattern(const QFilt& W,
                                                        const GFilt& F) {
  return intersection_pattern(W, F, F.min_index() - 1, F.max_index() + 1);
}

GMat align_mhs(const QFilt& W, const GFilt& F, const GFilt& F2) {
  int plo = std::min(F.min_index(), F2.min_index()) - 1;
  int phi = std::max(F.max_index(), F2.max_index()) + 1;
  if (intersection_pattern(W, F, plo, phi) !=
      intersection_pattern(W, F2, plo, phi))
    throw InvalidInput(
        "alignment requires matching dimension patterns dim(W_w ∩ F^p)");
  MixedHodgeStructure m1{W, F}, m2{W, F2};
  if (!is_mhs(m1).ok() || !is_mhs(m2).ok())
    throw InvalidInput("alignment requires two mixed Hodge structures");
  Bigrading I1 = deligne_bigrading(m1);
  Bigrading I2 = deligne_bigrading(m2);
  if (I1.dimension_pattern() != I2.dimension_pattern())
    throw InvalidInput("bigrading dimension patterns disagree");

  const int n = I1.n;
  GMat B1(n, n), B2(n, n);
  int col = 0;
  for (const auto& [pq, s1] : I1.pieces) {
    const GSub& s2 = I2.pieces.at(pq);
    for (int i = 0; i < s1.dim(); ++i, ++col)
      for (int j = 0; j < n; ++j) {
        B1(j, col) = s1.basis()(i, j);
        B2(j, col) = s2.basis()(i, j);
      }
  }
  auto inv = B1.inverse();
  if (!inv) throw Error("alignment: bigrading basis not invertible");
  GMat g = B2 * *inv;

  // asserted identities: gW = W and gF = F2, exactly
  GFilt Wg = promote(W);
  for (int w = W.min_index(); w <= W.max_index(); ++w)
    if (Wg.piece(w).image(g) != Wg.piece(w))
      throw VerificationFailure("alignment does not preserve W");
  if (F.apply(g) != F2)
    throw VerificationFailure("alignment does not carry F to the target");
  return g;
}

}  // namespace hodge
