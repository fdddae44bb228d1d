#pragma once

// Direct-sum decompositions V = ⊕_k A^k indexed by integers, with the
// projections onto each summand.  A grading splits an increasing filtration
// W when W_l = ⊕_{k<=l} A^k, and a decreasing F when F^p = ⊕_{k>=p} A^k.

#include <map>
#include <memory>
#include <vector>

#include "hodge/filtration.hpp"

namespace hodge {

template <class K>
class Grading {
 public:
  Grading() : n_(0) {}
  explicit Grading(int ambient_dim) : n_(ambient_dim) {}

  int ambient_dim() const { return n_; }

  void set(int k, Subspace<K> s) {
    if (s.ambient_dim() != n_)
      throw DimensionMismatch("grading piece has wrong ambient dimension");
    if (s.is_zero()) return;
    pieces_[k] = std::move(s);
  }

  const std::map<int, Subspace<K>>& pieces() const { return pieces_; }

  Subspace<K> piece(int k) const {
    auto it = pieces_.find(k);
    return it == pieces_.end() ? Subspace<K>::zero(n_) : it->second;
  }

  int total_dim() const {
    int d = 0;
    for (const auto& [k, s] : pieces_) d += s.dim();
    return d;
  }

  // All stored bases stacked must form a basis of the ambient space.
  bool is_direct_sum(double tol = default_tolerance()) const {
    if (total_dim() != n_) return false;
    Mat<K> stacked(n_, n_);
    int r = 0;
    for (const auto& [k, s] : pieces_)
      for (int i = 0; i < s.dim(); ++i, ++r)
        for (int j = 0; j < n_; ++j) stacked(r, j) = s.basis()(i, j);
    return stacked.rank(tol) == n_;
  }

  // Component of v in A^k along the other summands.
  Vec<K> project(const Vec<K>& v, int k, double tol = default_tolerance()) const {
    ensure_solver(tol);
    auto x = solver_->solve(v, tol);
    if (!x) throw InvalidInput("grading projection: vector outside the sum");
    Vec<K> out(n_, FieldTraits<K>::zero());
    int offset = 0;
    for (const auto& [kk, s] : pieces_) {
      if (kk == k)
        for (int i = 0; i < s.dim(); ++i)
          for (int j = 0; j < n_; ++j) out[j] += (*x)[offset + i] * s.basis()(i, j);
      offset += s.dim();
    }
    return out;
  }

  Mat<K> projector(int k, double tol = default_tolerance()) const {
    Mat<K> P(n_, n_);
    for (int j = 0; j < n_; ++j) {
      Vec<K> e(n_, FieldTraits<K>::zero());
      e[j] = FieldTraits<K>::one();
      Vec<K> p = project(e, k, tol);
      for (int i = 0; i < n_; ++i) P(i, j) = p[i];
    }
    return P;
  }

  Filtration<K> to_increasing(double tol = default_tolerance()) const {
    Filtration<K> W(Direction::increasing, n_);
    Subspace<K> acc = Subspace<K>::zero(n_);
    for (const auto& [k, s] : pieces_) {
      acc = acc.sum(s, tol);
      W.set(k, acc);
    }
    return W;
  }

  Filtration<K> to_decreasing(double tol = default_tolerance()) const {
    Filtration<K> F(Direction::decreasing, n_);
    Subspace<K> acc = Subspace<K>::zero(n_);
    for (auto it = pieces_.rbegin(); it != pieces_.rend(); ++it) {
      acc = acc.sum(it->second, tol);
      F.set(it->first, acc);
    }
    return F;
  }

  bool splits(const Filtration<K>& f, double tol = default_tolerance()) const {
    if (!is_direct_sum(tol)) return false;
    Filtration<K> mine = f.direction() == Direction::increasing
                             ? to_increasing(tol)
                             : to_decreasing(tol);
    if (f.pieces().empty()) return pieces_.empty();
    int lo = std::min(f.min_index(), pieces_.begin()->first);
    int hi = std::max(f.max_index(), pieces_.rbegin()->first);
    for (int k = lo; k <= hi; ++k)
      if (mine.piece(k) != f.piece(k)) return false;
    return true;
  }

  // The semisimple operator acting as multiplication by k on A^k.
  Mat<K> weight_operator(double tol = default_tolerance()) const {
    Mat<K> Y(n_, n_);
    for (const auto& [k, s] : pieces_) {
      Mat<K> P = projector(k, tol);
      Y += scalar_from_rat<K>(Rat(k)) * P;
    }
    return Y;
  }

 private:
  void ensure_solver(double tol) const {
    if (solver_) return;
    if (total_dim() != n_)
      throw InvalidInput("grading does not span the ambient space");
    auto m = std::make_shared<Mat<K>>(n_, n_);
    int offset = 0;
    for (const auto& [k, s] : pieces_) {
      for (int i = 0; i < s.dim(); ++i)
        for (int j = 0; j < n_; ++j) (*m)(j, offset + i) = s.basis()(i, j);
      offset += s.dim();
    }
    if (m->rank(tol) != n_)
      throw InvalidInput("grading pieces are not independent");
    solver_ = std::move(m);
  }

  int n_;
  std::map<int, Subspace<K>> pieces_;
  mutable std::shared_ptr<Mat<K>> solver_;
};

using QGrading = Grading<Rat>;
using GGrading = Grading<Gauss>;

inline GGrading promote(const QGrading& g) {
  GGrading out(g.ambient_dim());
  for (const auto& [k, s] : g.pieces()) out.set(k, promote(s));
  return out;
}

// Canonical grading subordinate to an increasing filtration: the k-th piece
// is the echelon complement of W_{k-1} in W_k.  Deterministic in the input.
template <class K>
Grading<K> echelon_splitting(const Filtration<K>& W,
                             double tol = default_tolerance()) {
  if (W.direction() != Direction::increasing)
    throw InvalidInput("echelon_splitting expects an increasing filtration");
  Grading<K> g(W.ambient_dim());
  if (W.pieces().empty()) return g;
  for (int k = W.min_index(); k <= W.max_index() + 1; ++k) {
    Subspace<K> lo = W.piece(k - 1), hi = W.piece(k);
    if (hi.dim() == lo.dim()) continue;
    g.set(k, lo.complement_in(hi, tol));
  }
  return g;
}

// Same for a decreasing filtration: piece p complements F^{p+1} in F^p.
template <class K>
Grading<K> echelon_splitting_decreasing(const Filtration<K>& F,
                                        double tol = default_tolerance()) {
  if (F.direction() != Direction::decreasing)
    throw InvalidInput("expected a decreasing filtration");
  Grading<K> g(F.ambient_dim());
  if (F.pieces().empty()) return g;
  for (int p = F.max_index(); p >= F.min_index() - 1; --p) {
    Subspace<K> hi = F.piece(p + 1), lo = F.piece(p);
    if (hi.dim() == lo.dim()) continue;
    g.set(p, hi.complement_in(lo, tol));
  }
  return g;
}

}  // namespace hodge
