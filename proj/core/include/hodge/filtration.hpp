#pragma once

// Exhaustive filtrations indexed by integers.  Increasing filtrations
// (weight-style, W_k ⊆ W_{k+1}) and decreasing ones (Hodge-style,
// F^k ⊇ F^{k+1}) share the storage; only the jumps are kept.
//
// Convention outside the stored range: on the deep end the filtration is
// zero (k above the largest stored index for decreasing, below the smallest
// for increasing); on the shallow end it is the full space, so every
// filtration is exhaustive by construction and fixtures may list only the
// proper pieces.

#include <map>
#include <vector>

#include "hodge/subspace.hpp"

namespace hodge {

enum class Direction { increasing, decreasing };

template <class K>
class Filtration {
 public:
  Filtration() : dir_(Direction::increasing), n_(0) {}
  Filtration(Direction dir, int ambient_dim) : dir_(dir), n_(ambient_dim) {}

  Direction direction() const { return dir_; }
  int ambient_dim() const { return n_; }
  bool empty() const { return pieces_.empty(); }

  void set(int k, Subspace<K> s) {
    if (s.ambient_dim() != n_)
      throw DimensionMismatch("filtration piece has wrong ambient dimension");
    pieces_[k] = std::move(s);
  }

  const std::map<int, Subspace<K>>& pieces() const { return pieces_; }

  int min_index() const {
    if (pieces_.empty()) throw InvalidInput("empty filtration");
    return pieces_.begin()->first;
  }
  int max_index() const {
    if (pieces_.empty()) throw InvalidInput("empty filtration");
    return pieces_.rbegin()->first;
  }

  Subspace<K> piece(int k) const {
    if (pieces_.empty()) throw InvalidInput("empty filtration");
    if (dir_ == Direction::increasing) {
      if (k > max_index()) return Subspace<K>::full(n_);
      // largest stored index <= k
      auto it = pieces_.upper_bound(k);
      if (it == pieces_.begin()) return Subspace<K>::zero(n_);
      return std::prev(it)->second;
    }
    if (k < min_index()) return Subspace<K>::full(n_);
    // smallest stored index >= k
    auto it = pieces_.lower_bound(k);
    if (it == pieces_.end()) return Subspace<K>::zero(n_);
    return it->second;
  }

  bool is_nested(double tol = default_tolerance()) const {
    const Subspace<K>* prev = nullptr;
    for (const auto& [k, s] : pieces_) {
      if (prev) {
        bool ok = dir_ == Direction::increasing ? s.contains(*prev, tol)
                                                : prev->contains(s, tol);
        if (!ok) return false;
      }
      prev = &s;
    }
    return true;
  }

  // nonempty and properly nested (exhaustiveness is automatic)
  bool valid(double tol = default_tolerance()) const {
    return !pieces_.empty() && is_nested(tol);
  }

  friend bool operator==(const Filtration& a, const Filtration& b) {
    if (a.dir_ != b.dir_ || a.n_ != b.n_) return false;
    if (a.pieces_.empty() || b.pieces_.empty())
      return a.pieces_.empty() && b.pieces_.empty();
    int lo = std::min(a.min_index(), b.min_index());
    int hi = std::max(a.max_index(), b.max_index());
    for (int k = lo; k <= hi; ++k)
      if (a.piece(k) != b.piece(k)) return false;
    return true;
  }
  friend bool operator!=(const Filtration& a, const Filtration& b) {
    return !(a == b);
  }

  Filtration apply(const Mat<K>& M, double tol = default_tolerance()) const {
    Filtration out(dir_, n_);
    for (const auto& [k, s] : pieces_) out.pieces_[k] = s.image(M, tol);
    return out;
  }

  Filtration conjugate() const {
    Filtration out(dir_, n_);
    for (const auto& [k, s] : pieces_) out.pieces_[k] = s.conjugate();
    return out;
  }

  // shifted(k) = original(k + s); e.g. an increasing W shifted by -w has
  // shifted(l) = W(l - w).
  Filtration shifted(int s) const {
    Filtration out(dir_, n_);
    for (const auto& [k, sub] : pieces_) out.pieces_[k - s] = sub;
    return out;
  }

  int graded_dim(int k) const {
    if (dir_ == Direction::increasing)
      return piece(k).dim() - piece(k - 1).dim();
    return piece(k).dim() - piece(k + 1).dim();
  }

  std::vector<int> jump_indices() const {
    std::vector<int> out;
    if (pieces_.empty()) return out;
    // include the implicit saturation step on the shallow end
    int lo = min_index() - (dir_ == Direction::decreasing ? 1 : 0);
    int hi = max_index() + (dir_ == Direction::increasing ? 1 : 0);
    for (int k = lo; k <= hi; ++k)
      if (graded_dim(k) != 0) out.push_back(k);
    return out;
  }

 private:
  Direction dir_;
  int n_;
  std::map<int, Subspace<K>> pieces_;
};

using QFilt = Filtration<Rat>;
using GFilt = Filtration<Gauss>;
using CFilt = Filtration<CD>;

inline GFilt promote(const QFilt& f) {
  GFilt g(f.direction(), f.ambient_dim());
  for (const auto& [k, s] : f.pieces()) g.set(k, promote(s));
  return g;
}

inline CFilt promote_float(const GFilt& f) {
  CFilt g(f.direction(), f.ambient_dim());
  for (const auto& [k, s] : f.pieces()) g.set(k, promote_float(s));
  return g;
}

}  // namespace hodge
