#pragma once

// Subspaces of K^n stored as reduced-row-echelon bases (rows are vectors).
// Over the exact fields equality of subspaces is equality of the canonical
// basis matrices; the CD instantiation uses tolerance-based pivoting and is
// only used for float verification paths.

#include <optional>
#include <vector>

#include "hodge/matrix.hpp"

namespace hodge {

template <class K>
class Subspace {
 public:
  Subspace() : n_(0) {}

  static Subspace zero(int n) {
    Subspace s;
    s.n_ = n;
    s.basis_ = Mat<K>(0, n);
    return s;
  }
  static Subspace full(int n) { return span(Mat<K>::identity(n)); }

  static Subspace span(Mat<K> rows, double tol = default_tolerance()) {
    Subspace s;
    s.n_ = rows.cols();
    s.pivots_ = rows.rref(tol);
    int d = static_cast<int>(s.pivots_.size());
    s.basis_ = Mat<K>(d, s.n_);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < s.n_; ++j) s.basis_(i, j) = rows(i, j);
    return s;
  }
  static Subspace span(const std::vector<Vec<K>>& vectors, int n,
                       double tol = default_tolerance()) {
    return span(Mat<K>::from_rows(vectors, n), tol);
  }

  int ambient_dim() const { return n_; }
  int dim() const { return basis_.rows(); }
  bool is_zero() const { return dim() == 0; }
  bool is_full() const { return dim() == n_; }
  const Mat<K>& basis() const { return basis_; }
  const std::vector<int>& pivots() const { return pivots_; }

  // v minus its projection onto the span, eliminated against the echelon
  // pivots.  Zero iff v lies in the subspace (exact fields).
  Vec<K> residual(const Vec<K>& v) const {
    if (static_cast<int>(v.size()) != n_)
      throw DimensionMismatch("residual: vector length");
    Vec<K> w = v;
    for (int i = 0; i < dim(); ++i) {
      K c = w[pivots_[i]];
      if (FieldTraits<K>::is_zero(c, 0.0)) continue;
      for (int j = 0; j < n_; ++j) w[j] = w[j] - c * basis_(i, j);
      w[pivots_[i]] = FieldTraits<K>::zero();
    }
    return w;
  }

  bool contains(const Vec<K>& v, double tol = default_tolerance()) const {
    double threshold = 0.0;
    if constexpr (!FieldTraits<K>::exact) {
      double scale = 0.0;
      for (const auto& x : v) scale = std::max(scale, FieldTraits<K>::magnitude(x));
      threshold = tol * std::max(1.0, scale);
    }
    return vec_is_zero(residual(v), threshold);
  }

  bool contains(const Subspace& other, double tol = default_tolerance()) const {
    if (other.n_ != n_) throw DimensionMismatch("contains: ambient dims");
    for (int i = 0; i < other.dim(); ++i)
      if (!contains(other.basis_.row(i), tol)) return false;
    return true;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    if (a.n_ != b.n_) return false;
    if constexpr (FieldTraits<K>::exact) {
      return a.basis_ == b.basis_;
    } else {
      return a.dim() == b.dim() && a.contains(b) && b.contains(a);
    }
  }
  friend bool operator!=(const Subspace& a, const Subspace& b) {
    return !(a == b);
  }

  Subspace sum(const Subspace& other, double tol = default_tolerance()) const {
    if (other.n_ != n_) throw DimensionMismatch("sum: ambient dims");
    Mat<K> stacked(dim() + other.dim(), n_);
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < n_; ++j) stacked(i, j) = basis_(i, j);
    for (int i = 0; i < other.dim(); ++i)
      for (int j = 0; j < n_; ++j) stacked(dim() + i, j) = other.basis_(i, j);
    return span(stacked, tol);
  }

  Subspace intersect(const Subspace& other,
                     double tol = default_tolerance()) const {
    if (other.n_ != n_) throw DimensionMismatch("intersect: ambient dims");
    // x in both spans  <=>  x = a * basis = b * other.basis; solve for the
    // coefficient pair via the kernel of [basis^T | -other.basis^T].
    int k = dim(), m = other.dim();
    if (k == 0 || m == 0) return zero(n_);
    Mat<K> joint(n_, k + m);
    for (int i = 0; i < n_; ++i) {
      for (int a = 0; a < k; ++a) joint(i, a) = basis_(a, i);
      for (int b = 0; b < m; ++b) joint(i, k + b) = -other.basis_(b, i);
    }
    Mat<K> ker = joint.kernel(tol);
    Mat<K> vectors(ker.rows(), n_);
    for (int r = 0; r < ker.rows(); ++r)
      for (int j = 0; j < n_; ++j) {
        K x = FieldTraits<K>::zero();
        for (int a = 0; a < k; ++a) x += ker(r, a) * basis_(a, j);
        vectors(r, j) = x;
      }
    return span(vectors, tol);
  }

  Subspace conjugate() const {
    // conjugation of an echelon basis is still an echelon basis
    Subspace s = *this;
    s.basis_ = basis_.conjugate();
    return s;
  }

  // {M x : x in this}
  Subspace image(const Mat<K>& M, double tol = default_tolerance()) const {
    if (M.cols() != n_) throw DimensionMismatch("image: operator shape");
    Mat<K> rows(dim(), M.rows());
    for (int i = 0; i < dim(); ++i) {
      Vec<K> mv = M * basis_.row(i);
      for (int j = 0; j < M.rows(); ++j) rows(i, j) = mv[j];
    }
    return span(rows, tol);
  }

  // Rows a with a . v = 0 (plain dot product) for every v in the subspace;
  // the subspace is exactly the kernel of this matrix.
  Mat<K> annihilator(double tol = default_tolerance()) const {
    return basis_.kernel(tol);
  }

  // {x : M x in this}
  Subspace preimage(const Mat<K>& M, double tol = default_tolerance()) const {
    if (M.rows() != n_) throw DimensionMismatch("preimage: operator shape");
    Mat<K> ann = annihilator(tol);
    return span((ann * M).kernel(tol), tol);
  }

  // Coefficients a with v = sum a_i basis_row_i, if v lies in the span.
  std::optional<Vec<K>> coords(const Vec<K>& v,
                               double tol = default_tolerance()) const {
    if (!contains(v, tol)) return std::nullopt;
    Vec<K> a(dim(), FieldTraits<K>::zero());
    Vec<K> w = v;
    for (int i = 0; i < dim(); ++i) {
      a[i] = w[pivots_[i]];
      if (FieldTraits<K>::is_zero(a[i], 0.0)) continue;
      for (int j = 0; j < n_; ++j) w[j] = w[j] - a[i] * basis_(i, j);
    }
    return a;
  }

  // Deterministic complement of *this inside the containing space W: rows of
  // W's canonical basis that extend this subspace's basis, in order.
  Subspace complement_in(const Subspace& W,
                         double tol = default_tolerance()) const {
    if (!W.contains(*this, tol))
      throw InvalidInput("complement_in: subspace not contained in the larger one");
    Mat<K> work = basis_;
    int r = work.rank(tol);
    std::vector<Vec<K>> chosen;
    for (int i = 0; i < W.dim() && r + static_cast<int>(chosen.size()) < W.dim();
         ++i) {
      Vec<K> cand = W.basis_.row(i);
      Mat<K> trial(work.rows() + 1, n_);
      for (int a = 0; a < work.rows(); ++a)
        for (int j = 0; j < n_; ++j) trial(a, j) = work(a, j);
      for (int j = 0; j < n_; ++j) trial(work.rows(), j) = cand[j];
      if (trial.rank(tol) > work.rows()) {
        work = trial;
        chosen.push_back(cand);
      }
    }
    if (r + static_cast<int>(chosen.size()) != W.dim())
      throw Error("complement_in: failed to extend basis");
    return span(chosen, n_, tol);
  }

  Subspace standard_complement(double tol = default_tolerance()) const {
    return complement_in(full(n_), tol);
  }

 private:
  int n_;
  Mat<K> basis_;           // dim x n, reduced row echelon
  std::vector<int> pivots_;
};

using QSub = Subspace<Rat>;
using GSub = Subspace<Gauss>;
using CSub = Subspace<CD>;

inline GSub promote(const QSub& s) {
  return GSub::span(promote(s.basis()));
}
inline CSub promote_float(const GSub& s) {
  return CSub::span(promote_float(s.basis()));
}
inline CSub promote_float(const QSub& s) { return promote_float(promote(s)); }

// W/U presented by a chosen complement C (U + C = W, direct); classes are
// coordinatized in C's basis.
template <class K>
class QuotientMap {
 public:
  QuotientMap() = default;
  QuotientMap(const Subspace<K>& U, const Subspace<K>& W,
              double tol = default_tolerance())
      : U_(U), C_(U.complement_in(W, tol)), tol_(tol) {
    int n = U.ambient_dim();
    solver_ = Mat<K>(n, U_.dim() + C_.dim());
    for (int i = 0; i < n; ++i) {
      for (int a = 0; a < U_.dim(); ++a) solver_(i, a) = U_.basis()(a, i);
      for (int b = 0; b < C_.dim(); ++b)
        solver_(i, U_.dim() + b) = C_.basis()(b, i);
    }
  }

  const Subspace<K>& complement() const { return C_; }
  const Subspace<K>& submodule() const { return U_; }
  int dim() const { return C_.dim(); }

  // coordinates of the class of w in the complement basis
  Vec<K> coords_of(const Vec<K>& w) const {
    auto x = solver_.solve(w, tol_);
    if (!x) throw InvalidInput("quotient: vector outside the presented space");
    Vec<K> c(C_.dim());
    for (int b = 0; b < C_.dim(); ++b) c[b] = (*x)[U_.dim() + b];
    return c;
  }

  Vec<K> lift(const Vec<K>& coords) const {
    Vec<K> v(U_.ambient_dim(), FieldTraits<K>::zero());
    for (int b = 0; b < C_.dim(); ++b)
      for (int j = 0; j < U_.ambient_dim(); ++j)
        v[j] += coords[b] * C_.basis()(b, j);
    return v;
  }

  // matrix of the induced endomorphism on W/U (requires M(W) ⊆ W, M(U) ⊆ U)
  Mat<K> induced(const Mat<K>& M) const {
    Mat<K> m(dim(), dim());
    for (int j = 0; j < dim(); ++j) {
      Vec<K> e(dim(), FieldTraits<K>::zero());
      e[j] = FieldTraits<K>::one();
      Vec<K> img = coords_of(M * lift(e));
      for (int i = 0; i < dim(); ++i) m(i, j) = img[i];
    }
    return m;
  }

  // image in W/U of a subspace S ⊆ W
  Subspace<K> push(const Subspace<K>& S) const {
    std::vector<Vec<K>> rows;
    for (int i = 0; i < S.dim(); ++i)
      rows.push_back(coords_of(S.basis().row(i)));
    return Subspace<K>::span(rows, dim(), tol_);
  }

 private:
  Subspace<K> U_, C_;
  Mat<K> solver_;
  double tol_ = default_tolerance();
};

// Matrix of the map src-quotient -> dst-quotient induced by M (requires
// M(src W) ⊆ dst W and M(src U) ⊆ dst U).
template <class K>
Mat<K> induced_map(const QuotientMap<K>& src, const QuotientMap<K>& dst,
                   const Mat<K>& M) {
  Mat<K> out(dst.dim(), src.dim());
  for (int j = 0; j < src.dim(); ++j) {
    Vec<K> e(src.dim(), FieldTraits<K>::zero());
    e[j] = FieldTraits<K>::one();
    Vec<K> img = dst.coords_of(M * src.lift(e));
    for (int i = 0; i < dst.dim(); ++i) out(i, j) = img[i];
  }
  return out;
}

}  // namespace hodge
