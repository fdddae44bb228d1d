#pragma once

// Dense matrices over the three scalar fields.  Operators act on column
// vectors; subspace bases elsewhere in the library are stored as row
// vectors.  Everything over Rat/Gauss is exact; CD paths take a relative
// tolerance where zero tests are needed.

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <vector>

#include "hodge/error.hpp"
#include "hodge/rational.hpp"

namespace hodge {

template <class K>
struct FieldTraits;

template <>
struct FieldTraits<Rat> {
  static constexpr bool exact = true;
  static Rat zero() { return Rat(0); }
  static Rat one() { return Rat(1); }
  static Rat conjugate(const Rat& x) { return x; }
  static bool is_zero(const Rat& x, double) { return sgn(x) == 0; }
  static double magnitude(const Rat& x) { return std::abs(to_double(x)); }
};

template <>
struct FieldTraits<Gauss> {
  static constexpr bool exact = true;
  static Gauss zero() { return Gauss(); }
  static Gauss one() { return Gauss(Rat(1)); }
  static Gauss conjugate(const Gauss& x) { return conj(x); }
  static bool is_zero(const Gauss& x, double) { return x.is_zero(); }
  static double magnitude(const Gauss& x) { return std::sqrt(to_double(norm(x))); }
};

template <>
struct FieldTraits<CD> {
  static constexpr bool exact = false;
  static CD zero() { return CD(0, 0); }
  static CD one() { return CD(1, 0); }
  static CD conjugate(const CD& x) { return std::conj(x); }
  static bool is_zero(const CD& x, double tol) { return std::abs(x) <= tol; }
  static double magnitude(const CD& x) { return std::abs(x); }
};

template <class K>
using Vec = std::vector<K>;

template <class K>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(int rows, int cols)
      : rows_(rows), cols_(cols),
        a_(static_cast<size_t>(rows) * cols, FieldTraits<K>::zero()) {
    if (rows < 0 || cols < 0) throw DimensionMismatch("negative matrix shape");
  }
  Mat(std::initializer_list<std::initializer_list<K>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
    a_.reserve(static_cast<size_t>(rows_) * cols_);
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != cols_)
        throw DimensionMismatch("ragged matrix initializer");
      for (const auto& x : r) a_.push_back(x);
    }
  }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = FieldTraits<K>::one();
    return m;
  }
  static Mat from_rows(const std::vector<Vec<K>>& rows, int cols) {
    Mat m(static_cast<int>(rows.size()), cols);
    for (int i = 0; i < m.rows_; ++i) {
      if (static_cast<int>(rows[i].size()) != cols)
        throw DimensionMismatch("row length disagrees with column count");
      for (int j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  K& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const K& operator()(int i, int j) const {
    return a_[static_cast<size_t>(i) * cols_ + j];
  }

  Vec<K> row(int i) const {
    Vec<K> r(cols_);
    for (int j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
    return r;
  }
  Vec<K> col(int j) const {
    Vec<K> c(rows_);
    for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  void set_row(int i, const Vec<K>& r) {
    for (int j = 0; j < cols_; ++j) (*this)(i, j) = r[j];
  }

  friend Mat operator+(const Mat& a, const Mat& b) {
    a.check_same_shape(b);
    Mat c(a.rows_, a.cols_);
    for (size_t i = 0; i < a.a_.size(); ++i) c.a_[i] = a.a_[i] + b.a_[i];
    return c;
  }
  friend Mat operator-(const Mat& a, const Mat& b) {
    a.check_same_shape(b);
    Mat c(a.rows_, a.cols_);
    for (size_t i = 0; i < a.a_.size(); ++i) c.a_[i] = a.a_[i] - b.a_[i];
    return c;
  }
  friend Mat operator-(const Mat& a) {
    Mat c(a.rows_, a.cols_);
    for (size_t i = 0; i < a.a_.size(); ++i) c.a_[i] = -a.a_[i];
    return c;
  }
  friend Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product shapes");
    Mat c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const K& aik = a(i, k);
        if (FieldTraits<K>::is_zero(aik, 0.0)) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  friend Mat operator*(const K& s, const Mat& a) {
    Mat c(a.rows_, a.cols_);
    for (size_t i = 0; i < a.a_.size(); ++i) c.a_[i] = s * a.a_[i];
    return c;
  }
  friend Vec<K> operator*(const Mat& a, const Vec<K>& v) {
    if (a.cols_ != static_cast<int>(v.size()))
      throw DimensionMismatch("matrix-vector shapes");
    Vec<K> w(a.rows_, FieldTraits<K>::zero());
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < a.cols_; ++j) w[i] += a(i, j) * v[j];
    return w;
  }
  Mat& operator+=(const Mat& b) { *this = *this + b; return *this; }
  Mat& operator-=(const Mat& b) { *this = *this - b; return *this; }

  friend bool operator==(const Mat& a, const Mat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }
  friend bool operator!=(const Mat& a, const Mat& b) { return !(a == b); }

  Mat transpose() const {
    Mat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }
  Mat conjugate() const {
    Mat c(rows_, cols_);
    for (size_t i = 0; i < a_.size(); ++i)
      c.a_[i] = FieldTraits<K>::conjugate(a_[i]);
    return c;
  }

  bool is_zero(double tol = 0.0) const {
    for (const auto& x : a_)
      if (!FieldTraits<K>::is_zero(x, tol)) return false;
    return true;
  }

  double max_magnitude() const {
    double m = 0.0;
    for (const auto& x : a_) m = std::max(m, FieldTraits<K>::magnitude(x));
    return m;
  }

  // In-place reduced row echelon form.  Returns the pivot columns in
  // increasing order.  For CD the pivot test uses tol relative to the
  // largest magnitude seen in the input, and eliminated entries are
  // snapped to exact zero.
  std::vector<int> rref(double tol = default_tolerance()) {
    double threshold = 0.0;
    if (!FieldTraits<K>::exact) threshold = tol * std::max(1.0, max_magnitude());
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < cols_ && r < rows_; ++c) {
      int best = -1;
      double best_mag = threshold;
      for (int i = r; i < rows_; ++i) {
        double mag = FieldTraits<K>::magnitude((*this)(i, c));
        if (!FieldTraits<K>::is_zero((*this)(i, c), threshold) && mag > best_mag) {
          best = i;
          best_mag = mag;
          if constexpr (FieldTraits<K>::exact) break;  // any nonzero will do
        }
      }
      if (best < 0) continue;
      swap_rows(best, r);
      K inv = FieldTraits<K>::one() / (*this)(r, c);
      for (int j = c; j < cols_; ++j) (*this)(r, j) = inv * (*this)(r, j);
      (*this)(r, c) = FieldTraits<K>::one();
      for (int i = 0; i < rows_; ++i) {
        if (i == r) continue;
        K factor = (*this)(i, c);
        if (FieldTraits<K>::is_zero(factor, 0.0)) continue;
        for (int j = c; j < cols_; ++j)
          (*this)(i, j) = (*this)(i, j) - factor * (*this)(r, j);
        (*this)(i, c) = FieldTraits<K>::zero();
      }
      pivots.push_back(c);
      ++r;
    }
    if constexpr (!FieldTraits<K>::exact) {
      for (auto& x : a_)
        if (FieldTraits<K>::is_zero(x, threshold)) x = FieldTraits<K>::zero();
    }
    return pivots;
  }

  int rank(double tol = default_tolerance()) const {
    Mat copy = *this;
    return static_cast<int>(copy.rref(tol).size());
  }

  // Rows spanning {x : (*this) * x = 0}.
  Mat kernel(double tol = default_tolerance()) const {
    Mat reduced = *this;
    std::vector<int> pivots = reduced.rref(tol);
    std::vector<bool> is_pivot(cols_, false);
    for (int p : pivots) is_pivot[p] = true;
    Mat basis(cols_ - static_cast<int>(pivots.size()), cols_);
    int row = 0;
    for (int c = 0; c < cols_; ++c) {
      if (is_pivot[c]) continue;
      basis(row, c) = FieldTraits<K>::one();
      for (size_t pi = 0; pi < pivots.size(); ++pi)
        basis(row, pivots[pi]) = -reduced(static_cast<int>(pi), c);
      ++row;
    }
    return basis;
  }

  // One solution x of (*this) * x = b, if any.
  std::optional<Vec<K>> solve(const Vec<K>& b,
                              double tol = default_tolerance()) const {
    if (static_cast<int>(b.size()) != rows_)
      throw DimensionMismatch("solve: rhs length");
    Mat aug(rows_, cols_ + 1);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
      aug(i, cols_) = b[i];
    }
    std::vector<int> pivots = aug.rref(tol);
    if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;
    Vec<K> x(cols_, FieldTraits<K>::zero());
    for (size_t pi = 0; pi < pivots.size(); ++pi)
      x[pivots[pi]] = aug(static_cast<int>(pi), cols_);
    return x;
  }

  std::optional<Mat> inverse(double tol = default_tolerance()) const {
    if (rows_ != cols_) throw DimensionMismatch("inverse of non-square matrix");
    Mat aug(rows_, 2 * cols_);
    for (int i = 0; i < rows_; ++i) {
      for (int j = 0; j < cols_; ++j) aug(i, j) = (*this)(i, j);
      aug(i, cols_ + i) = FieldTraits<K>::one();
    }
    std::vector<int> pivots = aug.rref(tol);
    if (static_cast<int>(pivots.size()) != rows_ || pivots.back() != rows_ - 1)
      return std::nullopt;
    Mat inv(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) inv(i, j) = aug(i, cols_ + j);
    return inv;
  }

  K det() const {
    static_assert(FieldTraits<K>::exact, "exact determinant only");
    if (rows_ != cols_) throw DimensionMismatch("determinant of non-square");
    Mat m = *this;
    K d = FieldTraits<K>::one();
    for (int c = 0; c < rows_; ++c) {
      int p = -1;
      for (int i = c; i < rows_; ++i)
        if (!FieldTraits<K>::is_zero(m(i, c), 0.0)) {
          p = i;
          break;
        }
      if (p < 0) return FieldTraits<K>::zero();
      if (p != c) {
        m.swap_rows(p, c);
        d = -d;
      }
      d = d * m(c, c);
      K inv = FieldTraits<K>::one() / m(c, c);
      for (int i = c + 1; i < rows_; ++i) {
        K f = m(i, c) * inv;
        if (FieldTraits<K>::is_zero(f, 0.0)) continue;
        for (int j = c; j < rows_; ++j) m(i, j) = m(i, j) - f * m(c, j);
      }
    }
    return d;
  }

  Mat pow(int e) const {
    if (rows_ != cols_) throw DimensionMismatch("power of non-square matrix");
    if (e < 0) throw InvalidInput("negative matrix power");
    Mat result = identity(rows_);
    Mat base = *this;
    while (e > 0) {
      if (e & 1) result = result * base;
      base = base * base;
      e >>= 1;
    }
    return result;
  }

  K trace() const {
    if (rows_ != cols_) throw DimensionMismatch("trace of non-square matrix");
    K t = FieldTraits<K>::zero();
    for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  void swap_rows(int i, int j) {
    if (i == j) return;
    for (int c = 0; c < cols_; ++c) std::swap((*this)(i, c), (*this)(j, c));
  }

 private:
  void check_same_shape(const Mat& b) const {
    if (rows_ != b.rows_ || cols_ != b.cols_)
      throw DimensionMismatch("matrix shapes disagree");
  }

  int rows_, cols_;
  std::vector<K> a_;
};

using QMat = Mat<Rat>;
using GMat = Mat<Gauss>;
using CMat = Mat<CD>;
using QVec = Vec<Rat>;
using GVec = Vec<Gauss>;
using CVec = Vec<CD>;

// --------------------------------------------------------------------------
// Promotions along rational -> gaussian -> complex_float.

inline Gauss to_gauss(const Rat& x) { return Gauss(x); }

template <class K>
K scalar_from_rat(const Rat& x);
template <> inline Rat scalar_from_rat<Rat>(const Rat& x) { return x; }
template <> inline Gauss scalar_from_rat<Gauss>(const Rat& x) { return Gauss(x); }
template <> inline CD scalar_from_rat<CD>(const Rat& x) { return to_complex(x); }

inline GMat promote(const QMat& m) {
  GMat g(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) g(i, j) = Gauss(m(i, j));
  return g;
}
inline CMat promote_float(const GMat& m) {
  CMat c(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) c(i, j) = to_complex(m(i, j));
  return c;
}
inline CMat promote_float(const QMat& m) { return promote_float(promote(m)); }

inline GVec promote(const QVec& v) {
  GVec g(v.size());
  for (size_t i = 0; i < v.size(); ++i) g[i] = Gauss(v[i]);
  return g;
}
inline CVec promote_float(const GVec& v) {
  CVec c(v.size());
  for (size_t i = 0; i < v.size(); ++i) c[i] = to_complex(v[i]);
  return c;
}
inline CVec promote_float(const QVec& v) { return promote_float(promote(v)); }

// Entry-wise demotions; they throw InvalidInput when a value does not lie in
// the smaller field.
inline QMat demote(const GMat& m) {
  QMat q(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      if (sgn(m(i, j).im) != 0)
        throw InvalidInput("matrix entry has nonzero imaginary part");
      q(i, j) = m(i, j).re;
    }
  return q;
}

template <class K>
Vec<K> zero_vec(int n) {
  return Vec<K>(static_cast<size_t>(n), FieldTraits<K>::zero());
}

template <class K>
bool vec_is_zero(const Vec<K>& v, double tol = 0.0) {
  for (const auto& x : v)
    if (!FieldTraits<K>::is_zero(x, tol)) return false;
  return true;
}

template <class K>
Vec<K> operator+(const Vec<K>& a, const Vec<K>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector sum lengths");
  Vec<K> c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}
template <class K>
Vec<K> operator-(const Vec<K>& a, const Vec<K>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector difference lengths");
  Vec<K> c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}
template <class K>
Vec<K> operator*(const K& s, const Vec<K>& v) {
  Vec<K> c(v.size());
  for (size_t i = 0; i < v.size(); ++i) c[i] = s * v[i];
  return c;
}

}  // namespace hodge
