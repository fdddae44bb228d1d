#include "hodge/lattice.hpp"

#include <gmpxx.h>

#include <algorithm>

#include "hodge/error.hpp"

namespace hodge {

namespace {

Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

// Nearest integer to q (ties round down-to-floor of q + 1/2).
Rat round_to_int(const Rat& q) {
  mpz_class a = q.get_num(), b = q.get_den();
  mpz_class num = 2 * a + b, den = 2 * b, out;
  mpz_fdiv_q(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return Rat(out);
}

}  // namespace

QSub rational_points(const GSub& S) {
  const int n = S.ambient_dim();
  GSub C = S.intersect(S.conjugate());
  std::vector<QVec> rows;
  for (int i = 0; i < C.dim(); ++i) {
    QVec re(n), im(n);
    for (int j = 0; j < n; ++j) {
      re[j] = C.basis()(i, j).re;
      im[j] = C.basis()(i, j).im;
    }
    rows.push_back(re);
    rows.push_back(im);
  }
  QSub R = QSub::span(rows, n);
  if (R.dim() != C.dim())
    throw VerificationFailure("rational span of a conjugation-stable subspace has wrong dimension");
  return R;
}

bool is_integral(const QVec& v) {
  for (const Rat& x : v)
    if (x.get_den() != 1) return false;
  return true;
}

bool is_integral(const QMat& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (m(i, j).get_den() != 1) return false;
  return true;
}

QVec primitive_integer_vector(const QVec& v) {
  mpz_class lcm = 1;
  for (const Rat& x : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den().get_mpz_t());
  mpz_class gcd = 0;
  std::vector<mpz_class> scaled(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    scaled[i] = Rat(v[i] * Rat(lcm)).get_num();
    mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), scaled[i].get_mpz_t());
  }
  QVec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = gcd == 0 ? Rat(0) : Rat(scaled[i] / gcd);
  return out;
}

QMat integer_kernel(const QMat& M) {
  if (!is_integral(M)) throw InvalidInput("integer kernel requires an integral matrix");
  const int r = M.rows(), n = M.cols();
  QMat W = M;
  QMat U = QMat::identity(n);
  auto add_col = [&](QMat& A, int dst, int src, const Rat& q) {
    for (int t = 0; t < A.rows(); ++t) A(t, dst) = A(t, dst) - q * A(t, src);
  };
  auto swap_col = [&](QMat& A, int a, int b) {
    for (int t = 0; t < A.rows(); ++t) std::swap(A(t, a), A(t, b));
  };
  auto negate_col = [&](QMat& A, int j) {
    for (int t = 0; t < A.rows(); ++t) A(t, j) = -A(t, j);
  };
  int fixed = 0;
  for (int row = 0; row < r && fixed < n; ++row) {
    while (true) {
      int piv = -1;
      for (int j = fixed; j < n; ++j)
        if (W(row, j) != 0 && (piv < 0 || rat_abs(W(row, j)) < rat_abs(W(row, piv)))) piv = j;
      if (piv < 0) break;
      bool others = false;
      for (int j = fixed; j < n; ++j) {
        if (j == piv || W(row, j) == 0) continue;
        others = true;
        Rat q = round_to_int(W(row, j) / W(row, piv));
        add_col(W, j, piv, q);
        add_col(U, j, piv, q);
      }
      if (!others) {
        if (piv != fixed) {
          swap_col(W, piv, fixed);
          swap_col(U, piv, fixed);
        }
        if (W(row, fixed) < 0) {
          negate_col(W, fixed);
          negate_col(U, fixed);
        }
        ++fixed;
        break;
      }
    }
  }
  QMat out(n - fixed, n);
  for (int k = fixed; k < n; ++k)
    for (int i = 0; i < n; ++i) out(k - fixed, i) = U(i, k);
  return out;
}

QMat saturated_lattice(const QSub& S) {
  const int n = S.ambient_dim();
  if (S.is_zero()) return QMat(0, n);
  QMat ann = S.basis().kernel();
  QMat ann_int(ann.rows(), n);
  for (int i = 0; i < ann.rows(); ++i)
    ann_int.set_row(i, primitive_integer_vector(ann.row(i)));
  return integer_kernel(ann_int);
}

ExactLdlt ldlt(const QMat& G) {
  if (G.rows() != G.cols()) throw DimensionMismatch("Gram matrix must be square");
  if (!(G.transpose() == G)) throw InvalidInput("Gram matrix must be symmetric");
  const int m = G.rows();
  ExactLdlt out;
  out.diag.assign(m, Rat(0));
  out.lower = QMat::identity(m);
  out.positive = true;
  for (int i = 0; i < m; ++i) {
    Rat d = G(i, i);
    for (int k = 0; k < i; ++k) d -= out.lower(i, k) * out.lower(i, k) * out.diag[k];
    out.diag[i] = d;
    if (!(d > 0)) {
      out.positive = false;
      return out;
    }
    for (int j = i + 1; j < m; ++j) {
      Rat v = G(j, i);
      for (int k = 0; k < i; ++k) v -= out.lower(j, k) * out.lower(i, k) * out.diag[k];
      out.lower(j, i) = v / d;
    }
  }
  return out;
}

std::vector<QVec> enumerate_bounded(const QMat& G, const Rat& K) {
  const int m = G.rows();
  std::vector<QVec> out;
  if (K < 0) return out;
  if (m == 0) {
    out.push_back(QVec{});
    return out;
  }
  ExactLdlt f = ldlt(G);
  if (!f.positive) throw InvalidInput("bounded enumeration requires a positive definite form");
  QVec c = zero_vec<Rat>(m);
  // c^T G c = sum_i d_i (c_i + s_i)^2 with s_i depending on c_{i+1..m-1};
  // recurse from the last coordinate so each level sees a closed interval.
  auto rec = [&](auto&& self, int i, const Rat& remaining) -> void {
    if (i < 0) {
      out.push_back(c);
      return;
    }
    Rat s(0);
    for (int j = i + 1; j < m; ++j) s += f.lower(j, i) * c[j];
    Rat t0 = round_to_int(-s);
    auto weight = [&](const Rat& t) {
      Rat w = t + s;
      return Rat(f.diag[i] * w * w);
    };
    for (Rat t = t0; weight(t) <= remaining; t += 1) {
      c[i] = t;
      self(self, i - 1, remaining - weight(t));
    }
    for (Rat t = t0 - 1; weight(t) <= remaining; t -= 1) {
      c[i] = t;
      self(self, i - 1, remaining - weight(t));
    }
    c[i] = 0;
  };
  rec(rec, m - 1, K);
  return out;
}

}  // namespace hodge
