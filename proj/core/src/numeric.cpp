#include "hodge/numeric.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "hodge/error.hpp"

namespace hodge {

namespace {

using EMat = Eigen::MatrixXcd;
using EVec = Eigen::VectorXcd;

EMat to_eigen(const CMat& m) {
  EMat out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

EVec to_eigen(const CVec& v) {
  EVec out(static_cast<int>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<int>(i)) = v[i];
  return out;
}

CMat from_eigen(const EMat& m) {
  CMat out(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

// Basis rows of S as Eigen columns (plain transpose, no conjugation).
EMat columns_of(const CSub& S) {
  EMat out(S.ambient_dim(), S.dim());
  for (int i = 0; i < S.dim(); ++i)
    for (int j = 0; j < S.ambient_dim(); ++j) out(j, i) = S.basis()(i, j);
  return out;
}

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

// Columns made metric-orthonormal via Cholesky of the Gram matrix.
bool orthonormalize(const EMat& M, const EMat& X, EMat& out) {
  if (X.cols() == 0) {
    out = X;
    return true;
  }
  EMat G = X.adjoint() * M * X;
  Eigen::LLT<EMat> llt(0.5 * (G + G.adjoint()));
  if (llt.info() != Eigen::Success) return false;
  // Y = X L^{-dagger}: Y^dagger M Y = I.
  out = llt.matrixL().adjoint().template solve<Eigen::OnTheRight>(X);
  return true;
}

}  // namespace

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  SlopeFit fit;
  if (x.size() != y.size()) throw DimensionMismatch("slope fit needs matching samples");
  const int n = static_cast<int>(x.size());
  fit.points = n;
  if (n < 2) return fit;
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) return fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (int i = 0; i < n; ++i) {
    double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

bool hermitian_positive_definite_float(const CMat& M, double tol) {
  if (M.rows() != M.cols()) return false;
  EMat A = to_eigen(M);
  double scale = std::max(1e-300, A.cwiseAbs().maxCoeff());
  if ((A - A.adjoint()).cwiseAbs().maxCoeff() > tol * scale) return false;
  Eigen::SelfAdjointEigenSolver<EMat> es(0.5 * (A + A.adjoint()),
                                         Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  return lo > 0 && lo > hi * 1e-14;
}

double angle_sine(const CVec& v, const CSub& S, const CMat& metric) {
  const int n = S.ambient_dim();
  if (static_cast<int>(v.size()) != n || metric.rows() != n || metric.cols() != n)
    throw DimensionMismatch("angle_sine operands disagree in dimension");
  EMat M = to_eigen(metric);
  EVec x = to_eigen(v);
  double vv = std::real((x.adjoint() * M * x)(0, 0));
  if (!(vv > 0)) throw InvalidInput("angle_sine needs a nonzero vector and a definite metric");
  if (S.dim() == 0) return 1.0;
  EMat B = columns_of(S);
  EMat G = B.adjoint() * M * B;
  Eigen::LLT<EMat> llt(0.5 * (G + G.adjoint()));
  if (llt.info() != Eigen::Success)
    throw InvalidInput("angle_sine metric is degenerate on the subspace");
  EVec c = llt.solve(B.adjoint() * M * x);
  EVec r = x - B * c;
  double rr = std::real((r.adjoint() * M * r)(0, 0));
  return clamp01(std::sqrt(std::max(0.0, rr) / vv));
}

double angle_sine(const GVec& v, const GSub& S, const GMat& metric) {
  return angle_sine(promote_float(v), promote_float(S), promote_float(metric));
}

double largest_principal_angle(const CSub& A, const CSub& B, const CMat& metric) {
  if (A.ambient_dim() != B.ambient_dim())
    throw DimensionMismatch("principal angles need a common ambient space");
  if (A.dim() != B.dim()) return std::acos(0.0);
  if (A.dim() == 0) return 0.0;
  EMat M = to_eigen(metric);
  EMat YA, YB;
  if (!orthonormalize(M, columns_of(A), YA) || !orthonormalize(M, columns_of(B), YB))
    throw InvalidInput("metric is degenerate on a filtration piece");
  EMat C = YA.adjoint() * M * YB;
  Eigen::BDCSVD<EMat> svd(C);
  double cmin = svd.singularValues().minCoeff();
  return std::acos(clamp01(cmin));
}

double filtration_distance(const CFilt& F1, const CFilt& F2, const CMat& metric) {
  if (F1.direction() != F2.direction() || F1.ambient_dim() != F2.ambient_dim())
    throw DimensionMismatch("filtration distance needs flags of the same type");
  std::vector<int> keys;
  for (const auto& [k, s] : F1.pieces()) keys.push_back(k);
  for (const auto& [k, s] : F2.pieces()) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  double d = 0;
  for (int k : keys)
    d = std::max(d, largest_principal_angle(F1.piece(k), F2.piece(k), metric));
  return d;
}

double flag_perturbation_distance(const CFilt& base, const std::map<int, CMat>& diffs,
                                  const CMat& metric) {
  EMat M = to_eigen(metric);
  double worst = 0;
  for (const auto& [p, piece] : base.pieces()) {
    auto it = diffs.find(p);
    if (it == diffs.end() || piece.dim() == 0) continue;
    if (it->second.rows() != piece.dim() || it->second.cols() != piece.ambient_dim())
      throw DimensionMismatch("perturbation rows must match the piece basis");
    EMat X = columns_of(piece);
    EMat Xd = to_eigen(it->second).transpose();
    EMat G = X.adjoint() * M * X;
    Eigen::LLT<EMat> llt(0.5 * (G + G.adjoint()));
    if (llt.info() != Eigen::Success)
      throw InvalidInput("metric is degenerate on a filtration piece");
    // transform taking the basis columns to a metric-orthonormal family
    EMat Yd = llt.matrixL().adjoint().template solve<Eigen::OnTheRight>(Xd);
    EMat R = Yd - X * llt.solve(X.adjoint() * M * Yd);
    EMat S = R.adjoint() * M * R;
    Eigen::SelfAdjointEigenSolver<EMat> es(0.5 * (S + S.adjoint()),
                                           Eigen::EigenvaluesOnly);
    double lmax = std::max(0.0, es.eigenvalues().maxCoeff());
    worst = std::max(worst, std::asin(clamp01(std::sqrt(lmax))));
  }
  return worst;
}

CMat weil_operator_float(const CFilt& F, int weight) {
  const int n = F.ambient_dim();
  int flo = F.min_index(), fhi = F.max_index();
  int plo = std::min(flo, weight - fhi), phi = std::max(fhi, weight - flo);
  EMat X(n, n);
  std::vector<int> ptype;
  int col = 0;
  for (int p = plo; p <= phi; ++p) {
    CSub piece = F.piece(p).intersect(F.piece(weight - p).conjugate());
    for (int i = 0; i < piece.dim(); ++i) {
      if (col >= n) throw VerificationFailure("float Hodge decomposition is not direct");
      for (int j = 0; j < n; ++j) X(j, col) = piece.basis()(i, j);
      ptype.push_back(p);
      ++col;
    }
  }
  if (col != n) throw VerificationFailure("float Hodge decomposition does not fill the space");
  EMat D = EMat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    int pq = 2 * ptype[i] - weight;  // p - q
    int k = ((pq % 4) + 4) % 4;
    static const CD table[4] = {CD(1, 0), CD(0, 1), CD(-1, 0), CD(0, -1)};
    D(i, i) = table[k];
  }
  EMat C = X * D * X.inverse();
  return from_eigen(C);
}

CMat hodge_gram_float(const QMat& Q, const CFilt& F, int weight) {
  CMat C = weil_operator_float(F, weight);
  return C.transpose() * promote_float(Q);
}

CVec min_norm_preimage(const CMat& T, const CVec& w) {
  if (T.rows() != static_cast<int>(w.size()))
    throw DimensionMismatch("preimage target has the wrong dimension");
  EMat A = to_eigen(T);
  Eigen::BDCSVD<EMat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  EVec x = svd.solve(to_eigen(w));
  CVec out(static_cast<std::size_t>(x.size()));
  for (int i = 0; i < x.size(); ++i) out[static_cast<std::size_t>(i)] = x(i);
  return out;
}

}  // namespace hodge
