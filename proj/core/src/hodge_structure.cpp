#include "hodge/hodge_structure.hpp"

#include <sstream>

#include "hodge/lattice.hpp"

namespace hodge {

bool is_weight_symmetric(const QMat& Q, int weight) {
  if (Q.rows() != Q.cols()) return false;
  QMat t = Q.transpose();
  return (weight % 2 == 0) ? t == Q : t == -Q;
}

bool is_nondegenerate(const QMat& Q) {
  return Q.rows() == Q.cols() && sgn(Q.det()) != 0;
}

namespace {

// p-range on which all distinct conditions live
std::pair<int, int> p_range(const GFilt& F, int weight) {
  int lo = std::min(F.min_index(), weight - F.max_index());
  int hi = std::max(F.max_index(), weight - F.min_index()) + 1;
  return {lo, hi};
}

}  // namespace

bool is_pure(const GFilt& F, int weight) {
  if (F.direction() != Direction::decreasing || F.empty()) return false;
  int n = F.ambient_dim();
  auto [lo, hi] = p_range(F, weight);
  for (int p = lo; p <= hi; ++p) {
    GSub a = F.piece(p);
    GSub b = F.piece(weight + 1 - p).conjugate();
    if (a.dim() + b.dim() != n) return false;
    if (!a.intersect(b).is_zero()) return false;
  }
  return true;
}

GGrading hodge_decomposition(const GFilt& F, int weight) {
  GGrading g(F.ambient_dim());
  auto [lo, hi] = p_range(F, weight);
  for (int p = lo; p <= hi; ++p) {
    GSub piece = F.piece(p).intersect(F.piece(weight - p).conjugate());
    g.set(p, piece);
  }
  if (!g.is_direct_sum())
    throw VerificationFailure(
        "filtration is not pure of the requested weight: the (p,q) pieces do "
        "not decompose the space");
  return g;
}

std::map<int, int> hodge_numbers(const GFilt& F, int weight) {
  std::map<int, int> h;
  GGrading g = hodge_decomposition(F, weight);
  for (const auto& [p, s] : g.pieces()) h[p] = s.dim();
  return h;
}

GMat weil_operator(const GFilt& F, int weight) {
  GGrading g = hodge_decomposition(F, weight);
  int n = F.ambient_dim();
  GMat C(n, n);
  for (const auto& [p, s] : g.pieces()) {
    int q = weight - p;
    // i^(p-q)
    int e = ((p - q) % 4 + 4) % 4;
    Gauss ipq;
    switch (e) {
      case 0: ipq = Gauss(Rat(1)); break;
      case 1: ipq = Gauss::i(); break;
      case 2: ipq = Gauss(Rat(-1)); break;
      default: ipq = Gauss(Rat(0), Rat(-1)); break;
    }
    C += ipq * g.projector(p);
  }
  return C;
}

GMat hodge_gram(const QMat& Q, const GFilt& F, int weight) {
  GMat C = weil_operator(F, weight);
  return C.transpose() * promote(Q);
}

bool first_bilinear_relation(const QMat& Q, const GFilt& F, int weight) {
  GMat Qg = promote(Q);
  auto [lo, hi] = p_range(F, weight);
  for (int p = lo; p <= hi; ++p) {
    const GMat a = F.piece(p).basis();
    const GMat b = F.piece(weight - p + 1).basis();
    if (a.rows() == 0 || b.rows() == 0) continue;
    if (!(a * Qg * b.transpose()).is_zero()) return false;
  }
  return true;
}

bool is_hermitian(const GMat& M) {
  return M.rows() == M.cols() && M == M.conjugate().transpose();
}

bool hermitian_positive_definite(const GMat& M) {
  if (!is_hermitian(M)) return false;
  int n = M.rows();
  for (int k = 1; k <= n; ++k) {
    GMat lead(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) lead(i, j) = M(i, j);
    Gauss d = lead.det();
    // determinant of a hermitian matrix is real
    if (sgn(d.im) != 0) return false;
    if (sgn(d.re) <= 0) return false;
  }
  return true;
}

PolarizedLattice make_lattice(int weight, QMat Q) {
  if (Q.rows() != Q.cols()) throw DimensionMismatch("lattice form must be square");
  if (!is_integral(Q)) throw InvalidInput("lattice form must have integer entries");
  if (!is_weight_symmetric(Q, weight))
    throw InvalidInput("lattice form has the wrong symmetry for its weight");
  if (!is_nondegenerate(Q)) throw InvalidInput("lattice form is degenerate");
  return PolarizedLattice{Q.rows(), weight, std::move(Q)};
}

PolarizationReport check_polarization(const HodgeStructure& h) {
  PolarizationReport r;
  if (h.Q().rows() != h.dim() || h.Q().cols() != h.dim())
    throw DimensionMismatch("bilinear form does not match the filtration");
  r.integral = is_integral(h.Q());
  r.symmetry_ok = is_weight_symmetric(h.Q(), h.weight());
  r.nondegenerate = is_nondegenerate(h.Q());
  r.pure = is_pure(h.F, h.weight());
  if (!r.pure) return r;
  r.orthogonality_ok = first_bilinear_relation(h.Q(), h.F, h.weight());
  if (!r.symmetry_ok || !r.nondegenerate || !r.orthogonality_ok) return r;
  r.positive = hermitian_positive_definite(hodge_gram(h.Q(), h.F, h.weight()));
  return r;
}

std::string PolarizationReport::describe() const {
  std::ostringstream os;
  os << "integral=" << (integral ? "ok" : "FAIL")
     << " symmetry=" << (symmetry_ok ? "ok" : "FAIL")
     << " nondegenerate=" << (nondegenerate ? "ok" : "FAIL")
     << " pure=" << (pure ? "ok" : "FAIL")
     << " orthogonality=" << (orthogonality_ok ? "ok" : "FAIL")
     << " positivity=" << (positive ? "ok" : "FAIL");
  return os.str();
}

}  // namespace hodge
