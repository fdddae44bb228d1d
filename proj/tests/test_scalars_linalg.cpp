#include <cmath>
#include <optional>

#include "doctest.h"
#include "helpers.hpp"
#include "hodge/error.hpp"
#include "hodge/grading.hpp"
#include "hodge/lattice.hpp"
#include "hodge/numeric.hpp"
#include "hodge/unipotent.hpp"

using namespace hodge;
using namespace hodge::testing;

TEST_CASE("rational scalars canonicalize and parse") {
  CHECK(rat(2, 4) == rat(1, 2));
  CHECK(rat(-3, -6) == rat(1, 2));
  CHECK(is_integer(rat(8, 4)));
  CHECK_FALSE(is_integer(rat(1, 3)));
  CHECK(parse_rat("-7/3").value() == rat(-7, 3));
  CHECK_FALSE(parse_rat("1/0").has_value());
  CHECK(rat_from_decimal("1.25") == rat(5, 4));
}

TEST_CASE("exact square roots") {
  CHECK(exact_sqrt(rat(9, 4)).value() == rat(3, 2));
  CHECK(exact_sqrt(Rat(0)).value() == Rat(0));
  CHECK_FALSE(exact_sqrt(Rat(2)).has_value());
  CHECK_FALSE(exact_sqrt(Rat(-1)).has_value());
}

TEST_CASE("gaussian rationals form a field") {
  Gauss a(Rat(1), Rat(2)), b(Rat(3), Rat(-1));
  CHECK(a * b == Gauss(Rat(5), Rat(5)));
  CHECK(Gauss(Rat(1)) / Gauss::i() == -Gauss::i());
  CHECK(conj(a) == Gauss(Rat(1), Rat(-2)));
  CHECK(norm(Gauss(Rat(3), Rat(4))) == Rat(25));
  CHECK((a / b) * b == a);
  CHECK(Gauss::i() * Gauss::i() == Gauss(Rat(-1)));
}

TEST_CASE("rref, rank, kernel, inverse, determinant") {
  QMat m = qm({{1, 2}, {2, 4}});
  CHECK(m.rank() == 1);
  QMat ker = m.kernel();
  REQUIRE(ker.rows() == 1);
  CHECK((m * ker.row(0))[0] == Rat(0));
  CHECK((m * ker.row(0))[1] == Rat(0));

  QMat u = qm({{1, 1}, {0, 1}});
  CHECK(u.inverse().value() == qm({{1, -1}, {0, 1}}));
  CHECK(qm({{2, 1}, {1, 1}}).det() == Rat(1));
  CHECK(qm({{1, 2}, {2, 4}}).det() == Rat(0));
  CHECK(u.pow(3) == qm({{1, 3}, {0, 1}}));
  CHECK(qm({{2, 0}, {0, 5}}).trace() == Rat(7));
}

TEST_CASE("linear solves") {
  QMat a = qm({{1, 1}, {0, 1}});
  auto x = a.solve(qv({3, 1}));
  REQUIRE(x.has_value());
  CHECK((*x)[0] == Rat(2));
  CHECK((*x)[1] == Rat(1));
  // inconsistent system
  CHECK_FALSE(qm({{1, 1}, {2, 2}}).solve(qv({0, 1})).has_value());
}

TEST_CASE("subspaces: canonical bases, membership, lattice operations") {
  QSub s = qspan({qv({2, 4})}, 2);
  CHECK(s.dim() == 1);
  CHECK(s.basis()(0, 0) == Rat(1));  // echelon-normalized
  CHECK(s.contains(qv({-1, -2})));
  CHECK_FALSE(s.contains(qv({1, 1})));

  QSub e1 = qspan({qv({1, 0})}, 2);
  QSub diag = qspan({qv({1, 1})}, 2);
  CHECK(e1.intersect(diag).is_zero());
  CHECK(e1.sum(diag).is_full());
  CHECK(qspan({qv({1, 0}), qv({1, 1})}, 2) == QSub::full(2));

  // image under an operator (column action)
  QMat n = qm({{0, 0}, {1, 0}});
  CHECK(e1.image(n) == qspan({qv({0, 1})}, 2));
  CHECK(qspan({qv({0, 1})}, 2).image(n).is_zero());
  CHECK(e1.preimage(n) == qspan({qv({0, 1})}, 2));  // n x = x_1 e2
}

TEST_CASE("filtration conventions: implicit zero and full ends, shifts") {
  QFilt w(Direction::increasing, 2);
  w.set(0, qspan({qv({1, 0})}, 2));
  w.set(1, QSub::full(2));
  CHECK(w.piece(-5).is_zero());
  CHECK(w.piece(7).is_full());
  CHECK(w.piece(0).dim() == 1);
  CHECK(w.graded_dim(0) == 1);
  CHECK(w.graded_dim(1) == 1);
  CHECK(w.valid());

  QFilt shifted = w.shifted(-1);  // shifted(l) = w(l - 1)
  CHECK(shifted.piece(1) == w.piece(0));
  CHECK(shifted.piece(2) == w.piece(1));

  GFilt f(Direction::decreasing, 2);
  f.set(1, gspan({gv({gi(1, 0), gi(0, 1)})}, 2));
  CHECK(f.piece(-3).is_full());
  CHECK(f.piece(2).is_zero());
  CHECK(f.piece(0).is_full());
  CHECK(f.valid());
}

TEST_CASE("gradings: direct sums and projections") {
  QGrading g(2);
  g.set(-1, qspan({qv({0, 1})}, 2));
  g.set(1, qspan({qv({1, 0})}, 2));
  CHECK(g.is_direct_sum());
  QVec p = g.project(qv({3, 5}), 1);
  CHECK(p[0] == Rat(3));
  CHECK(p[1] == Rat(0));
}

TEST_CASE("exact exponentials and logarithms of nilpotents") {
  QMat n = qm({{0, 1}, {0, 0}});
  QMat u = exp_nilpotent(n);
  CHECK(u == qm({{1, 1}, {0, 1}}));
  CHECK(log_unipotent(u) == n);
  QMat s = unipotent_sqrt(u);
  CHECK(s * s == u);
  CHECK_THROWS_AS(log_unipotent(qm({{2, 0}, {0, 1}})), InvalidInput);
}

TEST_CASE("integral lattice utilities") {
  CHECK(rational_points(gspan({gv({Gauss::i(), Gauss::i()})}, 2)) ==
        qspan({qv({1, 1})}, 2));
  QVec prim = primitive_integer_vector({rat(2, 3), rat(4, 3)});
  CHECK(prim == qv({1, 2}));
  QMat ik = integer_kernel(qm({{1, 2}}));
  REQUIRE(ik.rows() == 1);
  CHECK(is_integral(ik));
  CHECK(ik(0, 0) * Rat(1) + ik(0, 1) * Rat(2) == Rat(0));
}

TEST_CASE("exact LDL^T and bounded enumeration") {
  QMat g = qm({{2, 1}, {1, 3}});
  ExactLdlt f = ldlt(g);
  CHECK(f.positive);
  QMat d(2, 2);
  d(0, 0) = f.diag[0];
  d(1, 1) = f.diag[1];
  CHECK(f.lower * d * f.lower.transpose() == g);
  CHECK_FALSE(ldlt(qm({{-1, 0}, {0, 1}})).positive);

  auto pts = enumerate_bounded(QMat::identity(2), Rat(1));
  CHECK(pts.size() == 5);  // 0, +-e1, +-e2
  auto pts2 = enumerate_bounded(g, Rat(2));
  // v^T g v <= 2: (0,0), +-(1,0) give 2; +-(0,1) give 3 > 2; +-(1,-1) give 3
  CHECK(pts2.size() == 3);
}

TEST_CASE("angle sine in a metric") {
  CMat metric = CMat::identity(2);
  CVec v1 = {CD(1, 0), CD(0, 0)};
  CSub s = CSub::span(CMat{{CD(1, 0), CD(0, 0)}});
  CHECK(angle_sine(v1, s, metric) == doctest::Approx(0.0).epsilon(1e-12));
  CVec v2 = {CD(0, 0), CD(1, 0)};
  CHECK(angle_sine(v2, s, metric) == doctest::Approx(1.0).epsilon(1e-12));
  CVec v3 = {CD(1, 0), CD(1, 0)};
  CHECK(angle_sine(v3, s, metric) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("slope fits recover exact lines") {
  std::vector<double> xs = {1, 2, 3, 4}, ys;
  for (double x : xs) ys.push_back(-2.5 * x + 0.75);
  SlopeFit fit = fit_slope(xs, ys);
  CHECK(fit.slope == doctest::Approx(-2.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(fit.rms_residual == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(fit.points == 4);
}

TEST_CASE("min-norm preimages solve consistent systems") {
  CMat t(2, 2);
  t(0, 0) = CD(1, 0);
  t(0, 1) = CD(1, 0);
  // row 2 zero: rank 1
  CVec w = {CD(2, 0), CD(0, 0)};
  CVec x = min_norm_preimage(t, w);
  CHECK(std::abs(x[0] - CD(1, 0)) < 1e-9);  // min-norm splits evenly
  CHECK(std::abs(x[1] - CD(1, 0)) < 1e-9);
}
