#include "hodge/fixtures.hpp"

#include <utility>

#include "hodge/error.hpp"
#include "hodge/rng.hpp"

namespace hodge {
namespace {

// Rank-1 weight-0 model with trivial group action; the smallest fixture on
// which the class-enumeration examples run.
SL2Rep trivial_rank1() {
  SL2Rep rep;
  rep.d = 1;
  rep.weight = 0;
  rep.Q = QMat::identity(1);
  rep.lower = {QMat(1, 1)};
  rep.raise = {QMat(1, 1)};
  rep.Y = {QMat(1, 1)};
  rep.F = GFilt(Direction::decreasing, 1);
  rep.F.set(0, Subspace<Gauss>::full(1));
  validate_sl2(rep);
  return rep;
}

// Gamma(s) = sum_j s_j N_j, exact to every order; the truncation order is
// set high enough that the tail budget admits evaluation from depth 2 on.
PowerSeries first_order_series(const NilpotentOrbit& orbit, int order) {
  PowerSeries g;
  g.vars = orbit.r();
  g.dim = orbit.dim();
  g.order = order;
  for (int j = 0; j < orbit.r(); ++j) {
    std::vector<int> deg(static_cast<size_t>(orbit.r()), 0);
    deg[static_cast<size_t>(j)] = 1;
    g.coeffs[deg] = promote(orbit.N[static_cast<size_t>(j)]);
  }
  return g;
}

constexpr int kDecayFixtureOrder = 6;

}  // namespace

std::vector<std::string> fixture_names() {
  return {"trivial_rank1", "elliptic",   "sym2_elliptic", "sym3_elliptic",
          "sym4_elliptic", "end_elliptic", "sym2_tate",   "tensor_ee",
          "box_ee",        "box_e_dual", "decay_elliptic", "decay_box"};
}

SL2Rep fixture_rep(const std::string& name) {
  if (name == "trivial_rank1") return trivial_rank1();
  SL2Rep e = elliptic_variation();
  if (name == "elliptic" || name == "decay_elliptic") return e;
  if (name == "sym2_elliptic") return sym_power(e, 2);
  if (name == "sym3_elliptic") return sym_power(e, 3);
  if (name == "sym4_elliptic") return sym_power(e, 4);
  if (name == "end_elliptic") return end_rep(e);
  if (name == "sym2_tate") return tate_twist(sym_power(e, 2), 1);
  if (name == "tensor_ee") return tensor(e, e);
  if (name == "box_ee") return box_tensor(e, e);
  if (name == "box_e_dual" || name == "decay_box") {
    return box_tensor(e, dual(e));
  }
  std::string known;
  for (const std::string& n : fixture_names()) {
    if (!known.empty()) known += ", ";
    known += n;
  }
  throw InvalidInput("unknown fixture '" + name + "' (known: " + known + ")");
}

NilpotentOrbit fixture_orbit(const std::string& name) {
  return as_orbit(fixture_rep(name));
}

VariationSample fixture_sample(const std::string& name) {
  NilpotentOrbit orbit = fixture_orbit(name);
  if (name == "decay_elliptic" || name == "decay_box") {
    PowerSeries gamma = first_order_series(orbit, kDecayFixtureOrder);
    return make_sample(std::move(orbit), std::move(gamma));
  }
  PowerSeries zero = zero_series(orbit.r(), orbit.dim());
  return make_sample(std::move(orbit), std::move(zero));
}

VariationDocument fixture_document(const std::string& name) {
  if (name == "decay_elliptic" || name == "decay_box") {
    return document_of(fixture_sample(name));
  }
  return document_of(fixture_orbit(name));
}

SL2Rep random_model(unsigned seed) {
  Rng rng(seed);
  SL2Rep e = elliptic_variation();
  SL2Rep rep = sym_power(e, static_cast<int>(rng.int_in(1, 3)));
  Rat det = rep.Q.det();
  bool unimodular = det == Rat(1) || det == Rat(-1);
  if (unimodular && rng.int_in(0, 1) == 1) rep = dual(rep);
  int n2 = static_cast<int>(rng.int_in(0, 2));
  if (n2 > 0) rep = tensor(rep, sym_power(e, n2));
  int k = static_cast<int>(rng.int_in(-1, 1));
  if (k != 0) rep = tate_twist(rep, k);
  if (rep.dim() <= 6 && rng.int_in(0, 1) == 1) rep = box_tensor(rep, e);
  return rep;
}

}  // namespace hodge
