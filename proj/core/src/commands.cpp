#include "hodge/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hodge/error.hpp"
#include "hodge/fixtures.hpp"
#include "hodge/json_io.hpp"
#include "hodge/locus.hpp"
#include "hodge/sl2.hpp"

namespace hodge {
namespace {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Rendering helpers
// ---------------------------------------------------------------------------

void emit(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

void emit_error(const char* kind, const std::string& message) {
  ordered_json j;
  j["error"] = ordered_json{{"kind", kind}, {"message", message}};
  std::cerr << j.dump(2) << "\n";
}

ordered_json gauss_json(const Gauss& g) {
  return ordered_json::array({rat_string(g.re), rat_string(g.im)});
}

ordered_json qvec_json(const QVec& v) {
  ordered_json out = ordered_json::array();
  for (const Rat& x : v) out.push_back(rat_string(x));
  return out;
}

ordered_json gvec_json(const GVec& v) {
  ordered_json out = ordered_json::array();
  for (const Gauss& g : v) out.push_back(gauss_json(g));
  return out;
}

ordered_json cd_json(const CD& z) {
  return ordered_json{{"re", z.real()}, {"im", z.imag()}};
}

ordered_json cvec_json(const CVec& v) {
  ordered_json out = ordered_json::array();
  for (const CD& z : v) out.push_back(cd_json(z));
  return out;
}

ordered_json qsub_json(const QSub& s) {
  ordered_json rows = ordered_json::array();
  const QMat& b = s.basis();
  for (int i = 0; i < b.rows(); ++i) rows.push_back(qvec_json(b.row(i)));
  return rows;
}

ordered_json gsub_json(const GSub& s) {
  ordered_json rows = ordered_json::array();
  const GMat& b = s.basis();
  for (int i = 0; i < b.rows(); ++i) rows.push_back(gvec_json(b.row(i)));
  return rows;
}

const char* direction_name(Direction d) {
  return d == Direction::increasing ? "increasing" : "decreasing";
}

ordered_json qfilt_json(const QFilt& f) {
  ordered_json steps;
  for (const auto& [k, sub] : f.pieces())
    steps[std::to_string(k)] = qsub_json(sub);
  return ordered_json{{"direction", direction_name(f.direction())},
                      {"steps", std::move(steps)}};
}

ordered_json gfilt_json(const GFilt& f) {
  ordered_json steps;
  for (const auto& [k, sub] : f.pieces())
    steps[std::to_string(k)] = gsub_json(sub);
  return ordered_json{{"direction", direction_name(f.direction())},
                      {"steps", std::move(steps)}};
}

ordered_json witness_json(const WitnessReport& w) {
  ordered_json out;
  out["z"] = cvec_json(w.z);
  out["snapped"] = w.snapped;
  if (w.z_exact) out["z_exact"] = gvec_json(*w.z_exact);
  out["exact_member"] = w.exact_member;
  out["residual"] = w.residual;
  return out;
}

ordered_json hit_json(const HodgeClassHit& h, bool with_witness) {
  ordered_json out;
  out["v"] = qvec_json(h.v);
  out["q_norm"] = rat_string(h.q_norm);
  out["in_w0"] = h.in_w0;
  if (with_witness && h.witness) out["witness"] = witness_json(*h.witness);
  return out;
}

ordered_json mhs_report_json(const MhsReport& rep) {
  ordered_json out;
  out["shapes_ok"] = rep.shapes_ok;
  ordered_json graded = ordered_json::array();
  for (const auto& g : rep.graded) {
    graded.push_back(ordered_json{
        {"weight", g.weight}, {"dim", g.dim}, {"pure", g.pure}});
  }
  out["graded"] = std::move(graded);
  out["is_mhs"] = rep.ok();
  return out;
}

ordered_json limiting_json(const LimitingMhs& lim) {
  ordered_json out = mhs_report_json(lim.mhs_report);
  out["weight_filtration"] = qfilt_json(lim.mhs.W);
  ordered_json prims = ordered_json::array();
  for (const auto& p : lim.primitives) {
    prims.push_back(ordered_json{{"level", p.level},
                                 {"graded_dim", p.graded_dim},
                                 {"primitive_dim", p.primitive.dim()},
                                 {"form_well_defined", p.form_well_defined},
                                 {"polarized", p.report.ok_over_field()},
                                 {"detail", p.report.describe()}});
  }
  out["primitives"] = std::move(prims);
  out["polarized"] = lim.polarized();
  return out;
}

ordered_json fit_json(const SlopeFit& fit) {
  return ordered_json{{"slope", fit.slope},
                      {"intercept", fit.intercept},
                      {"rms_residual", fit.rms_residual},
                      {"points", fit.points}};
}

// ---------------------------------------------------------------------------
// Option parsing helpers
// ---------------------------------------------------------------------------

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

QVec parse_rat_vector(const std::string& s) {
  QVec out;
  for (const std::string& tok : split(s, ',')) {
    std::string t = trim(tok);
    if (t.empty()) throw InvalidInput("empty entry in rational list '" + s + "'");
    out.push_back(parse_rat_string(t));
  }
  return out;
}

Gauss parse_gauss_scalar(const std::string& s0) {
  std::string s = trim(s0);
  if (s.empty()) throw InvalidInput("empty coordinate");
  struct Term {
    int sign;
    std::string body;
  };
  std::vector<Term> terms;
  size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+') {
      ++i;
    } else if (s[i] == '-') {
      sign = -1;
      ++i;
    }
    size_t start = i;
    while (i < s.size() && s[i] != '+' && s[i] != '-') ++i;
    if (i == start) throw InvalidInput("malformed coordinate '" + s0 + "'");
    terms.push_back({sign, s.substr(start, i - start)});
  }
  if (terms.empty() || terms.size() > 2) {
    throw InvalidInput("malformed coordinate '" + s0 + "'");
  }
  Rat re(0), im(0);
  bool seen_re = false, seen_im = false;
  for (const Term& t : terms) {
    if (t.body.back() == 'i') {
      if (seen_im) throw InvalidInput("two imaginary parts in '" + s0 + "'");
      seen_im = true;
      std::string mag = t.body.substr(0, t.body.size() - 1);
      Rat v = mag.empty() ? Rat(1) : parse_rat_string(mag);
      im = Rat(t.sign) * v;
    } else {
      if (seen_re) throw InvalidInput("two real parts in '" + s0 + "'");
      seen_re = true;
      re = Rat(t.sign) * parse_rat_string(t.body);
    }
  }
  return Gauss(re, im);
}

GVec parse_gauss_vector(const std::string& s) {
  GVec out;
  for (const std::string& tok : split(s, ',')) {
    out.push_back(parse_gauss_scalar(tok));
  }
  return out;
}

double parse_double(const std::string& s0) {
  std::string s = trim(s0);
  if (s.empty()) throw InvalidInput("empty number");
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) {
    v = to_double(parse_rat_string(s));  // accepts exact "p/q" entries
  }
  if (!std::isfinite(v)) throw InvalidInput("number out of range: '" + s0 + "'");
  return v;
}

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  for (const std::string& tok : split(s, ',')) out.push_back(parse_double(tok));
  return out;
}

CD parse_cd_scalar(const std::string& s0) {
  std::string s = trim(s0);
  if (s.empty()) throw InvalidInput("empty coordinate");
  struct Term {
    int sign;
    std::string body;
  };
  std::vector<Term> terms;
  size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+') {
      ++i;
    } else if (s[i] == '-') {
      sign = -1;
      ++i;
    }
    size_t start = i;
    while (i < s.size()) {
      char c = s[i];
      bool exponent_sign =
          (c == '+' || c == '-') && i > start && (s[i - 1] == 'e' || s[i - 1] == 'E');
      if ((c == '+' || c == '-') && !exponent_sign) break;
      ++i;
    }
    if (i == start) throw InvalidInput("malformed coordinate '" + s0 + "'");
    terms.push_back({sign, s.substr(start, i - start)});
  }
  if (terms.empty() || terms.size() > 2) {
    throw InvalidInput("malformed coordinate '" + s0 + "'");
  }
  double re = 0, im = 0;
  bool seen_re = false, seen_im = false;
  for (const Term& t : terms) {
    if (t.body.back() == 'i') {
      if (seen_im) throw InvalidInput("two imaginary parts in '" + s0 + "'");
      seen_im = true;
      std::string mag = t.body.substr(0, t.body.size() - 1);
      double v = mag.empty() ? 1.0 : parse_double(mag);
      im = t.sign * v;
    } else {
      if (seen_re) throw InvalidInput("two real parts in '" + s0 + "'");
      seen_re = true;
      re = t.sign * parse_double(t.body);
    }
  }
  return CD(re, im);
}

CVec parse_cd_vector(const std::string& s) {
  CVec out;
  for (const std::string& tok : split(s, ',')) {
    out.push_back(parse_cd_scalar(tok));
  }
  return out;
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open input file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Options {
  std::string input;
  std::string fixture;
  std::string at;
  std::string ray;
  std::string depths;
  std::string grid;
  std::string klass;
  std::string K = "1";
  std::vector<std::string> vectors;
  std::string out_dir;
  std::string name;
  double tol = 0;
  double alpha = 1.0;
  std::uint64_t seed = 0x77e11;
  bool cone = false;
  bool solve = false;
};

VariationDocument load_document(const Options& o) {
  if (!o.fixture.empty()) return fixture_document(o.fixture);
  if (o.input.empty()) {
    throw InvalidInput("provide an input document (path or '-') or --fixture NAME");
  }
  return parse_variation(read_text(o.input));
}

// ---------------------------------------------------------------------------
// wf
// ---------------------------------------------------------------------------

QMat square_qmat_from_json(const ordered_json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw InvalidInput(where + " must be a nonempty matrix (list of rows)");
  }
  int n = static_cast<int>(j.size());
  QMat m(n, n);
  for (int i = 0; i < n; ++i) {
    const ordered_json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != n) {
      throw InvalidInput(where + " must be square; row " + std::to_string(i) +
                         " has the wrong length");
    }
    for (int k = 0; k < n; ++k) {
      const ordered_json& cell = row[k];
      if (cell.is_number_integer()) {
        m(i, k) = Rat(static_cast<long>(cell.get<long long>()));
      } else if (cell.is_string()) {
        m(i, k) = parse_rat_string(cell.get<std::string>());
      } else {
        throw InvalidInput(where + " entries must be integers or rational strings");
      }
    }
  }
  return m;
}

std::vector<QMat> parse_wf_input(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw InvalidInput(std::string("wf input is not valid JSON: ") + e.what());
  }
  if (j.is_object()) {
    return standard_basis(parse_variation(text)).N;
  }
  if (!j.is_array() || j.empty()) {
    throw InvalidInput(
        "wf input must be a matrix, a list of matrices, or a variation document");
  }
  if (j[0].is_array() && !j[0].empty() && j[0][0].is_array()) {
    std::vector<QMat> out;
    for (size_t k = 0; k < j.size(); ++k) {
      out.push_back(
          square_qmat_from_json(j[k], "matrix " + std::to_string(k)));
    }
    return out;
  }
  return {square_qmat_from_json(j, "matrix")};
}

int cmd_wf(const Options& o) {
  std::vector<QMat> gens;
  if (!o.fixture.empty()) {
    gens = standard_basis(fixture_document(o.fixture)).N;
  } else {
    if (o.input.empty()) {
      throw InvalidInput("provide an input (path or '-') or --fixture NAME");
    }
    gens = parse_wf_input(read_text(o.input));
  }
  if (gens.empty()) throw InvalidInput("wf needs at least one matrix");

  ordered_json out;
  out["command"] = "wf";
  bool use_cone = o.cone || gens.size() > 1;
  out["generators"] = gens.size();
  out["cone"] = use_cone;
  QFilt W;
  if (use_cone) {
    Cone c = make_cone(gens);
    W = cone_weight_filtration(c, 3, o.seed);
    out["note"] =
        "filtration independent of the positive combination: re-derived at 3 "
        "resampled positive rational weights";
    out["seed"] = o.seed;
  } else {
    W = weight_filtration(gens[0]);
  }
  out["filtration"] = qfilt_json(W);
  emit(out);
  return 0;
}

// ---------------------------------------------------------------------------
// mhs-check / bigrading
// ---------------------------------------------------------------------------

MixedHodgeStructure document_mhs(const VariationDocument& raw, uint64_t seed) {
  VariationDocument doc = standard_basis(raw);
  make_lattice(doc.weight, doc.Q);  // validates the pairing
  if (doc.N.empty()) {
    throw InvalidInput(
        "the document needs at least one nilpotent to build the weight "
        "filtration");
  }
  Cone c = make_cone(doc.N);
  QFilt W = cone_weight_filtration(c, 3, seed).shifted(-doc.weight);
  return MixedHodgeStructure{W, document_filtration(doc)};
}

int cmd_mhs_check(const Options& o) {
  VariationDocument doc = load_document(o);
  MixedHodgeStructure m = document_mhs(doc, o.seed);
  MhsReport rep = is_mhs(m);
  ordered_json out;
  out["command"] = "mhs-check";
  out["weight"] = doc.weight;
  out["weight_filtration"] = qfilt_json(m.W);
  ordered_json body = mhs_report_json(rep);
  for (auto& [k, v] : body.items()) out[k] = v;
  out["pass"] = rep.ok();
  emit(out);
  return rep.ok() ? 0 : 1;
}

int cmd_bigrading(const Options& o) {
  VariationDocument doc = load_document(o);
  MixedHodgeStructure m = document_mhs(doc, o.seed);
  MhsReport rep = is_mhs(m);
  ordered_json out;
  out["command"] = "bigrading";
  if (!rep.ok()) {
    out["is_mhs"] = false;
    out["detail"] = rep.describe();
    out["pass"] = false;
    emit(out);
    return 1;
  }
  Bigrading big = deligne_bigrading(m);
  ordered_json pattern = ordered_json::array();
  for (const auto& [pq, dim] : big.dimension_pattern()) {
    pattern.push_back(ordered_json{
        {"p", pq.first}, {"q", pq.second}, {"dim", dim}});
  }
  out["dimension_pattern"] = std::move(pattern);
  ordered_json pieces;
  for (const auto& [pq, sub] : big.pieces) {
    if (sub.dim() == 0) continue;
    pieces[std::to_string(pq.first) + "," + std::to_string(pq.second)] =
        gsub_json(sub);
  }
  out["pieces"] = std::move(pieces);
  out["splits_w_and_f"] = true;  // verified by construction or it would throw
  out["pass"] = true;
  emit(out);
  return 0;
}

// ---------------------------------------------------------------------------
// orbit-check / limiting-mhs
// ---------------------------------------------------------------------------

int cmd_orbit_check(const Options& o) {
  VariationDocument doc = load_document(o);
  ordered_json out;
  out["command"] = "orbit-check";
  NilpotentOrbit orbit;
  try {
    orbit = to_orbit(doc);
  } catch (const InvalidInput& e) {
    out["valid"] = false;
    out["reason"] = e.what();
    out["pass"] = false;
    emit(out);
    return 1;
  }
  out["valid"] = true;
  out["rank"] = orbit.dim();
  out["weight"] = orbit.weight();
  out["nilpotents"] = orbit.r();
  LimitingMhs lim = limiting_mhs(orbit);
  out["limiting"] = limiting_json(lim);
  OrbitPolarizationReport ladder = is_polarized_orbit(orbit, Rat(1), 4);
  ordered_json rows = ordered_json::array();
  for (const auto& row : ladder.rows) {
    rows.push_back(ordered_json{{"y", rat_string(row.y)},
                                {"polarized", row.polarization.ok()},
                                {"detail", row.polarization.describe()}});
  }
  ordered_json lj;
  lj["rows"] = std::move(rows);
  lj["first_all_pass_y"] = ladder.first_all_pass_y
                               ? ordered_json(rat_string(*ladder.first_all_pass_y))
                               : ordered_json(nullptr);
  lj["all_pass"] = ladder.all_pass();
  out["polarization_ladder"] = std::move(lj);
  bool pass = lim.polarized() && ladder.all_pass();
  out["pass"] = pass;
  emit(out);
  return pass ? 0 : 1;
}

int cmd_limiting_mhs(const Options& o) {
  NilpotentOrbit orbit = to_orbit(load_document(o));
  LimitingMhs lim = limiting_mhs(orbit);
  ordered_json out;
  out["command"] = "limiting-mhs";
  out["rank"] = orbit.dim();
  out["weight"] = orbit.weight();
  ordered_json body = limiting_json(lim);
  for (auto& [k, v] : body.items()) out[k] = v;
  out["pass"] = lim.polarized();
  emit(out);
  return lim.polarized() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// locus / enumerate / project
// ---------------------------------------------------------------------------

int cmd_locus(const Options& o) {
  VariationDocument doc = load_document(o);
  VariationSample sample = to_sample(doc);
  if (o.klass.empty()) throw InvalidInput("locus needs --class v (rational entries)");
  QVec v = parse_rat_vector(o.klass);
  LocusSystem sys = locus_equations(sample, v);

  ordered_json out;
  out["command"] = "locus";
  out["class"] = qvec_json(v);
  out["vars"] = sys.vars;
  out["truncation_order"] = sys.order;
  out["empty"] = sys.empty();
  if (sys.empty()) out["locus"] = "full space";
  ordered_json eqs = ordered_json::array();
  for (int a = 0; a < sys.linear.rows(); ++a) {
    bool nonzero = false;
    for (int j = 0; j < sys.linear.cols(); ++j) {
      if (sgn(sys.linear(a, j)) != 0) nonzero = true;
    }
    ordered_json terms = ordered_json::array();
    for (const auto& [deg, coeff] : sys.series) {
      if (coeff[static_cast<size_t>(a)].is_zero()) continue;
      nonzero = true;
      terms.push_back(ordered_json{
          {"degree", deg},
          {"value", gauss_json(coeff[static_cast<size_t>(a)])}});
    }
    if (!nonzero) continue;
    ordered_json eq;
    eq["coordinate"] = a;
    eq["coefficients"] = qvec_json(sys.linear.row(a));
    eq["series"] = std::move(terms);
    eqs.push_back(std::move(eq));
  }
  out["equations"] = std::move(eqs);
  if (o.solve) {
    QSub sol = orbit_locus_solve(sample.orbit, v);
    out["solution"] = ordered_json{{"dim", sol.dim()},
                                   {"full_space", sol.is_full()},
                                   {"basis", qsub_json(sol)}};
  }
  emit(out);
  return 0;
}

int cmd_enumerate(const Options& o) {
  VariationDocument doc = load_document(o);
  if (o.at.empty()) throw InvalidInput("enumerate needs --at z (exact coordinates)");
  GVec z = parse_gauss_vector(o.at);
  Rat K = parse_rat_string(o.K);
  std::vector<HodgeClassHit> hits =
      doc.gamma ? enumerate_classes(to_sample(doc), z, K)
                : enumerate_classes(to_orbit(doc), z, K);
  ordered_json out;
  out["command"] = "enumerate";
  out["at"] = gvec_json(z);
  out["K"] = rat_string(K);
  out["count"] = hits.size();
  ordered_json rows = ordered_json::array();
  for (const auto& h : hits) rows.push_back(hit_json(h, /*with_witness=*/true));
  out["hits"] = std::move(rows);
  emit(out);
  return 0;
}

int cmd_project(const Options& o) {
  VariationDocument doc = load_document(o);
  NilpotentOrbit orbit = to_orbit(doc);
  if (o.klass.empty()) throw InvalidInput("project needs --class v");
  QVec v = parse_rat_vector(o.klass);

  ordered_json out;
  out["command"] = "project";
  out["class"] = qvec_json(v);
  bool did_work = false;

  if (!o.at.empty()) {
    CVec z = parse_cd_vector(o.at);
    CVec zp = project_nearby(orbit, v, z);
    double dist = 0;
    for (size_t j = 0; j < z.size(); ++j) dist += std::norm(zp[j] - z[j]);
    dist = std::sqrt(dist);
    out["at"] = cvec_json(z);
    out["projected"] = cvec_json(zp);
    out["distance"] = dist;
    did_work = true;
  }

  if (!o.ray.empty()) {
    if (o.depths.empty()) {
      throw InvalidInput("project --ray needs --depths t1,t2,...");
    }
    std::vector<std::string> parts = split(o.ray, ';');
    if (parts.size() != 2) {
      throw InvalidInput("--ray must be 'z0;direction' (two ';'-separated vectors)");
    }
    CVec z0 = parse_cd_vector(parts[0]);
    std::vector<double> dir = parse_double_list(parts[1]);
    std::vector<double> ts = parse_double_list(o.depths);
    if (dir.size() != z0.size() || static_cast<int>(dir.size()) != orbit.r()) {
      throw DimensionMismatch("ray base/direction must have one entry per nilpotent");
    }
    std::vector<double> xs, ys;
    ordered_json rows = ordered_json::array();
    for (double t : ts) {
      CVec z(z0);
      double inf_y = std::numeric_limits<double>::infinity();
      for (size_t j = 0; j < z.size(); ++j) {
        z[j] += CD(0, t * dir[j]);
        inf_y = std::min(inf_y, z[j].imag());
      }
      CVec zp = project_nearby(orbit, v, z);
      double dist = 0;
      for (size_t j = 0; j < z.size(); ++j) dist += std::norm(zp[j] - z[j]);
      dist = std::sqrt(dist);
      rows.push_back(ordered_json{{"t", t}, {"inf_y", inf_y}, {"distance", dist}});
      if (dist > 0) {
        xs.push_back(-2 * M_PI * inf_y);
        ys.push_back(std::log(dist));
      }
    }
    ordered_json ray;
    ray["base"] = cvec_json(z0);
    ray["direction"] = dir;
    ray["t_grid"] = ts;
    ray["rows"] = std::move(rows);
    if (xs.size() >= 2) {
      SlopeFit fit = fit_slope(xs, ys);
      ray["fit"] = fit_json(fit);
      ray["exponent"] = 2 * M_PI * fit.slope;
    } else {
      ray["exact_on_locus"] = true;
    }
    out["ray"] = std::move(ray);
    did_work = true;
  }

  if (!did_work) {
    throw InvalidInput("project needs --at z, or --ray 'z0;direction' with --depths");
  }
  emit(out);
  return 0;
}

// ---------------------------------------------------------------------------
// verify25
// ---------------------------------------------------------------------------

int cmd_verify25(const Options& o) {
  VariationDocument doc = load_document(o);
  if (o.ray.empty() || o.depths.empty()) {
    throw InvalidInput("verify25 needs --ray 'z0;theta' and --depths n1,n2,...");
  }
  std::vector<std::string> parts = split(o.ray, ';');
  if (parts.size() != 2) {
    throw InvalidInput("--ray must be 'z0;theta' (two ';'-separated vectors)");
  }
  GVec z0 = parse_gauss_vector(parts[0]);
  QVec theta = parse_rat_vector(parts[1]);
  if (theta.size() != z0.size()) {
    throw DimensionMismatch("ray base and direction must have equal length");
  }
  QVec ns = parse_rat_vector(o.depths);
  std::vector<EvaluationPoint> points;
  points.reserve(ns.size());
  for (const Rat& n : ns) {
    GVec z(z0);
    for (size_t j = 0; j < z.size(); ++j) {
      z[j] = z[j] + Gauss(Rat(0), n * theta[j]);
    }
    points.push_back(EvaluationPoint::at(z));
  }
  Rat K = parse_rat_string(o.K);

  Thm25Report rep = doc.gamma
                        ? verify_thm25(to_sample(doc), points, K, o.alpha)
                        : verify_thm25(to_orbit(doc), points, K, o.alpha);

  ordered_json out;
  out["command"] = "verify25";
  out["K"] = rat_string(K);
  out["alpha"] = o.alpha;
  ordered_json pts = ordered_json::array();
  for (const auto& p : points) {
    pts.push_back(p.exact ? gvec_json(*p.exact) : ordered_json(cvec_json(p.z)));
  }
  out["points"] = std::move(pts);
  ordered_json per_point = ordered_json::array();
  for (size_t k = 0; k < rep.per_point.size(); ++k) {
    ordered_json rows = ordered_json::array();
    for (const auto& h : rep.per_point[k]) {
      rows.push_back(hit_json(h, /*with_witness=*/false));
    }
    per_point.push_back(ordered_json{
        {"point", k},
        {"count", rep.per_point[k].size()},
        {"hits", std::move(rows)}});
  }
  out["per_point"] = std::move(per_point);
  auto vec_list = [](const std::vector<QVec>& vs) {
    ordered_json out = ordered_json::array();
    for (const QVec& v : vs) out.push_back(qvec_json(v));
    return out;
  };
  out["classes"] = vec_list(rep.classes);
  out["persistent"] = vec_list(rep.persistent);
  out["transient"] = vec_list(rep.transient);
  out["stabilization_index"] = rep.stabilization_index;
  out["stabilized"] = rep.stabilized;
  out["persistent_all_in_w0"] = rep.persistent_all_in_w0;
  ordered_json wits = ordered_json::array();
  bool witnesses_ok = true;
  for (const auto& w : rep.witnesses) {
    witnesses_ok = witnesses_ok && w.exact_member;
    wits.push_back(witness_json(w));
  }
  out["witnesses"] = std::move(wits);
  ordered_json scan;
  scan["alpha"] = o.alpha;
  scan["sines"] = rep.float_sines;
  scan["near"] = rep.float_near;
  out["float_scan"] = std::move(scan);
  bool pass = rep.stabilized && rep.persistent_all_in_w0 && witnesses_ok;
  out["pass"] = pass;
  emit(out);
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// asymptotics
// ---------------------------------------------------------------------------

int cmd_asymptotics(const Options& o) {
  ordered_json out;
  out["command"] = "asymptotics";
  if (!o.ray.empty()) {
    VariationDocument doc = load_document(o);
    VariationSample sample = to_sample(doc);
    if (o.depths.empty()) {
      throw InvalidInput("asymptotics --ray needs --depths t1,t2,...");
    }
    std::vector<std::string> parts = split(o.ray, ';');
    if (parts.size() != 2) {
      throw InvalidInput("--ray must be 'z0;direction' (two ';'-separated vectors)");
    }
    CVec z0 = parse_cd_vector(parts[0]);
    std::vector<double> dir = parse_double_list(parts[1]);
    std::vector<double> ts = parse_double_list(o.depths);
    DecayReport rep = decay_check(sample, z0, dir, ts);
    out["mode"] = "decay";
    out["ray"] = ordered_json{{"base", cvec_json(z0)}, {"direction", dir}};
    out["t_grid"] = rep.t_grid;
    out["inf_y"] = rep.inf_y;
    out["distances"] = rep.distances;
    out["exact_match"] = rep.exact_match;
    if (!rep.exact_match) {
      out["fit"] = fit_json(rep.fit);
      out["exponent"] = rep.exponent;
    }
    emit(out);
    return 0;
  }
  if (!o.grid.empty()) {
    if (o.fixture.empty()) {
      throw InvalidInput(
          "norm-band mode needs --fixture NAME (documents do not carry the "
          "group action)");
    }
    SL2Rep rep = fixture_rep(o.fixture);
    std::vector<std::vector<double>> grid;
    for (const std::string& part : split(o.grid, ';')) {
      grid.push_back(parse_double_list(part));
    }
    std::vector<QVec> vectors;
    if (o.vectors.empty()) {
      for (int k = 0; k < rep.dim(); ++k) {
        QVec e(static_cast<size_t>(rep.dim()), Rat(0));
        e[static_cast<size_t>(k)] = Rat(1);
        vectors.push_back(std::move(e));
      }
    } else {
      for (const std::string& s : o.vectors) {
        vectors.push_back(parse_rat_vector(s));
      }
    }
    NormBandReport nb = norm_asymptotics_check(rep, vectors, grid);
    out["mode"] = "norm-band";
    out["fixture"] = o.fixture;
    out["grid"] = grid;
    ordered_json traces = ordered_json::array();
    for (size_t vi = 0; vi < nb.rows.size(); ++vi) {
      ordered_json trace = ordered_json::array();
      for (const auto& row : nb.rows[vi]) {
        trace.push_back(ordered_json{{"y", row.y},
                                     {"norm_sq", row.norm_sq},
                                     {"graded_sum", row.graded_sum},
                                     {"ratio", row.ratio}});
      }
      traces.push_back(ordered_json{{"vector", qvec_json(vectors[vi])},
                                    {"rows", std::move(trace)}});
    }
    out["traces"] = std::move(traces);
    out["min_ratio"] = nb.min_ratio;
    out["max_ratio"] = nb.max_ratio;
    out["band_constant"] = nb.band_constant;
    out["bounded"] = nb.bounded;
    out["pass"] = nb.bounded;
    emit(out);
    return nb.bounded ? 0 : 1;
  }
  throw InvalidInput("asymptotics needs --ray (decay mode) or --grid (norm-band mode)");
}

// ---------------------------------------------------------------------------
// fixtures
// ---------------------------------------------------------------------------

int cmd_fixtures(const Options& o) {
  if (!o.name.empty()) {
    std::cout << serialize_variation(fixture_document(o.name));
    return 0;
  }
  ordered_json out;
  out["command"] = "fixtures";
  if (!o.out_dir.empty()) {
    std::filesystem::create_directories(o.out_dir);
    ordered_json written = ordered_json::array();
    for (const std::string& name : fixture_names()) {
      std::filesystem::path path =
          std::filesystem::path(o.out_dir) / (name + ".json");
      std::ofstream f(path);
      if (!f) throw InvalidInput("cannot write '" + path.string() + "'");
      f << serialize_variation(fixture_document(name));
      written.push_back(path.string());
    }
    out["written"] = std::move(written);
    emit(out);
    return 0;
  }
  ordered_json all;
  for (const std::string& name : fixture_names()) {
    all[name] = ordered_json::parse(serialize_variation(fixture_document(name)));
  }
  out["fixtures"] = std::move(all);
  emit(out);
  return 0;
}

int guarded(const Options& o, const std::function<int(const Options&)>& act) {
  try {
    if (o.tol > 0) set_default_tolerance(o.tol);
    return act(o);
  } catch (const NumericalUnderflow& e) {
    emit_error("numerical-underflow", e.what());
    return 3;
  } catch (const InvalidInput& e) {
    emit_error("invalid-input", e.what());
    return 2;
  } catch (const VerificationFailure& e) {
    emit_error("verification-failure", e.what());
    return 1;
  } catch (const Error& e) {
    emit_error("error", e.what());
    return 1;
  } catch (const std::exception& e) {
    emit_error("error", e.what());
    return 1;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{
      "hodge: exact linear algebra for degenerating variations of Hodge "
      "structure"};
  app.require_subcommand(1);

  Options o;
  int code = 0;

  app.add_option("--tol", o.tol,
                 "override the float comparison tolerance (default 1e-9)");
  app.add_option("--seed", o.seed, "seed for resampled randomized checks");

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("input", o.input, "variation document path, or '-' for stdin");
    sub->add_option("--fixture", o.fixture, "use a named fixture as the input");
  };

  auto dispatch = [&](int (*fn)(const Options&)) {
    return [&o, &code, fn]() { code = guarded(o, fn); };
  };

  CLI::App* wf = app.add_subcommand(
      "wf", "weight filtration of a nilpotent matrix or cone");
  add_input(wf);
  wf->add_flag("--cone", o.cone,
               "treat the input as a cone even with one generator");
  wf->callback(dispatch(&cmd_wf));

  CLI::App* mhs = app.add_subcommand(
      "mhs-check", "check the limiting pair (W, F) is a mixed Hodge structure");
  add_input(mhs);
  mhs->callback(dispatch(&cmd_mhs_check));

  CLI::App* big = app.add_subcommand(
      "bigrading", "canonical bigrading of the limiting mixed Hodge structure");
  add_input(big);
  big->callback(dispatch(&cmd_bigrading));

  CLI::App* oc = app.add_subcommand(
      "orbit-check", "validate a nilpotent orbit and its polarization ladder");
  add_input(oc);
  oc->callback(dispatch(&cmd_orbit_check));

  CLI::App* lm = app.add_subcommand(
      "limiting-mhs", "limiting mixed Hodge structure with primitive forms");
  add_input(lm);
  lm->callback(dispatch(&cmd_limiting_mhs));

  CLI::App* locus = app.add_subcommand(
      "locus", "locus equations for a rational class; --solve for the exact set");
  add_input(locus);
  locus->add_option("--class", o.klass, "rational class (comma-separated entries)");
  locus->add_flag("--solve", o.solve, "solve the linear system exactly");
  locus->callback(dispatch(&cmd_locus));

  CLI::App* en = app.add_subcommand(
      "enumerate", "integral (0,0)-classes of bounded norm at an exact point");
  add_input(en);
  en->add_option("--at", o.at,
                 "exact point, e.g. '2i' or '1/2+3i,i' (one coordinate per "
                 "variable)");
  en->add_option("--K", o.K, "norm bound (rational)");
  en->callback(dispatch(&cmd_enumerate));

  CLI::App* pr = app.add_subcommand(
      "project", "project a point onto the locus of a class");
  add_input(pr);
  pr->add_option("--class", o.klass, "rational class (comma-separated entries)");
  pr->add_option("--at", o.at, "complex point, e.g. '0.3+2.5i'");
  pr->add_option("--ray", o.ray, "'z0;direction' for a decay fit along a ray");
  pr->add_option("--depths", o.depths, "ray parameters t1,t2,...");
  pr->callback(dispatch(&cmd_project));

  CLI::App* v25 = app.add_subcommand(
      "verify25", "finiteness/membership harness along a vertical ray");
  add_input(v25);
  v25->add_option("--ray", o.ray, "'z0;theta': points are z0 + i n theta");
  v25->add_option("--depths", o.depths, "exact depths n1,n2,... (rationals)");
  v25->add_option("--K", o.K, "norm bound (rational)");
  v25->add_option("--alpha", o.alpha, "near-class decay rate");
  v25->callback(dispatch(&cmd_verify25));

  CLI::App* as = app.add_subcommand(
      "asymptotics", "decay fit along a ray, or norm-band check on a model");
  add_input(as);
  as->add_option("--ray", o.ray, "'z0;direction' (decay mode)");
  as->add_option("--depths", o.depths, "ray parameters t1,t2,... (decay mode)");
  as->add_option("--grid", o.grid,
                 "semicolon-separated depth points 'y1,..,yd;...' (norm-band "
                 "mode, needs --fixture)");
  as->add_option("--vector", o.vectors,
                 "lattice vector for the norm band (repeatable; default: "
                 "standard basis)");
  as->callback(dispatch(&cmd_asymptotics));

  CLI::App* fx = app.add_subcommand(
      "fixtures", "emit the standard fixture documents");
  fx->add_option("--name", o.name, "emit a single fixture document");
  fx->add_option("--out", o.out_dir, "write one JSON file per fixture");
  fx->callback(dispatch(&cmd_fixtures));

  for (CLI::App* s : app.get_subcommands(nullptr)) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  return code;
}

}  // namespace hodge
