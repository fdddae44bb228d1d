#include "hodge/json_io.hpp"

#include <climits>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "hodge/error.hpp"
#include "json.hpp"

namespace hodge {
namespace {

using ordered_json = nlohmann::ordered_json;

[[noreturn]] void bad(const std::string& what) {
  throw InvalidInput("variation document: " + what);
}

const ordered_json& require_key(const ordered_json& j, const char* key) {
  if (!j.contains(key)) bad(std::string("missing required key '") + key + "'");
  return j.at(key);
}

int int_from_json(const ordered_json& j, const std::string& where) {
  if (!j.is_number_integer()) bad(where + " must be an integer");
  long long v = j.get<long long>();
  if (v < INT_MIN || v > INT_MAX) bad(where + " is out of range");
  return static_cast<int>(v);
}

Rat rat_from_json(const ordered_json& j, const std::string& where) {
  if (j.is_number_integer()) {
    return Rat(static_cast<long>(j.get<long long>()));
  }
  if (j.is_string()) {
    try {
      return parse_rat_string(j.get<std::string>());
    } catch (const InvalidInput& e) {
      bad(where + ": " + e.what());
    }
  }
  bad(where + " must be an integer or a rational string");
}

Gauss gauss_from_json(const ordered_json& j, const std::string& where) {
  if (j.is_array()) {
    if (j.size() != 2) bad(where + " must be a [re, im] pair");
    return Gauss(rat_from_json(j[0], where + " re part"),
                 rat_from_json(j[1], where + " im part"));
  }
  return Gauss(rat_from_json(j, where));
}

QMat qmat_from_json(const ordered_json& j, int rows, int cols,
                    const std::string& where, bool integral) {
  std::string shape =
      std::to_string(rows) + " x " + std::to_string(cols) + " matrix";
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    bad(where + " must be a " + shape + " (list of " + std::to_string(rows) +
        " rows)");
  }
  QMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const ordered_json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      bad(where + " row " + std::to_string(i) + " must have " +
          std::to_string(cols) + " entries");
    }
    for (int k = 0; k < cols; ++k) {
      std::string cell = where + "[" + std::to_string(i) + "][" +
                         std::to_string(k) + "]";
      Rat v = rat_from_json(row[k], cell);
      if (integral && !is_integer(v)) bad(cell + " must be an integer");
      m(i, k) = v;
    }
  }
  return m;
}

GMat gmat_from_json(const ordered_json& j, int rows, int cols,
                    const std::string& where) {
  std::string shape =
      std::to_string(rows) + " x " + std::to_string(cols) + " matrix";
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    bad(where + " must be a " + shape + " (list of " + std::to_string(rows) +
        " rows)");
  }
  GMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const ordered_json& row = j[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      bad(where + " row " + std::to_string(i) + " must have " +
          std::to_string(cols) + " entries");
    }
    for (int k = 0; k < cols; ++k) {
      m(i, k) = gauss_from_json(row[k], where + "[" + std::to_string(i) +
                                            "][" + std::to_string(k) + "]");
    }
  }
  return m;
}

GVec gvec_from_json(const ordered_json& j, int n, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) {
    bad(where + " must be a vector with " + std::to_string(n) + " entries");
  }
  GVec v(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) {
    v[static_cast<size_t>(k)] =
        gauss_from_json(j[k], where + "[" + std::to_string(k) + "]");
  }
  return v;
}

int parse_int_key(const std::string& s, const std::string& where) {
  bool ok = !s.empty();
  size_t i = (ok && s[0] == '-') ? 1 : 0;
  if (i == s.size()) ok = false;
  for (size_t k = i; ok && k < s.size(); ++k) {
    if (s[k] < '0' || s[k] > '9') ok = false;
  }
  if (!ok) bad(where + " keys must be integers, got '" + s + "'");
  try {
    return std::stoi(s);
  } catch (...) {
    bad(where + " key '" + s + "' is out of range");
  }
}

ordered_json rat_to_json(const Rat& x) { return ordered_json(rat_string(x)); }

ordered_json gauss_to_json(const Gauss& g) {
  return ordered_json::array({rat_string(g.re), rat_string(g.im)});
}

ordered_json qmat_to_json(const QMat& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(rat_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json gmat_to_json(const GMat& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(gauss_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json gvec_to_json(const GVec& v) {
  ordered_json row = ordered_json::array();
  for (const Gauss& g : v) row.push_back(gauss_to_json(g));
  return row;
}

// Standard-basis view of a document: applies `basis_change` (rows = the
// document's lattice basis in standard coordinates) to every field.
struct Standardized {
  QMat Q;
  std::vector<QMat> N;
  GFilt F;
  std::optional<PowerSeries> gamma;
};

Standardized standardize(const VariationDocument& doc) {
  if (doc.rank <= 0) bad("rank must be positive");
  Standardized out{doc.Q, doc.N, GFilt(Direction::decreasing, doc.rank),
                   doc.gamma};
  for (const auto& [p, rows] : doc.F) {
    out.F.set(p, Subspace<Gauss>::span(rows, doc.rank));
  }
  if (!doc.basis_change) return out;

  const QMat& B = *doc.basis_change;
  if (B.rows() != doc.rank || B.cols() != doc.rank) {
    bad("basis_change must be a " + std::to_string(doc.rank) + " x " +
        std::to_string(doc.rank) + " matrix");
  }
  for (int i = 0; i < B.rows(); ++i) {
    for (int j = 0; j < B.cols(); ++j) {
      if (!is_integer(B(i, j))) bad("basis_change entries must be integers");
    }
  }
  Rat det = B.det();
  if (det != Rat(1) && det != Rat(-1)) {
    bad("basis_change must be unimodular (determinant 1 or -1)");
  }
  QMat Bt = B.transpose();
  QMat Binv = *B.inverse();
  QMat BtInv = *Bt.inverse();
  // Coordinates transform by x_std = B^T x_doc, so operators conjugate as
  // X -> B^T X B^{-T}, the pairing as Q -> B^{-1} Q B^{-T}, and subspace
  // basis rows as r -> r B.
  out.Q = Binv * doc.Q * BtInv;
  for (QMat& n : out.N) n = Bt * n * BtInv;
  GMat Bg = promote(B);
  GFilt moved(Direction::decreasing, doc.rank);
  for (const auto& [p, rows] : doc.F) {
    std::vector<GVec> mapped;
    mapped.reserve(rows.size());
    GMat BgT = Bg.transpose();
    for (const GVec& r : rows) mapped.push_back(BgT * r);
    moved.set(p, Subspace<Gauss>::span(mapped, doc.rank));
  }
  out.F = moved;
  if (out.gamma) {
    GMat Gt = promote(Bt);
    GMat GtInv = promote(BtInv);
    for (auto& [deg, coeff] : out.gamma->coeffs) coeff = Gt * coeff * GtInv;
  }
  return out;
}

PowerSeries gamma_from_json(const ordered_json& j, int vars, int dim) {
  if (!j.is_object()) bad("gamma must be an object");
  for (const auto& item : j.items()) {
    if (item.key() != "order" && item.key() != "terms") {
      bad("gamma has unknown key '" + item.key() + "'");
    }
  }
  PowerSeries g;
  g.vars = vars;
  g.dim = dim;
  g.order = int_from_json(require_key(j, "order"), "gamma.order");
  if (g.order < 0) bad("gamma.order must be nonnegative");
  const ordered_json& terms = require_key(j, "terms");
  if (!terms.is_array()) bad("gamma.terms must be a list");
  int idx = 0;
  for (const ordered_json& term : terms) {
    std::string where = "gamma.terms[" + std::to_string(idx) + "]";
    if (!term.is_object()) bad(where + " must be an object");
    for (const auto& item : term.items()) {
      if (item.key() != "degree" && item.key() != "matrix") {
        bad(where + " has unknown key '" + item.key() + "'");
      }
    }
    const ordered_json& deg_json = require_key(term, "degree");
    if (!deg_json.is_array() || static_cast<int>(deg_json.size()) != vars) {
      bad(where + ".degree must list one exponent per variable (" +
          std::to_string(vars) + ")");
    }
    std::vector<int> degree;
    degree.reserve(deg_json.size());
    for (size_t k = 0; k < deg_json.size(); ++k) {
      int d = int_from_json(deg_json[k], where + ".degree[" +
                                             std::to_string(k) + "]");
      if (d < 0) bad(where + ".degree entries must be nonnegative");
      degree.push_back(d);
    }
    if (g.coeffs.count(degree) != 0) bad(where + " repeats a degree");
    g.coeffs[degree] =
        gmat_from_json(require_key(term, "matrix"), dim, dim,
                       where + ".matrix");
    ++idx;
  }
  return g;
}

ordered_json gamma_to_json(const PowerSeries& g) {
  ordered_json out;
  out["order"] = g.order;
  ordered_json terms = ordered_json::array();
  for (const auto& [deg, coeff] : g.coeffs) {
    ordered_json term;
    term["degree"] = deg;
    term["matrix"] = gmat_to_json(coeff);
    terms.push_back(std::move(term));
  }
  out["terms"] = std::move(terms);
  return out;
}

bool series_equal(const PowerSeries& a, const PowerSeries& b) {
  return a.vars == b.vars && a.dim == b.dim && a.order == b.order &&
         a.coeffs == b.coeffs;
}

}  // namespace

std::string rat_string(const Rat& x) { return x.get_str(); }

Rat parse_rat_string(const std::string& s) {
  bool ok = true;
  size_t i = 0;
  if (i < s.size() && s[i] == '-') ++i;
  size_t num_begin = i;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
  if (i == num_begin) ok = false;
  std::string num = s.substr(0, i);
  std::string den = "1";
  if (ok && i < s.size()) {
    if (s[i] != '/') {
      ok = false;
    } else {
      size_t den_begin = ++i;
      while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
      if (i == den_begin || i != s.size()) ok = false;
      den = s.substr(den_begin);
    }
  }
  if (!ok) throw InvalidInput("malformed rational '" + s + "'");
  mpz_class n(num), d(den);
  if (d == 0) throw InvalidInput("zero denominator in rational '" + s + "'");
  Rat r(n, d);
  r.canonicalize();
  return r;
}

std::string float_string(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

VariationDocument parse_variation(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    bad(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("top level must be an object");
  for (const auto& item : j.items()) {
    const std::string& k = item.key();
    if (k != "schema_version" && k != "field" && k != "rank" &&
        k != "weight" && k != "Q" && k != "N" && k != "F" && k != "gamma" &&
        k != "basis_change") {
      bad("unknown key '" + k + "'");
    }
  }

  VariationDocument doc;
  doc.schema_version =
      int_from_json(require_key(j, "schema_version"), "schema_version");
  if (doc.schema_version != kSchemaVersion) {
    bad("unsupported schema_version " + std::to_string(doc.schema_version) +
        " (expected " + std::to_string(kSchemaVersion) + ")");
  }
  const ordered_json& field = require_key(j, "field");
  if (!field.is_string() || field.get<std::string>() != kFieldTag) {
    bad(std::string("field must be \"") + kFieldTag + "\"");
  }
  doc.field = kFieldTag;
  doc.rank = int_from_json(require_key(j, "rank"), "rank");
  if (doc.rank <= 0) bad("rank must be positive");
  doc.weight = int_from_json(require_key(j, "weight"), "weight");
  doc.Q = qmat_from_json(require_key(j, "Q"), doc.rank, doc.rank, "Q",
                         /*integral=*/true);

  const ordered_json& njson = require_key(j, "N");
  if (!njson.is_array()) bad("N must be a list of matrices");
  for (size_t k = 0; k < njson.size(); ++k) {
    doc.N.push_back(qmat_from_json(njson[k], doc.rank, doc.rank,
                                   "N[" + std::to_string(k) + "]",
                                   /*integral=*/true));
  }

  const ordered_json& fjson = require_key(j, "F");
  if (!fjson.is_object() || fjson.empty()) {
    bad("F must be an object with at least one piece, keyed by level");
  }
  for (const auto& item : fjson.items()) {
    int p = parse_int_key(item.key(), "F");
    const ordered_json& rows = item.value();
    std::string where = "F[\"" + item.key() + "\"]";
    if (!rows.is_array()) bad(where + " must be a list of basis rows");
    std::vector<GVec> basis;
    basis.reserve(rows.size());
    for (size_t rix = 0; rix < rows.size(); ++rix) {
      basis.push_back(gvec_from_json(
          rows[rix], doc.rank, where + "[" + std::to_string(rix) + "]"));
    }
    if (doc.F.count(p) != 0) bad("F repeats level " + std::to_string(p));
    doc.F[p] = std::move(basis);
  }

  if (j.contains("gamma") && !j.at("gamma").is_null()) {
    doc.gamma = gamma_from_json(j.at("gamma"),
                                static_cast<int>(doc.N.size()), doc.rank);
  }
  if (j.contains("basis_change") && !j.at("basis_change").is_null()) {
    doc.basis_change = qmat_from_json(j.at("basis_change"), doc.rank,
                                      doc.rank, "basis_change",
                                      /*integral=*/true);
    Rat det = doc.basis_change->det();
    if (det != Rat(1) && det != Rat(-1)) {
      bad("basis_change must be unimodular (determinant 1 or -1)");
    }
  }
  return doc;
}

std::string serialize_variation(const VariationDocument& doc) {
  ordered_json j;
  j["schema_version"] = doc.schema_version;
  j["field"] = doc.field;
  j["rank"] = doc.rank;
  j["weight"] = doc.weight;
  j["Q"] = qmat_to_json(doc.Q);
  ordered_json ns = ordered_json::array();
  for (const QMat& n : doc.N) ns.push_back(qmat_to_json(n));
  j["N"] = std::move(ns);
  ordered_json f;
  for (const auto& [p, rows] : doc.F) {
    ordered_json basis = ordered_json::array();
    for (const GVec& r : rows) basis.push_back(gvec_to_json(r));
    f[std::to_string(p)] = std::move(basis);
  }
  j["F"] = std::move(f);
  if (doc.gamma) j["gamma"] = gamma_to_json(*doc.gamma);
  if (doc.basis_change) j["basis_change"] = qmat_to_json(*doc.basis_change);
  return j.dump(2) + "\n";
}

NilpotentOrbit to_orbit(const VariationDocument& doc) {
  Standardized std_view = standardize(doc);
  return make_orbit(PolarizedLattice{doc.rank, doc.weight, std_view.Q},
                    std_view.N, std_view.F);
}

VariationSample to_sample(const VariationDocument& doc) {
  Standardized std_view = standardize(doc);
  NilpotentOrbit orbit =
      make_orbit(PolarizedLattice{doc.rank, doc.weight, std_view.Q},
                 std_view.N, std_view.F);
  PowerSeries gamma = std_view.gamma
                          ? *std_view.gamma
                          : zero_series(orbit.r(), doc.rank);
  if (gamma.vars != orbit.r() || gamma.dim != doc.rank) {
    bad("gamma must have one variable per nilpotent and rank-sized "
        "coefficients");
  }
  return make_sample(std::move(orbit), std::move(gamma));
}

VariationDocument standard_basis(const VariationDocument& doc) {
  Standardized std_view = standardize(doc);
  VariationDocument out;
  out.rank = doc.rank;
  out.weight = doc.weight;
  out.Q = std::move(std_view.Q);
  out.N = std::move(std_view.N);
  for (const auto& [p, sub] : std_view.F.pieces()) {
    std::vector<GVec> rows;
    const GMat& b = sub.basis();
    rows.reserve(static_cast<size_t>(b.rows()));
    for (int i = 0; i < b.rows(); ++i) rows.push_back(b.row(i));
    out.F[p] = std::move(rows);
  }
  out.gamma = std::move(std_view.gamma);
  return out;
}

GFilt document_filtration(const VariationDocument& doc) {
  return standardize(doc).F;
}

VariationDocument document_of(const NilpotentOrbit& orbit) {
  VariationDocument doc;
  doc.rank = orbit.dim();
  doc.weight = orbit.weight();
  doc.Q = orbit.lattice.Q;
  doc.N = orbit.N;
  for (const auto& [p, sub] : orbit.F.pieces()) {
    std::vector<GVec> rows;
    const GMat& b = sub.basis();
    rows.reserve(static_cast<size_t>(b.rows()));
    for (int i = 0; i < b.rows(); ++i) rows.push_back(b.row(i));
    doc.F[p] = std::move(rows);
  }
  return doc;
}

VariationDocument document_of(const VariationSample& sample) {
  VariationDocument doc = document_of(sample.orbit);
  doc.gamma = sample.gamma;
  return doc;
}

bool documents_equal(const VariationDocument& a, const VariationDocument& b) {
  if (a.schema_version != b.schema_version || a.field != b.field ||
      a.rank != b.rank || a.weight != b.weight) {
    return false;
  }
  if (!(a.Q == b.Q) || a.N != b.N || a.F != b.F) return false;
  if (a.gamma.has_value() != b.gamma.has_value()) return false;
  if (a.gamma && !series_equal(*a.gamma, *b.gamma)) return false;
  if (a.basis_change.has_value() != b.basis_change.has_value()) return false;
  if (a.basis_change && !(*a.basis_change == *b.basis_change)) return false;
  return true;
}

}  // namespace hodge
