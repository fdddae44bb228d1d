#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"

#include "hodge/commands.hpp"
#include "hodge/error.hpp"
#include "hodge/fixtures.hpp"
#include "hodge/json_io.hpp"

using namespace hodge;
using namespace hodge::testing;
using nlohmann::ordered_json;

namespace {

std::string parse_error_of(const std::string& text) {
  try {
    parse_variation(text);
  } catch (const InvalidInput& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

ordered_json elliptic_json() {
  return ordered_json::parse(serialize_variation(fixture_document("elliptic")));
}

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"hodge"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  std::streambuf* old_out = std::cout.rdbuf(out.rdbuf());
  std::streambuf* old_err = std::cerr.rdbuf(err.rdbuf());
  CliResult r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data());
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::filesystem::path write_temp(const std::string& stem,
                                 const std::string& text) {
  std::filesystem::path p =
      std::filesystem::temp_directory_path() / ("hodge_test_" + stem + ".json");
  std::ofstream f(p);
  f << text;
  return p;
}

}  // namespace

TEST_CASE("every fixture document round-trips bit-exactly") {
  for (const std::string& name : fixture_names()) {
    CAPTURE(name);
    VariationDocument doc = fixture_document(name);
    std::string text = serialize_variation(doc);
    VariationDocument back = parse_variation(text);
    CHECK(documents_equal(doc, back));
    CHECK(serialize_variation(back) == text);
  }
}

TEST_CASE("document parse names the first failing invariant") {
  CHECK(contains(parse_error_of("{nope"), "variation document"));
  CHECK(contains(parse_error_of("[1,2]"), "top level must be an object"));

  ordered_json j = elliptic_json();
  j["schema_version"] = 2;
  CHECK(contains(parse_error_of(j.dump()), "unsupported schema_version"));

  j = elliptic_json();
  j["field"] = "rational";
  CHECK(contains(parse_error_of(j.dump()), "field must be \"gaussian_rational\""));

  j = elliptic_json();
  j.erase("Q");
  CHECK(contains(parse_error_of(j.dump()), "missing required key 'Q'"));

  j = elliptic_json();
  j["Q"][0] = ordered_json::array({0, 1, 2});
  CHECK(contains(parse_error_of(j.dump()), "row 0 must have 2 entries"));

  j = elliptic_json();
  j["Q"][0][1] = "1/0";
  CHECK(contains(parse_error_of(j.dump()), "zero denominator"));

  j = elliptic_json();
  j["Q"][0][1] = "1/2";
  CHECK(contains(parse_error_of(j.dump()), "must be an integer"));

  j = elliptic_json();
  j["rank"] = 0;
  CHECK(contains(parse_error_of(j.dump()), "rank must be positive"));

  j = elliptic_json();
  j["flavor"] = "extra";
  CHECK(contains(parse_error_of(j.dump()), "unknown key 'flavor'"));

  j = elliptic_json();
  j["F"] = ordered_json::object();
  CHECK(contains(parse_error_of(j.dump()), "at least one piece"));

  j = elliptic_json();
  j["F"]["x"] = j["F"]["1"];
  CHECK(contains(parse_error_of(j.dump()), "keys must be integers"));

  j = elliptic_json();
  j["basis_change"] = ordered_json::array(
      {ordered_json::array({2, 0}), ordered_json::array({0, 1})});
  CHECK(contains(parse_error_of(j.dump()), "unimodular"));
}

TEST_CASE("a basis change rewrites the document to standard coordinates") {
  // B swaps the two lattice vectors; the document below is the elliptic
  // degeneration written in the swapped basis.
  ordered_json j;
  j["schema_version"] = 1;
  j["field"] = "gaussian_rational";
  j["rank"] = 2;
  j["weight"] = 1;
  j["Q"] = ordered_json::array(
      {ordered_json::array({0, -1}), ordered_json::array({1, 0})});
  j["N"] = ordered_json::array({ordered_json::array(
      {ordered_json::array({0, 1}), ordered_json::array({0, 0})})});
  j["F"]["1"] = ordered_json::array({ordered_json::array(
      {ordered_json::array({"0", "0"}), ordered_json::array({"1", "0"})})});
  j["basis_change"] = ordered_json::array(
      {ordered_json::array({0, 1}), ordered_json::array({1, 0})});

  VariationDocument doc = parse_variation(j.dump());
  NilpotentOrbit orbit = to_orbit(doc);
  NilpotentOrbit std_orbit = fixture_orbit("elliptic");
  CHECK(orbit.lattice.Q == std_orbit.lattice.Q);
  CHECK(orbit.N[0] == std_orbit.N[0]);
  CHECK(orbit.F == std_orbit.F);

  VariationDocument flat = standard_basis(doc);
  CHECK_FALSE(flat.basis_change.has_value());
  CHECK(documents_equal(flat, document_of(std_orbit)));
}

TEST_CASE("sample conversion rejects a series shaped for other data") {
  VariationDocument doc = fixture_document("decay_box");
  doc.gamma->vars = 1;
  try {
    to_sample(doc);
    CHECK(false);
  } catch (const InvalidInput& e) {
    CHECK(contains(e.what(), "one variable per nilpotent"));
  }
}

TEST_CASE("cli: mixed-Hodge check passes on the standard degeneration") {
  CliResult r = run({"mhs-check", "--fixture", "elliptic"});
  CHECK(r.code == 0);
  ordered_json j = ordered_json::parse(r.out);
  CHECK(j["command"] == "mhs-check");
  CHECK(j["pass"] == true);
  CHECK(j["is_mhs"] == true);
  CHECK(j.contains("weight_filtration"));
}

TEST_CASE("cli: mixed-Hodge check fails with exit 1 on a non-pure grading") {
  ordered_json j = elliptic_json();
  j["N"][0] = ordered_json::array(
      {ordered_json::array({0, 0}), ordered_json::array({0, 0})});
  j["F"]["1"] = ordered_json::array({ordered_json::array(
      {ordered_json::array({"1", "0"}), ordered_json::array({"0", "0"})})});
  std::filesystem::path p = write_temp("nonpure", j.dump());
  CliResult r = run({"mhs-check", p.string()});
  std::filesystem::remove(p);
  CHECK(r.code == 1);
  ordered_json out = ordered_json::parse(r.out);
  CHECK(out["pass"] == false);
  CHECK(out["is_mhs"] == false);
}

TEST_CASE("cli: weight filtration of a bare matrix from stdin") {
  std::istringstream text("[[0,0],[1,0]]");
  std::streambuf* old = std::cin.rdbuf(text.rdbuf());
  CliResult r = run({"wf", "-"});
  std::cin.rdbuf(old);
  CHECK(r.code == 0);
  ordered_json j = ordered_json::parse(r.out);
  CHECK(j["cone"] == false);
  CHECK(j["generators"] == 1);
  CHECK(j["filtration"]["direction"] == "increasing");
  CHECK(j["filtration"]["steps"].contains("-1"));
}

TEST_CASE("cli: multi-generator input switches to the cone filtration") {
  CliResult r = run({"wf", "--fixture", "box_ee"});
  CHECK(r.code == 0);
  ordered_json j = ordered_json::parse(r.out);
  CHECK(j["generators"] == 2);
  CHECK(j["cone"] == true);
  CHECK(j.contains("note"));
}

TEST_CASE("cli: orbit check passes and reports the polarization ladder") {
  CliResult r = run({"orbit-check", "--fixture", "sym3_elliptic"});
  CHECK(r.code == 0);
  ordered_json j = ordered_json::parse(r.out);
  CHECK(j["valid"] == true);
  CHECK(j["pass"] == true);
  CHECK(j["limiting"]["polarized"] == true);
  CHECK(j["polarization_ladder"]["all_pass"] == true);
}

TEST_CASE("cli: orbit check reports invalid data with exit 1") {
  ordered_json j = elliptic_json();
  j["N"][0] = ordered_json::array(
      {ordered_json::array({1, 0}), ordered_json::array({0, 1})});
  std::filesystem::path p = write_temp("notnilp", j.dump());
  CliResult r = run({"orbit-check", p.string()});
  std::filesystem::remove(p);
  CHECK(r.code == 1);
  ordered_json out = ordered_json::parse(r.out);
  CHECK(out["valid"] == false);
  CHECK(out["pass"] == false);
  CHECK(out.contains("reason"));
}

TEST_CASE("cli: limiting mixed Hodge structure report") {
  CliResult r = run({"limiting-mhs", "--fixture", "sym2_elliptic"});
  CHECK(r.code == 0);
  ordered_json j = ordered_json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(j["polarized"] == true);
  CHECK(j["primitives"].is_array());
  CHECK(!j["primitives"].empty());
}

TEST_CASE("cli: bigrading emits the limiting dimension pattern") {
  CliResult r = run({"bigrading", "--fixture", "elliptic"});
  CHECK(r.code == 0);
  ordered_json j = ordered_json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(j["splits_w_and_f"] == true);
  CHECK(j["pieces"].contains("1,1"));
  CHECK(j["pieces"].contains("0,0"));
}

TEST_CASE("cli: locus solve reports the exact diagonal") {
  CliResult r = run({"locus", "--fixture", "box_e_dual", "--class", "1,0,0,1",
                     "--solve"});
  CHECK(r.code == 0);
  ordered_json j = ordered_json::parse(r.out);
  // the class is fixed by the diagonal only: one equation cutting z1 = z2
  CHECK(j["empty"] == false);
  CHECK(j["equations"].size() == 1);
  CHECK(j["equations"][0]["coefficients"] ==
        ordered_json::array({"1", "-1"}));
  CHECK(j["solution"]["dim"] == 1);
  CHECK(j["solution"]["full_space"] == false);
  CHECK(j["solution"]["basis"][0] == ordered_json::array({"1", "1"}));
}

TEST_CASE("cli: enumeration counts the classes at a CM point") {
  CliResult r = run({"enumerate", "--fixture", "end_elliptic", "--at", "2i",
                     "--K", "9"});
  CHECK(r.code == 0);
  ordered_json j = ordered_json::parse(r.out);
  CHECK(j["count"] == 7);
  CHECK(j["hits"][0]["v"] == ordered_json::array({"0", "0", "0", "0"}));
  bool saw_cm = false;
  for (const auto& h : j["hits"]) {
    if (h["v"] == ordered_json::array({"0", "1", "-4", "0"})) {
      saw_cm = true;
      CHECK(h["q_norm"] == "8");
      CHECK(h["in_w0"] == false);
    }
  }
  CHECK(saw_cm);
}

TEST_CASE("cli: projection returns the point itself for an invariant class") {
  CliResult r = run({"project", "--fixture", "end_elliptic", "--class",
                     "1,0,0,1", "--at", "0.25+3i"});
  CHECK(r.code == 0);
  ordered_json j = ordered_json::parse(r.out);
  CHECK(j["distance"].get<double>() < 1e-12);
  CHECK(j["projected"][0]["re"].get<double>() == doctest::Approx(0.25));
  CHECK(j["projected"][0]["im"].get<double>() == doctest::Approx(3.0));
}

TEST_CASE("cli: finiteness harness along a vertical ray") {
  CliResult r = run({"verify25", "--fixture", "end_elliptic", "--ray", "0;1",
                     "--depths", "1,2,3,4", "--K", "4"});
  CHECK(r.code == 0);
  ordered_json j = ordered_json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(j["per_point"][0]["count"] == 9);
  CHECK(j["per_point"][1]["count"] == 3);
  CHECK(j["persistent"].size() == 3);
  CHECK(j["transient"].size() == 6);
  CHECK(j["stabilization_index"] == 0);
  CHECK(j["stabilized"] == true);
  CHECK(j["persistent_all_in_w0"] == true);
  for (const auto& w : j["witnesses"]) {
    CHECK(w["snapped"] == true);
    CHECK(w["exact_member"] == true);
  }
  CHECK(j["float_scan"]["sines"].empty());
}

TEST_CASE("cli: decay fit recovers the first Fourier exponent") {
  CliResult r = run({"asymptotics", "--fixture", "decay_elliptic", "--ray",
                     "0;1", "--depths", "2,3,4,5,6"});
  CHECK(r.code == 0);
  ordered_json j = ordered_json::parse(r.out);
  CHECK(j["mode"] == "decay");
  CHECK(j["exact_match"] == false);
  double expo = j["exponent"].get<double>();
  CHECK(std::abs(expo - 2 * 3.14159265358979) < 0.1 * 2 * 3.14159265358979);
}

TEST_CASE("cli: norm band stays bounded on the model grid") {
  CliResult r = run({"asymptotics", "--fixture", "elliptic", "--grid",
                     "2;4;8;16"});
  CHECK(r.code == 0);
  ordered_json j = ordered_json::parse(r.out);
  CHECK(j["mode"] == "norm-band");
  CHECK(j["bounded"] == true);
  CHECK(j["traces"].size() == 2);
}

TEST_CASE("cli: fixture emission round-trips through the parser") {
  CliResult r = run({"fixtures", "--name", "elliptic"});
  CHECK(r.code == 0);
  VariationDocument doc = parse_variation(r.out);
  CHECK(doc.rank == 2);
  CHECK(documents_equal(doc, fixture_document("elliptic")));

  CliResult all = run({"fixtures"});
  CHECK(all.code == 0);
  ordered_json j = ordered_json::parse(all.out);
  CHECK(j["fixtures"].size() == fixture_names().size());
}

TEST_CASE("cli: fixture files are written to a directory") {
  std::filesystem::path dir =
      std::filesystem::temp_directory_path() / "hodge_test_fixture_out";
  CliResult r = run({"fixtures", "--out", dir.string()});
  CHECK(r.code == 0);
  ordered_json j = ordered_json::parse(r.out);
  CHECK(j["written"].size() == fixture_names().size());
  std::ifstream f(dir / "box_e_dual.json");
  std::ostringstream text;
  text << f.rdbuf();
  CHECK(documents_equal(parse_variation(text.str()),
                        fixture_document("box_e_dual")));
  std::filesystem::remove_all(dir);
}

TEST_CASE("cli: malformed input exits 2 with a structured error") {
  std::filesystem::path p = write_temp("garbage", "{not json");
  CliResult r = run({"mhs-check", p.string()});
  std::filesystem::remove(p);
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  ordered_json e = ordered_json::parse(r.err);
  CHECK(e["error"]["kind"] == "invalid-input");
  CHECK(contains(e["error"]["message"].get<std::string>(),
                 "variation document"));
}

TEST_CASE("cli: unknown fixture exits 2") {
  CliResult r = run({"mhs-check", "--fixture", "nope"});
  CHECK(r.code == 2);
  ordered_json e = ordered_json::parse(r.err);
  CHECK(e["error"]["kind"] == "invalid-input");
  CHECK(contains(e["error"]["message"].get<std::string>(), "unknown fixture"));
}

TEST_CASE("cli: enumeration on an indefinite form exits 2") {
  VariationDocument doc = fixture_document("end_elliptic");
  doc.Q = -doc.Q;
  std::filesystem::path p = write_temp("flipped", serialize_variation(doc));
  CliResult r = run({"verify25", p.string(), "--ray", "0;1", "--depths", "1,2",
                     "--K", "4"});
  std::filesystem::remove(p);
  CHECK(r.code == 2);
  ordered_json e = ordered_json::parse(r.err);
  CHECK(e["error"]["kind"] == "invalid-input");
  CHECK(contains(e["error"]["message"].get<std::string>(),
                 "positive definite"));
}

TEST_CASE("cli: missing required options exit 2") {
  CHECK(run({"locus", "--fixture", "elliptic"}).code == 2);
  CHECK(run({"enumerate", "--fixture", "end_elliptic"}).code == 2);
  CHECK(run({"project", "--fixture", "end_elliptic", "--class", "1,0,0,1"})
            .code == 2);
  CHECK(run({"asymptotics", "--fixture", "elliptic"}).code == 2);
  CHECK(run({"totally-bogus"}).code == 2);
}

TEST_CASE("cli: nonpositive norm bound exits 2") {
  CliResult r = run({"enumerate", "--fixture", "end_elliptic", "--at", "2i",
                     "--K", "0"});
  CHECK(r.code == 2);
  ordered_json e = ordered_json::parse(r.err);
  CHECK(contains(e["error"]["message"].get<std::string>(), "positive"));
}

TEST_CASE("cli: shallow series evaluation exits 3 on the tail budget") {
  CliResult r = run({"asymptotics", "--fixture", "decay_elliptic", "--ray",
                     "0;1", "--depths", "0.1,0.2"});
  CHECK(r.code == 3);
  ordered_json e = ordered_json::parse(r.err);
  CHECK(e["error"]["kind"] == "numerical-underflow");
  CHECK(contains(e["error"]["message"].get<std::string>(), "tail bound"));
}

TEST_CASE("cli: global options are accepted after the subcommand") {
  CliResult r = run({"mhs-check", "--fixture", "elliptic", "--tol", "1e-8",
                     "--seed", "42"});
  CHECK(r.code == 0);
}
