#pragma once

// JSON document schema for variations and reports.  Exact values travel as
// strings ("p/q" rationals, ["re","im"] Gaussian pairs) so parse/serialize
// round-trips are bit-exact; floats are printed with 17 significant digits.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hodge/orbit.hpp"

namespace hodge {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kFieldTag = "gaussian_rational";

struct VariationDocument {
  int schema_version = kSchemaVersion;
  std::string field = kFieldTag;
  int rank = 0;
  int weight = 0;
  QMat Q;                              // integer entries
  std::vector<QMat> N;                 // integer entries
  std::map<int, std::vector<GVec>> F;  // p -> basis rows
  std::optional<PowerSeries> gamma;
  // Optional change of lattice basis: rows are the document's basis vectors
  // in standard coordinates (integer, unimodular).  Conversions rewrite the
  // data to the standard basis: rows r -> r B, operators X -> B^T X B^{-T},
  // form Q -> B^{-1} Q B^{-T}.
  std::optional<QMat> basis_change;
};

// Parses and validates the document shape, naming the first failing
// invariant in the error; semantic invariants are enforced by to_orbit /
// to_sample via the module validators.
VariationDocument parse_variation(const std::string& text);
std::string serialize_variation(const VariationDocument& doc);

NilpotentOrbit to_orbit(const VariationDocument& doc);
VariationSample to_sample(const VariationDocument& doc);

// Rewrites the document to the standard lattice basis (applies and clears
// basis_change); identity when basis_change is absent.
VariationDocument standard_basis(const VariationDocument& doc);

// The document's F pieces as a decreasing filtration (standard basis).
GFilt document_filtration(const VariationDocument& doc);

VariationDocument document_of(const NilpotentOrbit& orbit);
VariationDocument document_of(const VariationSample& sample);

bool documents_equal(const VariationDocument& a, const VariationDocument& b);

// Formatting helpers shared by the document and report writers.
std::string rat_string(const Rat& x);
Rat parse_rat_string(const std::string& s);  // validates, canonicalizes
std::string float_string(double x);          // 17 significant digits

}  // namespace hodge
