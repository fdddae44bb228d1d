#pragma once

// Named example variations shared by the test suite, the benchmarks, and the
// CLI `fixtures` command, plus a seeded generator of random models.

#include <string>
#include <vector>

#include "hodge/json_io.hpp"
#include "hodge/sl2.hpp"

namespace hodge {

// Names accepted by the fixture accessors, in emission order.
std::vector<std::string> fixture_names();

// The SL(2)^d model underlying a fixture (decay fixtures return the model of
// their orbit part).  Throws InvalidInput on an unknown name.
SL2Rep fixture_rep(const std::string& name);

// The fixture as a nilpotent orbit (N_j = the model's lowering operators).
NilpotentOrbit fixture_orbit(const std::string& name);

// The fixture as a variation sample; only the decay_* fixtures carry a
// nonzero correction series.
VariationSample fixture_sample(const std::string& name);

// Serializable document form (decay fixtures include their series).
VariationDocument fixture_document(const std::string& name);

// Seeded random model: symmetric powers, duals, tensors, twists and box
// products of the rank-2 model, bounded at rank 12.  Deterministic per seed.
SL2Rep random_model(unsigned seed);

}  // namespace hodge
