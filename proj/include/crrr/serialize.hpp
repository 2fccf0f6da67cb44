#pragma once

#include <json.hpp>

#include "crrr/bootstrap.hpp"
#include "crrr/dr.hpp"
#include "crrr/simulate.hpp"
#include "crrr/transition.hpp"

namespace crrr {

using OrderedJson = nlohmann::ordered_json;

OrderedJson to_json(const SlopeEstimate& estimate);
OrderedJson to_json(const BootstrapReport& report);
OrderedJson to_json(const TransitionMatrix& tm);
OrderedJson to_json(const McReport& report);

/// Per-threshold iteration counts and separation/saturation flags.
OrderedJson diagnostics_json(const DrFit& fit);

}  // namespace crrr
