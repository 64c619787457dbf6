#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "lsl/boundary_measure.hpp"
#include "lsl/poisson.hpp"

namespace lsl {

/// {"atoms":[{"angle":..,"weight":..}], "density":{"n":..,"values":[..]}}
nlohmann::json measure_to_json(const BoundaryMeasure& m);

/// Throws Error(invalid_input) on schema violations.
BoundaryMeasure measure_from_json(const nlohmann::json& j);

BoundaryMeasure read_measure_file(const std::string& path);
void write_measure_file(const std::string& path, const BoundaryMeasure& m);

nlohmann::json jet_to_json(const Jet2& j);

}  // namespace lsl
