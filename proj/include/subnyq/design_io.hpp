// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "json.hpp"
#include "subnyq/sampling_design.hpp"

namespace subnyq {

// Design documents:
//   {"p": int, "m": int, "N": int,
//    "A": [[re, im], ...]                     row-major, p*m entries
//    "W": [[[re, im], ...], ...]              one row-major p*p list per grid point
//    "Z": [[[re, im], ...], ...] | null       one diagonal (m entries) per grid point
//    "matrix_kind": "gaussian" | ..., "seed": uint}
// Doubles are written in shortest round-trip form, so decode(encode(d)) is
// bit-exact.

nlohmann::json complex_to_json(Complex z);
Complex complex_from_json(const nlohmann::json& j);

nlohmann::json design_to_json(const MeasurementDesign& design);
MeasurementDesign design_from_json(const nlohmann::json& j);

void save_design(const MeasurementDesign& design, const std::string& path);
MeasurementDesign load_design(const std::string& path);

}  // namespace subnyq
