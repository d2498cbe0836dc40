// SPDX-License-Identifier: Apache-2.0
#include "subnyq/design_io.hpp"

#include <fstream>

namespace subnyq {

using nlohmann::json;

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("complex values must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

namespace {

json matrix_to_json(const CMatrix& m) {
  json out = json::array();
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) out.push_back(complex_to_json(m(r, c)));
  return out;
}

CMatrix matrix_from_json(const json& j, Index rows, Index cols, const char* field) {
  if (!j.is_array() || static_cast<Index>(j.size()) != rows * cols)
    throw ConfigError(std::string("design field '") + field + "' has the wrong number of entries");
  CMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(j[static_cast<std::size_t>(r * cols + c)]);
  return m;
}

}  // namespace

json design_to_json(const MeasurementDesign& design) {
  json j;
  j["p"] = design.p();
  j["m"] = design.m();
  j["N"] = design.grid().size();
  j["A"] = matrix_to_json(design.a());
  json w = json::array();
  for (const auto& v : design.w().values()) w.push_back(matrix_to_json(v));
  j["W"] = std::move(w);
  if (design.z()) {
    json z = json::array();
    for (const auto& v : design.z()->values()) z.push_back(matrix_to_json(v.diagonal()));
    j["Z"] = std::move(z);
  } else {
    j["Z"] = nullptr;
  }
  j["matrix_kind"] = to_string(design.kind());
  j["seed"] = design.seed();
  return j;
}

MeasurementDesign design_from_json(const json& j) {
  try {
    const auto p = j.at("p").get<Index>();
    const auto m = j.at("m").get<Index>();
    const auto n = j.at("N").get<Index>();
    const FrequencyGrid grid(n);
    CMatrix a = matrix_from_json(j.at("A"), p, m, "A");
    const json& wj = j.at("W");
    if (!wj.is_array() || static_cast<Index>(wj.size()) != n)
      throw ConfigError("design field 'W' must hold one matrix per grid point");
    std::vector<CMatrix> w;
    for (const auto& e : wj) w.push_back(matrix_from_json(e, p, p, "W"));
    std::optional<PeriodicMatrixFunction> z;
    if (j.contains("Z") && !j.at("Z").is_null()) {
      const json& zj = j.at("Z");
      if (!zj.is_array() || static_cast<Index>(zj.size()) != n)
        throw ConfigError("design field 'Z' must hold one diagonal per grid point");
      std::vector<CMatrix> zs;
      for (const auto& e : zj) zs.push_back(CMatrix(matrix_from_json(e, m, 1, "Z").col(0).asDiagonal()));
      z = PeriodicMatrixFunction(grid, std::move(zs));
    }
    const MatrixKind kind = parse_matrix_kind(j.value("matrix_kind", "gaussian"));
    const auto seed = j.value("seed", std::uint64_t{0});
    return MeasurementDesign(std::move(a), PeriodicMatrixFunction(grid, std::move(w)), std::move(z), kind, seed);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed design document: ") + e.what());
  }
}

void save_design(const MeasurementDesign& design, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write design file '" + path + "'");
  os << design_to_json(design).dump(2) << '\n';
}

MeasurementDesign load_design(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read design file '" + path + "'");
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw ConfigError("design file '" + path + "' is not valid JSON: " + e.what());
  }
  return design_from_json(j);
}

}  // namespace subnyq
