// SPDX-License-Identifier: Apache-2.0

#ifndef DIVCURL_FIELD_IO_HPP
#define DIVCURL_FIELD_IO_HPP

#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "divcurl/fields.hpp"
#include "divcurl/grid.hpp"

namespace divcurl {

/// A field file: one grid, any number of labeled scalar components.
/// Labels follow the conventions "phi", "E_1".."E_n", "B_12" (matrix entry
/// row 1 column 2, 1-based), "dx(1,3)dy(2)" for form coefficients.
struct FieldFile {
  TorusGrid grid;
  std::vector<std::pair<std::string, ScalarField>> components;

  const ScalarField* find(const std::string& label) const {
    for (const auto& [name, f] : components)
      if (name == label) return &f;
    return nullptr;
  }
};

inline nlohmann::ordered_json to_json(const FieldFile& ff) {
  nlohmann::ordered_json j;
  j["dims_x"] = ff.grid.dims_x();
  if (ff.grid.two_parameter())
    j["dims_y"] = ff.grid.dims_y();
  else
    j["dims_y"] = nullptr;
  nlohmann::ordered_json labels = nlohmann::ordered_json::array();
  nlohmann::ordered_json data = nlohmann::ordered_json::array();
  for (const auto& [name, f] : ff.components) {
    labels.push_back(name);
    data.push_back(f.values);
  }
  j["components"] = labels;
  j["data"] = data;
  return j;
}

inline FieldFile field_file_from_json(const nlohmann::json& j) {
  std::vector<int> dims_x = j.at("dims_x").get<std::vector<int>>();
  std::vector<int> dims_y;
  if (j.contains("dims_y") && !j.at("dims_y").is_null())
    dims_y = j.at("dims_y").get<std::vector<int>>();
  FieldFile ff;
  ff.grid = TorusGrid(dims_x, dims_y);
  const auto& labels = j.at("components");
  const auto& data = j.at("data");
  if (labels.size() != data.size())
    throw std::invalid_argument("field file: components/data length mismatch");
  for (std::size_t i = 0; i < labels.size(); ++i)
    ff.components.emplace_back(labels[i].get<std::string>(),
                               ScalarField(ff.grid, data[i].get<std::vector<double>>()));
  return ff;
}

inline void write_field_file(const std::string& path, const FieldFile& ff) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << to_json(ff).dump(2) << "\n";
}

inline FieldFile read_field_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  nlohmann::json j;
  is >> j;
  return field_file_from_json(j);
}

inline std::string vector_label(const std::string& prefix, int j) {
  return prefix + "_" + std::to_string(j + 1);
}

inline std::string matrix_label(const std::string& prefix, int j, int k) {
  return prefix + "_" + std::to_string(j + 1) + std::to_string(k + 1);
}

}  // namespace divcurl

#endif  // DIVCURL_FIELD_IO_HPP
