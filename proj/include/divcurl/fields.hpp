// SPDX-License-Identifier: Apache-2.0

#ifndef DIVCURL_FIELDS_HPP
#define DIVCURL_FIELDS_HPP

#include <stdexcept>
#include <utility>
#include <vector>

#include "divcurl/grid.hpp"

namespace divcurl {

/// n-component field sharing one grid. On a two-parameter grid this is the
/// square case: the component index runs over the shared dimension.
struct VectorField {
  TorusGrid grid;
  std::vector<ScalarField> components;

  VectorField() = default;
  VectorField(TorusGrid g, int ncomp) : grid(std::move(g)) {
    components.assign(static_cast<std::size_t>(ncomp), ScalarField(grid));
  }
  VectorField(TorusGrid g, std::vector<ScalarField> comps)
      : grid(std::move(g)), components(std::move(comps)) {
    for (const ScalarField& c : components)
      if (c.grid != grid) throw std::invalid_argument("VectorField: component grid mismatch");
  }

  int size() const { return static_cast<int>(components.size()); }
  ScalarField& operator[](int j) { return components.at(static_cast<std::size_t>(j)); }
  const ScalarField& operator[](int j) const {
    return components.at(static_cast<std::size_t>(j));
  }

  double max_abs() const {
    double s = 0;
    for (const ScalarField& c : components) s = std::max(s, c.max_abs());
    return s;
  }
};

/// n x m components on a two-parameter grid; entry (j,k) pairs x-axis j
/// with y-axis k.
struct MatrixField {
  TorusGrid grid;
  int rows = 0, cols = 0;
  std::vector<ScalarField> components;  // row-major (j,k) -> j*cols + k

  MatrixField() = default;
  MatrixField(TorusGrid g, int n_rows, int n_cols)
      : grid(std::move(g)), rows(n_rows), cols(n_cols) {
    if (!grid.two_parameter())
      throw std::invalid_argument("MatrixField: two-parameter grid required");
    components.assign(static_cast<std::size_t>(rows * cols), ScalarField(grid));
  }

  ScalarField& at(int j, int k) {
    return components.at(static_cast<std::size_t>(j * cols + k));
  }
  const ScalarField& at(int j, int k) const {
    return components.at(static_cast<std::size_t>(j * cols + k));
  }

  double max_abs() const {
    double s = 0;
    for (const ScalarField& c : components) s = std::max(s, c.max_abs());
    return s;
  }
};

/// Hilbert-Schmidt (entrywise) dot product of two matrix fields.
inline ScalarField dot(const MatrixField& a, const MatrixField& b) {
  if (a.grid != b.grid || a.rows != b.rows || a.cols != b.cols)
    throw std::invalid_argument("dot: matrix field shape mismatch");
  ScalarField r(a.grid);
  for (std::size_t c = 0; c < a.components.size(); ++c)
    for (std::size_t i = 0; i < r.values.size(); ++i)
      r.values[i] += a.components[c].values[i] * b.components[c].values[i];
  return r;
}

inline ScalarField dot(const VectorField& a, const VectorField& b) {
  if (a.grid != b.grid || a.size() != b.size())
    throw std::invalid_argument("dot: vector field shape mismatch");
  ScalarField r(a.grid);
  for (int j = 0; j < a.size(); ++j)
    for (std::size_t i = 0; i < r.values.size(); ++i)
      r.values[i] += a[j].values[i] * b[j].values[i];
  return r;
}

}  // namespace divcurl

#endif  // DIVCURL_FIELDS_HPP
