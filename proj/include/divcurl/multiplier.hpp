// SPDX-License-Identifier: Apache-2.0

#ifndef DIVCURL_MULTIPLIER_HPP
#define DIVCURL_MULTIPLIER_HPP

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "divcurl/fields.hpp"
#include "divcurl/grid.hpp"

namespace divcurl {

/// Diagonal Fourier multipliers: Riesz transforms (full-variable and per
/// parameter block) and spectral partial derivatives.
///
/// Conventions fixed here:
///  - Riesz symbols -i xi_j/|xi| use the centered integer frequencies of
///    their block without 2*pi/N scaling (0-homogeneous, scaling cancels).
///  - Derivative symbols are i*(2*pi/N_axis)*xi_axis so d has a length scale.
///  - Odd symbols vanish at the Nyquist representative of their axis and at
///    the zero frequency of their block, keeping real fields real.
struct MultiplierSymbol {
  enum class Kind { riesz_full, riesz_x, riesz_y, deriv_full, deriv_x, deriv_y };

  Kind kind{};
  int axis = 0;  // index within the relevant parameter block

  cdouble value(std::span<const int> freq, const TorusGrid& g) const {
    const bool riesz =
        kind == Kind::riesz_full || kind == Kind::riesz_x || kind == Kind::riesz_y;
    const bool y_block = kind == Kind::riesz_y || kind == Kind::deriv_y;
    auto [b0, b1] = (kind == Kind::riesz_full || kind == Kind::deriv_full)
                        ? std::pair<int, int>{0, g.rank()}
                        : g.block_axes(y_block);
    const int gaxis = b0 + axis;
    if (axis < 0 || gaxis >= b1) throw std::out_of_range("MultiplierSymbol: axis out of range");
    const int N = g.extent(gaxis);
    if (freq[static_cast<std::size_t>(gaxis)] == -N / 2) return {};  // Nyquist, odd symbol
    if (riesz) {
      double norm2 = 0;
      for (int a = b0; a < b1; ++a) {
        double c = freq[static_cast<std::size_t>(a)];
        norm2 += c * c;
      }
      if (norm2 == 0) return {};
      return {0.0, -freq[static_cast<std::size_t>(gaxis)] / std::sqrt(norm2)};
    }
    return {0.0, 2.0 * pi * freq[static_cast<std::size_t>(gaxis)] / N};
  }
};

/// Applies a diagonal multiplier given as a function of the centered
/// frequency vector.
inline ScalarField apply_symbol(
    const ScalarField& f,
    const std::function<cdouble(std::span<const int>)>& symbol) {
  Spectrum s = dft(f);
  const std::vector<int>& shape = f.grid.shape();
  std::vector<int> idx(shape.size(), 0);
  std::vector<int> freq(shape.size(), 0);
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    for (std::size_t a = 0; a < shape.size(); ++a)
      freq[a] = centered_frequency(idx[a], shape[a]);
    s.coeffs[i] *= symbol(freq);
    detail::advance_index(idx, shape);
  }
  return idft(s);
}

inline ScalarField apply(const MultiplierSymbol& sym, const ScalarField& f) {
  return apply_symbol(f, [&](std::span<const int> freq) { return sym.value(freq, f.grid); });
}

/// Full-variable Riesz transform R_j on a one-parameter grid.
inline ScalarField riesz(int j, const ScalarField& f) {
  if (f.grid.two_parameter())
    throw std::invalid_argument("riesz: full-variable form needs a one-parameter grid");
  if (j < 0 || j >= f.grid.n()) throw std::out_of_range("riesz: axis out of range");
  return apply({MultiplierSymbol::Kind::riesz_full, j}, f);
}

/// Riesz transform in the x parameter block only.
inline ScalarField riesz_x(int j, const ScalarField& f) {
  if (!f.grid.two_parameter())
    throw std::invalid_argument("riesz_x: two-parameter grid required");
  if (j < 0 || j >= f.grid.n()) throw std::out_of_range("riesz_x: axis out of range");
  return apply({MultiplierSymbol::Kind::riesz_x, j}, f);
}

inline ScalarField riesz_y(int k, const ScalarField& f) {
  if (!f.grid.two_parameter())
    throw std::invalid_argument("riesz_y: two-parameter grid required");
  if (k < 0 || k >= f.grid.m()) throw std::out_of_range("riesz_y: axis out of range");
  return apply({MultiplierSymbol::Kind::riesz_y, k}, f);
}

/// Spectral partial derivative along x-axis j (valid on any grid).
inline ScalarField partial_derivative_x(int j, const ScalarField& f) {
  if (j < 0 || j >= f.grid.n())
    throw std::out_of_range("partial_derivative_x: axis out of range");
  return apply({MultiplierSymbol::Kind::deriv_x, j}, f);
}

inline ScalarField partial_derivative_y(int k, const ScalarField& f) {
  if (!f.grid.two_parameter())
    throw std::invalid_argument("partial_derivative_y: two-parameter grid required");
  if (k < 0 || k >= f.grid.m())
    throw std::out_of_range("partial_derivative_y: axis out of range");
  return apply({MultiplierSymbol::Kind::deriv_y, k}, f);
}

inline VectorField apply_to_vector(const MultiplierSymbol& sym, const VectorField& F) {
  VectorField r(F.grid, F.size());
  for (int j = 0; j < F.size(); ++j) r[j] = apply(sym, F[j]);
  return r;
}

inline MatrixField apply_to_matrix(const MultiplierSymbol& sym, const MatrixField& F) {
  MatrixField r(F.grid, F.rows, F.cols);
  for (int j = 0; j < F.rows; ++j)
    for (int k = 0; k < F.cols; ++k) r.at(j, k) = apply(sym, F.at(j, k));
  return r;
}

}  // namespace divcurl

#endif  // DIVCURL_MULTIPLIER_HPP
