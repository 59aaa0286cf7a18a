// SPDX-License-Identifier: Apache-2.0

#ifndef DIVCURL_RANDOM_FIELD_HPP
#define DIVCURL_RANDOM_FIELD_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "divcurl/fields.hpp"
#include "divcurl/grid.hpp"

namespace divcurl {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Counter-based uniform in [0,1): deterministic for a (seed, counter) pair
/// independent of evaluation order, so parallel trial execution cannot
/// change the generated fields.
inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
  std::uint64_t z = splitmix64(seed ^ splitmix64(counter + 0x632BE59BD9B4E019ULL));
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

/// Derives independent sub-seeds for the streams inside one experiment.
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

}  // namespace detail

/// Which frequency slices are forced to zero so the field is mean-zero in
/// the required parameter blocks.
enum class MeanZeroMode {
  full,        // only the zero frequency removed
  each_block,  // xi_x = 0 slice and xi_y = 0 slice removed (per-block means)
};

/// Random-phase field with spectrum magnitude |xi|^(-alpha). Nyquist
/// components are excluded so all odd multiplier identities are exact on
/// the generated data. Deterministic under (grid, alpha, seed, mode).
inline ScalarField random_power_law_field(const TorusGrid& g, double alpha,
                                          std::uint64_t seed,
                                          MeanZeroMode mode = MeanZeroMode::full) {
  Spectrum s(g);
  const std::vector<int>& shape = g.shape();
  const int rank = g.rank();
  const int n = g.n();
  std::vector<int> idx(shape.size(), 0);
  std::vector<std::size_t> stride(shape.size(), 1);
  for (int a = rank - 2; a >= 0; --a)
    stride[static_cast<std::size_t>(a)] =
        stride[static_cast<std::size_t>(a + 1)] * static_cast<std::size_t>(shape[static_cast<std::size_t>(a + 1)]);

  for (std::size_t i = 0; i < g.size(); ++i) {
    bool skip = false;
    double norm2 = 0, xnorm2 = 0, ynorm2 = 0;
    std::size_t neg = 0;
    for (int a = 0; a < rank; ++a) {
      int N = shape[static_cast<std::size_t>(a)];
      int c = centered_frequency(idx[static_cast<std::size_t>(a)], N);
      if (c == -N / 2) skip = true;
      norm2 += static_cast<double>(c) * c;
      if (a < n)
        xnorm2 += static_cast<double>(c) * c;
      else
        ynorm2 += static_cast<double>(c) * c;
      int ni = (N - idx[static_cast<std::size_t>(a)]) % N;
      neg += stride[static_cast<std::size_t>(a)] * static_cast<std::size_t>(ni);
    }
    if (norm2 == 0) skip = true;
    if (mode == MeanZeroMode::each_block && g.two_parameter() &&
        (xnorm2 == 0 || ynorm2 == 0))
      skip = true;

    if (!skip && i < neg) {
      double mag = std::pow(norm2, -alpha / 2.0);
      double phase = 2.0 * pi * detail::uniform01(seed, i);
      cdouble v{mag * std::cos(phase), mag * std::sin(phase)};
      s.coeffs[i] = v;
      s.coeffs[neg] = std::conj(v);
    }
    detail::advance_index(idx, shape);
  }
  // unnormalized-forward convention: scale so field values are O(1)
  for (cdouble& c : s.coeffs) c *= static_cast<double>(g.size());
  return idft(s);
}

/// Field on a square product grid whose spectrum lives on the diagonal
/// eta = xi. Its x- and y-partial derivatives coincide, which makes
/// gradient-type fields built from it curl-free in both parameters.
inline ScalarField random_diagonal_field(const TorusGrid& g, double alpha,
                                         std::uint64_t seed) {
  if (!g.square()) throw std::invalid_argument("random_diagonal_field: square grid required");
  Spectrum s(g);
  const int n = g.n();
  const std::vector<int>& xdims = g.dims_x();
  const std::size_t xs = g.x_size();

  std::vector<int> xidx(static_cast<std::size_t>(n), 0);
  for (std::size_t xf = 0; xf < xs; ++xf) {
    bool skip = false;
    double norm2 = 0;
    std::size_t xneg = 0;
    for (int a = 0; a < n; ++a) {
      int N = xdims[static_cast<std::size_t>(a)];
      int c = centered_frequency(xidx[static_cast<std::size_t>(a)], N);
      if (c == -N / 2) skip = true;
      norm2 += static_cast<double>(c) * c;
      xneg = xneg * static_cast<std::size_t>(N) +
             static_cast<std::size_t>((N - xidx[static_cast<std::size_t>(a)]) % N);
    }
    // flat index of (xi, xi) on the product grid
    std::size_t diag = xf * xs + xf;
    std::size_t diag_neg = xneg * xs + xneg;
    if (norm2 != 0 && !skip && diag < diag_neg) {
      double mag = std::pow(2.0 * norm2, -alpha / 2.0);
      double phase = 2.0 * pi * detail::uniform01(seed, xf);
      cdouble v{mag * std::cos(phase), mag * std::sin(phase)};
      s.coeffs[diag] = v;
      s.coeffs[diag_neg] = std::conj(v);
    }
    detail::advance_index(xidx, xdims);
  }
  for (cdouble& c : s.coeffs) c *= static_cast<double>(g.size());
  return idft(s);
}

inline VectorField random_vector_field(const TorusGrid& g, int ncomp, double alpha,
                                       std::uint64_t seed,
                                       MeanZeroMode mode = MeanZeroMode::full) {
  VectorField F(g, ncomp);
  for (int j = 0; j < ncomp; ++j)
    F[j] = random_power_law_field(g, alpha, detail::sub_seed(seed, static_cast<std::uint64_t>(j)),
                                  mode);
  return F;
}

inline MatrixField random_matrix_field(const TorusGrid& g, int rows, int cols, double alpha,
                                       std::uint64_t seed,
                                       MeanZeroMode mode = MeanZeroMode::full) {
  MatrixField F(g, rows, cols);
  for (int j = 0; j < rows; ++j)
    for (int k = 0; k < cols; ++k)
      F.at(j, k) = random_power_law_field(
          g, alpha, detail::sub_seed(seed, static_cast<std::uint64_t>(j * cols + k)), mode);
  return F;
}

}  // namespace divcurl

#endif  // DIVCURL_RANDOM_FIELD_HPP
