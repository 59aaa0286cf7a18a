// SPDX-License-Identifier: Apache-2.0

#ifndef DIVCURL_GRID_HPP
#define DIVCURL_GRID_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace divcurl {

using cdouble = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// Thrown when a numerically monitored operator identity fails beyond
/// its hard threshold (signals a bug or bad input data, not roundoff).
class IdentityViolation : public std::runtime_error {
 public:
  explicit IdentityViolation(const std::string& what) : std::runtime_error(what) {}
};

/// Discrete torus, one-parameter (dims_y empty) or two-parameter.
/// Global axis order is [x_0..x_{n-1}, y_0..y_{m-1}], storage row-major
/// over that axis order. All extents must be even and >= 4.
class TorusGrid {
 public:
  TorusGrid() = default;

  explicit TorusGrid(std::vector<int> dims_x, std::vector<int> dims_y = {})
      : dims_x_(std::move(dims_x)), dims_y_(std::move(dims_y)) {
    if (dims_x_.empty()) throw std::invalid_argument("TorusGrid: dims_x empty");
    shape_ = dims_x_;
    shape_.insert(shape_.end(), dims_y_.begin(), dims_y_.end());
    size_ = 1;
    for (int e : shape_) {
      if (e < 4 || e % 2 != 0)
        throw std::invalid_argument("TorusGrid: extents must be even and >= 4");
      size_ *= static_cast<std::size_t>(e);
    }
  }

  int n() const { return static_cast<int>(dims_x_.size()); }
  int m() const { return static_cast<int>(dims_y_.size()); }
  int rank() const { return n() + m(); }
  bool two_parameter() const { return !dims_y_.empty(); }
  bool square() const { return two_parameter() && dims_x_ == dims_y_; }

  const std::vector<int>& dims_x() const { return dims_x_; }
  const std::vector<int>& dims_y() const { return dims_y_; }
  const std::vector<int>& shape() const { return shape_; }
  int extent(int axis) const { return shape_.at(static_cast<std::size_t>(axis)); }
  std::size_t size() const { return size_; }

  std::size_t x_size() const {
    std::size_t s = 1;
    for (int e : dims_x_) s *= static_cast<std::size_t>(e);
    return s;
  }
  std::size_t y_size() const {
    std::size_t s = 1;
    for (int e : dims_y_) s *= static_cast<std::size_t>(e);
    return s;
  }

  TorusGrid x_subgrid() const { return TorusGrid(dims_x_); }
  TorusGrid y_subgrid() const {
    if (!two_parameter()) throw std::invalid_argument("y_subgrid: one-parameter grid");
    return TorusGrid(dims_y_);
  }

  /// First global axis of the given block and one past its last axis.
  std::pair<int, int> block_axes(bool y_block) const {
    return y_block ? std::pair<int, int>{n(), n() + m()} : std::pair<int, int>{0, n()};
  }

  bool operator==(const TorusGrid& o) const {
    return dims_x_ == o.dims_x_ && dims_y_ == o.dims_y_;
  }
  bool operator!=(const TorusGrid& o) const { return !(*this == o); }

 private:
  std::vector<int> dims_x_, dims_y_;
  std::vector<int> shape_;
  std::size_t size_ = 0;
};

/// Centered frequency representative in [-N/2, N/2) of axis index k.
inline int centered_frequency(int index, int extent) {
  if (index < 0 || index >= extent)
    throw std::out_of_range("centered_frequency: index out of range");
  return index < extent / 2 ? index : index - extent;
}

struct FrequencyVector {
  std::vector<int> components;
};

inline FrequencyVector frequency(std::span<const int> index, const TorusGrid& g) {
  if (static_cast<int>(index.size()) != g.rank())
    throw std::invalid_argument("frequency: index rank mismatch");
  FrequencyVector xi;
  xi.components.resize(index.size());
  for (std::size_t a = 0; a < index.size(); ++a)
    xi.components[a] = centered_frequency(index[a], g.extent(static_cast<int>(a)));
  return xi;
}

namespace detail {

inline void advance_index(std::vector<int>& idx, const std::vector<int>& shape) {
  for (int a = static_cast<int>(shape.size()) - 1; a >= 0; --a) {
    if (++idx[static_cast<std::size_t>(a)] < shape[static_cast<std::size_t>(a)]) return;
    idx[static_cast<std::size_t>(a)] = 0;
  }
}

}  // namespace detail

/// Real field sampled on a torus grid, row-major values.
struct ScalarField {
  TorusGrid grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(TorusGrid g) : grid(std::move(g)), values(grid.size(), 0.0) {}
  ScalarField(TorusGrid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid.size())
      throw std::invalid_argument("ScalarField: value count mismatch");
    for (double x : values)
      if (!std::isfinite(x)) throw std::invalid_argument("ScalarField: non-finite value");
  }

  double mean() const {
    double s = 0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
  }
  double max_abs() const {
    double s = 0;
    for (double v : values) s = std::max(s, std::abs(v));
    return s;
  }
};

/// Complex spectrum with the same shape as the field it transforms.
struct Spectrum {
  TorusGrid grid;
  std::vector<cdouble> coeffs;

  Spectrum() = default;
  explicit Spectrum(TorusGrid g) : grid(std::move(g)), coeffs(grid.size(), cdouble{}) {}
  Spectrum(TorusGrid g, std::vector<cdouble> c) : grid(std::move(g)), coeffs(std::move(c)) {
    if (coeffs.size() != grid.size())
      throw std::invalid_argument("Spectrum: coefficient count mismatch");
  }
};

namespace detail {

/// Naive DFT along one axis of a multi-dimensional complex buffer.
/// sign = -1 forward, +1 inverse (no normalization here).
inline void transform_axis(std::vector<cdouble>& data, const std::vector<int>& shape,
                           int axis, int sign) {
  const int N = shape[static_cast<std::size_t>(axis)];
  std::size_t stride = 1;
  for (std::size_t a = static_cast<std::size_t>(axis) + 1; a < shape.size(); ++a)
    stride *= static_cast<std::size_t>(shape[a]);
  const std::size_t block = stride * static_cast<std::size_t>(N);

  std::vector<cdouble> twiddle(static_cast<std::size_t>(N));
  for (int t = 0; t < N; ++t) {
    double ang = sign * 2.0 * pi * t / N;
    twiddle[static_cast<std::size_t>(t)] = {std::cos(ang), std::sin(ang)};
  }

  const bool pow2 = (N & (N - 1)) == 0;

  std::vector<cdouble> line(static_cast<std::size_t>(N));
  std::vector<cdouble> out(static_cast<std::size_t>(N));
  for (std::size_t base = 0; base < data.size(); base += block) {
    for (std::size_t off = 0; off < stride; ++off) {
      for (int j = 0; j < N; ++j)
        line[static_cast<std::size_t>(j)] =
            data[base + off + stride * static_cast<std::size_t>(j)];
      if (pow2) {
        // iterative radix-2 butterflies
        for (int i = 1, rev = 0; i < N; ++i) {
          int bit = N >> 1;
          for (; rev & bit; bit >>= 1) rev ^= bit;
          rev ^= bit;
          if (i < rev) std::swap(line[static_cast<std::size_t>(i)],
                                 line[static_cast<std::size_t>(rev)]);
        }
        for (int len = 2; len <= N; len <<= 1) {
          const int step = N / len;
          for (int start = 0; start < N; start += len) {
            for (int k = 0; k < len / 2; ++k) {
              cdouble w = twiddle[static_cast<std::size_t>(k * step)];
              cdouble a = line[static_cast<std::size_t>(start + k)];
              cdouble b = line[static_cast<std::size_t>(start + k + len / 2)] * w;
              line[static_cast<std::size_t>(start + k)] = a + b;
              line[static_cast<std::size_t>(start + k + len / 2)] = a - b;
            }
          }
        }
        for (int k = 0; k < N; ++k)
          data[base + off + stride * static_cast<std::size_t>(k)] =
              line[static_cast<std::size_t>(k)];
      } else {
        for (int k = 0; k < N; ++k) {
          cdouble acc{};
          for (int j = 0; j < N; ++j)
            acc += line[static_cast<std::size_t>(j)] *
                   twiddle[static_cast<std::size_t>((static_cast<long long>(j) * k) % N)];
          out[static_cast<std::size_t>(k)] = acc;
        }
        for (int k = 0; k < N; ++k)
          data[base + off + stride * static_cast<std::size_t>(k)] =
              out[static_cast<std::size_t>(k)];
      }
    }
  }
}

inline void transform_all(std::vector<cdouble>& data, const std::vector<int>& shape, int sign) {
  for (int a = 0; a < static_cast<int>(shape.size()); ++a)
    transform_axis(data, shape, a, sign);
}

}  // namespace detail

/// Unnormalized forward discrete Fourier transform.
inline Spectrum dft(const ScalarField& f) {
  Spectrum s(f.grid);
  for (std::size_t i = 0; i < f.values.size(); ++i) s.coeffs[i] = f.values[i];
  detail::transform_all(s.coeffs, f.grid.shape(), -1);
  return s;
}

inline Spectrum dft(const Spectrum& s) {
  Spectrum out = s;
  detail::transform_all(out.coeffs, s.grid.shape(), -1);
  return out;
}

/// Inverse transform with 1/prod(extents) normalization. The imaginary part
/// must be roundoff-small relative to the field magnitude; a large residue
/// signals an asymmetric multiplier and raises IdentityViolation.
inline ScalarField idft(const Spectrum& s) {
  std::vector<cdouble> buf = s.coeffs;
  detail::transform_all(buf, s.grid.shape(), +1);
  const double norm = 1.0 / static_cast<double>(s.grid.size());
  double max_re = 0, max_im = 0;
  for (cdouble& c : buf) {
    c *= norm;
    max_re = std::max(max_re, std::abs(c.real()));
    max_im = std::max(max_im, std::abs(c.imag()));
  }
  if (max_im > 1e-8 * std::max(max_re, 1e-300))
    throw IdentityViolation("idft: imaginary residue " + std::to_string(max_im) +
                            " exceeds 1e-8 of field magnitude " + std::to_string(max_re));
  ScalarField f(s.grid);
  for (std::size_t i = 0; i < buf.size(); ++i) f.values[i] = buf[i].real();
  return f;
}

/// Grid inner product with cell measure 1/prod(extents): approximates the
/// unit-torus integral of f*g.
inline double grid_inner(const ScalarField& f, const ScalarField& g) {
  if (f.grid != g.grid) throw std::invalid_argument("grid_inner: grid mismatch");
  double s = 0;
  for (std::size_t i = 0; i < f.values.size(); ++i) s += f.values[i] * g.values[i];
  return s / static_cast<double>(f.grid.size());
}

inline double grid_integral(const ScalarField& f) { return f.mean(); }

// Pointwise field arithmetic.

inline ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  if (a.grid != b.grid) throw std::invalid_argument("field add: grid mismatch");
  ScalarField r(a.grid);
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = a.values[i] + b.values[i];
  return r;
}

inline ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  if (a.grid != b.grid) throw std::invalid_argument("field sub: grid mismatch");
  ScalarField r(a.grid);
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = a.values[i] - b.values[i];
  return r;
}

inline ScalarField operator*(double c, const ScalarField& a) {
  ScalarField r(a.grid);
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = c * a.values[i];
  return r;
}

/// Pointwise (grid) product; no dealiasing by design of the checked identities.
inline ScalarField hadamard(const ScalarField& a, const ScalarField& b) {
  if (a.grid != b.grid) throw std::invalid_argument("hadamard: grid mismatch");
  ScalarField r(a.grid);
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] = a.values[i] * b.values[i];
  return r;
}

// Slice extraction and lifting between a product grid and its factor grids.
// Row-major with x axes first: flat = x_flat * y_size + y_flat.

inline ScalarField slice_x(const ScalarField& f, std::size_t y_flat) {
  const TorusGrid& g = f.grid;
  if (!g.two_parameter()) throw std::invalid_argument("slice_x: one-parameter grid");
  ScalarField r(g.x_subgrid());
  const std::size_t ys = g.y_size();
  for (std::size_t xf = 0; xf < r.values.size(); ++xf) r.values[xf] = f.values[xf * ys + y_flat];
  return r;
}

inline ScalarField slice_y(const ScalarField& f, std::size_t x_flat) {
  const TorusGrid& g = f.grid;
  if (!g.two_parameter()) throw std::invalid_argument("slice_y: one-parameter grid");
  ScalarField r(g.y_subgrid());
  const std::size_t ys = g.y_size();
  for (std::size_t yf = 0; yf < ys; ++yf) r.values[yf] = f.values[x_flat * ys + yf];
  return r;
}

inline ScalarField lift_x(const ScalarField& u, const TorusGrid& g) {
  if (u.grid != g.x_subgrid()) throw std::invalid_argument("lift_x: subgrid mismatch");
  ScalarField r(g);
  const std::size_t ys = g.y_size();
  for (std::size_t xf = 0; xf < u.values.size(); ++xf)
    for (std::size_t yf = 0; yf < ys; ++yf) r.values[xf * ys + yf] = u.values[xf];
  return r;
}

inline ScalarField lift_y(const ScalarField& u, const TorusGrid& g) {
  if (u.grid != g.y_subgrid()) throw std::invalid_argument("lift_y: subgrid mismatch");
  ScalarField r(g);
  const std::size_t ys = g.y_size();
  for (std::size_t xf = 0; xf < g.x_size(); ++xf)
    for (std::size_t yf = 0; yf < ys; ++yf) r.values[xf * ys + yf] = u.values[yf];
  return r;
}

}  // namespace divcurl

#endif  // DIVCURL_GRID_HPP
