// SPDX-License-Identifier: Apache-2.0

#ifndef DIVCURL_LERAY_HPP
#define DIVCURL_LERAY_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "divcurl/fields.hpp"
#include "divcurl/grid.hpp"
#include "divcurl/multiplier.hpp"

namespace divcurl {

/// Parameter block an operator acts in. `full` is the whole variable of a
/// one-parameter grid.
enum class Param { full, x, y };

/// Divergence can be taken in the spectral-derivative form sum_j d_j F_j or
/// the Riesz form sum_j R_j F_j; the two vanish simultaneously.
enum class DivForm { riesz, derivative };

namespace detail {

inline MultiplierSymbol riesz_symbol(Param p, int axis) {
  switch (p) {
    case Param::full: return {MultiplierSymbol::Kind::riesz_full, axis};
    case Param::x: return {MultiplierSymbol::Kind::riesz_x, axis};
    case Param::y: return {MultiplierSymbol::Kind::riesz_y, axis};
  }
  throw std::logic_error("riesz_symbol");
}

inline MultiplierSymbol deriv_symbol(Param p, int axis) {
  switch (p) {
    case Param::full: return {MultiplierSymbol::Kind::deriv_full, axis};
    case Param::x: return {MultiplierSymbol::Kind::deriv_x, axis};
    case Param::y: return {MultiplierSymbol::Kind::deriv_y, axis};
  }
  throw std::logic_error("deriv_symbol");
}

inline int block_dim(const TorusGrid& g, Param p) {
  switch (p) {
    case Param::full:
      if (g.two_parameter())
        throw std::invalid_argument("Param::full on a two-parameter grid");
      return g.n();
    case Param::x: return g.n();
    case Param::y:
      if (!g.two_parameter()) throw std::invalid_argument("y block absent");
      return g.m();
  }
  throw std::logic_error("block_dim");
}

}  // namespace detail

inline ScalarField divergence(const VectorField& F, Param p,
                              DivForm form = DivForm::riesz) {
  const int d = detail::block_dim(F.grid, p);
  if (F.size() != d) throw std::invalid_argument("divergence: component count mismatch");
  ScalarField out(F.grid);
  for (int j = 0; j < d; ++j) {
    MultiplierSymbol sym = form == DivForm::riesz ? detail::riesz_symbol(p, j)
                                                  : detail::deriv_symbol(p, j);
    out = out + apply(sym, F[j]);
  }
  return out;
}

/// All pairwise components d_i F_j - d_j F_i, i < j, within the block.
/// Empty for 1-D blocks (curl-freeness is vacuous there).
inline std::vector<ScalarField> curl(const VectorField& F, Param p) {
  const int d = detail::block_dim(F.grid, p);
  if (F.size() != d) throw std::invalid_argument("curl: component count mismatch");
  std::vector<ScalarField> out;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      out.push_back(apply(detail::deriv_symbol(p, i), F[j]) -
                    apply(detail::deriv_symbol(p, j), F[i]));
  return out;
}

inline double curl_residual(const VectorField& F, Param p) {
  double r = 0;
  for (const ScalarField& c : curl(F, p)) r = std::max(r, c.max_abs());
  return r;
}

/// Projection onto fields divergence-free in the given block:
/// component j maps to F_j + R_j(sum_k R_k F_k).
inline VectorField leray_project(const VectorField& F, Param p) {
  const int d = detail::block_dim(F.grid, p);
  if (F.size() != d) throw std::invalid_argument("leray_project: component count mismatch");
  ScalarField div = divergence(F, p, DivForm::riesz);
  VectorField out(F.grid, d);
  for (int j = 0; j < d; ++j) out[j] = F[j] + apply(detail::riesz_symbol(p, j), div);
  return out;
}

inline VectorField leray_project_x(const VectorField& F) {
  return leray_project(F, F.grid.two_parameter() ? Param::x : Param::full);
}

inline VectorField leray_project_y(const VectorField& F) {
  return leray_project(F, Param::y);
}

/// Frequency-wise projection of a square two-parameter vector field onto
/// the orthogonal complement of span{xi, eta}, yielding a field that is
/// divergence-free in both parameters simultaneously. Modes with any
/// Nyquist component are zeroed so the Riesz-form divergences vanish too.
inline VectorField joint_leray_project(const VectorField& F) {
  const TorusGrid& g = F.grid;
  if (!g.square()) throw std::invalid_argument("joint_leray_project: square grid required");
  const int n = g.n();
  if (F.size() != n)
    throw std::invalid_argument("joint_leray_project: component count mismatch");

  std::vector<Spectrum> spec;
  spec.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) spec.push_back(dft(F[j]));

  const std::vector<int>& shape = g.shape();
  std::vector<int> idx(shape.size(), 0);
  std::vector<double> xi(static_cast<std::size_t>(n)), eta(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool nyquist = false;
    for (std::size_t a = 0; a < shape.size(); ++a)
      if (centered_frequency(idx[a], shape[a]) == -shape[a] / 2) nyquist = true;
    for (int j = 0; j < n; ++j) {
      xi[static_cast<std::size_t>(j)] =
          centered_frequency(idx[static_cast<std::size_t>(j)], shape[static_cast<std::size_t>(j)]);
      eta[static_cast<std::size_t>(j)] =
          centered_frequency(idx[static_cast<std::size_t>(n + j)],
                             shape[static_cast<std::size_t>(n + j)]);
    }
    if (nyquist) {
      for (int j = 0; j < n; ++j) spec[static_cast<std::size_t>(j)].coeffs[i] = {};
    } else {
      // Gram-Schmidt on the active constraint vectors, then subtract.
      std::vector<std::vector<double>> basis;
      for (const std::vector<double>* v : {&xi, &eta}) {
        std::vector<double> w = *v;
        for (const std::vector<double>& b : basis) {
          double proj = 0;
          for (int j = 0; j < n; ++j)
            proj += w[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(j)];
          for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(j)] -= proj * b[static_cast<std::size_t>(j)];
        }
        double norm2 = 0;
        for (double c : w) norm2 += c * c;
        if (norm2 > 1e-20) {
          double inv = 1.0 / std::sqrt(norm2);
          for (double& c : w) c *= inv;
          basis.push_back(std::move(w));
        }
      }
      for (const std::vector<double>& b : basis) {
        cdouble proj{};
        for (int j = 0; j < n; ++j)
          proj += b[static_cast<std::size_t>(j)] * spec[static_cast<std::size_t>(j)].coeffs[i];
        for (int j = 0; j < n; ++j)
          spec[static_cast<std::size_t>(j)].coeffs[i] -= proj * b[static_cast<std::size_t>(j)];
      }
    }
    detail::advance_index(idx, shape);
  }

  VectorField out(g, n);
  for (int j = 0; j < n; ++j) out[j] = idft(spec[static_cast<std::size_t>(j)]);
  return out;
}

namespace detail {

inline void require_mean_zero(const ScalarField& phi, const char* who) {
  double scale = std::max(phi.max_abs(), 1e-300);
  if (std::abs(phi.mean()) > 1e-9 * scale)
    throw std::invalid_argument(std::string(who) + ": potential not mean-zero");
}

}  // namespace detail

/// B with B_j = R_j(phi); curl-free by symmetry of the second-order symbols.
inline VectorField make_curl_free_1p(const ScalarField& phi) {
  if (phi.grid.two_parameter())
    throw std::invalid_argument("make_curl_free_1p: one-parameter grid required");
  detail::require_mean_zero(phi, "make_curl_free_1p");
  VectorField B(phi.grid, phi.grid.n());
  for (int j = 0; j < phi.grid.n(); ++j) B[j] = riesz(j, phi);
  return B;
}

/// phi = -sum_j R_j B_j, inverting make_curl_free_1p. Rejects inputs whose
/// curl residual exceeds 1e-6 of the field magnitude.
inline ScalarField recover_potential_1p(const VectorField& B) {
  double scale = std::max(B.max_abs(), 1e-300);
  if (curl_residual(B, Param::full) > 1e-6 * scale)
    throw std::invalid_argument("recover_potential_1p: input not curl-free");
  return -1.0 * divergence(B, Param::full, DivForm::riesz);
}

/// Matrix field B_{jk} = R_j^x R_k^y phi; every column is x-curl-free and
/// every row y-curl-free. phi must be mean-zero in each block separately.
inline MatrixField make_bi_curl_free(const ScalarField& phi) {
  const TorusGrid& g = phi.grid;
  if (!g.two_parameter())
    throw std::invalid_argument("make_bi_curl_free: two-parameter grid required");
  double scale = std::max(phi.max_abs(), 1e-300);
  for (std::size_t yf = 0; yf < g.y_size(); ++yf)
    if (std::abs(slice_x(phi, yf).mean()) > 1e-9 * scale)
      throw std::invalid_argument("make_bi_curl_free: phi not mean-zero in x block");
  for (std::size_t xf = 0; xf < g.x_size(); ++xf)
    if (std::abs(slice_y(phi, xf).mean()) > 1e-9 * scale)
      throw std::invalid_argument("make_bi_curl_free: phi not mean-zero in y block");
  MatrixField B(g, g.n(), g.m());
  for (int j = 0; j < g.n(); ++j) {
    ScalarField rx = riesz_x(j, phi);
    for (int k = 0; k < g.m(); ++k) B.at(j, k) = riesz_y(k, rx);
  }
  return B;
}

/// phi = sum_{j,k} R_j^x R_k^y B_{jk} (the per-parameter sums of squared
/// Riesz transforms each contribute a factor -1).
inline ScalarField recover_bi_potential(const MatrixField& B) {
  ScalarField out(B.grid);
  for (int j = 0; j < B.rows; ++j)
    for (int k = 0; k < B.cols; ++k) out = out + riesz_y(k, riesz_x(j, B.at(j, k)));
  return out;
}

/// x-Leray projection of each column followed by y-Leray projection of each
/// row; the two act on different index slots and commute, so the result is
/// divergence-free in both parameters.
inline MatrixField make_bi_div_free(const MatrixField& G) {
  const TorusGrid& g = G.grid;
  MatrixField E = G;
  for (int k = 0; k < E.cols; ++k) {
    VectorField col(g, E.rows);
    for (int j = 0; j < E.rows; ++j) col[j] = E.at(j, k);
    col = leray_project(col, Param::x);
    for (int j = 0; j < E.rows; ++j) E.at(j, k) = col[j];
  }
  for (int j = 0; j < E.rows; ++j) {
    VectorField row(g, E.cols);
    for (int k = 0; k < E.cols; ++k) row[k] = E.at(j, k);
    row = leray_project(row, Param::y);
    for (int k = 0; k < E.cols; ++k) E.at(j, k) = row[k];
  }
  return E;
}

/// Divergence residuals of a matrix field: max over columns of the x-block
/// Riesz-form divergence and max over rows of the y-block one.
inline std::pair<double, double> matrix_divergence_residuals(const MatrixField& E) {
  double rx = 0, ry = 0;
  for (int k = 0; k < E.cols; ++k) {
    VectorField col(E.grid, E.rows);
    for (int j = 0; j < E.rows; ++j) col[j] = E.at(j, k);
    rx = std::max(rx, divergence(col, Param::x).max_abs());
  }
  for (int j = 0; j < E.rows; ++j) {
    VectorField row(E.grid, E.cols);
    for (int k = 0; k < E.cols; ++k) row[k] = E.at(j, k);
    ry = std::max(ry, divergence(row, Param::y).max_abs());
  }
  return {rx, ry};
}

/// Curl residuals of a matrix field: columns in x, rows in y.
inline std::pair<double, double> matrix_curl_residuals(const MatrixField& B) {
  double rx = 0, ry = 0;
  for (int k = 0; k < B.cols; ++k) {
    VectorField col(B.grid, B.rows);
    for (int j = 0; j < B.rows; ++j) col[j] = B.at(j, k);
    rx = std::max(rx, curl_residual(col, Param::x));
  }
  for (int j = 0; j < B.rows; ++j) {
    VectorField row(B.grid, B.cols);
    for (int k = 0; k < B.cols; ++k) row[k] = B.at(j, k);
    ry = std::max(ry, curl_residual(row, Param::y));
  }
  return {rx, ry};
}

}  // namespace divcurl

#endif  // DIVCURL_LERAY_HPP
