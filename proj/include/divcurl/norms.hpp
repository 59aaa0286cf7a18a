// SPDX-License-Identifier: Apache-2.0

#ifndef DIVCURL_NORMS_HPP
#define DIVCURL_NORMS_HPP

#include <cmath>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "divcurl/commutator.hpp"
#include "divcurl/exterior.hpp"
#include "divcurl/fields.hpp"
#include "divcurl/grid.hpp"
#include "divcurl/multiplier.hpp"

namespace divcurl {

struct NormReport {
  std::string name;
  double value = 0;
  std::vector<int> grid_shape;
  double p = 0;  // 0 when not applicable
};

/// One JSON object per line.
inline void write_norm_report(std::ostream& os, const NormReport& r) {
  os << "{\"name\":\"" << r.name << "\",\"value\":" << r.value << ",\"grid\":[";
  for (std::size_t i = 0; i < r.grid_shape.size(); ++i)
    os << (i ? "," : "") << r.grid_shape[i];
  os << "],\"p\":" << r.p << "}\n";
}

namespace detail {

inline bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

inline void require_pow2(const TorusGrid& g, const char* who) {
  for (int e : g.shape())
    if (!power_of_two(e))
      throw std::invalid_argument(std::string(who) + ": power-of-two extents required");
}

inline double lp_of_magnitude(const std::vector<double>& mag2, double p) {
  double s = 0;
  if (p == 2.0) {
    for (double v : mag2) s += v;
  } else {
    for (double v : mag2) s += std::pow(v, p / 2.0);
  }
  s /= static_cast<double>(mag2.size());
  return std::pow(s, 1.0 / p);
}

}  // namespace detail

/// (grid average of |f|^p)^(1/p); cell measure 1/prod(extents).
inline double lp_norm(const ScalarField& f, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p < 1");
  std::vector<double> mag2(f.values.size());
  for (std::size_t i = 0; i < f.values.size(); ++i) mag2[i] = f.values[i] * f.values[i];
  return detail::lp_of_magnitude(mag2, p);
}

/// Vector fields use the pointwise Euclidean magnitude.
inline double lp_norm(const VectorField& F, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p < 1");
  std::vector<double> mag2(F.grid.size(), 0.0);
  for (int j = 0; j < F.size(); ++j)
    for (std::size_t i = 0; i < mag2.size(); ++i)
      mag2[i] += F[j].values[i] * F[j].values[i];
  return detail::lp_of_magnitude(mag2, p);
}

/// Matrix fields use the pointwise Hilbert-Schmidt magnitude.
inline double lp_norm(const MatrixField& F, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p < 1");
  std::vector<double> mag2(F.grid.size(), 0.0);
  for (const ScalarField& c : F.components)
    for (std::size_t i = 0; i < mag2.size(); ++i) mag2[i] += c.values[i] * c.values[i];
  return detail::lp_of_magnitude(mag2, p);
}

/// Forms use the pointwise Euclidean magnitude over their coefficients.
inline double lp_norm(const Form& u, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p < 1");
  std::vector<double> mag2(u.grid.size(), 0.0);
  for (const auto& [I, f] : u.coefficients)
    for (std::size_t i = 0; i < mag2.size(); ++i) mag2[i] += f.values[i] * f.values[i];
  return detail::lp_of_magnitude(mag2, p);
}

inline double lp_norm(const BiGradedForm& u, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p < 1");
  std::vector<double> mag2(u.grid.size(), 0.0);
  for (const auto& [key, f] : u.coefficients)
    for (std::size_t i = 0; i < mag2.size(); ++i) mag2[i] += f.values[i] * f.values[i];
  return detail::lp_of_magnitude(mag2, p);
}

namespace detail {

/// Mean oscillation of b over the periodic cube with corner `corner`
/// (multi-index over the grid) and side `side` on every axis.
inline double cube_oscillation(const ScalarField& b, const std::vector<int>& corner,
                               int side) {
  const std::vector<int>& shape = b.grid.shape();
  const int rank = static_cast<int>(shape.size());
  std::vector<std::size_t> cells;
  std::vector<int> off(static_cast<std::size_t>(rank), 0);
  std::size_t count = 1;
  for (int a = 0; a < rank; ++a) count *= static_cast<std::size_t>(side);
  cells.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    std::size_t flat = 0;
    for (int a = 0; a < rank; ++a) {
      int pos = (corner[static_cast<std::size_t>(a)] + off[static_cast<std::size_t>(a)]) %
                shape[static_cast<std::size_t>(a)];
      flat = flat * static_cast<std::size_t>(shape[static_cast<std::size_t>(a)]) +
             static_cast<std::size_t>(pos);
    }
    cells.push_back(flat);
    for (int a = rank - 1; a >= 0; --a) {
      if (++off[static_cast<std::size_t>(a)] < side) break;
      off[static_cast<std::size_t>(a)] = 0;
    }
  }
  double mean = 0;
  for (std::size_t f : cells) mean += b.values[f];
  mean /= static_cast<double>(cells.size());
  double osc = 0;
  for (std::size_t f : cells) osc += std::abs(b.values[f] - mean);
  return osc / static_cast<double>(cells.size());
}

}  // namespace detail

/// Dyadic BMO surrogate: sup over periodic cubes of dyadic side (all
/// positions, all scales >= one cell) of the mean oscillation.
inline double bmo_norm_1p(const ScalarField& b) {
  if (b.grid.two_parameter())
    throw std::invalid_argument("bmo_norm_1p: one-parameter grid required");
  detail::require_pow2(b.grid, "bmo_norm_1p");
  int min_ext = b.grid.extent(0);
  for (int e : b.grid.shape()) min_ext = std::min(min_ext, e);
  double sup = 0;
  const std::vector<int>& shape = b.grid.shape();
  for (int side = 1; side <= min_ext; side *= 2) {
    std::vector<int> corner(shape.size(), 0);
    for (std::size_t i = 0; i < b.grid.size(); ++i) {
      sup = std::max(sup, detail::cube_oscillation(b, corner, side));
      detail::advance_index(corner, shape);
    }
  }
  return sup;
}

/// Little bmo surrogate: the larger of the suprema of bmo_norm_1p over
/// frozen-y x-slices and frozen-x y-slices.
inline double little_bmo_norm(const ScalarField& b) {
  const TorusGrid& g = b.grid;
  if (!g.two_parameter())
    throw std::invalid_argument("little_bmo_norm: two-parameter grid required");
  detail::require_pow2(g, "little_bmo_norm");
  double sup_x = 0, sup_y = 0;
  for (std::size_t yf = 0; yf < g.y_size(); ++yf)
    sup_x = std::max(sup_x, bmo_norm_1p(slice_x(b, yf)));
  for (std::size_t xf = 0; xf < g.x_size(); ++xf)
    sup_y = std::max(sup_y, bmo_norm_1p(slice_y(b, xf)));
  return std::max(sup_x, sup_y);
}

/// Rectangle-BMO surrogate: sup of mean oscillation over products of a
/// dyadic x-cube and a dyadic y-cube. This is a lower-bound surrogate for
/// product BMO (rectangle BMO is strictly larger).
inline double rect_bmo_norm(const ScalarField& b) {
  const TorusGrid& g = b.grid;
  if (!g.two_parameter())
    throw std::invalid_argument("rect_bmo_norm: two-parameter grid required");
  detail::require_pow2(g, "rect_bmo_norm");
  int min_x = g.dims_x()[0], min_y = g.dims_y()[0];
  for (int e : g.dims_x()) min_x = std::min(min_x, e);
  for (int e : g.dims_y()) min_y = std::min(min_y, e);

  const std::vector<int>& shape = g.shape();
  const int n = g.n(), m = g.m();
  const std::size_t ys = g.y_size();
  double sup = 0;
  std::vector<int> xcorner(static_cast<std::size_t>(n), 0);
  std::vector<int> ycorner(static_cast<std::size_t>(m), 0);
  std::vector<int> xoff(static_cast<std::size_t>(n), 0);
  std::vector<int> yoff(static_cast<std::size_t>(m), 0);

  for (int sx = 1; sx <= min_x; sx *= 2) {
    for (int sy = 1; sy <= min_y; sy *= 2) {
      std::fill(xcorner.begin(), xcorner.end(), 0);
      for (std::size_t xf = 0; xf < g.x_size(); ++xf) {
        std::fill(ycorner.begin(), ycorner.end(), 0);
        for (std::size_t yf = 0; yf < ys; ++yf) {
          // collect the rectangle's cells
          std::vector<std::size_t> cells;
          std::fill(xoff.begin(), xoff.end(), 0);
          bool xdone = false;
          while (!xdone) {
            std::size_t xflat = 0;
            for (int a = 0; a < n; ++a) {
              int pos = (xcorner[static_cast<std::size_t>(a)] + xoff[static_cast<std::size_t>(a)]) %
                        shape[static_cast<std::size_t>(a)];
              xflat = xflat * static_cast<std::size_t>(shape[static_cast<std::size_t>(a)]) +
                      static_cast<std::size_t>(pos);
            }
            std::fill(yoff.begin(), yoff.end(), 0);
            bool ydone = false;
            while (!ydone) {
              std::size_t yflat = 0;
              for (int a = 0; a < m; ++a) {
                int pos = (ycorner[static_cast<std::size_t>(a)] + yoff[static_cast<std::size_t>(a)]) %
                          shape[static_cast<std::size_t>(n + a)];
                yflat = yflat * static_cast<std::size_t>(shape[static_cast<std::size_t>(n + a)]) +
                        static_cast<std::size_t>(pos);
              }
              cells.push_back(xflat * ys + yflat);
              ydone = true;
              for (int a = m - 1; a >= 0; --a) {
                if (++yoff[static_cast<std::size_t>(a)] < sy) { ydone = false; break; }
                yoff[static_cast<std::size_t>(a)] = 0;
              }
            }
            xdone = true;
            for (int a = n - 1; a >= 0; --a) {
              if (++xoff[static_cast<std::size_t>(a)] < sx) { xdone = false; break; }
              xoff[static_cast<std::size_t>(a)] = 0;
            }
          }
          double mean = 0;
          for (std::size_t f : cells) mean += b.values[f];
          mean /= static_cast<double>(cells.size());
          double osc = 0;
          for (std::size_t f : cells) osc += std::abs(b.values[f] - mean);
          sup = std::max(sup, osc / static_cast<double>(cells.size()));

          for (int a = m - 1; a >= 0; --a) {
            if (++ycorner[static_cast<std::size_t>(a)] < shape[static_cast<std::size_t>(n + a)]) break;
            ycorner[static_cast<std::size_t>(a)] = 0;
          }
        }
        for (int a = n - 1; a >= 0; --a) {
          if (++xcorner[static_cast<std::size_t>(a)] < shape[static_cast<std::size_t>(a)]) break;
          xcorner[static_cast<std::size_t>(a)] = 0;
        }
      }
    }
  }
  return sup;
}

/// H^1 surrogate via the Riesz characterization: ||f||_1 + sum_j ||R_j f||_1.
inline double h1_norm_1p(const ScalarField& f) {
  if (f.grid.two_parameter())
    throw std::invalid_argument("h1_norm_1p: one-parameter grid required");
  double s = lp_norm(f, 1.0);
  for (int j = 0; j < f.grid.n(); ++j) s += lp_norm(riesz(j, f), 1.0);
  return s;
}

/// Product H^1 surrogate: L^1 norms of the four families
/// {f, R_j^x f, R_k^y f, R_j^x R_k^y f}.
inline double h1_norm_product(const ScalarField& f) {
  const TorusGrid& g = f.grid;
  if (!g.two_parameter())
    throw std::invalid_argument("h1_norm_product: two-parameter grid required");
  double s = lp_norm(f, 1.0);
  std::vector<ScalarField> rx;
  for (int j = 0; j < g.n(); ++j) {
    rx.push_back(riesz_x(j, f));
    s += lp_norm(rx.back(), 1.0);
  }
  for (int k = 0; k < g.m(); ++k) {
    s += lp_norm(riesz_y(k, f), 1.0);
    for (int j = 0; j < g.n(); ++j)
      s += lp_norm(riesz_y(k, rx[static_cast<std::size_t>(j)]), 1.0);
  }
  return s;
}

/// Mixed norm of the uniform theorems: grid average over the frozen
/// parameter of h1_norm_1p of each slice in the other parameter.
inline double mixed_h1_norm(const ScalarField& f, Param frozen) {
  const TorusGrid& g = f.grid;
  if (!g.square()) throw std::invalid_argument("mixed_h1_norm: square grid required");
  double s = 0;
  if (frozen == Param::x) {
    for (std::size_t xf = 0; xf < g.x_size(); ++xf) s += h1_norm_1p(slice_y(f, xf));
    return s / static_cast<double>(g.x_size());
  }
  if (frozen == Param::y) {
    for (std::size_t yf = 0; yf < g.y_size(); ++yf) s += h1_norm_1p(slice_x(f, yf));
    return s / static_cast<double>(g.y_size());
  }
  throw std::invalid_argument("mixed_h1_norm: frozen parameter must be x or y");
}

/// Duality lower-bound witness: max over the family of |int f b| divided by
/// the BMO-type norm of b in its declared class. Cross-checks the Riesz
/// surrogates from the dual side.
inline double duality_h1_estimate(const ScalarField& f,
                                  const std::vector<SymbolFunction>& family) {
  if (family.empty()) throw std::invalid_argument("duality_h1_estimate: empty family");
  double best = 0;
  for (const SymbolFunction& b : family) {
    double nb = 0;
    switch (b.declared_class) {
      case SymbolFunction::Class::bmo_1p: nb = bmo_norm_1p(b.b); break;
      case SymbolFunction::Class::bmo_little: nb = little_bmo_norm(b.b); break;
      case SymbolFunction::Class::bmo_product: nb = rect_bmo_norm(b.b); break;
    }
    if (nb <= 0) continue;  // constant symbol carries no information
    best = std::max(best, std::abs(grid_inner(f, b.b)) / nb);
  }
  return best;
}

}  // namespace divcurl

#endif  // DIVCURL_NORMS_HPP
