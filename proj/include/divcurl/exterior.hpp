// SPDX-License-Identifier: Apache-2.0

#ifndef DIVCURL_EXTERIOR_HPP
#define DIVCURL_EXTERIOR_HPP

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "divcurl/grid.hpp"
#include "divcurl/multiplier.hpp"

namespace divcurl {

/// Strictly increasing list of 0-based axis indices.
using MultiIndex = std::vector<int>;

namespace detail {

inline void validate_multi_index(const MultiIndex& I, int dim, const char* who) {
  for (std::size_t i = 0; i < I.size(); ++i) {
    if (I[i] < 0 || I[i] >= dim)
      throw std::invalid_argument(std::string(who) + ": index entry out of range");
    if (i > 0 && I[i] <= I[i - 1])
      throw std::invalid_argument(std::string(who) + ": index not strictly increasing");
  }
}

/// Sign of the shuffle sorting the concatenation (I, J); 0 when the index
/// sets overlap. On success `merged` receives the sorted union.
inline int merge_sign(const MultiIndex& I, const MultiIndex& J, MultiIndex& merged) {
  merged.clear();
  merged.reserve(I.size() + J.size());
  // inversions of (I, J): pairs (i in I, j in J) with i > j
  long long inversions = 0;
  for (int i : I) {
    for (int j : J) {
      if (i == j) return 0;
      if (i > j) ++inversions;
    }
  }
  std::merge(I.begin(), I.end(), J.begin(), J.end(), std::back_inserter(merged));
  return inversions % 2 == 0 ? 1 : -1;
}

/// Sign of inserting single axis j in front of I: (-1)^(#entries < j).
inline int insert_sign(int j, const MultiIndex& I, MultiIndex& merged) {
  return merge_sign(MultiIndex{j}, I, merged);
}

}  // namespace detail

/// Differential form with x-type basis covectors and sparse ScalarField
/// coefficients. The grid may be two-parameter, in which case coefficients
/// depend on (x, y) but the covectors still index the shared x dimension
/// (the setting of the uniform forms theorem).
struct Form {
  TorusGrid grid;
  int degree = 0;
  std::map<MultiIndex, ScalarField> coefficients;

  Form() = default;
  Form(TorusGrid g, int l) : grid(std::move(g)), degree(l) {
    if (l < 0 || l > grid.n() + 1)
      throw std::invalid_argument("Form: degree out of range");
  }

  int dimension() const { return grid.n(); }

  void add_coefficient(const MultiIndex& I, const ScalarField& f, double sign = 1.0) {
    if (static_cast<int>(I.size()) != degree)
      throw std::invalid_argument("Form: key length != degree");
    detail::validate_multi_index(I, dimension(), "Form");
    if (f.grid != grid) throw std::invalid_argument("Form: coefficient grid mismatch");
    auto it = coefficients.find(I);
    if (it == coefficients.end())
      coefficients.emplace(I, sign == 1.0 ? f : sign * f);
    else
      it->second = it->second + sign * f;
  }

  ScalarField coefficient(const MultiIndex& I) const {
    auto it = coefficients.find(I);
    return it == coefficients.end() ? ScalarField(grid) : it->second;
  }

  double max_abs() const {
    double s = 0;
    for (const auto& [I, f] : coefficients) s = std::max(s, f.max_abs());
    return s;
  }
};

inline Form operator+(const Form& a, const Form& b) {
  if (a.grid != b.grid || a.degree != b.degree)
    throw std::invalid_argument("form add: shape mismatch");
  Form r = a;
  for (const auto& [I, f] : b.coefficients) r.add_coefficient(I, f);
  return r;
}

inline Form operator-(const Form& a, const Form& b) {
  if (a.grid != b.grid || a.degree != b.degree)
    throw std::invalid_argument("form sub: shape mismatch");
  Form r = a;
  for (const auto& [I, f] : b.coefficients) r.add_coefficient(I, f, -1.0);
  return r;
}

inline Form operator*(double c, const Form& a) {
  Form r(a.grid, a.degree);
  for (const auto& [I, f] : a.coefficients) r.add_coefficient(I, c * f);
  return r;
}

/// Wedge product via the permutation sign of merging the basis indices.
inline Form wedge(const Form& u, const Form& v) {
  if (u.grid != v.grid) throw std::invalid_argument("wedge: grid mismatch");
  if (u.degree + v.degree > u.dimension())
    throw std::invalid_argument("wedge: degree overflow");
  Form r(u.grid, u.degree + v.degree);
  MultiIndex merged;
  for (const auto& [I, f] : u.coefficients) {
    for (const auto& [J, g] : v.coefficients) {
      int sign = detail::merge_sign(I, J, merged);
      if (sign != 0) r.add_coefficient(merged, hadamard(f, g), sign);
    }
  }
  return r;
}

/// d(f dx_I) = sum_j (d_j f) dx_j ^ dx_I, spectral derivatives in the
/// x block. Top-degree input yields the empty form one degree up.
inline Form exterior_derivative(const Form& u) {
  Form r(u.grid, u.degree + 1);
  if (u.degree >= u.dimension()) return r;
  MultiIndex merged;
  for (const auto& [I, f] : u.coefficients) {
    for (int j = 0; j < u.dimension(); ++j) {
      int sign = detail::insert_sign(j, I, merged);
      if (sign != 0) r.add_coefficient(merged, partial_derivative_x(j, f), sign);
    }
  }
  return r;
}

/// Shared-index mode for the uniform forms theorem: differentiate the
/// coefficients in the y block but wedge with the x-type covectors, so the
/// x-degree still rises by one. For an (n-1)-form this reduces to the
/// y-divergence of the associated vector field.
inline Form exterior_derivative_shared_y(const Form& u) {
  if (!u.grid.square())
    throw std::invalid_argument("exterior_derivative_shared_y: square grid required");
  Form r(u.grid, u.degree + 1);
  if (u.degree >= u.dimension()) return r;
  MultiIndex merged;
  for (const auto& [I, f] : u.coefficients) {
    for (int j = 0; j < u.dimension(); ++j) {
      int sign = detail::insert_sign(j, I, merged);
      if (sign != 0) r.add_coefficient(merged, partial_derivative_y(j, f), sign);
    }
  }
  return r;
}

/// Bi-graded form on a product domain: x-keys of length r over n axes,
/// y-keys of length s over m axes.
struct BiGradedForm {
  TorusGrid grid;
  int r = 0, s = 0;
  std::map<std::pair<MultiIndex, MultiIndex>, ScalarField> coefficients;

  BiGradedForm() = default;
  BiGradedForm(TorusGrid g, int r_deg, int s_deg) : grid(std::move(g)), r(r_deg), s(s_deg) {
    if (!grid.two_parameter())
      throw std::invalid_argument("BiGradedForm: two-parameter grid required");
    if (r < 0 || r > grid.n() + 1 || s < 0 || s > grid.m() + 1)
      throw std::invalid_argument("BiGradedForm: bidegree out of range");
  }

  void add_coefficient(const MultiIndex& I, const MultiIndex& J, const ScalarField& f,
                       double sign = 1.0) {
    if (static_cast<int>(I.size()) != r || static_cast<int>(J.size()) != s)
      throw std::invalid_argument("BiGradedForm: key length != bidegree");
    detail::validate_multi_index(I, grid.n(), "BiGradedForm x-key");
    detail::validate_multi_index(J, grid.m(), "BiGradedForm y-key");
    if (f.grid != grid) throw std::invalid_argument("BiGradedForm: coefficient grid mismatch");
    auto key = std::make_pair(I, J);
    auto it = coefficients.find(key);
    if (it == coefficients.end())
      coefficients.emplace(key, sign == 1.0 ? f : sign * f);
    else
      it->second = it->second + sign * f;
  }

  ScalarField coefficient(const MultiIndex& I, const MultiIndex& J) const {
    auto it = coefficients.find(std::make_pair(I, J));
    return it == coefficients.end() ? ScalarField(grid) : it->second;
  }

  double max_abs() const {
    double v = 0;
    for (const auto& [key, f] : coefficients) v = std::max(v, f.max_abs());
    return v;
  }
};

inline BiGradedForm operator-(const BiGradedForm& a, const BiGradedForm& b) {
  if (a.grid != b.grid || a.r != b.r || a.s != b.s)
    throw std::invalid_argument("bigraded sub: shape mismatch");
  BiGradedForm out = a;
  for (const auto& [key, f] : b.coefficients)
    out.add_coefficient(key.first, key.second, f, -1.0);
  return out;
}

/// Exterior derivative in the x block only; the y-key is inert and carries
/// no sign (the bi-graded basis rule multiplies block signs independently).
inline BiGradedForm d_x(const BiGradedForm& u) {
  BiGradedForm out(u.grid, u.r + 1, u.s);
  if (u.r >= u.grid.n()) return out;
  MultiIndex merged;
  for (const auto& [key, f] : u.coefficients) {
    for (int j = 0; j < u.grid.n(); ++j) {
      int sign = detail::insert_sign(j, key.first, merged);
      if (sign != 0) out.add_coefficient(merged, key.second, partial_derivative_x(j, f), sign);
    }
  }
  return out;
}

inline BiGradedForm d_y(const BiGradedForm& u) {
  BiGradedForm out(u.grid, u.r, u.s + 1);
  if (u.s >= u.grid.m()) return out;
  MultiIndex merged;
  for (const auto& [key, f] : u.coefficients) {
    for (int k = 0; k < u.grid.m(); ++k) {
      int sign = detail::insert_sign(k, key.second, merged);
      if (sign != 0) out.add_coefficient(key.first, merged, partial_derivative_y(k, f), sign);
    }
  }
  return out;
}

/// Basis rule dx_I dy_J ^ dx_I' dy_J' = (x-merge sign)(y-merge sign)
/// dx_{I u I'} dy_{J u J'}, with no cross-block sign.
inline BiGradedForm wedge_bigraded(const BiGradedForm& u, const BiGradedForm& v) {
  if (u.grid != v.grid) throw std::invalid_argument("wedge_bigraded: grid mismatch");
  if (u.r + v.r > u.grid.n() || u.s + v.s > u.grid.m())
    throw std::invalid_argument("wedge_bigraded: bidegree overflow");
  BiGradedForm out(u.grid, u.r + v.r, u.s + v.s);
  MultiIndex mx, my;
  for (const auto& [ku, f] : u.coefficients) {
    for (const auto& [kv, g] : v.coefficients) {
      int sx = detail::merge_sign(ku.first, kv.first, mx);
      if (sx == 0) continue;
      int sy = detail::merge_sign(ku.second, kv.second, my);
      if (sy == 0) continue;
      out.add_coefficient(mx, my, hadamard(f, g), sx * sy);
    }
  }
  return out;
}

/// u = d(w) from a potential; closed by d^2 = 0. The closure residual is
/// verified before returning.
inline Form make_closed_form(const Form& w) {
  Form u = exterior_derivative(w);
  double res = exterior_derivative(u).max_abs();
  if (res > 1e-10 * std::max(u.max_abs(), 1e-300))
    throw IdentityViolation("make_closed_form: closure residual " + std::to_string(res));
  return u;
}

/// u = d_x(d_y(w)) from a bi-graded potential; closed in both blocks.
inline BiGradedForm make_closed_form(const BiGradedForm& w) {
  BiGradedForm u = d_x(d_y(w));
  double res = std::max(d_x(u).max_abs(), d_y(u).max_abs());
  if (res > 1e-10 * std::max(u.max_abs(), 1e-300))
    throw IdentityViolation("make_closed_form: closure residual " + std::to_string(res));
  return u;
}

/// The unique volume-form coefficient of a top-degree form.
inline ScalarField top_coefficient(const Form& u) {
  if (u.degree != u.dimension())
    throw std::invalid_argument("top_coefficient: form not of top degree");
  MultiIndex full(static_cast<std::size_t>(u.dimension()));
  std::iota(full.begin(), full.end(), 0);
  return u.coefficient(full);
}

inline ScalarField top_coefficient(const BiGradedForm& u) {
  if (u.r != u.grid.n() || u.s != u.grid.m())
    throw std::invalid_argument("top_coefficient: form not of top bidegree");
  MultiIndex fx(static_cast<std::size_t>(u.grid.n()));
  MultiIndex fy(static_cast<std::size_t>(u.grid.m()));
  std::iota(fx.begin(), fx.end(), 0);
  std::iota(fy.begin(), fy.end(), 0);
  return u.coefficient(fx, fy);
}

}  // namespace divcurl

#endif  // DIVCURL_EXTERIOR_HPP
