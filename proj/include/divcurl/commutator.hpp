// SPDX-License-Identifier: Apache-2.0

#ifndef DIVCURL_COMMUTATOR_HPP
#define DIVCURL_COMMUTATOR_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "divcurl/fields.hpp"
#include "divcurl/grid.hpp"
#include "divcurl/leray.hpp"
#include "divcurl/multiplier.hpp"

namespace divcurl {

/// Multiplication symbol b together with the oscillation class it is meant
/// to be measured in. b is normalized to mean zero on construction;
/// commutators are insensitive to additive constants.
struct SymbolFunction {
  enum class Class { bmo_1p, bmo_product, bmo_little };

  ScalarField b;
  Class declared_class = Class::bmo_1p;

  static SymbolFunction make(ScalarField field, Class cls) {
    double mu = field.mean();
    for (double& v : field.values) v -= mu;
    return SymbolFunction{std::move(field), cls};
  }
};

/// [b, R_j] f = b * R_j f - R_j(b * f) in the chosen parameter block.
inline ScalarField commutator_riesz(const SymbolFunction& b, int j, const ScalarField& f,
                                    Param p) {
  if (b.b.grid != f.grid) throw std::invalid_argument("commutator_riesz: grid mismatch");
  MultiplierSymbol sym = detail::riesz_symbol(p, j);
  return hadamard(b.b, apply(sym, f)) - apply(sym, hadamard(b.b, f));
}

/// [[b, R_j^x], R_k^y] f expanded into its four terms.
inline ScalarField iterated_commutator(const SymbolFunction& b, int j, int k,
                                       const ScalarField& f) {
  if (b.b.grid != f.grid) throw std::invalid_argument("iterated_commutator: grid mismatch");
  ScalarField ryf = riesz_y(k, f);
  ScalarField bf = hadamard(b.b, f);
  return hadamard(b.b, riesz_x(j, ryf)) - riesz_x(j, hadamard(b.b, ryf)) -
         riesz_y(k, hadamard(b.b, riesz_x(j, f))) + riesz_y(k, riesz_x(j, bf));
}

struct ProjectionCommutatorResult {
  VectorField value;      // [b, P] F via the direct path
  double path_residual;   // max-norm disagreement with the component formula
};

/// [b, P] F computed both as b*PF - P(bF) and as the component formula
/// sum_k [b, R_j R_k](F_k). Their agreement is itself a checked identity.
inline ProjectionCommutatorResult commutator_projection(const SymbolFunction& b,
                                                        const VectorField& F, Param p) {
  if (b.b.grid != F.grid)
    throw std::invalid_argument("commutator_projection: grid mismatch");
  const int d = detail::block_dim(F.grid, p);
  if (F.size() != d)
    throw std::invalid_argument("commutator_projection: component count mismatch");

  VectorField bF(F.grid, d);
  for (int j = 0; j < d; ++j) bF[j] = hadamard(b.b, F[j]);
  VectorField pF = leray_project(F, p);
  VectorField pbF = leray_project(bF, p);
  VectorField direct(F.grid, d);
  for (int j = 0; j < d; ++j) direct[j] = hadamard(b.b, pF[j]) - pbF[j];

  VectorField formula(F.grid, d);
  for (int j = 0; j < d; ++j) {
    ScalarField acc(F.grid);
    for (int k = 0; k < d; ++k) {
      MultiplierSymbol rj = detail::riesz_symbol(p, j);
      MultiplierSymbol rk = detail::riesz_symbol(p, k);
      // [b, R_j R_k] F_k
      acc = acc + hadamard(b.b, apply(rj, apply(rk, F[k]))) -
            apply(rj, apply(rk, bF[k]));
    }
    formula[j] = acc;
  }

  double res = 0;
  for (int j = 0; j < d; ++j) res = std::max(res, (direct[j] - formula[j]).max_abs());
  double scale = std::max({direct.max_abs(), formula.max_abs(), 1e-300});
  if (res > 1e-8 * scale)
    throw IdentityViolation(
        "commutator_projection: direct and component-formula paths disagree, residual " +
        std::to_string(res));
  return {std::move(direct), res};
}

namespace detail {

inline void require_small(double residual, double scale, const char* what) {
  if (residual > 1e-6 * std::max(scale, 1e-300))
    throw std::invalid_argument(std::string(what) + " residual too large: " +
                                std::to_string(residual));
}

}  // namespace detail

/// Max-norm residual of E.B = sum_j (E_j R_j phi + phi R_j E_j) for a
/// divergence-free E and B = (R_j phi)_j.
inline double check_decomposition_1p(const VectorField& E, const VectorField& B,
                                     const ScalarField& phi) {
  double scale = std::max({E.max_abs(), B.max_abs(), phi.max_abs(), 1e-300});
  detail::require_small(divergence(E, Param::full).max_abs(), E.max_abs(), "div E");
  detail::require_small(curl_residual(B, Param::full), B.max_abs(), "curl B");
  ScalarField rhs(E.grid);
  for (int j = 0; j < E.size(); ++j)
    rhs = rhs + hadamard(E[j], riesz(j, phi)) + hadamard(phi, riesz(j, E[j]));
  return (dot(E, B) - rhs).max_abs() / std::max(scale, 1e-300);
}

struct Decomposition2pResiduals {
  double identity;       // the 4-term expansion of E.B
  double cancel_double;  // sum_{j,k} R_j^x R_k^y E_{jk}
  double cancel_x;       // sum_k R_k^y phi * sum_j R_j^x E_{jk}
  double cancel_y;       // sum_j R_j^x phi * sum_k R_k^y E_{jk}

  double max() const {
    return std::max(std::max(identity, cancel_double), std::max(cancel_x, cancel_y));
  }
};

/// Residuals of the two-parameter decomposition of E.B for bi-divergence-free
/// E and B_{jk} = R_j^x R_k^y phi, including the three cancellation sums.
inline Decomposition2pResiduals check_decomposition_2p(const MatrixField& E,
                                                       const MatrixField& B,
                                                       const ScalarField& phi) {
  auto [dx, dy] = matrix_divergence_residuals(E);
  detail::require_small(dx, E.max_abs(), "div_x E");
  detail::require_small(dy, E.max_abs(), "div_y E");
  double scale = std::max({E.max_abs(), B.max_abs(), phi.max_abs(), 1e-300});

  const int n = E.rows, m = E.cols;
  ScalarField rhs(E.grid), c_double(E.grid), c_x(E.grid), c_y(E.grid);
  for (int j = 0; j < n; ++j) {
    ScalarField rx_phi = riesz_x(j, phi);
    for (int k = 0; k < m; ++k) {
      ScalarField ry_phi = riesz_y(k, phi);
      ScalarField rx_e = riesz_x(j, E.at(j, k));
      ScalarField ry_e = riesz_y(k, E.at(j, k));
      ScalarField rxy_e = riesz_y(k, rx_e);
      rhs = rhs + hadamard(E.at(j, k), riesz_y(k, rx_phi)) + hadamard(phi, rxy_e) +
            hadamard(rx_phi, ry_e) + hadamard(ry_phi, rx_e);
      c_double = c_double + rxy_e;
      c_x = c_x + hadamard(ry_phi, rx_e);
      c_y = c_y + hadamard(rx_phi, ry_e);
    }
  }
  return {(dot(E, B) - rhs).max_abs() / scale, c_double.max_abs() / scale,
          c_x.max_abs() / scale, c_y.max_abs() / scale};
}

/// Relative residual of int E.B b = sum_j int [b, R_j](E_j) phi.
inline double check_pairing_identity(const VectorField& E, const VectorField& B,
                                     const ScalarField& phi, const SymbolFunction& b) {
  double lhs = grid_inner(dot(E, B), b.b);
  double rhs = 0;
  for (int j = 0; j < E.size(); ++j)
    rhs += grid_inner(commutator_riesz(b, j, E[j], Param::full), phi);
  double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return std::abs(lhs - rhs) / scale;
}

/// Two-parameter version with iterated commutators:
/// int E.B b = sum_{j,k} int [[b, R_j^x], R_k^y](E_{jk}) phi.
inline double check_pairing_identity(const MatrixField& E, const MatrixField& B,
                                     const ScalarField& phi, const SymbolFunction& b) {
  double lhs = grid_inner(dot(E, B), b.b);
  double rhs = 0;
  for (int j = 0; j < E.rows; ++j)
    for (int k = 0; k < E.cols; ++k)
      rhs += grid_inner(iterated_commutator(b, j, k, E.at(j, k)), phi);
  double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
  return std::abs(lhs - rhs) / scale;
}

}  // namespace divcurl

#endif  // DIVCURL_COMMUTATOR_HPP
