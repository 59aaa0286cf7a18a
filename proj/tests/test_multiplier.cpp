// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "divcurl/multiplier.hpp"
#include "oracle.hpp"

using namespace divcurl;

namespace {

double max_diff(const ScalarField& a, const ScalarField& b) { return (a - b).max_abs(); }

ScalarField cosine_wave(const TorusGrid& g, int axis) {
  ScalarField f(g);
  const std::vector<int>& shape = g.shape();
  std::vector<int> idx(shape.size(), 0);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    f.values[i] = std::cos(2.0 * pi * idx[static_cast<std::size_t>(axis)] /
                           shape[static_cast<std::size_t>(axis)]);
    detail::advance_index(idx, shape);
  }
  return f;
}

ScalarField sine_wave(const TorusGrid& g, int axis) {
  ScalarField f(g);
  const std::vector<int>& shape = g.shape();
  std::vector<int> idx(shape.size(), 0);
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    f.values[i] = std::sin(2.0 * pi * idx[static_cast<std::size_t>(axis)] /
                           shape[static_cast<std::size_t>(axis)]);
    detail::advance_index(idx, shape);
  }
  return f;
}

}  // namespace

TEST_CASE("1-D Riesz transform is the Hilbert transform", "[multiplier]") {
  TorusGrid g({4});
  // cosine wave [1,0,-1,0] -> sine wave [0,1,0,-1]
  ScalarField f(g, {1.0, 0.0, -1.0, 0.0});
  ScalarField h = riesz(0, f);
  ScalarField want(g, {0.0, 1.0, 0.0, -1.0});
  CHECK(max_diff(h, want) < 1e-12);

  // same result through the naive-transform oracle with symbol -i*sgn(xi)
  ScalarField byoracle = oracle::naive_multiplier(f, [](const std::vector<int>& xi) {
    if (xi[0] == 0 || xi[0] == -2) return cdouble{};
    return cdouble{0.0, xi[0] > 0 ? -1.0 : 1.0};
  });
  CHECK(max_diff(h, byoracle) < 1e-12);
}

TEST_CASE("Riesz annihilates constants", "[multiplier]") {
  TorusGrid g({8, 8});
  ScalarField c(g, std::vector<double>(64, 3.25));
  for (int j = 0; j < 2; ++j) CHECK(riesz(j, c).max_abs() < 1e-13);
}

TEST_CASE("sum of squared Riesz transforms is -I", "[multiplier]") {
  for (int n : {1, 2, 3}) {
    TorusGrid g(std::vector<int>(static_cast<std::size_t>(n), 8));
    ScalarField f = oracle::test_field(g, 17, /*mean_zero=*/true);
    // strip Nyquist so the odd-symbol convention is inert
    Spectrum s = dft(f);
    const std::vector<int>& shape = g.shape();
    std::vector<int> idx(shape.size(), 0);
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
      for (std::size_t a = 0; a < shape.size(); ++a)
        if (centered_frequency(idx[a], shape[a]) == -shape[a] / 2) s.coeffs[i] = {};
      detail::advance_index(idx, shape);
    }
    f = idft(s);

    ScalarField acc(g);
    for (int j = 0; j < n; ++j) acc = acc + riesz(j, riesz(j, f));
    CHECK(max_diff(acc, -1.0 * f) <= 1e-10 * std::max(f.max_abs(), 1e-300));
  }
}

TEST_CASE("partial Riesz transforms", "[multiplier]") {
  TorusGrid g({8}, {8});

  SECTION("field depending only on y is annihilated by riesz_x") {
    ScalarField f = lift_y(oracle::test_field(g.y_subgrid(), 5), g);
    CHECK(riesz_x(0, f).max_abs() < 1e-12);
  }

  SECTION("separable cosine product maps to sine product") {
    ScalarField f = hadamard(cosine_wave(g, 0), cosine_wave(g, 1));
    ScalarField got = riesz_y(0, riesz_x(0, f));
    ScalarField want = hadamard(sine_wave(g, 0), sine_wave(g, 1));
    CHECK(max_diff(got, want) < 1e-12);
  }

  SECTION("x and y Riesz transforms commute exactly") {
    ScalarField f = oracle::test_field(g, 9);
    CHECK(max_diff(riesz_x(0, riesz_y(0, f)), riesz_y(0, riesz_x(0, f))) < 1e-13);
  }

  SECTION("errors") {
    CHECK_THROWS_AS(riesz_x(2, ScalarField(g)), std::out_of_range);
    TorusGrid one({8});
    CHECK_THROWS_AS(riesz_x(0, ScalarField(one)), std::invalid_argument);
    CHECK_THROWS_AS(riesz(0, ScalarField(g)), std::invalid_argument);
  }
}

TEST_CASE("spectral partial derivative", "[multiplier]") {
  TorusGrid g({16});
  ScalarField c(g, std::vector<double>(16, 1.0));
  CHECK(partial_derivative_x(0, c).max_abs() < 1e-13);

  ScalarField s = sine_wave(g, 0);
  ScalarField want = (2.0 * pi / 16.0) * cosine_wave(g, 0);
  CHECK(max_diff(partial_derivative_x(0, s), want) < 1e-12);

  TorusGrid g2({8, 8});
  ScalarField f = oracle::test_field(g2, 21);
  ScalarField d12 = partial_derivative_x(0, partial_derivative_x(1, f));
  ScalarField d21 = partial_derivative_x(1, partial_derivative_x(0, f));
  CHECK(max_diff(d12, d21) < 1e-13);
}

TEST_CASE("Riesz transform is skew-adjoint and preserves realness", "[multiplier]") {
  TorusGrid g({8, 8});
  for (unsigned trial = 0; trial < 50; ++trial) {
    ScalarField f = oracle::test_field(g, 2 * trial);
    ScalarField h = oracle::test_field(g, 2 * trial + 1);
    double lhs = grid_inner(riesz(0, f), h);
    double rhs = -grid_inner(f, riesz(0, h));
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max({std::abs(lhs), std::abs(rhs), 1e-300}));
  }
  // realness: idft would throw on imaginary residue above 1e-8; check tighter
  ScalarField f = oracle::test_field(g, 77);
  Spectrum s = dft(riesz(1, f));
  // conjugate symmetry of the output spectrum implies the field was real
  const std::vector<int>& shape = g.shape();
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    std::vector<int> idx = oracle::unflatten(i, shape);
    std::size_t neg = 0;
    for (std::size_t a = 0; a < shape.size(); ++a)
      neg = neg * static_cast<std::size_t>(shape[a]) +
            static_cast<std::size_t>((shape[a] - idx[a]) % shape[a]);
    CHECK(std::abs(s.coeffs[i] - std::conj(s.coeffs[neg])) <
          1e-12 * static_cast<double>(g.size()));
  }
}

TEST_CASE("componentwise lifting to vector and matrix fields", "[multiplier]") {
  TorusGrid g({8}, {8});
  MultiplierSymbol sym{MultiplierSymbol::Kind::riesz_x, 0};

  MatrixField F(g, 1, 1);
  CHECK(apply_to_matrix(sym, F).max_abs() == 0.0);  // zero in, zero out

  F.at(0, 0) = oracle::test_field(g, 31);
  MatrixField got = apply_to_matrix(sym, F);
  CHECK((got.at(0, 0) - apply(sym, F.at(0, 0))).max_abs() == 0.0);

  VectorField V(g, 1);
  V[0] = oracle::test_field(g, 32);
  CHECK((apply_to_vector(sym, V)[0] - apply(sym, V[0])).max_abs() == 0.0);

  MatrixField M(g, 2, 1);
  M.at(0, 0) = oracle::test_field(g, 33);
  M.at(1, 0) = oracle::test_field(g, 34);
  MatrixField R = apply_to_matrix(sym, M);
  for (int j = 0; j < 2; ++j)
    CHECK((R.at(j, 0) - apply(sym, M.at(j, 0))).max_abs() == 0.0);
}
