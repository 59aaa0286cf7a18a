// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "divcurl/leray.hpp"
#include "divcurl/random_field.hpp"
#include "oracle.hpp"

using namespace divcurl;

namespace {

VectorField random_vec(const TorusGrid& g, int d, unsigned seed) {
  VectorField F(g, d);
  for (int j = 0; j < d; ++j) F[j] = oracle::test_field(g, seed + static_cast<unsigned>(j));
  return F;
}

double vec_diff(const VectorField& a, const VectorField& b) {
  double r = 0;
  for (int j = 0; j < a.size(); ++j) r = std::max(r, (a[j] - b[j]).max_abs());
  return r;
}

}  // namespace

TEST_CASE("divergence-free projection, one parameter", "[leray]") {
  TorusGrid g({8, 8});
  // Nyquist-free data: the odd multiplier symbols vanish on the Nyquist
  // modes, so the projection identities are exact off those modes only.
  VectorField F = random_vector_field(g, 2, 1.5, 100);
  VectorField P = leray_project(F, Param::full);
  double scale = std::max(P.max_abs(), 1e-300);

  SECTION("kills the divergence in both forms") {
    CHECK(divergence(P, Param::full, DivForm::riesz).max_abs() < 1e-10 * scale);
    CHECK(divergence(P, Param::full, DivForm::derivative).max_abs() < 1e-9 * scale);
  }

  SECTION("is idempotent") {
    CHECK(vec_diff(leray_project(P, Param::full), P) < 1e-10 * scale);
  }

  SECTION("annihilates gradient-type fields") {
    ScalarField phi = random_power_law_field(g, 1.5, 3);
    VectorField grad(g, 2);
    for (int j = 0; j < 2; ++j) grad[j] = riesz(j, phi);
    VectorField pg = leray_project(grad, Param::full);
    CHECK(pg.max_abs() < 1e-10 * std::max(grad.max_abs(), 1e-300));
  }
}

TEST_CASE("per-block projections on a product grid", "[leray]") {
  TorusGrid g({8, 8}, {8, 8});
  VectorField F(g, 2);
  for (int j = 0; j < 2; ++j)
    F[j] = random_power_law_field(g, 1.5, 40 + static_cast<std::uint64_t>(j));

  VectorField Px = leray_project(F, Param::x);
  CHECK(divergence(Px, Param::x).max_abs() < 1e-10 * std::max(Px.max_abs(), 1e-300));
  VectorField Py = leray_project(F, Param::y);
  CHECK(divergence(Py, Param::y).max_abs() < 1e-10 * std::max(Py.max_abs(), 1e-300));

  // for a shared-component vector field the two block projections do not
  // commute in general; the joint projection handles that case
  VectorField J = joint_leray_project(F);
  double scale = std::max(J.max_abs(), 1e-300);
  CHECK(divergence(J, Param::x).max_abs() < 1e-10 * scale);
  CHECK(divergence(J, Param::y).max_abs() < 1e-10 * scale);
  CHECK(divergence(J, Param::x, DivForm::derivative).max_abs() < 1e-9 * scale);
  CHECK(divergence(J, Param::y, DivForm::derivative).max_abs() < 1e-9 * scale);
  CHECK(vec_diff(joint_leray_project(J), J) < 1e-10 * scale);  // idempotent
}

TEST_CASE("curl-free generator and potential recovery", "[leray]") {
  TorusGrid g({8, 8, 8});
  ScalarField phi = random_power_law_field(g, 2.0, 9);
  VectorField B = make_curl_free_1p(phi);
  double scale = std::max(B.max_abs(), 1e-300);
  CHECK(curl_residual(B, Param::full) < 1e-11 * scale);

  ScalarField back = recover_potential_1p(B);
  CHECK((back - phi).max_abs() < 1e-10 * std::max(phi.max_abs(), 1e-300));

  // a generic field is not curl-free and must be rejected
  VectorField junk = random_vec(g, 3, 7);
  CHECK_THROWS_AS(recover_potential_1p(junk), std::invalid_argument);

  // non-mean-zero potential rejected
  ScalarField shifted = phi;
  for (double& v : shifted.values) v += 1.0;
  CHECK_THROWS_AS(make_curl_free_1p(shifted), std::invalid_argument);
}

TEST_CASE("curl is empty on 1-D blocks", "[leray]") {
  TorusGrid g({8});
  VectorField F = random_vec(g, 1, 1);
  CHECK(curl(F, Param::full).empty());
  CHECK(curl_residual(F, Param::full) == 0.0);
}

TEST_CASE("bi-curl-free matrix generator and recovery", "[leray]") {
  TorusGrid g({8, 8}, {8, 8});
  ScalarField phi = random_power_law_field(g, 2.0, 13, MeanZeroMode::each_block);
  MatrixField B = make_bi_curl_free(phi);
  auto [cx, cy] = matrix_curl_residuals(B);
  double scale = std::max(B.max_abs(), 1e-300);
  CHECK(cx < 1e-11 * scale);
  CHECK(cy < 1e-11 * scale);

  ScalarField back = recover_bi_potential(B);
  CHECK((back - phi).max_abs() < 1e-9 * std::max(phi.max_abs(), 1e-300));

  // a potential with nonzero x-slice means is rejected
  ScalarField bad = random_power_law_field(g, 2.0, 14, MeanZeroMode::full);
  ScalarField ylump = lift_y(oracle::test_field(g.y_subgrid(), 3), g);
  bad = bad + ylump;
  CHECK_THROWS_AS(make_bi_curl_free(bad), std::invalid_argument);
}

TEST_CASE("bi-divergence-free matrix projection", "[leray]") {
  TorusGrid g({8, 8}, {8, 8});
  MatrixField G = random_matrix_field(g, 2, 2, 1.5, 77);
  MatrixField E = make_bi_div_free(G);
  auto [dx, dy] = matrix_divergence_residuals(E);
  double scale = std::max(E.max_abs(), 1e-300);
  CHECK(dx < 1e-10 * scale);
  CHECK(dy < 1e-10 * scale);

  // the x-column and y-row projections act on different index slots:
  // applying them in the opposite order gives the same field
  MatrixField other = G;
  for (int j = 0; j < other.rows; ++j) {
    VectorField row(g, other.cols);
    for (int k = 0; k < other.cols; ++k) row[k] = other.at(j, k);
    row = leray_project(row, Param::y);
    for (int k = 0; k < other.cols; ++k) other.at(j, k) = row[k];
  }
  for (int k = 0; k < other.cols; ++k) {
    VectorField col(g, other.rows);
    for (int j = 0; j < other.rows; ++j) col[j] = other.at(j, k);
    col = leray_project(col, Param::x);
    for (int j = 0; j < other.rows; ++j) other.at(j, k) = col[j];
  }
  double diff = 0;
  for (std::size_t c = 0; c < E.components.size(); ++c)
    diff = std::max(diff, (E.components[c] - other.components[c]).max_abs());
  CHECK(diff < 1e-10 * scale);

  // idempotence
  MatrixField E2 = make_bi_div_free(E);
  double idem = 0;
  for (std::size_t c = 0; c < E.components.size(); ++c)
    idem = std::max(idem, (E.components[c] - E2.components[c]).max_abs());
  CHECK(idem < 1e-10 * scale);
}

TEST_CASE("leray argument validation", "[leray]") {
  TorusGrid g1({8, 8});
  VectorField F = random_vec(g1, 3, 5);  // wrong component count
  CHECK_THROWS_AS(leray_project(F, Param::full), std::invalid_argument);
  CHECK_THROWS_AS(divergence(F, Param::full), std::invalid_argument);
  CHECK_THROWS_AS(leray_project(F, Param::y), std::invalid_argument);

  TorusGrid g2({8, 8}, {8, 8});
  VectorField G = random_vec(g2, 2, 5);
  CHECK_THROWS_AS(leray_project(G, Param::full), std::invalid_argument);

  TorusGrid rect({8, 8}, {4, 4});
  VectorField H = random_vec(rect, 2, 5);
  CHECK_THROWS_AS(joint_leray_project(H), std::invalid_argument);
}
