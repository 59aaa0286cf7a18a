// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "divcurl/exterior.hpp"
#include "oracle.hpp"

using namespace divcurl;

namespace {

std::vector<MultiIndex> combinations(int dim, int length) {
  std::vector<MultiIndex> out;
  if (length == 0) return {MultiIndex{}};
  if (length > dim) return out;
  MultiIndex c(static_cast<std::size_t>(length));
  for (int i = 0; i < length; ++i) c[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(c);
    int i = length - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == dim - length + i) --i;
    if (i < 0) break;
    ++c[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < length; ++k)
      c[static_cast<std::size_t>(k)] = c[static_cast<std::size_t>(k - 1)] + 1;
  }
  return out;
}

// Independent sign oracle: bubble-sort the concatenation and count swaps.
int sign_oracle(const MultiIndex& I, const MultiIndex& J) {
  MultiIndex cat = I;
  cat.insert(cat.end(), J.begin(), J.end());
  int swaps = 0;
  for (std::size_t a = 0; a < cat.size(); ++a)
    for (std::size_t b = 0; b + 1 < cat.size() - a; ++b) {
      if (cat[b] == cat[b + 1]) return 0;
      if (cat[b] > cat[b + 1]) {
        std::swap(cat[b], cat[b + 1]);
        ++swaps;
      }
    }
  for (std::size_t a = 0; a + 1 < cat.size(); ++a)
    if (cat[a] == cat[a + 1]) return 0;
  return swaps % 2 == 0 ? 1 : -1;
}

Form random_form(const TorusGrid& g, int degree, unsigned seed) {
  Form u(g, degree);
  unsigned c = 0;
  for (const MultiIndex& I : combinations(g.n(), degree))
    u.add_coefficient(I, oracle::test_field(g, seed + c++));
  return u;
}

BiGradedForm random_bigraded(const TorusGrid& g, int r, int s, unsigned seed) {
  BiGradedForm u(g, r, s);
  unsigned c = 0;
  for (const MultiIndex& I : combinations(g.n(), r))
    for (const MultiIndex& J : combinations(g.m(), s))
      u.add_coefficient(I, J, oracle::test_field(g, seed + c++));
  return u;
}

double form_diff(const Form& a, const Form& b) { return (a - b).max_abs(); }

// Keep only modes with every centered frequency in [-K, K]; products of two
// such fields then stay below Nyquist, so the spectral derivative is a true
// derivation on them.
ScalarField band_limit(const ScalarField& f, int K) {
  Spectrum s = dft(f);
  const std::vector<int>& shape = f.grid.shape();
  std::vector<int> idx(shape.size(), 0);
  for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
    for (std::size_t a = 0; a < shape.size(); ++a)
      if (std::abs(centered_frequency(idx[a], shape[a])) > K) {
        s.coeffs[i] = {};
        break;
      }
    detail::advance_index(idx, shape);
  }
  return idft(s);
}

Form band_form(const TorusGrid& g, int degree, unsigned seed) {
  Form u(g, degree);
  unsigned c = 0;
  for (const MultiIndex& I : combinations(g.n(), degree))
    u.add_coefficient(I, band_limit(oracle::test_field(g, seed + c++), 1));
  return u;
}

}  // namespace

TEST_CASE("basis merge signs match the permutation oracle", "[exterior]") {
  // exhaustive over all index-set pairs in dimension 4 up to degree 2
  for (int la = 0; la <= 2; ++la)
    for (int lb = 0; lb <= 2; ++lb)
      for (const MultiIndex& I : combinations(4, la))
        for (const MultiIndex& J : combinations(4, lb)) {
          MultiIndex merged;
          int got = detail::merge_sign(I, J, merged);
          CHECK(got == sign_oracle(I, J));
          if (got != 0) {
            MultiIndex want = I;
            want.insert(want.end(), J.begin(), J.end());
            std::sort(want.begin(), want.end());
            CHECK(merged == want);
          }
        }
}

TEST_CASE("multi-index validation", "[exterior]") {
  TorusGrid g({4, 4, 4});
  Form u(g, 2);
  ScalarField f = oracle::test_field(g, 1);
  CHECK_THROWS_AS(u.add_coefficient({1, 0}, f), std::invalid_argument);   // not increasing
  CHECK_THROWS_AS(u.add_coefficient({0, 3}, f), std::invalid_argument);   // out of range
  CHECK_THROWS_AS(u.add_coefficient({0}, f), std::invalid_argument);      // wrong length
  CHECK_THROWS_AS(Form(g, 5), std::invalid_argument);
  u.add_coefficient({0, 2}, f);
  u.add_coefficient({0, 2}, f);  // accumulates
  CHECK((u.coefficient({0, 2}) - 2.0 * f).max_abs() == 0.0);
  CHECK(u.coefficient({1, 2}).max_abs() == 0.0);  // absent key reads as zero
}

TEST_CASE("wedge product algebra", "[exterior]") {
  TorusGrid g({4, 4, 4});
  Form u = random_form(g, 1, 10);
  Form v = random_form(g, 1, 20);
  Form w = random_form(g, 1, 30);
  double scale = std::max({u.max_abs(), v.max_abs(), w.max_abs(), 1.0});

  SECTION("graded anticommutativity") {
    // degree (1,1): u ^ v = -v ^ u
    CHECK(form_diff(wedge(u, v), -1.0 * wedge(v, u)) < 1e-13 * scale * scale);
    // degree (1,2): u ^ (v^w) = +(v^w) ^ u
    Form vw = wedge(v, w);
    CHECK(form_diff(wedge(u, vw), wedge(vw, u)) < 1e-13 * scale * scale * scale);
    CHECK(wedge(u, u).max_abs() < 1e-13 * scale * scale);
  }

  SECTION("associativity and bilinearity") {
    CHECK(form_diff(wedge(wedge(u, v), w), wedge(u, wedge(v, w))) <
          1e-12 * scale * scale * scale);
    CHECK(form_diff(wedge(u + v, w), wedge(u, w) + wedge(v, w)) <
          1e-12 * scale * scale);
  }

  SECTION("degree overflow throws") {
    Form top = random_form(g, 3, 40);
    CHECK_THROWS_AS(wedge(top, u), std::invalid_argument);
  }
}

TEST_CASE("exterior derivative", "[exterior]") {
  TorusGrid g({4, 4, 4});
  Form u = random_form(g, 1, 50);
  Form v = random_form(g, 1, 60);
  double scale = std::max({u.max_abs(), v.max_abs(), 1.0});

  SECTION("d squared vanishes") {
    for (int deg : {0, 1, 2}) {
      Form a = random_form(g, deg, 70 + static_cast<unsigned>(deg));
      CHECK(exterior_derivative(exterior_derivative(a)).max_abs() <
            1e-10 * std::max(a.max_abs(), 1.0));
    }
  }

  SECTION("Leibniz rule on band-limited forms") {
    TorusGrid gb({8, 8, 8});
    Form ub = band_form(gb, 1, 200);
    Form vb = band_form(gb, 1, 210);
    double sb = std::max({ub.max_abs(), vb.max_abs(), 1.0});
    // d(u ^ v) = du ^ v - u ^ dv for 1-forms
    Form lhs = exterior_derivative(wedge(ub, vb));
    Form rhs = wedge(exterior_derivative(ub), vb) - wedge(ub, exterior_derivative(vb));
    CHECK(form_diff(lhs, rhs) < 1e-10 * sb * sb);

    Form f0 = band_form(gb, 0, 220);  // functions: d(fv) = df ^ v + f dv
    Form lhs0 = exterior_derivative(wedge(f0, vb));
    Form rhs0 = wedge(exterior_derivative(f0), vb) + wedge(f0, exterior_derivative(vb));
    CHECK(form_diff(lhs0, rhs0) < 1e-10 * sb * sb);
  }

  SECTION("top degree maps to the empty form") {
    Form top = random_form(g, 3, 90);
    CHECK(exterior_derivative(top).max_abs() == 0.0);
  }

  SECTION("closed-form factory verifies closure") {
    Form w = random_form(g, 1, 95);
    Form cl = make_closed_form(w);
    CHECK(exterior_derivative(cl).max_abs() < 1e-10 * std::max(cl.max_abs(), 1.0));
  }
}

TEST_CASE("shared-index derivative in the second parameter", "[exterior]") {
  TorusGrid g({4, 4}, {4, 4});
  Form u = random_form(g, 1, 100);
  double scale = std::max(u.max_abs(), 1.0);

  SECTION("squares to zero and anticommutes with d_x") {
    CHECK(exterior_derivative_shared_y(exterior_derivative_shared_y(u)).max_abs() <
          1e-10 * scale);
    Form ab = exterior_derivative(exterior_derivative_shared_y(u));
    Form ba = exterior_derivative_shared_y(exterior_derivative(u));
    CHECK(form_diff(ab, -1.0 * ba) < 1e-10 * scale);
  }

  SECTION("requires a square grid") {
    TorusGrid rect({4, 4}, {8, 8});
    Form v(rect, 0);
    v.add_coefficient({}, oracle::test_field(rect, 1));
    CHECK_THROWS_AS(exterior_derivative_shared_y(v), std::invalid_argument);
  }
}

TEST_CASE("bi-graded forms", "[exterior]") {
  TorusGrid g({4, 4}, {4, 4});
  BiGradedForm u = random_bigraded(g, 1, 0, 110);
  BiGradedForm v = random_bigraded(g, 0, 1, 120);
  double scale = std::max({u.max_abs(), v.max_abs(), 1.0});

  SECTION("block derivatives square to zero and commute") {
    CHECK(d_x(d_x(u)).max_abs() < 1e-10 * scale);
    CHECK(d_y(d_y(u)).max_abs() < 1e-10 * scale);
    // no cross-block sign: d_x d_y = +d_y d_x
    BiGradedForm xy = d_x(d_y(u));
    BiGradedForm yx = d_y(d_x(u));
    double diff = 0;
    for (const auto& [key, f] : (xy - yx).coefficients) diff = std::max(diff, f.max_abs());
    CHECK(diff < 1e-10 * scale);
  }

  SECTION("wedge matches per-block sign oracle") {
    BiGradedForm a = random_bigraded(g, 1, 1, 130);
    BiGradedForm b = random_bigraded(g, 1, 1, 140);
    BiGradedForm got = wedge_bigraded(a, b);
    // exhaustive recomputation with the independent sign oracle
    std::map<std::pair<MultiIndex, MultiIndex>, ScalarField> want;
    for (const auto& [ka, fa] : a.coefficients)
      for (const auto& [kb, fb] : b.coefficients) {
        int sx = sign_oracle(ka.first, kb.first);
        int sy = sign_oracle(ka.second, kb.second);
        if (sx == 0 || sy == 0) continue;
        MultiIndex mx = ka.first, my = ka.second;
        mx.insert(mx.end(), kb.first.begin(), kb.first.end());
        my.insert(my.end(), kb.second.begin(), kb.second.end());
        std::sort(mx.begin(), mx.end());
        std::sort(my.begin(), my.end());
        ScalarField term = static_cast<double>(sx * sy) * hadamard(fa, fb);
        auto key = std::make_pair(mx, my);
        auto it = want.find(key);
        if (it == want.end())
          want.emplace(key, term);
        else
          it->second = it->second + term;
      }
    CHECK(got.coefficients.size() == want.size());
    for (const auto& [key, f] : want)
      CHECK((got.coefficient(key.first, key.second) - f).max_abs() <
            1e-13 * scale * scale);
  }

  SECTION("graded commutativity with block signs") {
    // (1,0) vs (1,0): x-degrees anticommute, y-degrees inert
    BiGradedForm w = random_bigraded(g, 1, 0, 150);
    BiGradedForm uv = wedge_bigraded(u, w);
    BiGradedForm vu = wedge_bigraded(w, u);
    double diff = 0;
    for (const auto& [key, f] : uv.coefficients)
      diff = std::max(diff, (f + vu.coefficient(key.first, key.second)).max_abs());
    CHECK(diff < 1e-13 * scale * scale);
  }

  SECTION("closed-form factory and top coefficient") {
    BiGradedForm w = random_bigraded(g, 0, 0, 160);
    BiGradedForm cl = make_closed_form(w);
    CHECK(cl.r == 1);
    CHECK(cl.s == 1);
    CHECK(d_x(cl).max_abs() < 1e-10 * std::max(cl.max_abs(), 1.0));
    CHECK(d_y(cl).max_abs() < 1e-10 * std::max(cl.max_abs(), 1.0));

    BiGradedForm top = random_bigraded(g, 2, 2, 170);
    CHECK(top_coefficient(top).max_abs() > 0.0);
    CHECK_THROWS_AS(top_coefficient(cl), std::invalid_argument);
  }
}
