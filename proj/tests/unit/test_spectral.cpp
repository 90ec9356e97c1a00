#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "qbd/errors.hpp"
#include "qbd/recurrence.hpp"
#include "qbd/spectral.hpp"

using namespace qbd;
using doctest::Approx;

namespace {

PolynomialTable<Extended> table_for(const ModelParameters& p, int degree, int order = 20) {
  return gram_schmidt_table<Extended>(degree, p, build_quadrature<Extended>(order, p));
}

std::vector<std::pair<double, double>> interior_points(testing::ParamGen& gen, int count) {
  std::vector<std::pair<double, double>> pts;
  while (static_cast<int>(pts.size()) < count) {
    const double u = gen.uniform(0, 1), v = gen.uniform(0, 1);
    if (in_region(u, v)) pts.emplace_back(u, v);
  }
  return pts;
}

}  // namespace

TEST_CASE("graded monomial indexing and polynomial algebra") {
  CHECK(monomial_index(0, 0) == 0);
  CHECK(monomial_index(1, 0) == 1);
  CHECK(monomial_index(0, 1) == 2);
  CHECK(monomial_index(0, 2) == 5);
  CHECK(basis_size(3) == 10);
  CHECK(degree_of_size(10) == 3);
  const Poly<double> f{1, 2, 3};  // 1 + 2u + 3v
  const auto g = poly_mul(f, f);
  CHECK(g.size() == 6u);
  CHECK(poly_eval(g, 0.3, -0.7) == Approx(std::pow(1 + 0.6 - 2.1, 2)));
  const auto h = poly_mul_linear(f, 2.0, -1.0);
  CHECK(poly_eval(h, 0.4, 0.1) == Approx((1 + 0.8 + 0.3) * (0.8 - 0.1)));
}

TEST_CASE("Gram-Schmidt table: monic leading terms, sigma and orthogonality") {
  testing::ParamGen gen(41);
  for (int t = 0; t < 4; ++t) {
    const auto p = gen.admissible();
    const int N = 5;
    const auto tab = table_for(p, N);
    CHECK(to_double(tab.Q(0, 0)[0]) == Approx(1.0));
    for (int n = 0; n <= N; ++n) {
      for (int k = 0; k <= n; ++k) {
        const auto& P = tab.P(n, k);
        CHECK(to_double(P[monomial_index(n - k, k)]) == Approx(1.0));
        // later monomials of the same degree are absent
        for (int j = k + 1; j <= n; ++j) CHECK(to_double(P[monomial_index(n - j, j)]) == 0.0);
        CHECK(to_double(tab.sigma[tab.slot(n, k)]) == Approx(sigma(n, k, p)).epsilon(1e-10));
        CHECK(to_double(poly_eval(tab.Q(n, k), Extended(1), Extended(1))) == Approx(1.0).epsilon(1e-20));
        CHECK(to_double(tab.norm_sq[tab.slot(n, k)]) * pi_norm(n, k, p) == Approx(1.0).epsilon(1e-10));
      }
    }
    for (std::size_t i = 0; i < tab.normalized.size(); ++i)
      for (std::size_t j = 0; j < i; ++j) {
        const double ip = to_double(tab.inner(tab.normalized[i], tab.normalized[j]));
        CHECK(std::abs(ip) < 1e-25);
      }
  }
  const auto p = ModelParameters::make(0, 0, 0);
  CHECK_THROWS_AS(gram_schmidt_table<double>(5, p, build_quadrature<double>(10, p)),
                  PreconditionError);
}

TEST_CASE("blocks recovered from the polynomials match the closed forms") {
  for (const auto& p : {ModelParameters::make(0.5, 1.5, 0.2), ModelParameters::make(1.2, 0.1, -0.5),
                        ModelParameters::make(-0.4, 0.2, 0.5)}) {
    const int N = 5;
    const auto tab = table_for(p, N);
    for (int n = 0; n < N; ++n) {
      const auto u = extract_blocks(tab, n, Variable::U);
      const auto v = extract_blocks(tab, n, Variable::V);
      const auto u0 = build_level_u(n, p);
      const auto v0 = build_level_v(n, p);
      CHECK((u.A - u0.A).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((u.B - u0.B).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((v.A - v0.A).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((v.B - v0.B).cwiseAbs().maxCoeff() < 1e-10);
      if (n > 0) {
        CHECK((u.C - u0.C).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((v.C - v0.C).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
    CHECK_THROWS_AS(extract_blocks(tab, N, Variable::U), PreconditionError);
    CHECK_THROWS_AS(extract_blocks(tab, 1, Variable::MIXED), PreconditionError);
  }
}

TEST_CASE("normalized polynomials solve the eigenvalue PDE") {
  testing::ParamGen gen(42);
  for (int t = 0; t < 3; ++t) {
    const auto p = gen.admissible();
    const auto tab = to_double_table(table_for(p, 6));
    const auto pts = interior_points(gen, 50);
    for (int n = 0; n <= 6; ++n)
      for (int k = 0; k <= n; ++k) CHECK(pde_residual(n, k, p, tab, pts) < 1e-7);
    CHECK_THROWS_AS(pde_residual(7, 0, p, tab, pts), IndexError);
  }
  CHECK(pde_eigenvalue(0, 0, ModelParameters::make(1, 2, 3)) == 0.0);
  CHECK(pde_eigenvalue(1, 1, ModelParameters::make(0, 0, 0)) == Approx(5.0));
}

TEST_CASE("Karlin-McGregor one-step values") {
  const auto base = ModelParameters::make(0, 0, 0);
  for (double tau : {0.0, 0.5, 1.0}) {
    const KarlinMcGregor km(base.with_tau(tau), 2, 2, 16);
    CHECK(km.transition(0, 0, 0, 0, 0) == Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(km.transition(0, 0, 1, 0, 0)) < 1e-12);
    CHECK(km.transition(0, 0, 0, 0, 1) == Approx((1 - tau) / 2 + 2 * tau / 5).epsilon(1e-12));
    CHECK(km.transition(0, 0, 1, 0, 1) == Approx((1 - tau) / 2).epsilon(1e-12).scale(1.0));
    CHECK(km.transition(0, 0, 1, 1, 1) == Approx(3 * tau / 5).epsilon(1e-12).scale(1.0));
    CHECK_THROWS_AS((void)km.transition(0, 0, 3, 0, 1), IndexError);
    CHECK_THROWS_AS((void)km.transition(0, 0, 1, 0, 3), IndexError);
  }
  CHECK_THROWS_AS(KarlinMcGregor(base, 2, 2, 16), PreconditionError);
}

TEST_CASE("generalized inverse and the recursive norm matrices") {
  testing::ParamGen gen(43);
  for (int t = 0; t < 30; ++t) {
    const auto p = gen.admissible();
    for (int n = 1; n <= 8; ++n) {
      const auto [ok, err] = generalized_inverse_check(n, p, 1e-9);
      CHECK(ok);
      CHECK(err < 1e-9);
    }
    const auto pis = pi_norm_recursive(8, p);
    REQUIRE(pis.size() == 9u);
    for (int n = 0; n <= 8; ++n) {
      const auto& M = pis[n];
      REQUIRE(M.rows() == n + 1);
      for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
          if (i == j)
            CHECK(M(i, i) == Approx(pi_norm(n, i, p)).epsilon(1e-8));
          else
            CHECK(std::abs(M(i, j)) < 1e-8 * std::max(1.0, M.cwiseAbs().maxCoeff()));
        }
    }
  }
  CHECK_THROWS_AS(generalized_inverse(0, ModelParameters::make(0, 0, 0)), PreconditionError);
}
