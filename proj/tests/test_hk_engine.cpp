#include <doctest.h>

#include <cmath>
#include <random>

#include "kov/flows.hpp"
#include "kov/hk_engine.hpp"
#include "kov/maps.hpp"
#include "kov/numdiff.hpp"
#include "support.hpp"

using namespace kov;

namespace {

BilinearStepSystem euler_system() { return polarize(*euler_top3().field); }
BilinearStepSystem kov_system(std::size_t n) { return polarize(*generalized_kovalevskaya(n, 2.0).field); }

}  // namespace

TEST_CASE("polarized Euler field gives x'_i - x_i = eps (x'_j x_k + x_j x'_k)") {
  const StateVector x{0.3, -1.2, 2.1};
  const double eps = 0.07;
  const Matrix a = euler_system().matrix(x, eps);
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t j = (i + 1) % 3, k = (i + 2) % 3;
    const auto r = static_cast<Eigen::Index>(i);
    CHECK(a(r, r) == 1.0);
    CHECK(std::abs(a(r, static_cast<Eigen::Index>(j)) + eps * x[k]) < 1e-15);
    CHECK(std::abs(a(r, static_cast<Eigen::Index>(k)) + eps * x[j]) < 1e-15);
  }
}

TEST_CASE("polarized Kovalevskaya field gives the discrete Kovalevskaya system") {
  // y'_i - y_i = eps(-2 y_i y'_i + y'_i(y_j + y_k) + y_i(y'_j + y'_k))
  const StateVector y{0.4, 1.3, -0.6};
  const double eps = 0.05;
  const Matrix a = polarize(*kovalevskaya3().field).matrix(y, eps);
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t j = (i + 1) % 3, k = (i + 2) % 3;
    const auto r = static_cast<Eigen::Index>(i);
    CHECK(std::abs(a(r, r) - (1.0 - eps * (-2.0 * y[i] + y[j] + y[k]))) < 1e-15);
    CHECK(std::abs(a(r, static_cast<Eigen::Index>(j)) + eps * y[i]) < 1e-15);
    CHECK(std::abs(a(r, static_cast<Eigen::Index>(k)) + eps * y[i]) < 1e-15);
  }
}

TEST_CASE("zero field polarizes to the identity") {
  const auto sys = polarize(QuadraticField(4, std::span<const QuadraticTerm>{}));
  const Matrix a = sys.matrix(StateVector{1.0, 2.0, 3.0, 4.0}, 0.3);
  CHECK(a.isIdentity(0.0));
  CHECK(hk_step(sys, StateVector{1.0, 2.0, 3.0, 4.0}, 0.3) == StateVector{1.0, 2.0, 3.0, 4.0});
}

TEST_CASE("hk_step examples") {
  const auto y = hk_step(euler_system(), StateVector{1.0, 1.0, 1.0}, 0.1);
  for (double v : y) CHECK(std::abs(v - 1.25) < 1e-14);

  const StateVector p{0.3, -0.7, 1.9};
  CHECK(hk_step(euler_system(), p, 0.0) == p);

  const auto z = hk_step(kov_system(4), StateVector{1.0, 1.0, 1.0, 1.0}, 0.1);
  for (double v : z) CHECK(std::abs(v - 5.0 / 3.0) < 1e-14);
}

TEST_CASE("hk_step reports singular step matrices") {
  // On the diagonal det A = (1 + eps c)^2 (1 - 2 eps c), singular at c = 1/(2 eps).
  try {
    hk_step(euler_system(), StateVector{5.0, 5.0, 5.0}, 0.1);
    FAIL("expected a singular step");
  } catch (const SingularStepError& e) {
    CHECK(e.eps() == 0.1);
    CHECK(e.point() == std::vector<double>{5.0, 5.0, 5.0});
  }
  CHECK_THROWS_AS(hk_step(euler_system(), StateVector{1.0, 2.0, 3.0, 4.0}, 0.1), DimensionError);
}

TEST_CASE("inverse step is the step at -eps") {
  const StateVector x{1.0, 2.0, 3.0};
  CHECK(testing::max_rel_diff(hk_inverse_step(euler_system(), hk_step(euler_system(), x, 0.05), 0.05),
                              x) < 1e-12);
  CHECK(hk_inverse_step(euler_system(), x, 0.0) == x);
  const StateVector y{1.0, 2.0, 3.0, 4.0};
  CHECK(testing::max_rel_diff(hk_inverse_step(kov_system(4), hk_step(kov_system(4), y, 0.02), 0.02),
                              y) < 1e-12);
}

TEST_CASE("explicit step matrix of the generalized system") {
  CHECK(build_A_generalized_kov(3, StateVector{1.0, 2.0, 3.0}, 0.0).isIdentity(0.0));

  const Matrix a = build_A_generalized_kov(3, StateVector{1.0, 1.0, 1.0}, 0.1);
  for (Eigen::Index i = 0; i < 3; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j) {
      CHECK(std::abs(a(i, j) - (i == j ? 1.0 : -0.1)) < 1e-15);
    }
  }

  std::mt19937_64 rng(17);
  for (std::size_t n = 3; n <= 8; ++n) {
    const auto sys = kov_system(n);
    for (int t = 0; t < 20; ++t) {
      const auto y = testing::uniform_point(rng, n, -2.0, 2.0);
      const double eps = testing::uniform(rng, -0.2, 0.2);
      const Matrix direct = build_A_generalized_kov(n, y, eps);
      CHECK((direct - sys.matrix(y, eps)).cwiseAbs().maxCoeff() < 1e-14);

      // A = diag(d) - eps y 1^T with d_i = 1 - eps(-4 y_i + s).
      const auto d = hk_d_coefficients(y, eps);
      Matrix rank_one(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          rank_one(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
              (i == j ? d[i] : 0.0) - eps * y[i];
        }
      }
      CHECK((direct - rank_one).cwiseAbs().maxCoeff() < 1e-14);
    }
  }
  CHECK_THROWS_AS(build_A_generalized_kov(4, StateVector{1.0, 2.0, 3.0}, 0.1), DimensionError);
}

TEST_CASE("bilinear steps are consistent with the field") {
  std::mt19937_64 rng(23);
  for (const auto& flow : {euler_top3(), kovalevskaya3(), generalized_kovalevskaya(5, 2.0)}) {
    const auto sys = polarize(*flow.field);
    const auto y = testing::uniform_point(rng, flow.dim, 0.2, 1.0);
    const auto f = flow(y);
    std::vector<double> eps_list, residuals;
    for (double eps : {1e-2, 5e-3, 2.5e-3, 1.25e-3}) {
      const auto next = hk_step(sys, y, eps);
      double r = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) {
        r = std::max(r, std::abs((next[i] - y[i]) / (2.0 * eps) - f[i]));
      }
      eps_list.push_back(eps);
      residuals.push_back(r);
    }
    const double slope = std::log(residuals.front() / residuals.back()) /
                         std::log(eps_list.front() / eps_list.back());
    CHECK(slope == doctest::Approx(1.0).epsilon(0.05));
  }
}

TEST_CASE("one bilinear step has local error of order three in eps") {
  std::mt19937_64 rng(29);
  const auto flow = generalized_kovalevskaya(4, 2.0);
  const auto sys = polarize(*flow.field);
  const auto y = testing::uniform_point(rng, 4, 0.2, 1.0);
  std::vector<double> errs;
  const std::vector<double> eps_list{8e-3, 4e-3, 2e-3};
  for (double eps : eps_list) {
    const auto ref = integrate_reference(flow, y, 2.0 * eps, 2.0 * eps / 64.0).final_state();
    errs.push_back(testing::max_abs_diff(hk_step(sys, y, eps), ref));
  }
  const double slope = std::log(errs.front() / errs.back()) / std::log(eps_list.front() / eps_list.back());
  CHECK(slope == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("Jacobian determinant of a bilinear step") {
  // det(dy'/dy) = det A(y', -eps) / det A(y, eps)
  std::mt19937_64 rng(31);
  for (const auto& flow : {euler_top3(), kovalevskaya3(), generalized_kovalevskaya(4, 2.0),
                           generalized_kovalevskaya(6, 2.0)}) {
    const auto sys = polarize(*flow.field);
    for (int t = 0; t < 10; ++t) {
      const auto y = testing::uniform_point(rng, flow.dim, 0.1, 2.0);
      const double eps = testing::uniform(rng, 0.005, 0.05);
      const auto next = hk_step(sys, y, eps);
      const double jac =
          fd_jacobian([&](const StateVector& p) { return hk_step(sys, p, eps); }, y).determinant();
      const double expected = sys.matrix(next, -eps).determinant() / sys.matrix(y, eps).determinant();
      CHECK(testing::rel_err(jac, expected) < 1e-6);
    }
  }
}

TEST_CASE("generic solver reproduces the explicit discrete Euler top") {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 100; ++t) {
    const auto x = testing::uniform_point(rng, 3, -2.0, 2.0);
    const double eps = testing::uniform(rng, -0.1, 0.1);
    CHECK(testing::max_rel_diff(hk_step(euler_system(), x, eps), euler_hk_explicit(x, eps)) < 1e-13);
  }
}
