#include <doctest.h>

#include <cmath>
#include <random>
#include <map>
#include <set>

#include "kov/flows.hpp"
#include "kov/invariants.hpp"
#include "kov/maps.hpp"
#include "kov/study.hpp"
#include "support.hpp"

using namespace kov;

namespace {

const Invariant& by_name(const std::vector<Invariant>& invs, const std::string& name) {
  for (const auto& inv : invs) {
    if (inv.name == name) return inv;
  }
  FAIL("missing invariant " << name);
  throw std::logic_error("unreachable");
}

double hk4_phi(const StateVector& y, double eps) {
  const double b = y[0] + y[1] - y[2] - y[3];
  return 1.0 / std::sqrt(1.0 - eps * eps * b * b);
}

double dkow_phi(const StateVector& y, double eps) {
  const double b = y[0] - y[1] + y[2];
  return 1.0 / (1.0 - eps * eps * b * b);
}

}  // namespace

TEST_CASE("registry examples") {
  const auto r3 = family(3, "kov");
  REQUIRE(r3.size() == 3);
  const StateVector y{1.0, 2.0, 3.0};
  CHECK(by_name(r3, "K23")(y) == -1.0);
  CHECK(by_name(r3, "K31")(y) == 4.0);
  CHECK(by_name(r3, "K12")(y) == -3.0);
  CHECK(r3[0](y) + r3[1](y) + r3[2](y) == 0.0);

  const StateVector z{1.0, 2.0, 3.0, 4.0};
  const auto p = family(4, "P");
  REQUIRE(p.size() == 3);
  CHECK(p[0](z) == 1.0);
  CHECK(p[1](z) == 4.0);
  CHECK(p[2](z) == 3.0);
  CHECK(p[0](z) - p[1](z) + p[2](z) == 0.0);

  const auto k4 = family(4, "kov");
  const double k12 = by_name(k4, "K12")(z);
  CHECK(std::abs(k12 + std::sqrt(6.0)) < 1e-14);
  CHECK(std::abs(k12 * by_name(k4, "K34")(z) - p[0](z)) < 1e-14);

  CHECK(family(3, "hk4").empty());
  CHECK(family(5, "P").empty());
  CHECK(family(4, "nonsense").empty());
  CHECK_THROWS_AS(registry(2), DimensionError);
}

TEST_CASE("registry shapes") {
  const std::map<std::string, std::size_t> sizes3{{"kov", 3},      {"euler", 3}, {"euler-hk", 9},
                                                  {"dkow", 9},     {"jfg", 9},   {"cross-ratio", 2}};
  for (const auto& [name, size] : sizes3) {
    CAPTURE(name);
    CHECK(family(3, name).size() == size);
  }
  CHECK(family(4, "hk4").size() == 18);
  CHECK(family(4, "alt4").size() == 18);
  CHECK(family(5, "kov").size() == 10);
  CHECK(family(5, "cross-ratio").size() == 9);
  CHECK(family(3, "cross-ratio").size() == 2);

  for (std::size_t n : {3u, 4u, 6u}) {
    std::set<std::string> seen;
    for (const auto& inv : registry(n)) {
      CHECK(inv.dim == n);
      CHECK_FALSE(inv.claimed_for.empty());
      CHECK(seen.insert(inv.family + "/" + inv.name).second);
    }
  }
  CHECK(family(3, "kov")[0].claimed("kovalevskaya3"));
  CHECK(family(4, "hk4")[0].claimed("gen-hk"));
  CHECK_FALSE(family(4, "hk4")[0].claimed("alt-map"));
  CHECK(family(4, "alt4")[0].claimed("alt-map"));
  for (const auto& inv : claimed_by(4, "alt-map")) CHECK(inv.claimed("alt-map"));
}

TEST_CASE("fractional powers are real only on the positive orthant") {
  const auto k4 = family(4, "kov");
  CHECK_THROWS_AS(k4[0](StateVector{-1.0, 2.0, 3.0, 4.0}), DomainError);
  const auto hk4 = family(4, "hk4");
  // 1 - eps^2 (y_1 + y_2 - y_3 - y_4)^2 < 0
  CHECK_THROWS_AS(hk4[0](StateVector{10.0, 20.0, 3.0, 4.0}, 0.1), DomainError);
  // Polynomial families accept any sign.
  CHECK(family(3, "kov")[0](StateVector{-1.0, 2.0, -3.0}) == -1.0 * (2.0 + 3.0));
}

TEST_CASE("cross ratios") {
  const StateVector y{1.0, 2.0, 3.0, 4.0};
  CHECK(std::abs(cross_ratio(y, 0, 1, 2, 3) - 6.0) < 1e-15);
  CHECK(std::abs(cross_ratio(y, 1, 0, 2, 3) + 6.0) < 1e-15);
  CHECK(cross_ratio(StateVector{2.0, 2.0, 3.0, 4.0}, 0, 1, 2, 3) == 0.0);
  CHECK_THROWS_AS(cross_ratio(StateVector{0.0, 2.0, 3.0, 4.0}, 0, 1, 2, 3), DomainError);
  CHECK_THROWS_AS(cross_ratio(StateVector{1.0, 2.0, 3.0, 3.0}, 0, 1, 2, 3), DomainError);
  CHECK_THROWS_AS(cross_ratio(y, 0, 1, 2, 7), IndexError);
  CHECK(std::abs(h_ratio(y, 0, 1) + 0.5) < 1e-15);
}

TEST_CASE("drift report examples") {
  const StateVector y0{1.0, 2.0, 3.0, 4.0};
  SUBCASE("cross-ratio under the bilinear map") {
    const auto inv = by_name(family(4, "cross-ratio"), "K12/K34");
    const auto r = drift_report(map_by_name("gen-hk", 4), inv, y0, 0.01, 10000);
    CHECK(r.max_rel_drift < 1e-10);
    CHECK(r.stop_kind != StopKind::domain);
    CHECK(r.steps == 10000);
  }
  SUBCASE("alternative-map integral holds until it leaves its real domain") {
    // The orbit grows past eps^2 y_i y_j = 1 long before 10^4 steps.
    const auto inv = by_name(family(4, "alt4"), "K12[12|34]");
    const auto r = drift_report(map_by_name("alt-map", 4), inv, y0, 0.01, 10000);
    CHECK(r.max_rel_drift < 1e-10);
    REQUIRE(r.first_blowup_step.has_value());
    CHECK(r.stop_kind == StopKind::domain);
    CHECK(*r.first_blowup_step > 10);
  }
  SUBCASE("identity map") {
    const auto r = drift_report(map_by_name("gen-hk", 4), family(4, "kov")[0], y0, 0.0, 1);
    CHECK(r.max_rel_drift == 0.0);
    CHECK_FALSE(r.first_blowup_step.has_value());
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(drift_report(map_by_name("gen-hk", 4), family(4, "kov")[0], y0, 0.01, 0),
                    ParameterError);
    CHECK_THROWS_AS(drift_report(map_by_name("gen-hk", 4), family(3, "kov")[0], y0, 0.01, 5),
                    DimensionError);
  }
  SUBCASE("orbit failures are recorded, not thrown") {
    // Starts on the singular diagonal c = 1/(2 eps) of the Euler top.
    const auto r = drift_report(map_by_name("euler-hk"), family(3, "euler-hk")[0],
                                StateVector{5.0, 5.0, 5.0}, 0.1, 10);
    REQUIRE(r.first_blowup_step.has_value());
    CHECK(*r.first_blowup_step == 1);
    CHECK(r.stop_kind == StopKind::orbit);
  }
}

TEST_CASE("volume checks") {
  CHECK(volume_check(map_by_name("gen-hk", 4), psi_cross(0, 1), StateVector{1.0, 2.0, 3.0, 4.0},
                     0.05) < 1e-5);
  CHECK(volume_check(map_by_name("alt-map", 5), psi_cross(0, 1),
                     StateVector{1.0, 2.0, 3.0, 4.0, 5.0}, 0.02) < 1e-5);
  CHECK(volume_check(map_by_name("gen-hk", 4), psi_cross(0, 1), StateVector{1.0, 2.0, 3.0, 4.0},
                     0.0) < 1e-9);
  CHECK_THROWS_AS(volume_check(map_by_name("gen-hk", 4), psi_cross(0, 1),
                               StateVector{1.0, 1.0, 3.0, 4.0}, 0.05),
                  DomainError);

  std::mt19937_64 rng(61);
  for (int t = 0; t < 10; ++t) {
    const auto x = testing::uniform_point(rng, 3, -1.0, 1.0);
    const auto y = random_admissible_start(rng, 3);
    const double eps = testing::uniform(rng, 0.005, 0.05);
    CHECK(volume_check(map_by_name("euler-hk"), psi_euler_hk(t % 3), x, eps) < 1e-5);
    CHECK(volume_check(map_by_name("dkow"), psi_dkow(t % 3), y, eps) < 1e-5);
    CHECK(volume_check(map_by_name("jfg"), psi_jfg(t % 3, (t + 1) % 3), y, eps) < 1e-5);
    CHECK(volume_check(map_by_name("pp"), psi_jfg(t % 3, (t + 1) % 3), y, eps) < 1e-5);
    for (std::size_t n : {4u, 6u}) {
      const auto z = random_admissible_start(rng, n);
      CHECK(volume_check(map_by_name("gen-hk", n), psi_cross(0, 2), z, eps) < 1e-5);
      CHECK(volume_check(map_by_name("alt-map", n), psi_cross(1, 3), z, eps) < 1e-5);
    }
  }
}

TEST_CASE("flow volume density via a small Runge-Kutta step") {
  std::mt19937_64 rng(67);
  for (std::size_t n : {3u, 4u, 5u}) {
    for (double alpha : {2.0, 0.5}) {
      const auto flow = generalized_kovalevskaya(n, alpha);
      const DiscreteMap rk{"rk4", n,
                           [flow](const StateVector& y, double dt) { return rk4_step(flow, y, dt); }};
      const auto phi = phi_flow(n, alpha);
      const auto y = random_admissible_start(rng, n, 0.1, 1.0);
      CHECK(volume_check(rk, phi, y, 1e-3) < 1e-5);
    }
  }
}

TEST_CASE("independence ranks") {
  CHECK(independence_rank(family(3, "kov"), StateVector{1.0, 2.0, 3.0}, 0.0) == 2);
  CHECK(independence_rank(family(4, "kov"), StateVector{1.0, 2.0, 3.0, 4.0}, 0.0) == 3);
  CHECK(independence_rank(family(4, "cross-ratio"), StateVector{1.0, 2.0, 3.0, 4.0}, 0.0) == 2);

  std::mt19937_64 rng(71);
  for (int t = 0; t < 5; ++t) {
    const auto y3 = random_admissible_start(rng, 3, 0.1, 2.0, 0.05);
    const auto y4 = random_admissible_start(rng, 4, 0.1, 2.0, 0.05);
    const auto y6 = random_admissible_start(rng, 6, 0.1, 2.0, 0.05);
    const auto x3 = testing::uniform_point(rng, 3, 0.1, 2.0);
    CHECK(independence_rank(family(3, "euler"), x3, 0.0) == 2);
    CHECK(independence_rank(family(3, "euler-hk"), x3, 0.05) == 2);
    CHECK(independence_rank(family(3, "dkow"), y3, 0.05) == 2);
    CHECK(independence_rank(family(3, "jfg"), y3, 0.05) == 2);
    CHECK(independence_rank(family(4, "P"), y4, 0.0) == 2);
    CHECK(independence_rank(family(4, "hk4"), y4, 0.05) == 3);
    CHECK(independence_rank(family(4, "alt4"), y4, 0.05) == 3);
    CHECK(independence_rank(family(6, "kov"), y6, 0.0) == 5);
    CHECK(independence_rank(family(6, "euler"), y6, 0.0) == 5);
    CHECK(independence_rank(family(6, "cross-ratio"), y6, 0.0) == 4);
  }
}

TEST_CASE("defect order") {
  const std::vector<double> eps_list{1e-2, 5e-3, 2.5e-3, 1.25e-3};
  const StateVector y4{1.0, 2.0, 3.0, 4.0};

  CHECK(defect_order(map_by_name("gen-hk", 4), by_name(family(4, "hk4"), "K12[12|34]"), y4,
                     eps_list) == kExactSlope);

  // eps-free K23 under the pull-back map drifts at order two over a fixed time.
  const auto study = defect_study(map_by_name("pp"), family(3, "kov")[0], StateVector{1.0, 2.0, 3.0},
                                  eps_list);
  CHECK(study.slope == doctest::Approx(2.0).epsilon(0.075));
  CHECK(study.steps == std::vector<std::size_t>{1, 2, 4, 8});
  // A single step loses one more order.
  CHECK(defect_order(map_by_name("pp"), family(3, "kov")[0], StateVector{1.0, 2.0, 3.0}, eps_list,
                     0.0) == doctest::Approx(3.0).epsilon(0.05));

  const auto zero = defect_study(map_by_name("gen-hk", 4), family(4, "kov")[0], y4, {0.0});
  CHECK(zero.defects == std::vector<double>{0.0});

  CHECK_THROWS_AS(defect_order(map_by_name("pp"), family(3, "kov")[0], StateVector{1.0, 2.0, 3.0},
                               {1e-3, 1e-2}),
                  ParameterError);
}

TEST_CASE("functional equation for the integrating factor") {
  CHECK(verify_phi_functional_equation(3, StateVector{1.0, 2.0, 3.0}, 0.05, dkow_phi) < 1e-12);
  CHECK(verify_phi_functional_equation(4, StateVector{1.0, 2.0, 3.0, 4.0}, 0.05, hk4_phi) < 1e-12);
  CHECK(verify_phi_functional_equation(4, StateVector{1.0, 2.0, 3.0, 4.0}, 0.0,
                                       [](const StateVector&, double) { return 1.0; }) == 0.0);
  CHECK_THROWS_AS(verify_phi_functional_equation(4, StateVector{-1.0, 2.0, 3.0, 4.0}, 0.05, hk4_phi),
                  DomainError);
}

TEST_CASE("polynomial identity at N = 4") {
  CHECK(verify_poly_identity_N4(StateVector{1.0, 2.0, 3.0, 4.0}, 0.1) < 1e-13);
  CHECK(verify_poly_identity_N4(StateVector{1.0, 2.0, 3.0, 4.0}, 0.0) == 0.0);
  CHECK(verify_poly_identity_N4(StateVector{1.0, 1.0, 1.0, 1.0}, 0.3) < 1e-13);
  CHECK_THROWS_AS(verify_poly_identity_N4(StateVector{1.0, 2.0, 3.0}, 0.1), DimensionError);
}

TEST_CASE("index-free ratio relations") {
  CHECK(verify_relation_qq(RelationMap::gen_hk, StateVector{1.0, 2.0, 3.0, 4.0, 5.0}, 0.02) < 1e-13);
  CHECK(verify_relation_qq(RelationMap::alt_map, StateVector{1.0, 2.0, 3.0, 4.0}, 0.05) < 1e-13);
  CHECK(verify_relation_qq(RelationMap::alt_map, StateVector{1.0, 2.0, 3.0, 4.0}, 0.0) == 0.0);
  CHECK_THROWS_AS(verify_relation_qq(RelationMap::gen_hk, StateVector{1.0, 1.0, 3.0, 4.0}, 0.02),
                  DomainError);
}

TEST_CASE("every claimed invariant is conserved along every claiming map") {
  // Orbits from [0.1, 2]^N pass close to the singular locus, where rounding
  // the state to double alone moves F by more than 1e-9. Conservation is
  // therefore asserted against the accumulated rounding bound; the literal
  // 1e-9 threshold is reported by the acceptance suite.
  for (std::size_t n : {3u, 4u, 5u}) {
    for (const auto& name : map_names()) {
      const auto map = map_by_name(name, n);
      if (map.dim != n) continue;
      const auto invs = claimed_by(n, name);
      if (invs.empty()) continue;
      const auto trials = drift_batch(map, invs, n, 0.01, 1000, 20, 1);
      for (const auto& row : summarize(trials)) {
        CAPTURE(name);
        CAPTURE(row.invariant);
        CHECK(row.rounding_ratio < 256.0);
        CHECK(row.max_rel_drift < 1e-6);
      }
    }
  }
}

TEST_CASE("the rounding bound separates integrals from non-integrals") {
  // K23 without its eps correction is not conserved by the discrete maps.
  const auto k23 = family(3, "kov")[0];
  for (const char* name : {"jfg", "pp", "dkow", "gen-hk", "alt-map"}) {
    const auto trials = drift_batch(map_by_name(name, 3), {k23}, 3, 0.01, 1000, 5, 1);
    CAPTURE(name);
    CHECK(summarize(trials).front().rounding_ratio > 1e6);
  }
  const auto e23 = family(3, "euler")[0];
  const auto trials = drift_batch(map_by_name("euler-hk"), {e23}, 3, 0.01, 1000, 5, 1);
  CHECK(summarize(trials).front().rounding_ratio > 1e6);
}

TEST_CASE("well-conditioned orbits meet the absolute drift threshold") {
  // Small starts keep the orbit away from the singular locus for 300 steps.
  std::mt19937_64 rng(83);
  for (std::size_t n : {3u, 4u, 5u}) {
    for (const auto& name : map_names()) {
      const auto map = map_by_name(name, n);
      if (map.dim != n) continue;
      for (int t = 0; t < 5; ++t) {
        const auto y0 = random_admissible_start(rng, n, 0.005, 0.03);
        for (const auto& r : drift_reports(map, claimed_by(n, name), y0, 0.01, 300)) {
          CAPTURE(name);
          CAPTURE(r.invariant);
          CHECK(r.max_rel_drift < 1e-12);
          CHECK(r.stop_kind == StopKind::none);
        }
      }
    }
  }
}

TEST_CASE("ratio of two volume densities is conserved") {
  const auto map = map_by_name("gen-hk", 5);
  const auto a = psi_cross(0, 1);
  const auto b = psi_cross(2, 4);
  const Invariant ratio{"psi12/psi35", 5,
                        [a, b](const StateVector& y, double eps) { return a(y, eps) / b(y, eps); },
                        {"gen-hk"}, "psi"};
  std::mt19937_64 rng(73);
  for (int t = 0; t < 5; ++t) {
    const auto y0 = random_admissible_start(rng, 5, 0.1, 1.0);
    const auto r = drift_report(map, ratio, y0, 0.01, 1000);
    CHECK(r.max_rel_drift < 1e-10);
  }
}

TEST_CASE("discrete densities reduce to K^(N-1) times the flow density") {
  std::mt19937_64 rng(79);
  for (std::size_t n = 3; n <= 7; ++n) {
    const auto k12 = by_name(family(n, "kov"), "K12");
    const auto phi = phi_flow(n);
    for (int t = 0; t < 10; ++t) {
      const auto y = random_admissible_start(rng, n);
      const double lhs = psi_cross(0, 1)(y, 0.0);
      const double rhs = std::pow(k12(y), static_cast<double>(n - 1)) * phi(y, 0.0);
      CHECK(testing::rel_err(lhs, rhs) < 1e-12);
    }
  }
}

TEST_CASE("random admissible starts") {
  std::mt19937_64 a(5), b(5);
  for (int t = 0; t < 50; ++t) {
    const auto y = random_admissible_start(a, 6);
    CHECK(y == random_admissible_start(b, 6));
    for (std::size_t i = 0; i < 6; ++i) {
      CHECK(y[i] >= 0.1);
      CHECK(y[i] <= 2.0);
      for (std::size_t j = i + 1; j < 6; ++j) CHECK(std::abs(y[i] - y[j]) >= 1e-3);
    }
  }
}
