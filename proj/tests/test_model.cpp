#include <doctest.h>

#include <cmath>

#include "dgp/errors.hpp"
#include "dgp/model.hpp"
#include "dgp/model_io.hpp"
#include "models.hpp"

using namespace dgp;

TEST_CASE("expansion of the Keizer rate laws") {
  RateExpansion e = build_expansion(testmodels::keizer());
  CHECK(e.mu0(1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(e.mu1(1.0) == doctest::Approx(0.0));
  CHECK(e.lambda0(1.0) == doctest::Approx(2.0).epsilon(1e-14));  // x^2 + x at 1
  CHECK(e.lambda1(1.0) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("expansion of the Poisson model is constant birth") {
  RateExpansion e = build_expansion(testmodels::poisson(1.0, 2.0));
  CHECK(e.mu0(0.7) == doctest::Approx(1.0));
  CHECK(e.mu1(0.7) == doctest::Approx(0.0));
  CHECK(e.lambda0(0.7) == doctest::Approx(1.4));
}

TEST_CASE("divergent volume exponents are rejected") {
  BirthDeathModel m;
  m.birthTerms = {{1.0, 2, 0}};  // a + k - 1 = 1 > 0
  m.deathTerms = {RateTerm::mass_action(1.0, 1)};
  CHECK_THROWS_AS(build_expansion(m), ModelError);
}

TEST_CASE("evaluate_rates: hand values") {
  auto [u, w] = evaluate_rates(testmodels::keizer(), 10.0, 5);
  CHECK(u == doctest::Approx(10.0));
  CHECK(w == doctest::Approx(7.0));  // 5*4/10 + 5

  auto [u2, w2] = evaluate_rates(testmodels::poisson(1.0, 2.0), 10.0, 3);
  CHECK(u2 == doctest::Approx(10.0));
  CHECK(w2 == doctest::Approx(6.0));
}

TEST_CASE("falling factorial annihilates below its order") {
  // single order-3 term: zero at n = 0, 1, 2
  BirthDeathModel m;
  m.birthTerms = {RateTerm::mass_action(2.0, 3)};
  m.deathTerms = {RateTerm::mass_action(1.0, 1)};
  for (long long n : {0, 1, 2}) CHECK(birth_rate(m, 5.0, n) == 0.0);
  CHECK(birth_rate(m, 5.0, 3) == doctest::Approx(2.0 * 6.0 / 25.0));
}

TEST_CASE("absorbing state: all birth orders >= 1 give u_0 = 0") {
  CHECK(birth_rate(testmodels::keizer(), 50.0, 0) == 0.0);
}

TEST_CASE("negative evaluated rate names the term") {
  BirthDeathModel m;
  m.birthTerms = {{1.0, 0, 1}, {-1.0, 1, 0}};  // u_n = V - n
  m.deathTerms = {RateTerm::mass_action(1.0, 1)};
  CHECK_NOTHROW(evaluate_rates(m, 4.0, 4));  // u = 0 exactly
  CHECK_THROWS_AS(evaluate_rates(m, 4.0, 7), ModelError);
}

TEST_CASE("expansion order: V^2-scaled residual stays bounded as V doubles") {
  for (const auto& model :
       {testmodels::keizer(), testmodels::schlogl(), testmodels::binomial()}) {
    RateExpansion e = build_expansion(model);
    double prevResidual = 0.0;
    bool first = true;
    for (double V : {100.0, 200.0, 400.0}) {
      double worst = 0.0;
      for (double x = 0.1; x < 0.95; x += 0.1) {
        long long n = static_cast<long long>(std::floor(x * V));
        double xn = n / V;  // evaluate the expansion at the floored state
        double r = std::abs(birth_rate(model, V, n) / V - e.mu0(xn) - e.mu1(xn) / V) +
                   std::abs(death_rate(model, V, n) / V - e.lambda0(xn) - e.lambda1(xn) / V);
        worst = std::max(worst, r * V * V);
      }
      if (!first) CHECK(worst <= prevResidual * 4.0 + 1e-6);
      prevResidual = worst;
      first = false;
    }
  }
}

TEST_CASE("mass-action expansion is exact for polynomial rate laws") {
  // keizer has no O(V^-2) tail: residual should be ~0
  auto model = testmodels::keizer();
  RateExpansion e = build_expansion(model);
  double V = 1000.0;
  for (long long n : {100, 500, 900}) {
    double x = n / V;
    CHECK(death_rate(model, V, n) / V ==
          doctest::Approx(e.lambda0(x) + e.lambda1(x) / V).epsilon(1e-13));
  }
}

TEST_CASE("fixed points of the Poisson model") {
  auto fps = find_fixed_points(build_expansion(testmodels::poisson(1.0, 2.0)), 0.0, 2.0);
  REQUIRE(fps.size() == 1);
  CHECK(fps[0].location == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(fps[0].stability == Stability::Stable);
}

TEST_CASE("fixed points of the Keizer model") {
  auto fps = find_fixed_points(build_expansion(testmodels::keizer()), -0.5, 2.0);
  REQUIRE(fps.size() == 2);
  CHECK(fps[0].location == doctest::Approx(0.0));
  CHECK(fps[0].stability == Stability::Unstable);
  CHECK(fps[1].location == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(fps[1].stability == Stability::Stable);
}

TEST_CASE("bistable cubic: three alternating fixed points") {
  auto fps = find_fixed_points(build_expansion(testmodels::schlogl()), 0.0, 5.0);
  REQUIRE(fps.size() == 3);
  CHECK(fps[0].location == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(fps[1].location == doctest::Approx(1.2).epsilon(1e-9));
  CHECK(fps[2].location == doctest::Approx(3.2).epsilon(1e-9));
  CHECK(fps[0].stability == Stability::Stable);
  CHECK(fps[1].stability == Stability::Unstable);
  CHECK(fps[2].stability == Stability::Stable);
}

TEST_CASE("model JSON round trip") {
  auto m = testmodels::schlogl_family();
  auto m2 = model_from_json(model_to_json(m));
  REQUIRE(m2.birthTerms.size() == 2);
  CHECK(m2.birthTerms[0].c == doctest::Approx(4.7));
  CHECK(m2.birthTerms[0].order == 2);
  CHECK(m2.birthTerms[0].vexp == -1);
  REQUIRE(m2.scan.has_value());
  CHECK(m2.scan->name == "mu");
  CHECK(m2.scan->targets.size() == 1);
}

TEST_CASE("model JSON defaults vexp to mass action") {
  auto m = model_from_json(R"({"birth":[{"c":1.0,"order":2}],"death":[{"c":1.0,"order":1}]})");
  CHECK(m.birthTerms[0].vexp == -1);
  CHECK(m.deathTerms[0].vexp == 0);
}

TEST_CASE("malformed model JSON raises a model error") {
  CHECK_THROWS_AS(model_from_json("{"), ModelError);
  CHECK_THROWS_AS(model_from_json(R"({"birth":[]})"), ModelError);
  CHECK_THROWS_AS(model_from_json(R"({"birth":[{"c":1.0}],"death":[]})"), ModelError);
}

TEST_CASE("with_parameter writes the scanned coefficient") {
  auto fam = testmodels::schlogl_family();
  auto m = fam.with_parameter(0.7);
  CHECK(m.birthTerms[1].c == doctest::Approx(0.7));
  CHECK_THROWS_AS(testmodels::schlogl().with_parameter(0.7), ModelError);
}
