#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "approxcc/budget.hpp"

using namespace approxcc;

TEST_CASE("splitTotal uses the libm estimate as the roundoff part") {
  auto [fl, approx] = splitTotal(1e-13, 3.44e-15);
  CHECK(fl == 3.44e-15);
  CHECK(approx == doctest::Approx(9.656e-14).epsilon(1e-9));

  auto [fl2, approx2] = splitTotal(2 * 3.44e-15, 3.44e-15);
  CHECK(approx2 == 3.44e-15);

  CHECK_THROWS_AS(splitTotal(1e-16, 3.44e-15), Error);
  try {
    splitTotal(1e-16, 3.44e-15);
  } catch (const Error& e) {
    CHECK(e.code == ErrCode::BudgetExhausted);
    CHECK(std::string(e.what()).find("minimum") != std::string::npos);
  }
}

TEST_CASE("equal distribution") {
  auto s = distribute(9e-14, 2, Distribution::Equal, {1.0, 1.0});
  CHECK(s[0] == 4.5e-14);
  CHECK(s[1] == 4.5e-14);
  auto one = distribute(7e-14, 1, Distribution::Equal, {1.0});
  CHECK(one[0] == 7e-14);
}

TEST_CASE("derivative distribution weights are m / sum(m)") {
  auto s = distribute(6e-14, 2, Distribution::Derivative, {0.5, 2.5});
  CHECK(s[0] == doctest::Approx(1e-14).epsilon(1e-12));
  CHECK(s[1] == doctest::Approx(5e-14).epsilon(1e-12));
  CHECK(s[0] + s[1] <= 6e-14);
}

TEST_CASE("conservation within one ulp") {
  for (double tauA : {9e-14, 1e-10, 3.7e-7}) {
    for (size_t n : {1, 2, 3, 5, 7}) {
      std::vector<double> m(n);
      for (size_t i = 0; i < n; ++i) m[i] = 0.25 + static_cast<double>(i);
      for (auto strat : {Distribution::Equal, Distribution::Derivative}) {
        auto s = distribute(tauA, n, strat, m);
        double sum = 0;
        for (double v : s) {
          CHECK(v > 0.0);
          sum += v;
        }
        CHECK(sum <= tauA);
        CHECK(tauA - sum <= std::nextafter(tauA, 1.0) - tauA + 1e-30);
      }
    }
  }
}

TEST_CASE("all-zero m falls back to equal") {
  auto s = distribute(8e-14, 2, Distribution::Derivative, {0.0, 0.0});
  CHECK(s[0] == 4e-14);
  CHECK(s[1] == 4e-14);
}

TEST_CASE("toLocal applies the propagation factor") {
  CHECK(toLocal(5e-14, 2.5, 0.0) == 2e-14);
  CHECK(toLocal(5e-14, 1.0, 0.0) == 5e-14);
  // dead call: capped by the function's output range width
  CHECK(toLocal(5e-14, 0.0, 2.0) == 2.0);
}

TEST_CASE("forwardk2jY derivative strategy gives equal local budgets") {
  // w_i = m_i / sum(m), eps_i = tau_i / m_i = tauApprox / sum(m)
  double tauApprox = 9.656e-14;
  auto s = distribute(tauApprox, 2, Distribution::Derivative, {0.5, 2.5});
  double e1 = toLocal(s[0], 0.5, 0.0);
  double e2 = toLocal(s[1], 2.5, 0.0);
  CHECK(e1 == doctest::Approx(tauApprox / 3.0).epsilon(1e-12));
  CHECK(e2 == doctest::Approx(tauApprox / 3.0).epsilon(1e-12));
}

TEST_CASE("allocate assembles a consistent allocation") {
  BudgetAllocation ba = allocate(1e-13, 3.44e-15, {"v1", "v2"}, Distribution::Derivative,
                                 {0.5, 2.5}, {0.0, 0.0});
  CHECK(ba.tauApprox == 1e-13 - 3.44e-15);
  REQUIRE(ba.targets.size() == 2);
  CHECK(ba.targets[0].epsLocal == doctest::Approx(ba.tauApprox / 3.0));
  CHECK(ba.targets[1].epsLocal == doctest::Approx(ba.tauApprox / 3.0));
  double sum = ba.targets[0].tau + ba.targets[1].tau;
  CHECK(sum <= ba.tauApprox);
}
