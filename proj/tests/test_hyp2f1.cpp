#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <htev/hyp2f1.hpp>

#include <cmath>
#include <complex>
#include <random>

using namespace htev;

namespace {

// Test-side shadow evaluator: the defining series summed in complex double
// arithmetic, valid for |x| < 1.  Completely independent of the production
// path (no Pfaff transform, no real-pair bookkeeping).
std::complex<double> direct_series(double s, double t, double c, double x) {
  const std::complex<double> a(s, -t), b(s, t);
  std::complex<double> term = 1.0, sum = 1.0;
  for (int k = 0; k < 200000; ++k) {
    const double kd = static_cast<double>(k);
    term *= (a + kd) * (b + kd) / ((c + kd) * (kd + 1.0)) * x;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum) && k > 5) break;
  }
  return sum;
}

} // namespace

TEST_CASE("frozen reference values at integer parameters") {
  // F(1,1;2;-1) = ln 2
  CHECK(gauss_2f1({1.0, 0.0, 2.0, -1.0}) ==
        doctest::Approx(0.6931471805599453).epsilon(1e-14));
  // F(2,2;3;-1)
  CHECK(gauss_2f1({2.0, 0.0, 3.0, -1.0}) ==
        doctest::Approx(0.3862943611198906).epsilon(1e-14));
  // F(1/2,1/2;1;-1)
  CHECK(gauss_2f1({0.5, 0.0, 1.0, -1.0}) ==
        doctest::Approx(0.8346268416740731862814297).epsilon(1e-14));
  // F at x = 0 is exactly 1 for any parameters
  CHECK(gauss_2f1({1.3, 7.0, 2.2, 0.0}) == 1.0);
}

TEST_CASE("derivative matches the parameter-shifted closed form and a difference quotient") {
  // d/dx F(1,1;2;x) at x=-1 equals (1*1/2) F(2,2;3;-1)
  CHECK(gauss_2f1_derivative({1.0, 0.0, 2.0, -1.0}) ==
        doctest::Approx(0.1931471805599453).epsilon(1e-13));

  const HypergeometricInput in{0.5, 3.0, 1.5, -2.0};
  const double h = 1e-6;
  const double fd = (gauss_2f1({in.s, in.t, in.c, in.x + h}) -
                     gauss_2f1({in.s, in.t, in.c, in.x - h})) /
                    (2.0 * h);
  CHECK(gauss_2f1_derivative(in) == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("agrees with the direct complex series on |x| < 1") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> xs(-0.9, 0.0);
  std::uniform_real_distribution<double> ts(0.0, 8.0);
  std::uniform_real_distribution<double> ss(0.0, 3.0);
  std::uniform_real_distribution<double> cs(0.5, 4.0);
  for (int trial = 0; trial < 40; ++trial) {
    const double s = ss(rng), t = ts(rng), c = cs(rng), x = xs(rng);
    const auto shadow = direct_series(s, t, c, x);
    const double got = gauss_2f1({s, t, c, x});
    // tolerance set by the shadow itself: plain double cancels ~2t asin(...)
    // digits, so it is the less accurate side here
    CHECK(std::abs(got - shadow.real()) <=
          1e-9 * std::max(1.0, std::abs(shadow.real())));
    // the conjugate-pair function is real
    CHECK(std::abs(shadow.imag()) <= 1e-10 * std::max(1.0, std::abs(shadow)));
  }
}

TEST_CASE("real parameter pairs (t^2 < 0) reduce to the right special cases") {
  // tau = s makes the second parameter 0, so F == 1 identically
  for (double x : {-0.3, -2.0, -50.0})
    CHECK(gauss_2f1_general(0.5, -0.25, 1.0, x) ==
          doctest::Approx(1.0).epsilon(1e-13));

  // small tau: continuous in t^2 across 0
  const double at_zero = gauss_2f1_general(1.0, 0.0, 1.5, -3.0);
  const double below = gauss_2f1_general(1.0, -1e-8, 1.5, -3.0);
  const double above = gauss_2f1_general(1.0, 1e-8, 1.5, -3.0);
  CHECK(below == doctest::Approx(at_zero).epsilon(1e-7));
  CHECK(above == doctest::Approx(at_zero).epsilon(1e-7));

  // direct real series shadow on |x| < 1
  auto direct_real = [](double a, double b, double c, double x) {
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < 100000; ++k) {
      term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum) && k > 5) break;
    }
    return sum;
  };
  for (double tau : {0.7, 2.5}) {
    const double s = 1.0, c = 1.5, x = -0.6;
    CHECK(gauss_2f1_general(s, -tau * tau, c, x) ==
          doctest::Approx(direct_real(s + tau, s - tau, c, x)).epsilon(1e-12));
  }
}

TEST_CASE("production evaluator matches the extended-precision oracle") {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> ts(0.0, 50.0);
  std::uniform_real_distribution<double> logx(0.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double t = ts(rng);
    const double x = -std::pow(10.0, logx(rng));
    const HypergeometricInput in{0.5, t, 1.0, x};
    const double ref = series_oracle(in, 25);
    const double got = gauss_2f1(in);
    CHECK(std::abs(got - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("oracle is stable under precision escalation") {
  const HypergeometricInput in{1.0, 20.0, 1.5, -100.0};
  const double lo = series_oracle(in, 15);
  const double hi = series_oracle(in, 40);
  CHECK(std::abs(lo - hi) <= 1e-14 * std::max(1.0, std::abs(hi)));
}

TEST_CASE("contiguous relation in c holds to near machine precision") {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> ts(0.0, 25.0);
  std::uniform_real_distribution<double> xs(-200.0, -0.01);
  for (int trial = 0; trial < 25; ++trial) {
    const double s = 0.5, t = ts(rng), c = 1.5, x = xs(rng);
    const double f_dn = gauss_2f1({s, t, c - 1.0, x});
    const double f_md = gauss_2f1({s, t, c, x});
    const double f_up = gauss_2f1({s, t, c + 1.0, x});
    // c(c-1)(x-1)F(c-1) + c[c-1-(2c-a-b-1)x]F(c) + (c-a)(c-b)xF(c+1) = 0
    // with a+b = 2s and (c-a)(c-b) = (c-s)^2 + t^2, all real.
    const double t1 = c * (c - 1.0) * (x - 1.0) * f_dn;
    const double t2 = c * (c - 1.0 - (2.0 * c - 2.0 * s - 1.0) * x) * f_md;
    const double t3 = ((c - s) * (c - s) + t * t) * x * f_up;
    const double scale =
        std::max({std::abs(t1), std::abs(t2), std::abs(t3), 1.0});
    CHECK(std::abs(t1 + t2 + t3) / scale <= 1e-10);
  }
}

TEST_CASE("precision tiers escalate with cancellation and report diagnostics") {
  EvaluationInfo easy;
  gauss_2f1({0.5, 1.0, 1.0, -0.5}, easy);
  CHECK(easy.working_digits == 16);
  CHECK(easy.terms > 0);

  EvaluationInfo hard;
  gauss_2f1({0.5, 50.0, 1.0, -1000.0}, hard);
  CHECK(hard.working_digits >= 100);
  CHECK(hard.cancellation_digits > 30.0);
  CHECK(hard.terms > 10000);
}

TEST_CASE("out-of-envelope inputs raise NumericFailure with diagnostics") {
  CHECK_THROWS_AS(gauss_2f1({0.5, 50.0, 1.0, -1e4}), NumericFailure);
  CHECK_THROWS_AS(gauss_2f1({0.5, 1.0, 1.0, -1e9}), NumericFailure);
  try {
    gauss_2f1({0.5, 50.0, 1.0, -1e4});
  } catch (const NumericFailure& e) {
    const std::string what = e.what();
    CHECK(what.find("cancellation") != std::string::npos);
    CHECK(what.find("terms") != std::string::npos);
  }
}

TEST_CASE("invalid inputs raise invalid_argument") {
  CHECK_THROWS_AS(gauss_2f1({0.5, 1.0, -1.0, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(gauss_2f1({0.5, 1.0, 1.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(gauss_2f1({-0.5, 1.0, 1.0, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(series_oracle({0.5, 1.0, 1.0, -1.0}, 5), std::invalid_argument);
  CHECK_THROWS_AS(series_oracle({0.5, 1.0, 1.0, -1.0}, 61), std::invalid_argument);
}
