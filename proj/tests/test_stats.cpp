#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "pointlab/stats.hpp"

using namespace pointlab;
using namespace pointlab::stats;

TEST_CASE("summarize") {
  const std::vector<double> two{4.0, 6.0};
  auto s = summarize(two);
  CHECK(s.mean == 5.0);
  CHECK(s.sd == std::sqrt(2.0));
  CHECK(s.n == 2);
  const std::vector<double> flat(7, 3.25);
  CHECK(summarize(flat).sd == 0.0);
  CHECK_THROWS_AS(summarize(std::vector<double>{1.0}), Error);
  CHECK_THROWS_AS(summarize(std::vector<double>{1.0, NAN}), Error);
}

TEST_CASE("summarize agrees with the textbook oracle and ignores order") {
  std::mt19937_64 rng(3);
  std::gamma_distribution<double> g(4.0, 2.0);
  std::vector<double> xs(32);
  for (auto& x : xs) x = 3.0 + g(rng);
  auto s = summarize(xs);
  auto [m, sd] = oracle::mean_sd(xs);
  CHECK(std::abs(s.mean - m) <= 1e-12);
  CHECK(std::abs(s.sd - sd) <= 1e-12);
  std::shuffle(xs.begin(), xs.end(), rng);
  auto s2 = summarize(xs);
  CHECK(s2.mean == doctest::Approx(s.mean).epsilon(1e-14));
  CHECK(s2.sd == doctest::Approx(s.sd).epsilon(1e-14));
}

TEST_CASE("t_cdf") {
  CHECK(t_cdf(0.0, 3.7) == 0.5);
  for (double df : {0.5, 1.0, 2.5, 10.0, 200.0}) {
    for (double x : {0.1, 1.0, 2.3, 7.0}) {
      CHECK(t_cdf(x, df) + t_cdf(-x, df) == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  // Cauchy has a closed form.
  CHECK(t_cdf(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(t_cdf(-3.0, 1.0) == doctest::Approx(0.5 + std::atan(-3.0) / M_PI).epsilon(1e-13));
  CHECK_THROWS_AS(t_cdf(1.0, 0.0), Error);
  CHECK_THROWS_AS(t_cdf(1.0, -2.0), Error);
  for (double df : {1.0, 5.0, 30.0, 41.3, 62.0}) {
    for (double x = -5.0; x <= 5.0; x += 0.5) {
      CHECK(std::abs(t_cdf(x, df) - oracle::t_cdf(x, df)) <= 1e-6);
    }
  }
}

TEST_CASE("p decreases in |t|") {
  double prev = 1.1;
  for (double x = 0.0; x < 8.0; x += 0.1) {
    const double p = t_two_tailed_p(x, 17.0);
    CHECK(p < prev);
    prev = p;
  }
}

TEST_CASE("t_test on the reference group summaries") {
  const GroupSummary ctrl{4.75, 1.42, 32};
  const GroupSummary it1{15.62, 13.04, 32};
  const GroupSummary it2{9.50, 5.40, 32};
  auto t1 = t_test(ctrl, it1, VarianceAssumption::pooled);
  CHECK(std::abs(t1.t - -4.687) <= 0.005);
  CHECK(t1.df == 62.0);
  CHECK(t1.p_two_tailed < 0.0005);
  CHECK(std::abs(t1.t - oracle::pooled_t(4.75, 1.42, 32, 15.62, 13.04, 32)) <= 1e-12);
  auto t2 = t_test(ctrl, it2, VarianceAssumption::pooled);
  CHECK(std::abs(t2.t - -4.811) <= 0.005);
  auto t3 = t_test(it1, it2, VarianceAssumption::pooled);
  auto w3 = t_test(it1, it2, VarianceAssumption::welch);
  CHECK(std::abs(t3.t - 2.452) <= 0.005);
  CHECK(std::abs(t3.p_two_tailed - 0.017) <= 0.001);
  CHECK(std::abs(w3.p_two_tailed - 0.019) <= 0.001);
  CHECK(w3.df != std::floor(w3.df));
}

TEST_CASE("t_test properties") {
  const GroupSummary a{3.0, 1.0, 10};
  const GroupSummary b{4.0, 2.5, 10};
  const GroupSummary c{4.0, 2.5, 14};
  auto pa = t_test(a, b, VarianceAssumption::pooled);
  auto wa = t_test(a, b, VarianceAssumption::welch);
  CHECK(std::abs(pa.t - wa.t) <= 1e-12);
  CHECK(pa.df != wa.df);
  auto sw = t_test(b, a, VarianceAssumption::welch);
  CHECK(sw.t == -wa.t);
  CHECK(sw.p_two_tailed == doctest::Approx(wa.p_two_tailed).epsilon(1e-14));
  auto uneq = t_test(a, c, VarianceAssumption::welch);
  CHECK(uneq.t != t_test(a, c, VarianceAssumption::pooled).t);
  // Welch df lies between min(n) - 1 and na + nb - 2.
  CHECK(uneq.df >= 9.0);
  CHECK(uneq.df <= 22.0);
}

TEST_CASE("degenerate variances") {
  const GroupSummary a{2.0, 0.0, 5};
  auto r = t_test(a, a, VarianceAssumption::welch);
  CHECK(r.t == 0.0);
  CHECK(r.p_two_tailed == 1.0);
  CHECK_THROWS_AS(t_test(a, {3.0, 0.0, 5}, VarianceAssumption::pooled), Error);
  CHECK_THROWS_AS(t_test({1, 1, 1}, a, VarianceAssumption::pooled), Error);
}

TEST_CASE("trendline") {
  auto t = trendline(std::vector<double>{1, 2, 3, 4});
  CHECK(t.slope == doctest::Approx(1.0));
  CHECK(std::abs(t.intercept) < 1e-12);
  CHECK(trendline(std::vector<double>{5, 5, 5}).slope == 0.0);
  CHECK_THROWS_AS(trendline(std::vector<double>{1.0}), Error);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 30.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> ys{u(rng), u(rng), u(rng), u(rng)};
    auto f = trendline(ys);
    double r_dot_1 = 0.0;
    double r_dot_x = 0.0;
    for (int k = 0; k < 4; ++k) {
      const double r = ys[k] - (f.intercept + f.slope * (k + 1));
      r_dot_1 += r;
      r_dot_x += r * (k + 1);
    }
    CHECK(std::abs(r_dot_1) < 1e-9);
    CHECK(std::abs(r_dot_x) < 1e-9);
    std::vector<double> shifted = ys;
    for (auto& y : shifted) y = 2.0 * y + 7.0;
    CHECK(trendline(shifted).slope == doctest::Approx(2.0 * f.slope).epsilon(1e-12));
  }
}

TEST_CASE("difficulty indices") {
  CHECK(fitts_id(0.0, 10.0) == 0.0);
  CHECK(fitts_id(10.0, 10.0) == 1.0);
  CHECK(fitts_id(96.0, 32.0) == 2.0);
  CHECK_THROWS_AS(fitts_id(10.0, 0.0), Error);
  CHECK(steering_index(100.0, 20.0) == 5.0);
  CHECK(steering_index(0.0, 20.0) == 0.0);
  CHECK_THROWS_AS(steering_index(10.0, 0.0), Error);
  const std::vector<TunnelSegment> segs{{100, 20}, {50, 10}, {30, 60}};
  auto width_at = [&](double s) {
    for (const auto& g : segs) {
      if (s < g.length) return g.width;
      s -= g.length;
    }
    return segs.back().width;
  };
  // Integrate segment by segment so the quadrature never straddles a jump.
  double integral = 0.0;
  double s0 = 0.0;
  for (const auto& g : segs) {
    integral += oracle::integrate([&](double s) { return 1.0 / width_at(s); }, s0 + 1e-12,
                                  s0 + g.length - 1e-12);
    s0 += g.length;
  }
  CHECK(std::abs(steering_index(segs) - integral) < 1e-9);
}
