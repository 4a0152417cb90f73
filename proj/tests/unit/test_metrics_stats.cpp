#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>

#include "qforma/error.hpp"
#include "qforma/metrics_stats.hpp"

using namespace qforma;
using namespace qforma::stats;

namespace {

// Reference two-sided p from Boost's Student's t distribution.
double boost_two_sided_p(double t, double df) {
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

// Welford single-pass mean and sample variance.
std::pair<double, double> welford(const std::vector<double>& xs) {
  double mean = 0.0;
  double m2 = 0.0;
  int n = 0;
  for (double x : xs) {
    ++n;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  return {mean, std::sqrt(m2 / (n - 1))};
}

const std::vector<double> kMethod1Daily{0, 0, 0, 0, 15, 15, 15, 15, 0, 0, 0, 0, 15, 15, 15, 15, 0, 0, 0, 0};

}  // namespace

TEST_SUITE("metrics_stats") {
  TEST_CASE("cumulative") {
    CHECK(cumulative(std::vector<int>{1, 2, 3}) == std::vector<int>{1, 3, 6});
    CHECK(cumulative(std::vector<int>{}).empty());
    CHECK(cumulative(std::vector<int>{0, 0, 15}) == std::vector<int>{0, 0, 15});
  }

  TEST_CASE("cumulative is monotone for nonnegative input") {
    std::mt19937_64 gen(4);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<int> xs(gen() % 40);
      for (auto& x : xs) x = static_cast<int>(gen() % 16);
      const auto c = cumulative(xs);
      REQUIRE(c.size() == xs.size());
      for (std::size_t i = 1; i < c.size(); ++i) {
        CHECK(c[i] >= c[i - 1]);
        CHECK(c[i] - c[i - 1] == xs[i]);
      }
    }
  }

  TEST_CASE("summarize examples") {
    auto s = summarize(std::vector<double>{2, 4});
    CHECK(s.mean == doctest::Approx(3.0));
    CHECK(std::abs(s.std - 1.4142) <= 1e-4);
    CHECK(s.std_defined);

    s = summarize(kMethod1Daily);
    CHECK(s.mean == doctest::Approx(6.0));
    CHECK(std::abs(s.std - 7.54) <= 0.01);
    CHECK(s.n == 20);

    s = summarize(std::vector<double>{3, 3, 3, 3});
    CHECK(s.std == 0.0);

    s = summarize(std::vector<double>{9});
    CHECK_FALSE(s.std_defined);
    CHECK(s.std == 0.0);

    try {
      summarize(std::vector<double>{});
      FAIL("expected EmptySequence");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::EmptySequence);
    }
  }

  TEST_CASE("summarize matches a single-pass reference") {
    std::mt19937_64 gen(55);
    std::normal_distribution<double> nd(10.0, 4.0);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> xs(2 + gen() % 100);
      for (auto& x : xs) x = nd(gen);
      const auto [mean, sd] = welford(xs);
      const auto s = summarize(xs);
      CHECK(std::abs(s.mean - mean) <= 1e-9);
      CHECK(std::abs(s.std - sd) <= 1e-9);
    }
  }

  TEST_CASE("welch_t_test examples") {
    const std::vector<double> a{1, 2, 3, 4, 5};
    const std::vector<double> b{2, 3, 4, 5, 6};
    const auto r = welch_t_test(a, b);
    CHECK(r.t == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(r.df == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(std::abs(r.p_two_sided - 0.3466) <= 1e-3);
    CHECK(std::abs(r.p_two_sided - boost_two_sided_p(-1.0, 8.0)) <= 1e-6);
    CHECK_FALSE(r.degenerate);

    const auto same = welch_t_test(a, a);
    CHECK(same.t == 0.0);
    CHECK(same.p_two_sided == doctest::Approx(1.0));

    const auto flat = welch_t_test(std::vector<double>{0, 0, 0}, std::vector<double>{5, 5, 5});
    CHECK(flat.degenerate);
    CHECK(flat.p_two_sided == 0.0);
    CHECK(std::isinf(flat.t));
    CHECK(flat.t < 0);

    const auto flat_equal = welch_t_test(std::vector<double>{2, 2}, std::vector<double>{2, 2, 2});
    CHECK(flat_equal.degenerate);
    CHECK(flat_equal.t == 0.0);
    CHECK(flat_equal.p_two_sided == 1.0);

    try {
      welch_t_test(std::vector<double>{1}, b);
      FAIL("expected SampleTooSmall");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::SampleTooSmall);
    }
  }

  TEST_CASE("welch_t_test matches an independent computation on random samples") {
    std::mt19937_64 gen(77);
    std::normal_distribution<double> nd(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<double> a(2 + gen() % 30);
      std::vector<double> b(2 + gen() % 30);
      const double shift = nd(gen);
      const double scale = 0.2 + std::abs(nd(gen));
      for (auto& x : a) x = nd(gen);
      for (auto& x : b) x = shift + scale * nd(gen);
      const auto [ma, sa] = welford(a);
      const auto [mb, sb] = welford(b);
      const double va = sa * sa / a.size();
      const double vb = sb * sb / b.size();
      const double t = (ma - mb) / std::sqrt(va + vb);
      const double df = (va + vb) * (va + vb) / (va * va / (a.size() - 1.0) + vb * vb / (b.size() - 1.0));
      const auto r = welch_t_test(a, b);
      CHECK(r.t == doctest::Approx(t).epsilon(1e-9));
      CHECK(r.df == doctest::Approx(df).epsilon(1e-9));
      CHECK(std::abs(r.p_two_sided - boost_two_sided_p(t, df)) <= 1e-6);
      CHECK(r.p_two_sided >= 0.0);
      CHECK(r.p_two_sided <= 1.0);
    }
  }

  TEST_CASE("student t p-values agree with the reference across a grid") {
    for (double df : {0.5, 1.0, 1.7, 3.0, 8.0, 25.5, 100.0, 1000.0}) {
      for (double t : {0.0, 0.1, 0.5, 1.0, 2.0, 3.5, 7.0, 20.0}) {
        CHECK(std::abs(student_t_two_sided_p(t, df) - boost_two_sided_p(t, df)) <= 1e-6);
        CHECK(std::abs(student_t_two_sided_p(-t, df) - boost_two_sided_p(t, df)) <= 1e-6);
        const double ref_cdf = boost::math::cdf(boost::math::students_t(df), t);
        CHECK(std::abs(student_t_cdf(t, df) - ref_cdf) <= 1e-6);
        CHECK(std::abs(student_t_cdf(-t, df) - (1.0 - ref_cdf)) <= 1e-6);
      }
    }
  }

  TEST_CASE("regularized incomplete beta agrees with the reference") {
    for (double a : {0.5, 1.0, 2.5, 10.0}) {
      for (double b : {0.5, 1.0, 3.0, 40.0}) {
        for (double x : {0.0, 0.01, 0.3, 0.5, 0.77, 0.99, 1.0}) {
          CHECK(std::abs(regularized_incomplete_beta(a, b, x) - boost::math::ibeta(a, b, x)) <= 1e-9);
        }
      }
    }
  }

  TEST_CASE("welch_t_test swap antisymmetry and affine invariance") {
    std::mt19937_64 gen(31);
    std::normal_distribution<double> nd(5.0, 2.0);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<double> a(3 + gen() % 20);
      std::vector<double> b(3 + gen() % 20);
      for (auto& x : a) x = nd(gen);
      for (auto& x : b) x = nd(gen) + 1.0;
      const auto ab = welch_t_test(a, b);
      const auto ba = welch_t_test(b, a);
      CHECK(ab.t == doctest::Approx(-ba.t).epsilon(1e-12));
      CHECK(ab.df == doctest::Approx(ba.df).epsilon(1e-12));
      CHECK(std::abs(ab.p_two_sided - ba.p_two_sided) <= 1e-12);

      for (auto [c, d] : {std::pair{3.0, -7.0}, std::pair{-0.5, 100.0}, std::pair{10.0, 0.0}}) {
        auto ta = a;
        auto tb = b;
        for (auto& x : ta) x = c * x + d;
        for (auto& x : tb) x = c * x + d;
        CHECK(std::abs(welch_t_test(ta, tb).p_two_sided - ab.p_two_sided) <= 1e-9);
      }
    }
  }

  TEST_CASE("daily csv layout") {
    std::ostringstream out;
    const std::vector<DailyMetrics> days{{1, 45, 0, 0, 0, 0}, {2, 30, 3, 2, 1, 1}};
    write_daily_csv(out, days);
    CHECK(out.str() ==
          "day,remaining_vegetables,watering_actions,greeting_actions,no_eat_events,cumulative_no_eat\n"
          "1,45,0,0,0,0\n"
          "2,30,3,2,1,1\n");
  }
}
