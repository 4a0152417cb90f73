#pragma once

#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace qforma::stats {

struct DailyMetrics {
  int day = 1;
  int remaining_vegetables = 0;
  int watering_actions = 0;
  int greeting_actions = 0;
  int no_eat_events = 0;
  int cumulative_no_eat = 0;

  bool operator==(const DailyMetrics&) const = default;
};

inline constexpr std::string_view kDailyCsvHeader =
    "day,remaining_vegetables,watering_actions,greeting_actions,no_eat_events,cumulative_no_eat";

void write_daily_csv(std::ostream& out, std::span<const DailyMetrics> days);

/// Prefix sums.
std::vector<int> cumulative(std::span<const int> daily);

struct SummaryStats {
  double mean = 0.0;
  double std = 0.0;  // sample (n-1) standard deviation
  int n = 0;
  bool std_defined = false;  // false when n < 2; std is then reported as 0
};

SummaryStats summarize(std::span<const double> xs);

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p_two_sided = 1.0;
  bool degenerate = false;  // both samples have zero variance
};

/// Unequal-variance two-sample t-test with Welch-Satterthwaite degrees of freedom.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

/// I_x(a, b), evaluated by continued fraction.
double regularized_incomplete_beta(double a, double b, double x);

/// P(T <= t) for Student's t with `df` degrees of freedom (df may be fractional).
double student_t_cdf(double t, double df);

/// P(|T| >= |t|).
double student_t_two_sided_p(double t, double df);

std::vector<double> to_doubles(std::span<const int> xs);

}  // namespace qforma::stats
