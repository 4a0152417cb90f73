#include "qforma/metrics_stats.hpp"

#include <cmath>
#include <limits>
#include <algorithm>
#include <ostream>

#include "qforma/error.hpp"

namespace qforma::stats {

void write_daily_csv(std::ostream& out, std::span<const DailyMetrics> days) {
  out << kDailyCsvHeader << '\n';
  for (const auto& d : days) {
    out << d.day << ',' << d.remaining_vegetables << ',' << d.watering_actions << ',' << d.greeting_actions << ','
        << d.no_eat_events << ',' << d.cumulative_no_eat << '\n';
  }
}

std::vector<int> cumulative(std::span<const int> daily) {
  std::vector<int> out;
  out.reserve(daily.size());
  int total = 0;
  for (int x : daily) out.push_back(total += x);
  return out;
}

SummaryStats summarize(std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorKind::EmptySequence, "summarize of an empty sequence");
  SummaryStats s;
  s.n = static_cast<int>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / s.n;
  if (s.n >= 2) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / (s.n - 1));
    s.std_defined = true;
  }
  return s;
}

namespace {

// Modified Lentz evaluation of the incomplete beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorKind::ConfigError, "incomplete beta needs a, b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw Error(ErrorKind::ConfigError, "incomplete beta needs x in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // the fraction converges fastest on the side of the mean
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double df) {
  if (!(df > 0.0)) throw Error(ErrorKind::ConfigError, "degrees of freedom must be > 0");
  if (std::isinf(t)) return 0.0;
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  const double x = df / (df + t * t);
  return std::clamp(regularized_incomplete_beta(df / 2.0, 0.5, x), 0.0, 1.0);
}

double student_t_cdf(double t, double df) {
  const double tail = student_t_two_sided_p(t, df) / 2.0;
  return t < 0.0 ? tail : 1.0 - tail;
}

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw Error(ErrorKind::SampleTooSmall, "welch_t_test needs two or more values per sample");
  const auto sa = summarize(a);
  const auto sb = summarize(b);
  const double va = sa.std * sa.std / sa.n;
  const double vb = sb.std * sb.std / sb.n;
  const double diff = sa.mean - sb.mean;

  TTestResult r;
  if (va == 0.0 && vb == 0.0) {
    r.degenerate = true;
    r.df = sa.n + sb.n - 2;
    if (diff == 0.0) {
      r.t = 0.0;
      r.p_two_sided = 1.0;
    } else {
      r.t = diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
      r.p_two_sided = 0.0;
    }
    return r;
  }
  r.t = diff / std::sqrt(va + vb);
  r.df = (va + vb) * (va + vb) / (va * va / (sa.n - 1) + vb * vb / (sb.n - 1));
  r.p_two_sided = student_t_two_sided_p(r.t, r.df);
  return r;
}

std::vector<double> to_doubles(std::span<const int> xs) { return {xs.begin(), xs.end()}; }

}  // namespace qforma::stats
