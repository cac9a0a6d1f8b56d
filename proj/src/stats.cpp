#include "pointlab/stats.hpp"

#include <cmath>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>

namespace pointlab::stats {

void GroupSummary::validate() const {
  if (n < 2) throw Error("summary: n must be >= 2");
  if (!std::isfinite(mean)) throw Error("summary: mean must be finite");
  if (!(sd >= 0.0) || !std::isfinite(sd)) throw Error("summary: sd must be finite and >= 0");
}

std::string_view to_string(VarianceAssumption a) {
  return a == VarianceAssumption::welch ? "welch" : "pooled";
}

GroupSummary summarize(std::span<const double> xs) {
  if (xs.size() < 2) throw Error("summarize: need at least 2 values");
  for (double x : xs) {
    if (!std::isfinite(x)) throw Error("summarize: non-finite value");
  }
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0)), static_cast<int>(xs.size())};
}

double t_cdf(double t, double df) {
  if (!(df > 0.0)) throw Error("t_cdf: df must be > 0");
  if (std::isnan(t)) throw Error("t_cdf: t is NaN");
  if (t == 0.0) return 0.5;
  if (std::isinf(t)) return t > 0.0 ? 1.0 : 0.0;
  // P(|T| > |t|) = I_x(df/2, 1/2) with x = df / (df + t^2).
  const double x = df / (df + t * t);
  const double tail = 0.5 * boost::math::ibeta(df / 2.0, 0.5, x);
  return t < 0.0 ? tail : 1.0 - tail;
}

double t_two_tailed_p(double t, double df) {
  if (!(df > 0.0)) throw Error("t_cdf: df must be > 0");
  if (t == 0.0) return 1.0;
  if (std::isinf(t)) return 0.0;
  return boost::math::ibeta(df / 2.0, 0.5, df / (df + t * t));
}

TTestResult t_test(const GroupSummary& a, const GroupSummary& b, VarianceAssumption assumption) {
  a.validate();
  b.validate();
  const double na = a.n;
  const double nb = b.n;
  const double va = a.sd * a.sd;
  const double vb = b.sd * b.sd;
  TTestResult r;
  r.assumption = assumption;
  if (assumption == VarianceAssumption::pooled) {
    r.df = na + nb - 2.0;
  } else if (va == 0.0 && vb == 0.0) {
    r.df = na + nb - 2.0;
  } else {
    const double qa = va / na;
    const double qb = vb / nb;
    r.df = (qa + qb) * (qa + qb) / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
  }

  if (va == 0.0 && vb == 0.0) {
    if (a.mean != b.mean) throw Error("t_test: both sds are zero and means differ");
    r.t = 0.0;
    r.p_two_tailed = 1.0;
    return r;
  }

  double se2 = 0.0;
  if (assumption == VarianceAssumption::pooled) {
    const double sp2 = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
    se2 = sp2 * (1.0 / na + 1.0 / nb);
  } else {
    se2 = va / na + vb / nb;
  }
  r.t = (a.mean - b.mean) / std::sqrt(se2);
  r.p_two_tailed = t_two_tailed_p(r.t, r.df);
  return r;
}

Trendline trendline(std::span<const double> trial_means) {
  const std::size_t k = trial_means.size();
  if (k < 2) throw Error("trendline: need at least 2 trial means");
  const double n = static_cast<double>(k);
  const double xbar = (n + 1.0) / 2.0;
  const double ybar = std::accumulate(trial_means.begin(), trial_means.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double dx = static_cast<double>(i + 1) - xbar;
    sxy += dx * (trial_means[i] - ybar);
    sxx += dx * dx;
  }
  const double slope = sxy / sxx;
  return {slope, ybar - slope * xbar};
}

double fitts_id(double distance, double width) {
  if (!(width > 0.0)) throw Error("fitts_id: width must be > 0");
  if (!(distance >= 0.0)) throw Error("fitts_id: distance must be >= 0");
  return std::log2(distance / width + 1.0);
}

double steering_index(double path_length, double tunnel_width) {
  if (!(tunnel_width > 0.0)) throw Error("steering_index: width must be > 0");
  if (!(path_length >= 0.0)) throw Error("steering_index: length must be >= 0");
  return path_length / tunnel_width;
}

double steering_index(std::span<const TunnelSegment> segments) {
  double total = 0.0;
  for (const auto& s : segments) total += steering_index(s.length, s.width);
  return total;
}

}  // namespace pointlab::stats
