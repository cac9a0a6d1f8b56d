#pragma once

// Descriptive statistics, two-sample t-tests and difficulty indices.

#include <span>
#include <string_view>
#include <vector>

#include "pointlab/common.hpp"

namespace pointlab::stats {

struct GroupSummary {
  double mean = 0.0;
  double sd = 0.0;  // sample SD, n - 1 denominator
  int n = 0;

  void validate() const;
};

enum class VarianceAssumption { pooled, welch };

std::string_view to_string(VarianceAssumption a);

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p_two_tailed = 1.0;
  VarianceAssumption assumption = VarianceAssumption::pooled;
};

struct Trendline {
  double slope = 0.0;      // s per trial
  double intercept = 0.0;  // s, at trial index 0
};

GroupSummary summarize(std::span<const double> xs);

// Both sds zero: equal means give t = 0, p = 1; unequal means throw.
TTestResult t_test(const GroupSummary& a, const GroupSummary& b, VarianceAssumption assumption);

// Student's t CDF for real df > 0.
double t_cdf(double t, double df);
double t_two_tailed_p(double t, double df);

// OLS of means[k] against trial index k + 1.
Trendline trendline(std::span<const double> trial_means);

// Shannon form, log2(D / W + 1).
double fitts_id(double distance, double width);

// Straight constant-width tunnel: length / width.
double steering_index(double path_length, double tunnel_width);

struct TunnelSegment {
  double length = 0.0;
  double width = 1.0;
};

// Sum of segment ratios for a piecewise-constant tunnel.
double steering_index(std::span<const TunnelSegment> segments);

}  // namespace pointlab::stats
