#pragma once

#include <cstdint>
#include <vector>

namespace treq {

/// Exact binomial pmf Pr[X = k] and upper tail Pr[X >= k], X ~ Bin(n, p),
/// evaluated in log space.
double binom_pmf(int n, int k, double p);
double binom_tail(int n, int k, double p);

struct PredictorInputs {
  std::int64_t n_reads = 0;  // N
  int read_len = 100;        // L
  double genome_len = 1e6;   // G
  double alpha = 0.5;
  double beta = 0.95;
  double epsilon = 0.01;

  /// Throws Error on out-of-range values.
  void validate() const;
  /// round((1 + alpha) / 2 * L)
  int expected_overlap() const;
  /// floor((1 - beta) * l')
  int allowed_mismatches() const;
};

/// Per-read probability of founding a new cluster given T_{i-1} clusters,
/// with the binomial tables built once.
class ClusterPredictor {
 public:
  explicit ClusterPredictor(const PredictorInputs& in);

  double step(double t_prev) const;
  /// 2(1 - alpha)L/G * t_prev
  double expected_candidates(double t_prev) const;
  int overlap() const { return overlap_; }
  int mismatches() const { return m_; }
  /// m = 0: every read with one error founds a cluster; the forecast degenerates.
  bool degenerate() const { return m_ == 0; }

 private:
  PredictorInputs in_;
  int overlap_;
  int m_;
  std::vector<double> pmf_;       // pmf_[x] for x < m
  std::vector<double> log_tail_;  // log Pr[X >= y] for y in [0, m]
};

double step_probability(double t_prev, const PredictorInputs& in);

struct ClusterForecast {
  std::vector<double> t;  // T_0 .. T_N
  std::vector<double> p;  // P_1* .. P_N* stored at index i
  double tau() const { return t.size() > 1 ? t.back() / static_cast<double>(t.size() - 1) : 0.0; }
};

ClusterForecast expected_clusters(const PredictorInputs& in);

/// 1 - 2 epsilon, for 0 <= epsilon < 0.25.
double suggest_beta(double epsilon);

}  // namespace treq
