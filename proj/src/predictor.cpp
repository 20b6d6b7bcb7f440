#include "treq/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "treq/common.hpp"

namespace treq {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_pmf(int n, int k, double p) {
  if (k < 0 || k > n) return kNegInf;
  if (p <= 0.0) return k == 0 ? 0.0 : kNegInf;
  if (p >= 1.0) return k == n ? 0.0 : kNegInf;
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) +
         k * std::log(p) + (n - k) * std::log1p(-p);
}

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double log_tail(int n, int k, double p) {
  if (k <= 0) return 0.0;
  if (k > n) return kNegInf;
  double acc = kNegInf;
  for (int y = n; y >= k; --y) acc = log_add(acc, log_pmf(n, y, p));
  return std::min(acc, 0.0);
}

}  // namespace

double binom_pmf(int n, int k, double p) {
  if (n < 0 || k < 0 || k > n) throw Error("binom_pmf: require 0 <= k <= n");
  return std::exp(log_pmf(n, k, p));
}

double binom_tail(int n, int k, double p) {
  if (n < 0 || k < 0 || k > n) throw Error("binom_tail: require 0 <= k <= n");
  return std::exp(log_tail(n, k, p));
}

void PredictorInputs::validate() const {
  if (n_reads < 1) throw Error("N must be at least 1");
  if (read_len < 1) throw Error("L must be positive");
  if (!(genome_len > 0)) throw Error("G must be positive");
  if (!(alpha >= 0.5 && alpha <= 1.0)) throw Error("alpha must be in [0.5, 1]");
  if (!(beta > 0.0 && beta <= 1.0)) throw Error("beta must be in (0, 1]");
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw Error("epsilon must be in [0, 1)");
}

int PredictorInputs::expected_overlap() const {
  return static_cast<int>(std::lround((1.0 + alpha) / 2.0 * read_len));
}

int PredictorInputs::allowed_mismatches() const {
  return static_cast<int>(floor_threshold((1.0 - beta) * expected_overlap()));
}

ClusterPredictor::ClusterPredictor(const PredictorInputs& in)
    : in_(in), overlap_(in.expected_overlap()), m_(in.allowed_mismatches()) {
  in_.validate();
  for (int x = 0; x < m_; ++x) pmf_.push_back(std::exp(log_pmf(overlap_, x, in_.epsilon)));
  for (int y = 0; y <= m_; ++y) log_tail_.push_back(log_tail(overlap_, y, in_.epsilon));
}

double ClusterPredictor::expected_candidates(double t_prev) const {
  return 2.0 * (1.0 - in_.alpha) * in_.read_len / in_.genome_len * t_prev;
}

double ClusterPredictor::step(double t_prev) const {
  const double c = expected_candidates(t_prev);
  if (c == 0.0) return 1.0;  // tail(m) + sum of pmf below m, without round-off
  double p = std::exp(log_tail_[m_]);
  for (int x = 0; x < m_; ++x) {
    const double lt = log_tail_[m_ - x];
    p += pmf_[x] * (lt == kNegInf ? 0.0 : std::exp(c * lt));
  }
  return std::clamp(p, 0.0, 1.0);
}

double step_probability(double t_prev, const PredictorInputs& in) {
  if (t_prev < 0) throw Error("T_prev must be non-negative");
  return ClusterPredictor(in).step(t_prev);
}

ClusterForecast expected_clusters(const PredictorInputs& in) {
  const ClusterPredictor pred(in);
  ClusterForecast f;
  f.t.assign(static_cast<std::size_t>(in.n_reads) + 1, 0.0);
  f.p.assign(f.t.size(), 0.0);
  for (std::size_t i = 1; i < f.t.size(); ++i) {
    f.p[i] = pred.step(f.t[i - 1]);
    f.t[i] = f.t[i - 1] + f.p[i];
  }
  return f;
}

double suggest_beta(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon < 0.25)) throw Error("epsilon must be in [0, 0.25)");
  return 1.0 - 2.0 * epsilon;
}

}  // namespace treq
