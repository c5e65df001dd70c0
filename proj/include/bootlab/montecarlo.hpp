#pragma once

#include "bootlab/family.hpp"
#include "bootlab/iceberg.hpp"
#include "bootlab/measures.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bootlab {

struct TrialPlan {
  std::uint64_t seed = 0;
  int trials = 100;
  int parallelism = 1;
};

// counter-based: the i-th draw of trial t is a hash of (seed, t, i). Trial t
// draws one uniform per site in site order and a site is in A iff its uniform
// is below p, so runs at different p are coupled
class TrialStream {
 public:
  TrialStream(std::uint64_t seed, std::uint64_t trial);
  double next();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::vector<double> trial_uniforms(std::uint64_t seed, std::uint64_t trial, std::size_t count);

// sites of the domain (in order) with uniform below p
SiteSet sample_p_random(const SiteSet& domain, double p, std::uint64_t seed, std::uint64_t trial);
// flat torus state, index order of TorusEngine
std::vector<unsigned char> sample_torus(std::size_t volume, double p, std::uint64_t seed, std::uint64_t trial);

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
  double lo = 0, hi = 0;
};
Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z = kZ95);

struct Estimate {
  std::int64_t successes = 0;
  std::int64_t trials = 0;
  double value = 0;
  Interval ci;
};

Estimate percolation_probability(const UpdateFamily& u, Int n, double p, const TrialPlan& plan);

// least p at which trial t fills the torus under the coupling: the trial
// percolates at p iff threshold < p
double percolation_threshold(const TorusEngine& e, std::uint64_t seed, std::uint64_t trial);
std::vector<double> percolation_thresholds(const UpdateFamily& u, Int n, const TrialPlan& plan);

struct PcLevel {
  int level = 0;
  double p = 0;
  std::int64_t successes = 0;
  std::int64_t trials = 0;
  Interval ci;
};

struct PcEstimate {
  double p_hat = 0;
  Interval bracket;  // bisection bracket, width <= tol
  Interval ci;       // p whose Wilson interval contains 1/2
  std::vector<PcLevel> levels;
};

PcEstimate estimate_pc(const UpdateFamily& u, Int n, const TrialPlan& plan, double tol);
// the same from precomputed coupled thresholds
PcEstimate estimate_pc_from(const std::vector<double>& thresholds, double tol);

Estimate spanning_probability(const IcebergSystem& sys, const TypePath& u, const Iceberg& j, double p,
                              const TrialPlan& plan);

// weighted least squares of log(estimate) against x over the points with
// successes; weights are inverse delta-method variances
struct DecayFit {
  bool defined = false;
  int used = 0;
  double slope = 0, intercept = 0, slope_se = 0;
  double slope_hi = 0;  // slope + z * se
};
DecayFit decay_fit(const std::vector<double>& x, const std::vector<Estimate>& e, double z = kZ95);

struct ScaleParams {
  double p = 0;
  int r = 2;
  double lambda = 0;
  std::vector<double> eps;  // eps(2), ..., eps(r)
};

// k-fold natural log; throws IteratedLogDomain if an intermediate is <= 0
double iterated_log(double x, int k);
// least lambda >= base with every ln_(i)(lambda x) > 0 and q non-increasing on [1, inf)
double q_lambda(double base, int r);
ScaleParams scale_params(const ConstantsLedger& l, double p);

double log_q(double x, const ScaleParams& sp);
double q_eval(double x, const ScaleParams& sp);
double x_scale(int s, const ScaleParams& sp);

enum class Lemma { A1, A2, A3 };
Lemma parse_lemma(const std::string& s);
const char* lemma_name(Lemma l);

struct ScanGrid {
  std::string name;
  double p = 1e-8;
  std::vector<double> alphas, betas;
  std::vector<double> a1_fractions;  // gamma as a fraction of C (log alpha)^(1+eta)
  std::vector<double> a2_fractions;  // gamma as a fraction of alpha
  double C = 0;
  double eta = 0;
  double delta = 0;
};

// p = 1e-8, alpha, beta in {1e4, 1e5, 1e6}, C = ceil(C), eta halfway to its bound;
// A3 takes gamma at both ends of its two-sided bound and at their geometric mean
ScanGrid default_grid(const ConstantsLedger& l);

struct ScanPoint {
  double alpha = 0, beta = 0, gamma = 0;
  bool filtered = false;
  std::string reason;
  double lhs = 0, rhs = 0;  // natural logs of both sides
  double margin = 0;        // rhs - lhs
};

struct ScanReport {
  Lemma lemma = Lemma::A1;
  std::vector<ScanPoint> points;
  int evaluated = 0;
  int filtered = 0;
  int violations = 0;
  double min_margin = 0;  // infinite when nothing was evaluated

  bool passed() const { return evaluated > 0 && violations == 0; }
};

// throws HypothesisViolated
void check_hypotheses(Lemma which, double alpha, double beta, double gamma, const ScanGrid& g, const ScaleParams& sp);
ScanPoint evaluate_point(Lemma which, double alpha, double beta, double gamma, const ScanGrid& g,
                         const ScaleParams& sp);
ScanReport inequality_scan(Lemma which, const ScanGrid& g, const ScaleParams& sp);

}  // namespace bootlab
