#include "bootlab/montecarlo.hpp"

#include "bootlab/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace bootlab {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// out[t] = f(t), trials spread over threads by an atomic counter
template <class T, class F>
std::vector<T> run_trials(int trials, int parallelism, F f) {
  std::vector<T> out(static_cast<std::size_t>(std::max(trials, 0)));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int t = next++; t < trials; t = next++) out[static_cast<std::size_t>(t)] = f(t);
  };
  int workers = std::clamp(parallelism, 1, std::max(trials, 1));
  std::vector<std::thread> pool;
  for (int i = 1; i < workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return out;
}

void check_plan(const TrialPlan& plan) {
  if (plan.trials <= 0) throw Error(ErrorKind::PreconditionFailed, "trials must be positive");
}

void check_p(double p) {
  if (!(p >= 0 && p <= 1)) throw Error(ErrorKind::PreconditionFailed, "p must lie in [0, 1]");
}

Estimate make_estimate(std::int64_t k, std::int64_t n) {
  Estimate e;
  e.successes = k;
  e.trials = n;
  e.value = n > 0 ? static_cast<double>(k) / static_cast<double>(n) : 0.0;
  e.ci = wilson_interval(k, n);
  return e;
}

}  // namespace

TrialStream::TrialStream(std::uint64_t seed, std::uint64_t trial)
    : key_(mix64(mix64(seed + kGolden) ^ (trial * kGolden + 0x632be59bd9b4e019ULL))) {}

double TrialStream::next() {
  std::uint64_t z = mix64(key_ + (++counter_) * kGolden);
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

std::vector<double> trial_uniforms(std::uint64_t seed, std::uint64_t trial, std::size_t count) {
  TrialStream s(seed, trial);
  std::vector<double> u(count);
  for (auto& x : u) x = s.next();
  return u;
}

SiteSet sample_p_random(const SiteSet& domain, double p, std::uint64_t seed, std::uint64_t trial) {
  check_p(p);
  TrialStream s(seed, trial);
  SiteSet a;
  for (const auto& z : domain)
    if (s.next() < p) a.push_back(z);
  return a;
}

std::vector<unsigned char> sample_torus(std::size_t volume, double p, std::uint64_t seed, std::uint64_t trial) {
  check_p(p);
  TrialStream s(seed, trial);
  std::vector<unsigned char> state(volume);
  for (auto& b : state) b = s.next() < p ? 1 : 0;
  return state;
}

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1 + z2 / n;
  const double centre = (ph + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(ph * (1 - ph) / n + z2 / (4 * n * n)) / denom;
  Interval r{std::max(0.0, centre - half), std::min(1.0, centre + half)};
  if (successes == 0) r.lo = 0;
  if (successes == trials) r.hi = 1;
  return r;
}

Estimate percolation_probability(const UpdateFamily& u, Int n, double p, const TrialPlan& plan) {
  check_plan(plan);
  check_p(p);
  TorusEngine e(u, n);
  auto hits = run_trials<char>(plan.trials, plan.parallelism, [&](int t) -> char {
    auto state = sample_torus(e.volume(), p, plan.seed, static_cast<std::uint64_t>(t));
    return e.run(state) == e.volume() ? 1 : 0;
  });
  return make_estimate(std::count(hits.begin(), hits.end(), 1), plan.trials);
}

double percolation_threshold(const TorusEngine& e, std::uint64_t seed, std::uint64_t trial) {
  const std::size_t v = e.volume();
  auto u = trial_uniforms(seed, trial, v);
  std::vector<std::size_t> order(v);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return u[a] < u[b]; });
  std::vector<std::size_t> rank(v);
  for (std::size_t i = 0; i < v; ++i) rank[order[i]] = i;

  std::vector<unsigned char> state(v);
  auto fills = [&](std::size_t k) {
    for (std::size_t i = 0; i < v; ++i) state[i] = rank[i] < k ? 1 : 0;
    return e.run(state) == v;
  };
  // least k such that the k smallest uniforms fill the torus
  std::size_t lo = 0, hi = v;
  while (hi - lo > 1) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (fills(mid))
      hi = mid;
    else
      lo = mid;
  }
  return u[order[hi - 1]];
}

std::vector<double> percolation_thresholds(const UpdateFamily& u, Int n, const TrialPlan& plan) {
  check_plan(plan);
  TorusEngine e(u, n);
  return run_trials<double>(plan.trials, plan.parallelism, [&](int t) {
    return percolation_threshold(e, plan.seed, static_cast<std::uint64_t>(t));
  });
}

PcEstimate estimate_pc_from(const std::vector<double>& thresholds, double tol) {
  if (thresholds.empty()) throw Error(ErrorKind::PreconditionFailed, "no trials");
  if (!(tol > 0)) throw Error(ErrorKind::PreconditionFailed, "tol must be positive");
  std::vector<double> t = thresholds;
  std::sort(t.begin(), t.end());
  const auto n = static_cast<std::int64_t>(t.size());
  // number of trials percolating at p: thresholds strictly below p
  auto count = [&](double p) {
    return static_cast<std::int64_t>(std::lower_bound(t.begin(), t.end(), p) - t.begin());
  };

  PcEstimate r;
  double lo = 0, hi = 1;
  for (int level = 0; hi - lo > tol; ++level) {
    double mid = (lo + hi) / 2;
    std::int64_t k = count(mid);
    PcLevel row;
    row.level = level;
    row.p = mid;
    row.successes = k;
    row.trials = n;
    row.ci = wilson_interval(k, n);
    r.levels.push_back(row);
    if (2 * k >= n)
      hi = mid;
    else
      lo = mid;
  }
  r.bracket = {lo, hi};
  r.p_hat = (lo + hi) / 2;

  // count(p) = j on (t_j, t_{j+1}] (1-based); the Wilson interval contains
  // 1/2 for j in [ja, jb]
  std::int64_t ja = n, jb = 0;
  for (std::int64_t j = 0; j <= n; ++j) {
    Interval w = wilson_interval(j, n);
    if (w.lo <= 0.5 && 0.5 <= w.hi) {
      ja = std::min(ja, j);
      jb = std::max(jb, j);
    }
  }
  auto at = [&](std::int64_t j) { return t[static_cast<std::size_t>(j - 1)]; };
  r.ci.lo = ja == 0 ? 0.0 : at(ja);
  r.ci.hi = jb >= n ? 1.0 : at(jb + 1);
  return r;
}

PcEstimate estimate_pc(const UpdateFamily& u, Int n, const TrialPlan& plan, double tol) {
  return estimate_pc_from(percolation_thresholds(u, n, plan), tol);
}

Estimate spanning_probability(const IcebergSystem& sys, const TypePath& u, const Iceberg& j, double p,
                              const TrialPlan& plan) {
  check_plan(plan);
  check_p(p);
  SiteSet pts;
  for (const auto& z : sys.points(j))
    if (!sys.in_assist(z, u, j.shift)) pts.push_back(z);
  auto hits = run_trials<char>(plan.trials, plan.parallelism, [&](int t) -> char {
    SiteSet a = sample_p_random(pts, p, plan.seed, static_cast<std::uint64_t>(t));
    if (a.empty()) return 0;
    // u-closures stay inside the minimal droplet of their seeds, so J needs
    // the seeds to attain every bound
    if (!(sys.min_iceberg_droplet(u, a, j.shift) == j)) return 0;
    // the span equals the containers of the strong components of the closure
    auto span = sys.span_oracle(u, a, j.shift);
    return std::find(span.begin(), span.end(), j) != span.end() ? 1 : 0;
  });
  return make_estimate(std::count(hits.begin(), hits.end(), 1), plan.trials);
}

DecayFit decay_fit(const std::vector<double>& x, const std::vector<Estimate>& e, double z) {
  if (x.size() != e.size()) throw Error(ErrorKind::DimensionMismatch, "decay_fit: sizes differ");
  double sw = 0, sx = 0, sy = 0;
  std::vector<double> xs, ys, ws;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (e[i].successes <= 0) continue;
    double ph = e[i].value;
    // var(log p^) ~ (1 - p) / k; a point with k = n gets the weight of one miss
    double var = std::max(1 - ph, 1.0 / static_cast<double>(e[i].trials)) / static_cast<double>(e[i].successes);
    xs.push_back(x[i]);
    ys.push_back(std::log(ph));
    ws.push_back(1 / var);
  }
  DecayFit f;
  f.used = static_cast<int>(xs.size());
  if (f.used < 3) return f;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sw += ws[i];
    sx += ws[i] * xs[i];
    sy += ws[i] * ys[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += ws[i] * (xs[i] - mx) * (xs[i] - mx);
    sxy += ws[i] * (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx <= 0) return f;
  f.defined = true;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.slope_se = std::sqrt(1 / sxx);
  f.slope_hi = f.slope + z * f.slope_se;
  return f;
}

double iterated_log(double x, int k) {
  for (int i = 0; i < k; ++i) {
    if (!(x > 0)) throw Error(ErrorKind::IteratedLogDomain, "log of a non-positive value");
    x = std::log(x);
  }
  return x;
}

namespace {

// every ln_(i)(lambda) positive for i < r and their product at least 1
bool q_monotone_at(double lambda, int r) {
  double x = lambda, prod = 1;
  for (int i = 1; i <= r - 1; ++i) {
    if (!(x > 0)) return false;
    x = std::log(x);
    if (!(x > 0)) return false;
    prod *= x;
  }
  return prod >= 1;
}

}  // namespace

double q_lambda(double base, int r) {
  if (r <= 1 || q_monotone_at(base, r)) return base;
  double lo = base, hi = std::max(base, 2.0);
  while (!q_monotone_at(hi, r)) {
    lo = hi;
    hi *= 2;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    double mid = (lo + hi) / 2;
    if (q_monotone_at(mid, r))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

ScaleParams scale_params(const ConstantsLedger& l, double p) {
  ScaleParams sp;
  sp.p = p;
  sp.r = l.resistance;
  sp.lambda = q_lambda(to_double(l.lambda), l.resistance);
  for (const auto& e : l.eps) sp.eps.push_back(to_double(e));
  return sp;
}

double log_q(double x, const ScaleParams& sp) {
  if (!(sp.p > 0 && sp.p < 1)) throw Error(ErrorKind::PreconditionFailed, "p must lie in (0, 1)");
  if (x < 1) return 0.0;
  double l = iterated_log(sp.lambda * x, sp.r - 1);
  if (!(l > 0)) throw Error(ErrorKind::IteratedLogDomain, "iterated log of lambda x is not positive");
  return -x * std::log(1 / sp.p) / l;
}

double q_eval(double x, const ScaleParams& sp) { return std::exp(log_q(x, sp)); }

double x_scale(int s, const ScaleParams& sp) {
  if (s < 2 || s > sp.r || static_cast<std::size_t>(s - 2) >= sp.eps.size())
    throw Error(ErrorKind::PreconditionFailed, "x(s) needs 2 <= s <= r");
  double x = std::pow(sp.p, -sp.eps[static_cast<std::size_t>(s - 2)]);
  for (int i = 0; i < s - 2; ++i) x = std::exp(x);
  return x;
}

Lemma parse_lemma(const std::string& s) {
  if (s == "A1") return Lemma::A1;
  if (s == "A2") return Lemma::A2;
  if (s == "A3") return Lemma::A3;
  throw Error(ErrorKind::ParseError, "unknown lemma '" + s + "'");
}

const char* lemma_name(Lemma l) {
  switch (l) {
    case Lemma::A1: return "A1";
    case Lemma::A2: return "A2";
    case Lemma::A3: return "A3";
  }
  return "?";
}

ScanGrid default_grid(const ConstantsLedger& l) {
  ScanGrid g;
  g.name = "default";
  g.p = 1e-8;
  g.alphas = {1e4, 1e5, 1e6};
  g.betas = {1e4, 1e5, 1e6};
  g.a1_fractions = {0.0, 0.5, 1.0};
  g.a2_fractions = {1.0, 0.1, 0.01};
  g.C = static_cast<double>(l.C_ceil);
  g.delta = to_double(l.delta);
  // (1 + eta) eps(3) < eps(2)
  g.eta = l.eps.size() >= 2 ? (to_double(l.eps[0]) / to_double(l.eps[1]) - 1) / 2 : 0.0;
  return g;
}

namespace {

[[noreturn]] void violated(const std::string& why) { throw Error(ErrorKind::HypothesisViolated, why); }

double log_power(double base, double e) { return std::pow(std::log(base), e); }

}  // namespace

void check_hypotheses(Lemma which, double alpha, double beta, double gamma, const ScanGrid& g, const ScaleParams& sp) {
  if (!(g.C > 0)) violated("C must be positive");
  if (which != Lemma::A2) {
    if (sp.r < 3) violated("needs r >= 3");
    if (sp.eps.size() < 2 || !((1 + g.eta) * sp.eps[1] < sp.eps[0])) violated("needs (1 + eta) eps(3) < eps(2)");
  }
  const double e = 1 + g.eta;
  switch (which) {
    case Lemma::A1: {
      if (!(beta > 1)) violated("beta <= 1");
      if (alpha < beta) violated("alpha < beta");
      double bound = g.C * log_power(alpha, e);
      if (gamma > bound) violated("gamma > C (log alpha)^(1+eta)");
      if (bound > g.C * g.C * beta) violated("C (log alpha)^(1+eta) > C^2 beta");
      if (alpha + beta + gamma < 1) violated("alpha + beta + gamma < 1");
      break;
    }
    case Lemma::A2:
      if (!(gamma >= 1)) violated("gamma < 1");
      if (alpha < gamma) violated("alpha < gamma");
      if (!(g.delta > 0 && g.delta < 1)) violated("delta outside (0, 1)");
      break;
    case Lemma::A3: {
      if (!(alpha > 1 && gamma > 0)) violated("alpha <= 1 or gamma <= 0");
      double l = log_power(alpha + gamma, e);
      if (gamma < l / g.C) violated("gamma < C^-1 (log(alpha + gamma))^(1+eta)");
      if (gamma > g.C * l) violated("gamma > C (log(alpha + gamma))^(1+eta)");
      if (!(g.delta > 0 && g.delta < 1)) violated("delta outside (0, 1)");
      break;
    }
  }
}

ScanPoint evaluate_point(Lemma which, double alpha, double beta, double gamma, const ScanGrid& g,
                         const ScaleParams& sp) {
  ScanPoint pt;
  pt.alpha = alpha;
  pt.beta = beta;
  pt.gamma = gamma;
  try {
    check_hypotheses(which, alpha, beta, gamma, g, sp);
  } catch (const Error& err) {
    pt.filtered = true;
    pt.reason = err.what();
    return pt;
  }
  switch (which) {
    case Lemma::A1: {
      double s = alpha + beta + gamma;
      pt.lhs = log_q(alpha, sp) + log_q(beta, sp) + 4 * g.C * std::log(s);
      pt.rhs = log_q(s, sp);
      break;
    }
    case Lemma::A2: {
      double s = alpha + gamma;
      pt.lhs = log_q(alpha, sp) + 3 * g.C * std::log(s);
      pt.rhs = log_q(g.delta * s, sp);
      break;
    }
    case Lemma::A3: {
      double s = alpha + gamma;
      double d4 = g.delta * g.delta * g.delta * g.delta;
      pt.lhs = log_q(alpha, sp) + log_q(d4 * gamma, sp) + 5 * g.C * std::log(s);
      pt.rhs = log_q(s, sp);
      break;
    }
  }
  pt.margin = pt.rhs - pt.lhs;
  return pt;
}

namespace {

// gamma = c (log(alpha + gamma))^(1+eta), by fixed-point iteration
double a3_gamma(double alpha, double c, double e) {
  double g = c * log_power(alpha, e);
  for (int i = 0; i < 200; ++i) {
    double next = c * log_power(alpha + g, e);
    if (next == g) break;
    g = next;
  }
  return g;
}

}  // namespace

ScanReport inequality_scan(Lemma which, const ScanGrid& g, const ScaleParams& sp) {
  ScanReport r;
  r.lemma = which;
  ScaleParams s = sp;
  s.p = g.p;
  const double e = 1 + g.eta;
  auto add = [&](double a, double b, double c) { r.points.push_back(evaluate_point(which, a, b, c, g, s)); };
  for (double a : g.alphas) {
    switch (which) {
      case Lemma::A1:
        for (double b : g.betas)
          for (double f : g.a1_fractions) add(a, b, f * g.C * log_power(a, e));
        break;
      case Lemma::A2:
        for (double f : g.a2_fractions) add(a, 0, f * a);
        break;
      case Lemma::A3: {
        double lo = a3_gamma(a, 1 / g.C, e) * (1 + 1e-12);
        double hi = a3_gamma(a, g.C, e) * (1 - 1e-12);
        add(a, 0, lo);
        add(a, 0, std::sqrt(lo * hi));
        add(a, 0, hi);
        break;
      }
    }
  }
  r.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& pt : r.points) {
    if (pt.filtered) {
      ++r.filtered;
      continue;
    }
    ++r.evaluated;
    r.min_margin = std::min(r.min_margin, pt.margin);
    if (pt.margin < 0) ++r.violations;
  }
  return r;
}

}  // namespace bootlab
