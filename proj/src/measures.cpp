#include "bootlab/measures.hpp"

#include "bootlab/errors.hpp"
#include "bootlab/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace bootlab {

Q WeightSystem::min_weight() const {
  Q m = weights.at(0);
  for (const auto& w : weights) m = std::min(m, w);
  return m;
}

WeightSystem compute_weights(const std::vector<IVec>& dirs) {
  if (dirs.empty()) throw Error(ErrorKind::NotBounding, "empty direction set");
  const int d = static_cast<int>(dirs[0].size());
  std::vector<QVec> g;
  for (const auto& v : dirs) g.push_back(to_q(v));
  if (!positively_spans(g, d)) throw Error(ErrorKind::NotBounding, "directions do not bound the sphere");
  auto w = balancing_weights(g, d);
  if (w.empty()) throw Error(ErrorKind::NotBounding, "no positive balancing weights");
  return WeightSystem{dirs, w};
}

PointSet lattice_points(const SiteSet& s, const QVec& offset) {
  PointSet out;
  out.reserve(s.size());
  for (const auto& z : s) {
    QVec p = to_q(z);
    if (!offset.empty())
      for (std::size_t i = 0; i < p.size(); ++i) p[i] += offset[i];
    out.push_back(std::move(p));
  }
  return out;
}

Q support(const IVec& v, const PointSet& x) {
  if (x.empty()) throw Error(ErrorKind::PreconditionFailed, "support of an empty set");
  QVec vq = to_q(v);
  Q m = dot(vq, x[0]);
  for (const auto& p : x) m = std::max(m, dot(vq, p));
  return m;
}

namespace {

LinearProgram region_lp(const Region& r, int dim) {
  LinearProgram lp;
  lp.n = dim;
  for (const auto& c : r.halfspaces) lp.add(to_q(c.a), Sense::Le, c.b);
  return lp;
}

int region_dim(const Region& r) {
  if (r.halfspaces.empty()) throw Error(ErrorKind::Unbounded, "region without half-spaces");
  return static_cast<int>(r.halfspaces[0].a.size());
}

}  // namespace

Q support(const IVec& v, const Region& r) {
  LinearProgram lp = region_lp(r, region_dim(r));
  lp.objective = to_q(v);
  LpResult res = solve_lp(lp);
  if (res.status == LpStatus::Unbounded) throw Error(ErrorKind::Unbounded, "region is unbounded in this direction");
  if (res.status == LpStatus::Infeasible) throw Error(ErrorKind::PreconditionFailed, "empty region");
  return res.value;
}

Q wd(const WeightSystem& w, const PointSet& x) {
  Q s = 0;
  for (std::size_t i = 0; i < w.dirs.size(); ++i) s += w.weights[i] * support(w.dirs[i], x);
  return s;
}

Q wd(const WeightSystem& w, const Region& r) {
  Q s = 0;
  for (std::size_t i = 0; i < w.dirs.size(); ++i) s += w.weights[i] * support(w.dirs[i], r);
  return s;
}

bool contains(const Region& r, const QVec& x) {
  for (const auto& c : r.halfspaces)
    if (dot(to_q(c.a), x) > c.b) return false;
  return true;
}

Q diameter2(const PointSet& x) {
  Q best = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      Q s = 0;
      for (std::size_t c = 0; c < x[i].size(); ++c) s += (x[i][c] - x[j][c]) * (x[i][c] - x[j][c]);
      best = std::max(best, s);
    }
  return best;
}

PointSet region_vertices(const Region& r, int dim) {
  const auto& hs = r.halfspaces;
  const std::size_t m = hs.size();
  PointSet out;
  if (m < static_cast<std::size_t>(dim)) return out;
  std::vector<std::size_t> pick(dim);
  for (int i = 0; i < dim; ++i) pick[i] = static_cast<std::size_t>(i);
  while (true) {
    QMat a;
    QVec b;
    for (auto i : pick) {
      a.push_back(to_q(hs[i].a));
      b.push_back(hs[i].b);
    }
    if (rank(a) == dim) {
      auto x = solve_linear(a, b);
      if (x && contains(r, *x) && std::find(out.begin(), out.end(), *x) == out.end()) out.push_back(*x);
    }
    int k = dim - 1;
    while (k >= 0 && pick[k] == m - static_cast<std::size_t>(dim - k)) --k;
    if (k < 0) break;
    ++pick[k];
    for (int j = k + 1; j < dim; ++j) pick[j] = pick[j - 1] + 1;
  }
  return out;
}

Q diameter2(const Region& r, int dim) {
  // a bounded polytope attains its diameter at a pair of vertices
  for (int i = 0; i < dim; ++i) {
    IVec e(dim, 0);
    e[i] = 1;
    support(e, r);
    support(-e, r);
  }
  return diameter2(region_vertices(r, dim));
}

Int ceil_sqrt(const Q& x) {
  if (x <= 0) return 0;
  Int n = static_cast<Int>(std::ceil(std::sqrt(to_double(x))));
  while (n > 0 && Q(n - 1) * Q(n - 1) >= x) --n;
  while (Q(n) * Q(n) < x) ++n;
  return n;
}

std::vector<Q> default_eps(int r, int d) {
  // 1/(d-1) > eps(2) > ... > eps(r) > 0
  std::vector<Q> e;
  for (int s = 2; s <= r; ++s) e.push_back(Q(r - s + 1, static_cast<long>(r) * (d - 1)));
  return e;
}

Measures::Measures(const IcebergSystem& sys) : sys_(sys) {
  const int d = sys_.dim();
  c2_ = 0;
  norm2_max_ = 0;
  for (const auto& u : non_leaf()) {
    auto dirs = m_set(sys_.tree(), u);
    WeightSystem w = compute_weights(dirs);
    Region unit;
    for (const auto& v : dirs) {
      unit.halfspaces.push_back({v, Q(1)});
      norm2_max_ = std::max(norm2_max_, Q(norm2(v)));
    }
    Q mw = w.min_weight();
    c2_ = std::max(c2_, diameter2(unit, d) / (mw * mw));
    weights_.emplace(u, std::move(w));
  }
  c_ceil_ = ceil_sqrt(c2_);
}

std::vector<TypePath> Measures::non_leaf() const {
  std::vector<TypePath> out{{}};
  for (const auto& v : sys_.tree().vertices())
    if (!sys_.tree().is_leaf(v)) out.push_back(v);
  return out;
}

const WeightSystem& Measures::weights(const TypePath& u) const {
  auto it = weights_.find(u);
  if (it == weights_.end()) throw Error(ErrorKind::PreconditionFailed, "not a non-leaf vertex");
  return it->second;
}

Q Measures::wd(const TypePath& u, const PointSet& x) const { return bootlab::wd(weights(u), x); }

Q Measures::wd(const TypePath& u, const Region& r) const { return bootlab::wd(weights(u), r); }

Region Measures::f_region(const TypePath& u, const PointSet& x) const {
  Region r;
  r.kind = RegionKind::F;
  for (const auto& v : m_set(sys_.tree(), u)) r.halfspaces.push_back({v, support(v, x)});
  return r;
}

Region Measures::g_region(const TypePath& u, const PointSet& x, const QVec& shift) const {
  if (u.empty()) {
    Region r = f_region(u, x);
    r.kind = RegionKind::G;
    return r;
  }
  const IVec& w = u.back();
  Q level = shift.empty() ? Q(0) : dot(w, shift);
  PointSet above;
  for (const auto& p : x)
    if (dot(to_q(w), p) >= level) above.push_back(p);
  if (above.empty()) throw Error(ErrorKind::EmptyAboveCut, "no point on or above the cut");
  Region r;
  r.kind = RegionKind::G;
  for (const auto& v : sys_.tree().children(u)) r.halfspaces.push_back({v, support(v, x)});
  r.halfspaces.push_back({-w, -level});
  return r;
}

Q Measures::diam_star(const Iceberg& j, const Q& delta) const {
  PointSet pts = lattice_points(sys_.points(j), sys_.offset());
  if (pts.empty()) throw Error(ErrorKind::PreconditionFailed, "empty iceberg");
  Q w = wd(j.type, g_region(j.type, pts, j.shift));
  for (int i = 0; i < j.depth(); ++i) w *= delta;
  return w;
}

Q Measures::diam_star_star(const Iceberg& j, const Q& delta) const {
  Q w = diam_star(j, delta);
  for (int i = 0; i < j.depth(); ++i) w *= delta;
  return w;
}

Q Measures::diam_star_tight(const Iceberg& j, const Q& delta) const {
  if (!j.type.empty()) return diam_star(j, delta);
  const auto& ch = sys_.tree().children(j.type);
  const auto& w = weights(j.type);
  Q s = 0;
  for (std::size_t i = 0; i < w.dirs.size(); ++i) {
    auto it = std::find(ch.begin(), ch.end(), w.dirs[i]);
    s += w.weights[i] * j.bounds[static_cast<std::size_t>(it - ch.begin())];
  }
  return s;
}

Q Measures::default_delta() const {
  Int r = sys_.tree().depth() + 1;
  Q base = Q(4 * c_ceil_);
  Q p = 1;
  for (Int i = 0; i < r; ++i) p *= base;
  return Q(1) / p;
}

Q Measures::singleton_bound(Int window, const Q& delta) const {
  const int d = sys_.dim();
  Q best = 0;
  for (const auto& u : non_leaf()) {
    IVec z(d, -window);
    while (true) {
      if (!sys_.in_assist(z, u)) {
        SiteSet k{z};
        auto j = sys_.iceberg_container(u, sys_.u_closure(u, k));
        best = std::max(best, diam_star(j, delta));
      }
      int i = 0;
      while (i < d && z[i] == window) { z[i] = -window; ++i; }
      if (i == d) break;
      ++z[i];
    }
  }
  return best;
}

ConstantsLedger build_ledger(const Measures& m, int resistance, const LedgerOptions& opts) {
  const auto& sys = m.system();
  const int d = sys.dim();
  ConstantsLedger l;
  l.resistance = resistance;
  l.dimension = d;
  l.C2 = m.comparison_constant2();
  l.C_ceil = m.comparison_ceil();
  l.norm2_max = m.norm2_max();
  l.delta = opts.delta ? *opts.delta : m.default_delta();
  if (l.delta <= 0 || l.delta > Q(1, 4)) throw Error(ErrorKind::PreconditionFailed, "delta must lie in (0, 1/4]");
  l.eps = default_eps(resistance, d);
  l.singleton_bound = m.singleton_bound(opts.window, l.delta);

  std::mt19937_64 g(opts.seed);
  auto types = m.non_leaf();
  l.subadd_slack = 0;
  int found = 0;
  for (int attempt = 0; found < opts.slack_samples && attempt < 40 * opts.slack_samples; ++attempt) {
    const TypePath& u = types[g() % types.size()];
    std::uniform_int_distribution<Int> coord(-opts.sample_box, opts.sample_box);
    std::vector<IVec> k;
    int n = 2 + static_cast<int>(g() % 4);
    for (int i = 0; i < 4 * n && static_cast<int>(k.size()) < n; ++i) {
      IVec z(d);
      for (auto& c : z) c = coord(g);
      if (!sys.in_assist(z, u)) k.push_back(z);
    }
    SiteSet ks = make_site_set(k);
    if (ks.size() < 2) continue;
    auto cl = sys.u_closure(u, ks);
    if (strong_components(cl, sys.r2()).size() != 1) continue;
    auto [k1, k2] = sys.penultimate_split(u, ks);
    auto ds = [&](const SiteSet& s) { return m.diam_star(sys.iceberg_container(u, sys.u_closure(u, s)), l.delta); };
    l.subadd_slack = std::max(l.subadd_slack, ds(ks) - ds(k1) - ds(k2));
    ++found;
  }

  // the sideways step loses 2R|v| in direction v at depth k, scaled by delta^k
  l.sideways_floor = 0;
  for (const auto& u : types) {
    if (static_cast<int>(u.size()) > resistance - 3) continue;
    Q scale = Q(2) / (Q(1) - l.delta);
    for (std::size_t i = 0; i < u.size(); ++i) scale *= l.delta;
    for (const auto& v : sys.tree().children(u))
      l.sideways_floor = std::max(l.sideways_floor, Q(scale * ceil_sqrt(sys.r2() * Q(norm2(v)))));
  }
  l.lambda = std::max({l.singleton_bound, l.subadd_slack, l.sideways_floor}) + 1;
  Q total = l.singleton_bound + l.subadd_slack;
  l.c = total > 0 ? Q(1) / total : Q(1);

  l.lambda_footnote_base = (Q(1) / l.c) / (Q(1) - (l.eps.empty() ? Q(0) : l.eps[0]) * (d - 1));
  l.lambda_footnote_height = resistance - 1;
  double v = to_double(l.lambda_footnote_base);
  for (int i = 0; i < l.lambda_footnote_height && !std::isinf(v); ++i) v = std::exp(v);
  l.lambda_footnote_capped = std::isinf(v);
  l.lambda_footnote = l.lambda_footnote_capped ? std::numeric_limits<double>::max() : v;
  return l;
}

}  // namespace bootlab
