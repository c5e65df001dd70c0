#include "bootlab/suites.hpp"

#include "bootlab/errors.hpp"
#include "bootlab/sphere.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <sstream>

namespace bootlab {

namespace {

struct Skip {};

using Check = std::function<std::string(std::mt19937_64&, const SuiteContext&, SuiteReport&)>;

struct SuiteDef {
  std::string name;
  std::string description;
  Check check;
  std::string system = {};  // required system, empty for any
};

std::string str(const Q& x) { return q_str(x); }

std::string sites_str(const SiteSet& s) {
  std::ostringstream o;
  o << "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    o << (i ? "," : "") << "[";
    for (std::size_t c = 0; c < s[i].size(); ++c) o << (c ? "," : "") << s[i][c];
    o << "]";
  }
  o << "]";
  return o.str();
}

std::string type_str(const TypePath& u) {
  std::ostringstream o;
  o << "[";
  for (std::size_t i = 0; i < u.size(); ++i) o << (i ? "," : "") << sites_str({u[i]});
  o << "]";
  return o.str();
}

Int uniform(std::mt19937_64& g, Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(g); }

double uniform_real(std::mt19937_64& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

// lo + (hi - lo) k / 16 for a random k, exact
Q grid_between(std::mt19937_64& g, const Q& lo, const Q& hi) { return lo + (hi - lo) * Q(uniform(g, 0, 16), 16); }

const SuiteSystem& pick(std::mt19937_64& g, const SuiteContext& ctx) {
  const auto& all = ctx.systems();
  return *all[static_cast<std::size_t>(uniform(g, 0, static_cast<Int>(all.size()) - 1))];
}

IVec rand_vec(std::mt19937_64& g, int d, Int lo, Int hi) {
  IVec v(d);
  for (auto& c : v) c = uniform(g, lo, hi);
  return v;
}

QVec rand_shift(std::mt19937_64& g, int d) {
  QVec x(d, Q(0));
  if (g() % 3 == 0)
    for (auto& c : x) c = Q(uniform(g, -3, 3), uniform(g, 1, 3));
  return x;
}

SiteSet rand_outside(std::mt19937_64& g, const IcebergSystem& s, const TypePath& u, const QVec& x, int n) {
  const Int b = s.dim() == 2 ? 5 : 3;
  std::vector<IVec> out;
  for (int guard = 0; static_cast<int>(out.size()) < n && guard < 1000; ++guard) {
    IVec z = rand_vec(g, s.dim(), -b, b);
    if (!s.in_assist(z, u, x)) out.push_back(z);
  }
  return make_site_set(out);
}

struct Instance {
  const SuiteSystem* ss;
  TypePath u;
  QVec shift;
  SiteSet k;
};

Instance rand_instance(std::mt19937_64& g, const SuiteContext& ctx, int max_sites, bool shifted = true) {
  const auto& ss = pick(g, ctx);
  const auto& s = ss.m->system();
  auto types = ss.m->non_leaf();
  Instance in{&ss, types[g() % types.size()], QVec(s.dim(), Q(0)), {}};
  if (shifted) in.shift = rand_shift(g, s.dim());
  int cap = s.dim() == 2 ? max_sites : std::max(1, max_sites - 1);
  in.k = rand_outside(g, s, in.u, in.shift, static_cast<int>(uniform(g, 1, cap)));
  if (in.k.empty()) throw Skip{};
  return in;
}

PointSet rand_points(std::mt19937_64& g, int d, int n) {
  PointSet x;
  for (int i = 0; i < n; ++i) {
    QVec p(d);
    for (auto& c : p) c = Q(uniform(g, -10, 10), uniform(g, 1, 3));
    x.push_back(p);
  }
  return x;
}

std::vector<Iceberg> sorted(std::vector<Iceberg> v) {
  std::sort(v.begin(), v.end());
  return v;
}

const SuiteSystem& need(const SuiteContext& ctx, const std::string& name) { return ctx.get(name); }

Q support_of(const IVec& v, const SiteSet& s, const QVec& y) {
  Q best = dot(v, to_q(s.front())) + dot(v, y);
  for (const auto& z : s) best = std::max(best, dot(v, to_q(z)) + dot(v, y));
  return best;
}

// a spanned instance from a p-random box, or Skip when its largest class is below min_diam
SpannedInstance spanned_box(std::mt19937_64& g, const SuiteSystem& ss, const IVec& side, double plo, double phi,
                            const Q& min_diam) {
  double p = uniform_real(g, plo, phi);
  auto a = random_box_sites(g, side, p);
  if (a.empty()) throw Skip{};
  auto in = largest_span_class(*ss.m, a, ss.l.delta);
  if (in.diam < min_diam || in.diam == 0) throw Skip{};
  return in;
}

// iceberg points

std::string check_u_closed(std::mt19937_64& g, const SuiteContext& ctx, SuiteReport&) {
  auto in = rand_instance(g, ctx, 4);
  const auto& s = in.ss->m->system();
  auto pts = s.points(s.min_iceberg_droplet(in.u, in.k, in.shift));
  if (s.u_closure(in.u, pts, in.shift) != pts) return in.ss->name + " u=" + type_str(in.u) + " K=" + sites_str(in.k);
  return {};
}

std::string check_type_monotone(std::mt19937_64& g, const SuiteContext& ctx, SuiteReport&) {
  auto in = rand_instance(g, ctx, 4);
  const auto& s = in.ss->m->system();
  auto more = set_union(in.k, rand_outside(g, s, in.u, in.shift, static_cast<int>(uniform(g, 1, 3))));
  int a = s.iceberg_container(in.u, in.k, in.shift).depth();
  int b = s.iceberg_container(in.u, more, in.shift).depth();
  if (a > b) return in.ss->name + " K=" + sites_str(in.k) + " K'=" + sites_str(more);
  return {};
}

std::string check_container_closed(std::mt19937_64& g, const SuiteContext& ctx, SuiteReport&) {
  auto in = rand_instance(g, ctx, 4);
  const auto& s = in.ss->m->system();
  auto pts = s.points(s.iceberg_container(in.u, in.k, in.shift));
  for (const auto& z : pts)
    if (s.in_assist(z, in.u, in.shift)) return in.ss->name + " container meets H: K=" + sites_str(in.k);
  if (s.u_closure(in.u, pts, in.shift) != pts) return in.ss->name + " container not closed: K=" + sites_str(in.k);
  return {};
}

std::string check_prefix_reduction(std::mt19937_64& g, const SuiteContext& ctx, SuiteReport&) {
  auto in = rand_instance(g, ctx, 4);
  const auto& s = in.ss->m->system();
  auto cl = s.u_closure(in.u, in.k, in.shift);
  auto c = s.iceberg_container(in.u, cl, in.shift);
  if (c.type.size() >= in.u.size()) throw Skip{};
  for (std::size_t j = c.type.size(); j < in.u.size(); ++j) {
    auto uj = prefix(in.u, j);
    auto clj = s.u_closure(uj, in.k, in.shift);
    if (clj != cl || s.iceberg_container(uj, clj, in.shift) != c)
      return in.ss->name + " u=" + type_str(in.u) + " j=" + std::to_string(j) + " K=" + sites_str(in.k);
  }
  return {};
}

std::string check_spanned_reduction(std::mt19937_64& g, const SuiteContext& ctx, SuiteReport&) {
  auto in = rand_instance(g, ctx, 5);
  const auto& s = in.ss->m->system();
  int checked = 0;
  for (const auto& j : s.iceberg_span(in.u, in.k, in.shift).icebergs)
    for (std::size_t i = j.type.size(); i < in.u.size(); ++i) {
      if (!s.is_iceberg_spanned(prefix(in.u, i), j, in.k).spanned)
        return in.ss->name + " u=" + type_str(in.u) + " i=" + std::to_string(i) + " K=" + sites_str(in.k);
      ++checked;
    }
  if (checked == 0) throw Skip{};
  return {};
}

std::string check_span_oracle(std::mt19937_64& g, const SuiteContext& ctx, SuiteReport&) {
  auto in = rand_instance(g, ctx, 5);
  const auto& s = in.ss->m->system();
  auto res = s.iceberg_span(in.u, in.k, in.shift);
  std::string where = in.ss->name + " u=" + type_str(in.u) + " K=" + sites_str(in.k);
  if (sorted(res.icebergs) != sorted(s.span_oracle(in.u, in.k, in.shift))) return "span differs from oracle: " + where;
  SiteSet all;
  std::size_t total = 0;
  for (const auto& c : res.classes) {
    all = set_union(all, c);
    total += c.size();
  }
  if (all != in.k || total != in.k.size()) return "classes do not partition K: " + where;
  return {};
}

std::string check_merge_order(std::mt19937_64& g, const SuiteContext& ctx, SuiteReport&) {
  auto in = rand_instance(g, ctx, 5);
  const auto& s = in.ss->m->system();
  auto base = s.iceberg_span(in.u, in.k, in.shift);
  for (int order = 0; order < 20; ++order) {
    auto res = s.iceberg_span(in.u, in.k, in.shift, [&](std::size_t n) { return static_cast<std::size_t>(g() % n); });
    if (res.icebergs != base.icebergs || res.classes != base.classes)
      return in.ss->name + " order " + std::to_string(order) + " K=" + sites_str(in.k);
  }
  return {};
}

// measures

struct PointInstance {
  const SuiteSystem* ss;
  TypePath u, v;
  PointSet x;
};

PointInstance rand_point_instance(std::mt19937_64& g, const SuiteContext& ctx) {
  const auto& ss = pick(g, ctx);
  auto types = ss.m->non_leaf();
  PointInstance p{&ss, types[g() % types.size()], types[g() % types.size()], {}};
  p.x = rand_points(g, ss.m->system().dim(), static_cast<int>(uniform(g, 1, 5)));
  return p;
}

// weights act on raw tree vectors, so the comparisons carry N = max |v|
std::string check_sandwich(std::mt19937_64& g, const SuiteContext& ctx, SuiteReport&) {
  auto p = rand_point_instance(g, ctx);
  const auto& m = *p.ss->m;
  Q d2 = diameter2(p.x), w = m.wd(p.u, p.x);
  if (w < 0 || d2 > m.comparison_constant2() * w * w || w * w > m.norm2_max() * d2)
    return p.ss->name + " wd=" + str(w) + " diam2=" + str(d2);
  return {};
}

std::string check_translation(std::mt19937_64& g, const SuiteContext& ctx, SuiteReport&) {
  auto p = rand_point_instance(g, ctx);
  const auto& m = *p.ss->m;
  QVec t = rand_points(g, static_cast<int>(p.x.front().size()), 1).front();
  PointSet moved = p.x;
  for (auto& q : moved)
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += t[i];
  if (m.wd(p.u, moved) != m.wd(p.u, p.x)) return p.ss->name + " wd changes under translation";
  return {};
}

std::string check_cross_weight(std::mt19937_64& g, const SuiteContext& ctx, SuiteReport&) {
  auto p = rand_point_instance(g, ctx);
  const auto& m = *p.ss->m;
  Q wu = m.wd(p.u, p.x), wv = m.wd(p.v, p.x);
  if (wu * wu > m.norm2_max() * m.comparison_constant2() * wv * wv)
    return p.ss->name + " wd_u=" + str(wu) + " wd_v=" + str(wv);
  return {};
}

std::string check_f_inflation(std::mt19937_64& g, const SuiteContext& ctx, SuiteReport&) {
  auto p = rand_point_instance(g, ctx);
  const auto& m = *p.ss->m;
  Q wu = m.wd(p.u, p.x), wf = m.wd(p.u, m.f_region(p.v, p.x));
  Q n2 = m.norm2_max(), c2 = m.comparison_constant2();
  if (wf * wf > n2 * n2 * c2 * c2 * wu * wu) return p.ss->name + " wd_u(F_v)=" + str(wf) + " wd_u=" + str(wu);
  return {};
}

std::string check_g_invariance(std::mt19937_64& g, const SuiteContext& ctx, SuiteReport&) {
  auto in = rand_instance(g, ctx, 4, false);
  if (in.u.empty()) throw Skip{};
  const auto& s = in.ss->m->system();
  const auto& m = *in.ss->m;
  auto cl = s.u_closure(in.u, in.k);
  if (m.g_region(in.u, lattice_points(cl, s.offset())).halfspaces !=
      m.g_region(in.u, lattice_points(in.k, s.offset())).halfspaces)
    return in.ss->name + " u=" + type_str(in.u) + " K=" + sites_str(in.k);
  return {};
}

std::string check_volume(std::mt19937_64& g, const SuiteContext& ctx, SuiteReport&) {
  auto in = rand_instance(g, ctx, 4);
  const auto& s = in.ss->m->system();
  const auto& m = *in.ss->m;
  const Q& delta = in.ss->l.delta;
  auto j = s.iceberg_container(in.u, s.u_closure(in.u, in.k, in.shift), in.shift);
  Q scale = Q(m.comparison_ceil());
  for (int i = 0; i < j.depth(); ++i) scale /= delta;
  Q side = scale * m.diam_star(j, delta) + 1, bound = 1;
  for (int i = 0; i < s.dim(); ++i) bound *= side;
  if (Q(static_cast<long>(s.count(j))) > bound) return in.ss->name + " |J|=" + std::to_string(s.count(j));
  return {};
}

std::string check_nested_diameter(std::mt19937_64& g, const SuiteContext& ctx, SuiteReport&) {
  auto in = rand_instance(g, ctx, 4);
  const auto& s = in.ss->m->system();
  const auto& m = *in.ss->m;
  const Q& delta = in.ss->l.delta;
  auto more = set_union(in.k, rand_outside(g, s, in.u, in.shift, static_cast<int>(uniform(g, 1, 3))));
  auto jp = s.iceberg_container(in.u, s.u_closure(in.u, in.k, in.shift), in.shift);
  auto j = s.iceberg_container(in.u, s.u_closure(in.u, more, in.shift), in.shift);
  if (jp.type != j.type) throw Skip{};
  auto inner = s.points(jp), outer = s.points(j);
  if (!is_subset(inner, outer)) throw Skip{};
  Q best = 0;
  for (const auto& v : s.tree().children(j.type))
    best = std::max(best, support_of(v, outer, s.offset()) - support_of(v, inner, s.offset()));
  for (int i = 0; i < j.depth(); ++i) best *= delta;
  Q gap = m.diam_star(j, delta) - m.diam_star(jp, delta);
  if (gap > best) return in.ss->name + " gap=" + str(gap) + " bound=" + str(best);
  return {};
}

std::string check_subadd(std::mt19937_64& g, const SuiteContext& ctx, SuiteReport&) {
  const auto& ss = pick(g, ctx);
  const auto& m = *ss.m;
  auto types = m.non_leaf();
  const auto& u = types[g() % types.size()];
  const int d = m.system().dim();
  auto common = rand_points(g, d, 1);
  auto x1 = rand_points(g, d, static_cast<int>(uniform(g, 0, 3)));
  auto x2 = rand_points(g, d, static_cast<int>(uniform(g, 0, 3)));
  x1.push_back(common[0]);
  x2.push_back(common[0]);
  PointSet both = x1;
  both.insert(both.end(), x2.begin(), x2.end());
  Q lhs = m.wd(u, m.f_region(u, both)), rhs = m.wd(u, x1) + m.wd(u, x2);
  if (lhs > rhs) return ss.name + " u=" + type_str(u) + " " + str(lhs) + " > " + str(rhs);
  return {};
}

// extractions

std::string check_al(std::mt19937_64& g, const SuiteContext& ctx, SuiteReport&) {
  const auto& ss = pick(g, ctx);
  const auto& s = ss.m->system();
  const auto& l = ss.l;
  IVec side(s.dim(), s.dim() == 2 ? 20 : 10);
  auto in = s.dim() == 2 ? spanned_box(g, ss, side, 0.05, 0.12, l.lambda) : spanned_box(g, ss, side, 0.08, 0.14, l.lambda);
  Q scale = grid_between(g, l.lambda, in.diam);
  auto e = al_extract(*ss.m, {}, in.seeds, scale, l);
  std::string where = ss.name + " scale=" + str(scale) + " K=" + sites_str(in.seeds);
  if (e.diam < scale || e.diam > 3 * scale) return "diam* " + str(e.diam) + " outside [m, 3m]: " + where;
  if (!is_subset(e.seeds, in.seeds)) return "seeds escape K: " + where;
  if (s.span_oracle({}, e.seeds) != std::vector<Iceberg>{e.iceberg}) return "seeds do not span the iceberg: " + where;
  if (ss.m->diam_star(e.iceberg, l.delta) != e.diam) return "reported diam* differs: " + where;
  return {};
}

std::string check_torus_al(std::mt19937_64& g, const SuiteContext& ctx, SuiteReport& rep) {
  const auto& ss = need(ctx, "N_2^2");
  const auto& s = ss.m->system();
  const Int n = 128;
  const Q target = 16;
  auto a = random_box_sites(g, IVec{n, n}, uniform_real(g, 0.08, 0.12));
  Extraction e;
  try {
    e = torus_al_extract(*ss.m, a, n, target, ss.l);
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::WrapDetected && err.kind() != ErrorKind::NoPercolation) throw;
    rep.stats[err.kind() == ErrorKind::WrapDetected ? "wrap" : "no_percolation"] += 1;
    throw Skip{};
  }
  if (e.diam < target / 3 || e.diam > target) return "diam* " + str(e.diam) + " outside [target/3, target]";
  if (s.span_oracle({}, e.seeds) != std::vector<Iceberg>{e.iceberg}) return "lifted seeds do not span the droplet";
  for (const auto& z : e.seeds) {
    IVec w = z;
    for (auto& c : w) c = ((c % n) + n) % n;
    if (!contains(a, w)) return "seed is not a lift of A";
  }
  return {};
}

std::string check_hierarchy_on(std::mt19937_64& g, const SuiteSystem& ss, const SpannedInstance& in, SuiteReport& rep) {
  const auto& s = ss.m->system();
  const auto& l = ss.l;
  Q y = grid_between(g, l.lambda, in.diam / 4);
  auto w = one_step_hierarchy(*ss.m, {}, in.iceberg, in.seeds, y, l);
  std::string where = ss.name + " y=" + str(y) + " K=" + sites_str(in.seeds);
  if (!w.ok()) return w.violations.front() + ": " + where;
  const Q& D = in.diam;
  auto spans = [&](const Extraction& e) {
    return is_subset(e.seeds, in.seeds) && s.span_oracle(e.iceberg.type, e.seeds, e.iceberg.shift) ==
                                               std::vector<Iceberg>{e.iceberg};
  };
  if (w.kind == HierarchyWitness::Case::A) {
    rep.stats["case_a"] += 1;
    Q d1 = ss.m->diam_star(w.first.iceberg, l.delta), d2 = ss.m->diam_star(w.second.iceberg, l.delta);
    if (!spans(w.first) || !spans(w.second)) return "case A side not spanned: " + where;
    if (!set_intersection(w.first.seeds, w.second.seeds).empty()) return "case A seeds overlap: " + where;
    if (!(y <= d2 && d2 <= d1 && d1 <= D - 3 * y && D <= d1 + d2 + 2 * y)) return "case A inequalities: " + where;
  } else {
    rep.stats["case_b"] += 1;
    Q d1 = ss.m->diam_star(w.first.iceberg, l.delta);
    if (!spans(w.first)) return "case B J' not spanned: " + where;
    if (!(y <= D - d1 && D - d1 <= 3 * y)) return "case B gap: " + where;
    if (w.first.iceberg.type == in.iceberg.type) {
      rep.stats["delta_events"] += 1;
      auto inner = s.points(w.first.iceberg);
      if (!is_subset(inner, s.points(in.iceberg))) return "case B J' not nested: " + where;
      std::vector<IVec> pool(inner.begin(), inner.end());
      for (const auto& z : in.a)
        if (s.contains(in.iceberg, z)) pool.push_back(z);
      auto res = s.iceberg_span({}, make_site_set(pool));
      if (std::find(res.icebergs.begin(), res.icebergs.end(), in.iceberg) == res.icebergs.end())
        return "case B delta event fails: " + where;
    }
  }
  return {};
}

std::string check_hierarchy_on(std::mt19937_64& g, const SuiteSystem& ss, const IVec& side, double plo, double phi,
                               SuiteReport& rep) {
  return check_hierarchy_on(g, ss, spanned_box(g, ss, side, plo, phi, 4 * ss.l.lambda), rep);
}

// a filled square and an anti-diagonal square whose closure reaches the first one only
// once complete, so the span ends by joining two large classes
SpannedInstance two_blocks(std::mt19937_64& g, const SuiteSystem& ss) {
  const Int s1 = uniform(g, 8, 20), s2 = uniform(g, 8, 20);
  std::vector<IVec> a;
  for (const auto& z : random_box_sites(g, IVec{s1, s1}, uniform_real(g, 0.0, 0.2))) a.push_back(z);
  for (Int i = 0; i < s1; ++i) a.push_back({i, i});
  for (Int i = 0; i < s2; ++i) a.push_back({s1 + 1 + i, s1 + s2 - 2 - i});
  auto in = largest_span_class(*ss.m, make_site_set(std::move(a)), ss.l.delta);
  if (in.diam < 4 * ss.l.lambda) throw Skip{};
  return in;
}

std::string check_hierarchy(std::mt19937_64& g, const SuiteContext& ctx, SuiteReport& rep) {
  const auto& ss = need(ctx, "N_2^2");
  if (g() % 2) return check_hierarchy_on(g, ss, IVec{16, 16}, 0.06, 0.12, rep);
  return check_hierarchy_on(g, ss, two_blocks(g, ss), rep);
}

// N_3^3 needs diam* near 20 for a one-step hierarchy, which long slabs reach
std::string check_hierarchy_slab(std::mt19937_64& g, const SuiteContext& ctx, SuiteReport& rep) {
  return check_hierarchy_on(g, need(ctx, "N_3^3"), IVec{104, 11, 11}, 0.14, 0.16, rep);
}

std::string check_sideways(std::mt19937_64& g, const SuiteContext& ctx, SuiteReport& rep) {
  const auto& ss = need(ctx, "N_3^3");
  const auto& s = ss.m->system();
  const auto& l = ss.l;
  auto in = spanned_box(g, ss, IVec{12, 12, 12}, 0.08, 0.16, l.lambda);
  // J' runs down the merge chain of J
  auto t = span_tree(*ss.m, {}, in.seeds, l.delta);
  auto outer = s.points(in.iceberg);
  std::vector<int> chain;
  int cur = t.roots.front();
  while (!t.is_leaf(cur)) {
    const auto& n = t.nodes[static_cast<std::size_t>(cur)];
    const auto& a = t.nodes[static_cast<std::size_t>(n.left)];
    const auto& b = t.nodes[static_cast<std::size_t>(n.right)];
    cur = a.diam >= b.diam ? n.left : n.right;
    const auto& c = t.nodes[static_cast<std::size_t>(cur)];
    if (in.diam - c.diam >= l.lambda && is_subset(s.points(c.iceberg), outer)) chain.push_back(cur);
  }
  if (chain.empty()) throw Skip{};
  const auto& jp = t.nodes[static_cast<std::size_t>(chain[g() % chain.size()])].iceberg;
  auto r = sideways_extract(*ss.m, {}, in.iceberg, jp, in.a, l);
  std::string where = ss.name + " J'=" + sites_str(s.points(jp)).substr(0, 60) + " A=" + sites_str(in.a);
  Q gamma = ss.m->diam_star(in.iceberg, l.delta) - ss.m->diam_star(jp, l.delta);
  if (r.gamma != gamma) return "gamma differs: " + where;
  if (r.trivial) {
    rep.stats["trivial"] += 1;
    if (r.iceberg != in.iceberg || !set_intersection(r.seeds, s.points(jp)).empty()) return "trivial case: " + where;
    return {};
  }
  if (r.trimmed) rep.stats["trimmed"] += 1;
  Q d3 = l.delta * l.delta * l.delta * gamma;
  Q dx = ss.m->diam_star(r.iceberg, l.delta);
  if (dx != r.diam) return "reported diam*_x differs: " + where;
  if (dx < d3) return "diam*_x below delta^3 gamma: " + where;
  if (r.trimmed && dx > gamma) return "trimmed diam*_x above gamma: " + where;
  auto inner = s.points(jp);
  for (const auto& z : r.seeds)
    if (!contains(in.a, z) || !s.contains(in.iceberg, z) || contains(inner, z)) return "seed outside (J cap A) \\ J': " + where;
  if (r.iceberg.type != r.path || s.span_oracle(r.path, r.seeds, r.shift) != std::vector<Iceberg>{r.iceberg})
    return "seeds do not span the sideways iceberg: " + where;
  for (const auto& w : r.path)
    if (&w != &r.path.back() && dot(w, r.shift) != 0) return "shift leaves the ancestor hyperplanes: " + where;
  return {};
}

std::string check_extremal(std::mt19937_64& g, const SuiteContext& ctx, SuiteReport& rep) {
  const auto& ss = need(ctx, "N_2^2");
  const auto& s = ss.m->system();
  Int n = uniform(g, 8, 20);
  auto in = spanned_box(g, ss, IVec{n, n}, 0.03, 0.15, Q(0));
  std::size_t hits = 0;
  for (const auto& z : in.a)
    if (s.contains(in.iceberg, z)) ++hits;
  Q ratio = Q(static_cast<long>(hits)) / in.diam;
  double r = to_double(ratio);
  auto it = rep.stats.find("min_ratio");
  if (it == rep.stats.end() || r < it->second) rep.stats["min_ratio"] = r;
  rep.stats["ledger_c"] = to_double(ss.l.c);
  if (ratio < ss.l.c) return "ratio " + str(ratio) + " below ledger c: A=" + sites_str(in.a);
  return {};
}

const std::vector<SuiteDef>& registry() {
  static const std::vector<SuiteDef> defs = {
      {"u_closed", "iceberg droplets are u-closed", check_u_closed},
      {"type_monotone", "container type depth is monotone in K", check_type_monotone},
      {"container_closed", "containers avoid H_T(u) and are u-closed", check_container_closed},
      {"prefix_reduction", "closure and container agree along the prefixes above the container type",
       check_prefix_reduction},
      {"spanned_reduction", "spanned icebergs stay spanned for shorter prefixes", check_spanned_reduction},
      {"span_oracle", "spanning algorithm equals the strong-component oracle", check_span_oracle},
      {"merge_order", "span is independent of merge order over 20 random orders", check_merge_order},
      {"sandwich", "diam / C <= wd_u <= N diam", check_sandwich},
      {"translation", "wd is translation invariant", check_translation},
      {"cross_weight", "wd_u <= N C wd_v", check_cross_weight},
      {"f_inflation", "wd_u(F_v(X)) <= (N C)^2 wd_u(X)", check_f_inflation},
      {"g_invariance", "G_u of the u-closure equals G_u(K)", check_g_invariance},
      {"volume", "|J| <= (C delta^-k diam*(J) + 1)^d", check_volume},
      {"nested_diameter", "diam*(J) - diam*(J') <= delta^k max_v (d_v(J) - d_v(J'))", check_nested_diameter},
      {"subadd", "wd(F(X1 + X2)) <= wd(X1) + wd(X2) for intersecting X1, X2", check_subadd},
      {"al", "scale extraction lands in [m, 3m] with spanning seeds", check_al},
      {"torus_al", "torus extraction lands in [target/3, target] with spanning lifted seeds", check_torus_al, "N_2^2"},
      {"hierarchy", "one-step hierarchy witnesses on N_2^2", check_hierarchy, "N_2^2"},
      {"hierarchy_slab", "one-step hierarchy witnesses on N_3^3 slabs", check_hierarchy_slab, "N_3^3"},
      {"sideways", "sideways icebergs on N_3^3", check_sideways, "N_3^3"},
      {"extremal", "|J cap A| / diam*(J) on spanned N_2^2 icebergs", check_extremal, "N_2^2"},
  };
  return defs;
}

const SuiteDef& find_suite(const std::string& name) {
  for (const auto& d : registry())
    if (d.name == name) return d;
  throw Error(ErrorKind::PreconditionFailed, "unknown suite " + name);
}

}  // namespace

void SuiteContext::add(const std::string& name, const UpdateFamily& u, const BoundingTree& t,
                       std::uint64_t ledger_seed) {
  auto ss = std::make_unique<SuiteSystem>();
  ss->name = name;
  ss->m = std::make_unique<Measures>(IcebergSystem(u, t));
  LedgerOptions o;
  o.seed = ledger_seed;
  o.slack_samples = 80;
  ss->l = build_ledger(*ss->m, t.depth() + 1, o);
  systems_.push_back(std::move(ss));
}

SuiteContext SuiteContext::standard() {
  SuiteContext c;
  for (auto [r, d] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 3}}) {
    auto u = neighbour_family(r, d);
    c.add("N_" + std::to_string(r) + "^" + std::to_string(d), u, construct_tree(u));
  }
  return c;
}

const SuiteSystem& SuiteContext::get(const std::string& name) const {
  for (const auto& s : systems_)
    if (s->name == name) return *s;
  throw Error(ErrorKind::PreconditionFailed, "no system " + name);
}

bool SuiteContext::has(const std::string& name) const {
  for (const auto& s : systems_)
    if (s->name == name) return true;
  return false;
}

std::mt19937_64 instance_stream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

SiteSet random_box_sites(std::mt19937_64& g, const IVec& side, double p) {
  std::bernoulli_distribution coin(p);
  const std::size_t d = side.size();
  std::vector<IVec> out;
  IVec z(d, 0);
  while (true) {
    if (coin(g)) out.push_back(z);
    std::size_t i = 0;
    while (i < d && z[i] == side[i] - 1) z[i++] = 0;
    if (i == d) break;
    ++z[i];
  }
  return make_site_set(std::move(out));
}

SpannedInstance largest_span_class(const Measures& m, const SiteSet& a, const Q& delta) {
  const auto& sys = m.system();
  SiteSet sorted_a = make_site_set(a);
  auto res = sys.iceberg_span({}, sorted_a);
  SpannedInstance out;
  out.a = sorted_a;
  for (std::size_t i = 0; i < res.icebergs.size(); ++i) {
    Q d = m.diam_star_tight(res.icebergs[i], delta);
    if (i == 0 || d > out.diam) {
      out.diam = d;
      out.seeds = res.classes[i];
      out.iceberg = res.icebergs[i];
    }
  }
  return out;
}

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& d : registry()) out.push_back(d.name);
  return out;
}

std::string suite_description(const std::string& name) { return find_suite(name).description; }

SuiteReport run_suite(const std::string& name, const SuiteContext& ctx, int samples, std::uint64_t seed) {
  const auto& def = find_suite(name);
  if (ctx.systems().empty()) throw Error(ErrorKind::PreconditionFailed, "empty suite context");
  if (!def.system.empty() && !ctx.has(def.system))
    throw Error(ErrorKind::PreconditionFailed, "suite " + name + " needs system " + def.system);
  SuiteReport rep;
  rep.name = name;
  const std::uint64_t cap = 50ull * static_cast<std::uint64_t>(std::max(samples, 1));
  for (std::uint64_t i = 0; rep.samples < samples && i < cap; ++i) {
    auto g = instance_stream(seed, i);
    std::string bad;
    try {
      bad = def.check(g, ctx, rep);
    } catch (const Skip&) {
      ++rep.skipped;
      continue;
    } catch (const Error& e) {
      bad = e.what();
    }
    ++rep.samples;
    if (!bad.empty()) {
      ++rep.failures;
      if (rep.counterexamples.size() < 5)
        rep.counterexamples.push_back("seed " + std::to_string(seed) + " index " + std::to_string(i) + ": " + bad);
    }
  }
  return rep;
}

std::string suite_json(const SuiteReport& r) {
  nlohmann::json j;
  j["suite"] = r.name;
  j["samples"] = r.samples;
  j["failures"] = r.failures;
  j["skipped"] = r.skipped;
  j["passed"] = r.passed();
  j["counterexamples"] = r.counterexamples;
  j["stats"] = r.stats;
  return j.dump();
}

}  // namespace bootlab
