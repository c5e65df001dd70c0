#include "bootlab/iceberg.hpp"

#include "bootlab/errors.hpp"
#include "bootlab/lp.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace bootlab {

namespace {

Int ceil_sqrt_int(const Q& x) {
  Int r = 0;
  while (Q(r * r) < x) ++r;
  return r;
}

Int floor_div(Int a, Int b) {
  Int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

Int ceil_div(Int a, Int b) { return -floor_div(-a, b); }

Q offset_dot(const IVec& v, const QVec& offset) { return offset.empty() ? Q(0) : dot(v, offset); }

struct IntConstraint {
  IVec a;
  Int t;  // <a,z> <= t
};

std::vector<IntConstraint> integer_form(const std::vector<Constraint>& cs, const QVec& offset) {
  std::vector<IntConstraint> out;
  for (const auto& c : cs) out.push_back({c.a, floor_q(c.b - offset_dot(c.a, offset))});
  return out;
}

// visits every lattice point; the last coordinate is solved directly
template <class F>
void for_each_point(const std::vector<Constraint>& cs, int dim, const QVec& offset, F&& visit) {
  if (dim == 0) return;
  IVec lo(dim), hi(dim);
  for (int i = 0; i < dim; ++i) {
    for (int sgn : {1, -1}) {
      LinearProgram lp;
      lp.n = dim;
      for (const auto& c : cs) lp.add(to_q(c.a), Sense::Le, c.b);
      lp.objective.assign(dim, Q(0));
      lp.objective[i] = sgn;
      LpResult r = solve_lp(lp);
      if (r.status == LpStatus::Infeasible) return;
      if (r.status == LpStatus::Unbounded) throw Error(ErrorKind::Unbounded, "polytope is unbounded");
      Q y = offset.empty() ? Q(0) : offset[i];
      if (sgn > 0) hi[i] = floor_q(r.value - y);
      else lo[i] = ceil_q(-r.value - y);
    }
    if (lo[i] > hi[i]) return;
  }
  auto ics = integer_form(cs, offset);
  IVec z = lo;
  const int last = dim - 1;
  while (true) {
    Int zlo = lo[last], zhi = hi[last];
    for (const auto& c : ics) {
      Int s = c.t;
      for (int i = 0; i < last; ++i) s -= c.a[i] * z[i];
      Int al = c.a[last];
      if (al > 0) zhi = std::min(zhi, floor_div(s, al));
      else if (al < 0) zlo = std::max(zlo, ceil_div(s, al));
      else if (s < 0) { zhi = zlo - 1; break; }
    }
    for (Int v = zlo; v <= zhi; ++v) {
      z[last] = v;
      visit(z);
    }
    int i = 0;
    while (i < last && z[i] == hi[i]) { z[i] = lo[i]; ++i; }
    if (i >= last) break;
    ++z[i];
  }
}

}  // namespace

Droplet min_droplet(const std::vector<IVec>& dirs, const SiteSet& k, const QVec& offset) {
  if (k.empty()) throw Error(ErrorKind::PreconditionFailed, "minimal droplet of an empty set");
  Droplet d;
  d.dirs = dirs;
  for (const auto& v : dirs) {
    Int m = dot(k[0], v);
    for (const auto& z : k) m = std::max(m, dot(z, v));
    d.bounds.push_back(Q(m) + offset_dot(v, offset));
  }
  return d;
}

std::vector<Constraint> droplet_constraints(const Droplet& d) {
  std::vector<Constraint> cs;
  for (std::size_t i = 0; i < d.dirs.size(); ++i) cs.push_back({d.dirs[i], d.bounds[i]});
  return cs;
}

bool droplet_contains(const Droplet& d, const IVec& z, const QVec& offset) {
  for (std::size_t i = 0; i < d.dirs.size(); ++i)
    if (Q(dot(z, d.dirs[i])) + offset_dot(d.dirs[i], offset) > d.bounds[i]) return false;
  return true;
}

SiteSet polytope_points(const std::vector<Constraint>& cs, int dim, const QVec& offset) {
  std::vector<IVec> out;
  for_each_point(cs, dim, offset, [&](const IVec& z) { out.push_back(z); });
  return make_site_set(std::move(out));
}

std::size_t polytope_count(const std::vector<Constraint>& cs, int dim, const QVec& offset) {
  std::size_t n = 0;
  for_each_point(cs, dim, offset, [&](const IVec&) { ++n; });
  return n;
}

bool sets_strongly_connected(const SiteSet& a, const SiteSet& b, const Q& r2) {
  if (a.empty() || b.empty()) return false;
  const SiteSet& small = a.size() <= b.size() ? a : b;
  const SiteSet& large = a.size() <= b.size() ? b : a;
  auto offs = ball_offsets(static_cast<int>(a[0].size()), r2);
  if (offs.size() * small.size() < small.size() * large.size()) {
    SiteHashSet h(large.begin(), large.end());
    for (const auto& z : small) {
      if (h.count(z)) return true;
      for (const auto& o : offs)
        if (h.count(z + o)) return true;
    }
    return false;
  }
  for (const auto& x : small)
    for (const auto& y : large)
      if (Q(norm2(x - y)) <= r2) return true;
  return false;
}

bool Iceberg::operator<(const Iceberg& o) const {
  if (type != o.type) return type < o.type;
  if (shift != o.shift) return shift < o.shift;
  return bounds < o.bounds;
}

TypePath prefix(const TypePath& u, std::size_t i) { return TypePath(u.begin(), u.begin() + static_cast<long>(i)); }

IcebergSystem::IcebergSystem(UpdateFamily family, BoundingTree tree, QVec offset)
    : family_(std::move(family)), tree_(std::move(tree)), offset_(std::move(offset)) {
  if (offset_.empty()) offset_.assign(family_.dimension, Q(0));
  r2_ = range2(family_);
}

QVec IcebergSystem::normalize_shift(const QVec& shift) const {
  return shift.empty() ? QVec(dim(), Q(0)) : shift;
}

HalfSpaceUnion IcebergSystem::assist(const TypePath& u, const QVec& shift) const {
  // H_T(u, x): <p - x, u_i> < 0 for some i
  HalfSpaceUnion h;
  for (const auto& w : u) h.push_back({w, shift.empty() ? Q(0) : dot(w, shift)});
  return h;
}

bool IcebergSystem::in_assist(const IVec& z, const TypePath& u, const QVec& shift) const {
  for (const auto& h : assist(u, shift))
    if (in_halfspace(z, offset_, h)) return true;
  return false;
}

Iceberg IcebergSystem::min_iceberg_droplet(const TypePath& u, const SiteSet& k, const QVec& shift) const {
  if (tree_.is_leaf(u)) throw Error(ErrorKind::PreconditionFailed, "iceberg type must be a non-leaf vertex");
  for (const auto& z : k)
    if (in_assist(z, u, shift)) throw Error(ErrorKind::SitesInAssist, "site lies in the assisting half-spaces");
  Iceberg j;
  j.type = u;
  j.shift = normalize_shift(shift);
  j.bounds = min_droplet(tree_.children(u), k, offset_).bounds;
  return j;
}

std::vector<Constraint> IcebergSystem::constraints(const Iceberg& j) const {
  std::vector<Constraint> cs = droplet_constraints(droplet_of(j));
  for (const auto& w : j.type) cs.push_back({-w, -dot(w, j.shift)});
  return cs;
}

Droplet IcebergSystem::droplet_of(const Iceberg& j) const { return Droplet{tree_.children(j.type), j.bounds}; }

SiteSet IcebergSystem::points(const Iceberg& j) const { return polytope_points(constraints(j), dim(), offset_); }

std::size_t IcebergSystem::count(const Iceberg& j) const { return polytope_count(constraints(j), dim(), offset_); }

bool IcebergSystem::contains(const Iceberg& j, const IVec& z) const {
  if (!droplet_contains(droplet_of(j), z, offset_)) return false;
  return !in_assist(z, j.type, j.shift);
}

SiteSet IcebergSystem::u_closure(const TypePath& u, const SiteSet& k, const QVec& shift) const {
  if (k.empty()) return {};
  Iceberg j = min_iceberg_droplet(u, k, shift);
  LatticeConfig cfg;
  cfg.offset = offset_;
  cfg.domain = Domain::polytope(constraints(j));
  std::size_t cap = count(j);
  return closure(family_, k, assist(u, shift), cfg, cap + 1);
}

SiteSet IcebergSystem::merge_closures(const TypePath& u, const SiteSet& seeds, const SiteSet& a, const SiteSet& b,
                                      const QVec& shift) const {
  Iceberg j = min_iceberg_droplet(u, seeds, shift);
  LatticeConfig cfg;
  cfg.offset = offset_;
  cfg.domain = Domain::polytope(constraints(j));
  const SiteSet& big = a.size() >= b.size() ? a : b;
  const SiteSet& small = a.size() >= b.size() ? b : a;
  return extend_closure(family_, big, small, assist(u, shift), cfg, count(j) + 1);
}

Iceberg IcebergSystem::iceberg_container(const TypePath& u, const SiteSet& k, const QVec& shift) const {
  if (k.empty()) throw Error(ErrorKind::PreconditionFailed, "container of an empty set");
  for (const auto& z : k)
    if (in_assist(z, u, shift)) throw Error(ErrorKind::SitesInAssist, "site lies in the assisting half-spaces");
  const std::size_t kk = u.size();
  QVec x = normalize_shift(shift);
  std::vector<Iceberg> js;
  std::vector<SiteSet> pts;
  for (std::size_t i = 0; i <= kk; ++i) {
    js.push_back(min_iceberg_droplet(prefix(u, i), k, x));
    // the deepest droplet is never tested against a half-space
    pts.push_back(i < kk ? points(js.back()) : SiteSet{});
  }
  std::vector<bool> reach(kk + 1, false);
  reach[0] = true;
  std::size_t best = 0;
  for (std::size_t i = 1; i <= kk; ++i) {
    const IVec& w = u[i - 1];
    for (std::size_t j = 0; j < i && !reach[i]; ++j)
      if (reach[j] && strongly_connected_to_halfspace(pts[j], w, dot(w, x), r2_, offset_)) reach[i] = true;
    if (reach[i]) best = i;
  }
  return js[best];
}

SpanResult IcebergSystem::iceberg_span(const TypePath& u, const SiteSet& k, const QVec& shift,
                                       const MergeChooser& choose, const MergeObserver& observe) const {
  SpanResult res;
  for (const auto& z : k) {
    res.classes.push_back({z});
    res.closures.push_back(u_closure(u, {z}, shift));
  }
  // slots keep their index; a merge stores the union in the lower slot and retires the other.
  // eligibility is kept as sorted adjacency and only changes around the merged slot
  const int d = dim();
  const Int reach = ceil_sqrt_int(r2_);
  const std::size_t n = res.classes.size();
  std::vector<std::pair<IVec, IVec>> boxes;
  auto box_of = [&](const SiteSet& s) {
    IVec lo = s.front(), hi = s.front();
    for (const auto& z : s)
      for (int i = 0; i < d; ++i) {
        lo[i] = std::min(lo[i], z[i]);
        hi[i] = std::max(hi[i], z[i]);
      }
    return std::make_pair(lo, hi);
  };
  auto linked = [&](std::size_t a, std::size_t b) {
    for (int i = 0; i < d; ++i)
      if (boxes[a].first[i] > boxes[b].second[i] + reach || boxes[b].first[i] > boxes[a].second[i] + reach)
        return false;
    return sets_strongly_connected(res.closures[a], res.closures[b], r2_);
  };
  for (const auto& c : res.closures) boxes.push_back(box_of(c));
  const auto offs = ball_offsets(d, r2_);
  std::vector<char> alive(n, 1);
  std::vector<std::set<std::size_t>> adj(n);
  std::set<std::size_t> ready;  // slots with an eligible partner above them
  auto refresh = [&](std::size_t a) {
    if (alive[a] && adj[a].upper_bound(a) != adj[a].end())
      ready.insert(a);
    else
      ready.erase(a);
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (linked(a, b)) {
        adj[a].insert(b);
        adj[b].insert(a);
      }
  for (std::size_t a = 0; a < n; ++a) refresh(a);
  while (!ready.empty()) {
    std::size_t a, b;
    if (choose) {
      std::vector<std::pair<std::size_t, std::size_t>> eligible;
      for (std::size_t x : ready)
        for (auto it = adj[x].upper_bound(x); it != adj[x].end(); ++it) eligible.push_back({x, *it});
      std::tie(a, b) = eligible[choose(eligible.size()) % eligible.size()];
    } else {
      a = *ready.begin();
      b = *adj[a].upper_bound(a);
    }
    res.merges.push_back({res.classes[a], res.classes[b]});
    SiteSet merged = set_union(res.classes[a], res.classes[b]);
    res.closures[a] = merge_closures(u, merged, res.closures[a], res.closures[b], shift);
    res.classes[a] = std::move(merged);
    if (observe) observe(res.classes[a], res.closures[a]);
    boxes[a] = box_of(res.closures[a]);
    alive[b] = 0;
    res.closures[b].clear();
    res.classes[b].clear();
    std::vector<std::size_t> touched(adj[b].begin(), adj[b].end());
    for (std::size_t c : adj[b]) adj[c].erase(b);
    adj[b].clear();
    for (std::size_t c : adj[a]) {
      adj[c].erase(a);
      touched.push_back(c);
    }
    adj[a].clear();
    // one hash of the merged closure serves every candidate
    SiteHashSet ha(res.closures[a].begin(), res.closures[a].end());
    auto linked_to_a = [&](std::size_t c) {
      for (int i = 0; i < d; ++i)
        if (boxes[a].first[i] > boxes[c].second[i] + reach || boxes[c].first[i] > boxes[a].second[i] + reach)
          return false;
      for (const auto& z : res.closures[c]) {
        if (ha.count(z)) return true;
        for (const auto& o : offs)
          if (ha.count(z + o)) return true;
      }
      return false;
    };
    for (std::size_t c = 0; c < n; ++c)
      if (alive[c] && c != a && linked_to_a(c)) {
        adj[a].insert(c);
        adj[c].insert(a);
        touched.push_back(c);
      }
    refresh(a);
    refresh(b);
    for (std::size_t c : touched) refresh(c);
  }
  std::vector<SiteSet> classes, closures;
  for (std::size_t a = 0; a < n; ++a)
    if (alive[a]) {
      classes.push_back(std::move(res.classes[a]));
      closures.push_back(std::move(res.closures[a]));
    }
  res.classes = std::move(classes);
  res.closures = std::move(closures);
  // report classes in order of their least site
  std::vector<std::size_t> idx(res.classes.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t p, std::size_t q) { return res.classes[p] < res.classes[q]; });
  SpanResult sorted;
  sorted.merges = std::move(res.merges);
  for (std::size_t i : idx) {
    sorted.classes.push_back(res.classes[i]);
    sorted.closures.push_back(res.closures[i]);
    sorted.icebergs.push_back(iceberg_container(u, res.closures[i], shift));
  }
  return sorted;
}

std::vector<Iceberg> IcebergSystem::span_oracle(const TypePath& u, const SiteSet& k, const QVec& shift) const {
  std::vector<Iceberg> out;
  for (const auto& comp : strong_components(u_closure(u, k, shift), r2_)) out.push_back(iceberg_container(u, comp, shift));
  return out;
}

SpannedWitness IcebergSystem::is_iceberg_spanned(const TypePath& u, const Iceberg& j, const SiteSet& a) const {
  SpannedWitness w;
  std::vector<IVec> seeds;
  for (const auto& z : a)
    if (contains(j, z) && !in_assist(z, u, j.shift)) seeds.push_back(z);
  if (seeds.empty()) return w;
  SpanResult s = iceberg_span(u, make_site_set(seeds), j.shift);
  for (std::size_t i = 0; i < s.icebergs.size(); ++i)
    if (s.icebergs[i] == j) {
      w.spanned = true;
      w.seeds = s.classes[i];
      return w;
    }
  return w;
}

std::pair<SiteSet, SiteSet> IcebergSystem::penultimate_split(const TypePath& u, const SiteSet& k, const QVec& shift) const {
  if (k.size() < 2) throw Error(ErrorKind::TooSmall, "need at least two sites");
  SpanResult s = iceberg_span(u, k, shift);
  if (s.classes.size() != 1) throw Error(ErrorKind::NotConnected, "u-closure is not strongly connected");
  return s.merges.back();
}

bool is_internally_spanned(const UpdateFamily& u, const Droplet& d, const SiteSet& a, const QVec& offset) {
  std::vector<IVec> seeds;
  for (const auto& z : a)
    if (droplet_contains(d, z, offset)) seeds.push_back(z);
  if (seeds.empty()) return false;
  LatticeConfig cfg;
  cfg.offset = offset.empty() ? QVec(u.dimension, Q(0)) : offset;
  cfg.domain = Domain::polytope(droplet_constraints(d));
  std::size_t cap = polytope_count(droplet_constraints(d), u.dimension, offset);
  SiteSet cl = closure(u, make_site_set(seeds), {}, cfg, cap + 1);
  for (const auto& comp : strong_components(cl, range2(u)))
    if (min_droplet(d.dirs, comp, offset) == d) return true;
  return false;
}

}  // namespace bootlab
