#include "bootlab/lattice.hpp"

#include "bootlab/errors.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <unordered_map>

namespace bootlab {

SiteSet make_site_set(std::vector<IVec> sites) {
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  return sites;
}

bool contains(const SiteSet& s, const IVec& x) { return std::binary_search(s.begin(), s.end(), x); }

SiteSet set_union(const SiteSet& a, const SiteSet& b) {
  SiteSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

SiteSet set_difference(const SiteSet& a, const SiteSet& b) {
  SiteSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

SiteSet set_intersection(const SiteSet& a, const SiteSet& b) {
  SiteSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(const SiteSet& a, const SiteSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

Domain Domain::torus(Int n) {
  if (n < 1) throw Error(ErrorKind::PreconditionFailed, "torus side must be >= 1");
  Domain d;
  d.kind = Kind::Torus;
  d.n = n;
  return d;
}

Domain Domain::box(IVec lo, IVec hi) {
  Domain d;
  d.kind = Kind::Box;
  d.lo = std::move(lo);
  d.hi = std::move(hi);
  return d;
}

Domain Domain::polytope(std::vector<Constraint> cs) {
  Domain d;
  d.kind = Kind::Region;
  d.region = std::move(cs);
  return d;
}

LatticeConfig LatticeConfig::plain(int d, Domain dom) {
  LatticeConfig c;
  c.offset.assign(d, Q(0));
  c.domain = std::move(dom);
  return c;
}

bool in_halfspace(const IVec& z, const QVec& offset, const HalfSpace& h) {
  Q v = dot(z, to_q(h.u));
  if (!offset.empty()) v += dot(h.u, offset);
  return v < h.a;
}

SiteTester::SiteTester(const HalfSpaceUnion& assist, const LatticeConfig& cfg) {
  kind_ = cfg.domain.kind;
  lo_ = cfg.domain.lo;
  hi_ = cfg.domain.hi;
  auto shift_of = [&](const IVec& u) { return cfg.offset.empty() ? Q(0) : dot(u, cfg.offset); };
  for (const auto& h : assist) {
    // <z,u> + <y,u> < a  iff  <z,u> <= ceil(a - <y,u>) - 1
    assist_.push_back({h.u, ceil_q(h.a - shift_of(h.u)) - 1});
  }
  for (const auto& c : cfg.domain.region) region_.push_back({c.a, floor_q(c.b - shift_of(c.a))});
}

bool SiteTester::in_assist(const IVec& z) const {
  for (const auto& h : assist_)
    if (dot(z, h.u) <= h.t) return true;
  return false;
}

bool SiteTester::in_domain(const IVec& z) const {
  switch (kind_) {
    case Domain::Kind::Unbounded:
    case Domain::Kind::Torus:
      return true;
    case Domain::Kind::Box:
      for (std::size_t i = 0; i < z.size(); ++i)
        if (z[i] < lo_[i] || z[i] > hi_[i]) return false;
      return true;
    case Domain::Kind::Region:
      for (const auto& h : region_)
        if (dot(z, h.u) > h.t) return false;
      return true;
  }
  return true;
}

namespace {

IVec wrap(IVec z, Int n) {
  for (auto& x : z) x = ((x % n) + n) % n;
  return z;
}

}  // namespace

SiteSet closure(const UpdateFamily& u, const SiteSet& k, const HalfSpaceUnion& assist, const LatticeConfig& cfg,
                std::size_t cap) {
  return extend_closure(u, {}, k, assist, cfg, cap);
}

SiteSet extend_closure(const UpdateFamily& u, const SiteSet& closed, const SiteSet& k, const HalfSpaceUnion& assist,
                       const LatticeConfig& cfg, std::size_t cap) {
  const bool torus = cfg.domain.kind == Domain::Kind::Torus;
  const Int n = cfg.domain.n;
  SiteTester tester(assist, cfg);
  SiteHashSet inf(closed.begin(), closed.end());
  std::deque<IVec> queue;
  for (const auto& z0 : k) {
    if (static_cast<int>(z0.size()) != u.dimension)
      throw Error(ErrorKind::DimensionMismatch, "site dimension differs from family");
    IVec z = torus ? wrap(z0, n) : z0;
    if (!tester.in_domain(z)) throw Error(ErrorKind::PreconditionFailed, "initial site outside the domain");
    if (inf.insert(z).second) queue.push_back(z);
  }
  auto infected = [&](const IVec& z) { return inf.count(z) > 0 || tester.in_assist(z); };
  std::vector<IVec> vecs = rule_vectors(u);
  std::size_t added = 0;
  while (!queue.empty()) {
    IVec x = std::move(queue.front());
    queue.pop_front();
    for (const auto& xi : vecs) {
      IVec c = x - xi;
      if (torus) c = wrap(c, n);
      if (inf.count(c) || !tester.in_domain(c) || tester.in_assist(c)) continue;
      bool fires = false;
      for (const auto& rule : u.rules) {
        bool all = true;
        for (const auto& v : rule) {
          IVec s = c + v;
          if (torus) s = wrap(s, n);
          if (!infected(s)) { all = false; break; }
        }
        if (all) { fires = true; break; }
      }
      if (!fires) continue;
      inf.insert(c);
      queue.push_back(c);
      if (++added > cap) throw Error(ErrorKind::CapExceeded, "closure exceeded cap of " + std::to_string(cap));
    }
  }
  std::vector<IVec> out;
  out.reserve(inf.size());
  for (const auto& z : inf)
    if (!tester.in_assist(z)) out.push_back(z);
  return make_site_set(std::move(out));
}

TorusEngine::TorusEngine(const UpdateFamily& u, Int n) : d_(u.dimension), n_(n) {
  if (n < 1) throw Error(ErrorKind::PreconditionFailed, "torus side must be >= 1");
  volume_ = 1;
  for (int i = 0; i < d_; ++i) volume_ *= static_cast<std::size_t>(n);
  if (volume_ >= (std::size_t(1) << 31)) throw Error(ErrorKind::PreconditionFailed, "torus too large");
  vecs_ = rule_vectors(u);
  std::vector<IVec> tv;
  int r = 0;
  if (threshold_form(u, tv, r)) {
    threshold_ = true;
    r_ = r;
  }
  for (const auto& rule : u.rules) {
    std::vector<int> idx;
    for (const auto& v : rule)
      idx.push_back(static_cast<int>(std::lower_bound(vecs_.begin(), vecs_.end(), v) - vecs_.begin()));
    rules_.push_back(idx);
  }
  plus_.assign(vecs_.size(), std::vector<std::uint32_t>(volume_));
  minus_.assign(vecs_.size(), std::vector<std::uint32_t>(volume_));
  for (std::size_t j = 0; j < vecs_.size(); ++j) {
    IVec neg = -vecs_[j];
    for (std::size_t i = 0; i < volume_; ++i) {
      plus_[j][i] = static_cast<std::uint32_t>(shift(i, vecs_[j]));
      minus_[j][i] = static_cast<std::uint32_t>(shift(i, neg));
    }
  }
}

std::size_t TorusEngine::index(const IVec& z) const {
  std::size_t i = 0;
  for (int k = d_ - 1; k >= 0; --k) {
    Int c = ((z[k] % n_) + n_) % n_;
    i = i * static_cast<std::size_t>(n_) + static_cast<std::size_t>(c);
  }
  return i;
}

IVec TorusEngine::coords(std::size_t i) const {
  IVec z(d_);
  for (int k = 0; k < d_; ++k) {
    z[k] = static_cast<Int>(i % static_cast<std::size_t>(n_));
    i /= static_cast<std::size_t>(n_);
  }
  return z;
}

std::size_t TorusEngine::shift(std::size_t i, const IVec& v) const {
  std::size_t out = 0, mul = 1, rest = i;
  for (int k = 0; k < d_; ++k) {
    Int c = static_cast<Int>(rest % static_cast<std::size_t>(n_));
    rest /= static_cast<std::size_t>(n_);
    c = ((c + v[k]) % n_ + n_) % n_;
    out += static_cast<std::size_t>(c) * mul;
    mul *= static_cast<std::size_t>(n_);
  }
  return out;
}

std::size_t TorusEngine::run(std::vector<unsigned char>& state) const {
  std::vector<std::size_t> queue;
  queue.reserve(volume_);
  for (std::size_t i = 0; i < volume_; ++i)
    if (state[i]) queue.push_back(i);
  std::size_t count = queue.size();
  if (threshold_) {
    // count[y] = #{v : y + v infected}; infect once it reaches r
    std::vector<unsigned short> cnt(volume_, 0);
    std::size_t head = 0;
    while (head < queue.size()) {
      std::size_t x = queue[head++];
      for (std::size_t j = 0; j < vecs_.size(); ++j) {
        std::size_t y = minus_[j][x];
        if (state[y]) continue;
        if (++cnt[y] >= r_) {
          state[y] = 1;
          queue.push_back(y);
          ++count;
        }
      }
    }
    return count;
  }
  std::size_t head = 0;
  while (head < queue.size()) {
    std::size_t x = queue[head++];
    for (std::size_t jv = 0; jv < vecs_.size(); ++jv) {
      std::size_t c = minus_[jv][x];
      if (state[c]) continue;
      for (const auto& rule : rules_) {
        bool all = true;
        for (int j : rule)
          if (!state[plus_[j][c]]) { all = false; break; }
        if (all) {
          state[c] = 1;
          queue.push_back(c);
          ++count;
          break;
        }
      }
    }
  }
  return count;
}

SiteSet torus_closure(const UpdateFamily& u, const SiteSet& a, Int n) {
  TorusEngine eng(u, n);
  std::vector<unsigned char> state(eng.volume(), 0);
  for (const auto& z : a) {
    for (Int c : z)
      if (c < 0 || c >= n) throw Error(ErrorKind::PreconditionFailed, "torus site outside [0,n)^d");
    state[eng.index(z)] = 1;
  }
  eng.run(state);
  std::vector<IVec> out;
  for (std::size_t i = 0; i < state.size(); ++i)
    if (state[i]) out.push_back(eng.coords(i));
  return make_site_set(std::move(out));
}

std::vector<IVec> ball_offsets(int d, const Q& r2) {
  Int m = floor_q(r2);
  Int rad = 0;
  while ((rad + 1) * (rad + 1) <= m) ++rad;
  std::vector<IVec> out;
  IVec cur(d, -rad);
  while (true) {
    if (Q(norm2(cur)) <= r2 && std::any_of(cur.begin(), cur.end(), [](Int x) { return x != 0; }))
      out.push_back(cur);
    int i = 0;
    while (i < d && cur[i] == rad) cur[i++] = -rad;
    if (i == d) break;
    ++cur[i];
  }
  return out;
}

namespace {

struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) p[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

std::vector<SiteSet> strong_components(const SiteSet& k, const Q& r2) {
  if (k.empty()) return {};
  const int n = static_cast<int>(k.size());
  const int d = static_cast<int>(k[0].size());
  Dsu dsu(n);
  std::vector<IVec> offs = ball_offsets(d, r2);
  if (offs.size() < k.size()) {
    std::unordered_map<IVec, int, VecHash> pos;
    for (int i = 0; i < n; ++i) pos[k[i]] = i;
    for (int i = 0; i < n; ++i)
      for (const auto& o : offs) {
        auto it = pos.find(k[i] + o);
        if (it != pos.end()) dsu.unite(i, it->second);
      }
  } else {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (Q(norm2(k[i] - k[j])) <= r2) dsu.unite(i, j);
  }
  // k is sorted and the representative is the least index, so component
  // order by representative equals order by lexicographic minimum
  std::map<int, SiteSet> comps;
  for (int i = 0; i < n; ++i) comps[dsu.find(i)].push_back(k[i]);
  std::vector<SiteSet> out;
  for (auto& [_, s] : comps) out.push_back(std::move(s));
  return out;
}

bool strongly_connected_to_halfspace(const SiteSet& k, const IVec& u, const Q& a, const Q& r2, const QVec& offset) {
  Q shift = offset.empty() ? Q(0) : dot(u, offset);
  Q bound = r2 * norm2(u);
  for (const auto& z : k) {
    Q v = Q(dot(z, u)) + shift - a;
    if (v < 0 || v * v < bound) return true;
  }
  return false;
}

}  // namespace bootlab
