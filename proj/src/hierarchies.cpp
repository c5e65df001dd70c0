#include "bootlab/hierarchies.hpp"

#include "bootlab/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>

namespace bootlab {

namespace {

QVec point_of(const IVec& z, const QVec& offset) {
  QVec p(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) p[i] = offset[i] + z[i];
  return p;
}

Q support_of(const IVec& v, const SiteSet& s, const QVec& offset) {
  Q best = dot(v, point_of(s.front(), offset));
  for (const auto& z : s) best = std::max(best, dot(v, point_of(z, offset)));
  return best;
}

std::string q(const Q& x) { return q_str(x); }

Extraction node_extraction(const MergeTree::Node& n) { return {n.seeds, n.iceberg, n.diam}; }

}  // namespace

MergeTree span_tree(const Measures& m, const TypePath& u, const SiteSet& k, const Q& delta, const QVec& shift) {
  const auto& sys = m.system();
  MergeTree t;
  std::map<IVec, int> owner;
  for (const auto& z : k) {
    SiteSet s{z};
    auto j = sys.iceberg_container(u, sys.u_closure(u, s, shift), shift);
    owner[z] = static_cast<int>(t.nodes.size());
    t.nodes.push_back({s, j, m.diam_star_tight(j, delta)});
  }
  auto observe = [&](const SiteSet& cls, const SiteSet& closure) {
    std::vector<int> parts;
    for (const auto& z : cls) {
      int o = owner[z];
      if (std::find(parts.begin(), parts.end(), o) == parts.end()) parts.push_back(o);
    }
    if (parts.size() != 2) throw Error(ErrorKind::ExtractionFailed, "merge does not join two classes");
    std::sort(parts.begin(), parts.end());
    auto j = sys.iceberg_container(u, closure, shift);
    MergeTree::Node n{cls, j, m.diam_star_tight(j, delta), parts[0], parts[1]};
    int id = static_cast<int>(t.nodes.size());
    t.nodes.push_back(std::move(n));
    for (const auto& z : cls) owner[z] = id;
  };
  auto res = sys.iceberg_span(u, k, shift, nullptr, observe);
  for (const auto& cls : res.classes) t.roots.push_back(owner[cls.front()]);
  return t;
}

Extraction al_extract(const Measures& m, const TypePath& u, const SiteSet& k, const Q& scale, const ConstantsLedger& l,
                      const QVec& shift) {
  if (k.empty()) throw Error(ErrorKind::Unspanned, "empty seed set");
  MergeTree t = span_tree(m, u, k, l.delta, shift);
  if (t.roots.size() != 1) throw Error(ErrorKind::Unspanned, "span has " + std::to_string(t.roots.size()) + " icebergs");
  const auto& top = t.nodes[static_cast<std::size_t>(t.roots[0])];
  if (scale > top.diam) throw Error(ErrorKind::BadScale, "scale " + q(scale) + " exceeds diam* " + q(top.diam));
  if (scale < l.lambda) throw Error(ErrorKind::BadScale, "scale " + q(scale) + " below lambda " + q(l.lambda));
  // nodes are in merge order, so the first one at or above the scale is where f(t) crosses it
  for (const auto& n : t.nodes) {
    if (n.diam < scale) continue;
    if (n.diam > 3 * scale)
      throw Error(ErrorKind::ExtractionFailed, "class jumped from below " + q(scale) + " to " + q(n.diam));
    return node_extraction(n);
  }
  throw Error(ErrorKind::ExtractionFailed, "no class reached the scale");
}

Extraction torus_al_extract(const Measures& m, const SiteSet& a, Int n, const Q& target, const ConstantsLedger& l) {
  const auto& sys = m.system();
  const int d = sys.dim();
  if (Q(8) * target > n) throw Error(ErrorKind::PreconditionFailed, "torus side below 8 * target");
  if (target < l.lambda) throw Error(ErrorKind::PreconditionFailed, "target below lambda");
  TorusEngine eng(sys.family(), n);
  std::vector<unsigned char> state(eng.volume(), 0);
  for (const auto& z : a) state[eng.index(z)] = 1;
  if (a.empty() || eng.run(state) != eng.volume()) throw Error(ErrorKind::NoPercolation, "A does not fill the torus");

  struct Cls {
    SiteSet seeds, closure;
    IVec lo, hi;
    bool alive = true;
  };
  std::vector<Cls> cls;
  std::unordered_map<std::size_t, std::vector<int>> cells;
  auto wrap_index = [&](IVec z) {
    for (auto& c : z) c = ((c % n) + n) % n;
    return eng.index(z);
  };
  auto set_box = [&](Cls& c) {
    c.lo = c.hi = c.closure.front();
    for (const auto& z : c.closure)
      for (int i = 0; i < d; ++i) {
        c.lo[i] = std::min(c.lo[i], z[i]);
        c.hi[i] = std::max(c.hi[i], z[i]);
      }
  };
  for (const auto& z0 : a) {
    IVec z = z0;
    for (auto& c : z) c = ((c % n) + n) % n;
    Cls c{{z}, sys.u_closure({}, {z}), {}, {}};
    set_box(c);
    for (const auto& p : c.closure) cells[wrap_index(p)].push_back(static_cast<int>(cls.size()));
    cls.push_back(std::move(c));
  }
  auto offs = ball_offsets(d, sys.r2());
  offs.push_back(IVec(d, 0));
  const Q low = target / 3;

  // partner of class i and the lattice translate that brings it next to i
  auto partner = [&](int i, int& other, IVec& shift) {
    for (const auto& p : cls[static_cast<std::size_t>(i)].closure)
      for (const auto& o : offs) {
        IVec t = p + o;
        auto it = cells.find(wrap_index(t));
        if (it == cells.end()) continue;
        for (int b : it->second) {
          if (b == i || !cls[static_cast<std::size_t>(b)].alive) continue;
          const auto& cb = cls[static_cast<std::size_t>(b)];
          shift.assign(d, 0);
          for (int c = 0; c < d; ++c) {
            Int diff = t[c] - cb.lo[c];
            Int q = diff >= 0 ? diff / n : -((-diff + n - 1) / n);
            shift[c] = q * n;
          }
          other = b;
          return true;
        }
      }
    return false;
  };

  for (int i = 0; i < static_cast<int>(cls.size()); ++i) {
    int b = -1;
    IVec s;
    while (cls[static_cast<std::size_t>(i)].alive && partner(i, b, s)) {
      auto& ca = cls[static_cast<std::size_t>(i)];
      auto& cb = cls[static_cast<std::size_t>(b)];
      std::vector<IVec> moved_seeds, moved_closure;
      for (const auto& z : cb.seeds) moved_seeds.push_back(z + s);
      for (const auto& z : cb.closure) moved_closure.push_back(z + s);
      SiteSet seeds = set_union(ca.seeds, make_site_set(moved_seeds));
      SiteSet closure = sys.merge_closures({}, seeds, ca.closure, make_site_set(moved_closure));
      SiteSet fresh = set_difference(closure, ca.closure);
      ca.seeds = std::move(seeds);
      ca.closure = std::move(closure);
      cb.alive = false;
      set_box(ca);
      for (const auto& p : fresh) cells[wrap_index(p)].push_back(i);
      for (int c = 0; c < d; ++c)
        if (4 * (ca.hi[c] - ca.lo[c]) > n)
          throw Error(ErrorKind::WrapDetected, "lifted class exceeds a quarter of the torus");
      Iceberg j = sys.iceberg_container({}, ca.closure);
      Q dm = m.diam_star_tight(j, l.delta);
      if (dm >= low) {
        if (dm > target) throw Error(ErrorKind::ExtractionFailed, "class jumped past the target to " + q(dm));
        return {ca.seeds, j, dm};
      }
    }
  }
  throw Error(ErrorKind::ExtractionFailed, "no class reached target / 3");
}

bool delta_event(const IcebergSystem& sys, const TypePath& u, const Iceberg& jp, const Iceberg& j, const SiteSet& a) {
  if (jp.type != u || j.type != u) throw Error(ErrorKind::TypeMismatch, "both icebergs must have type u");
  SiteSet inner = sys.points(jp);
  SiteSet outer = sys.points(j);
  if (!is_subset(inner, outer)) throw Error(ErrorKind::PreconditionFailed, "J' is not inside J");
  std::vector<IVec> k(inner.begin(), inner.end());
  for (const auto& z : a)
    if (sys.contains(j, z)) k.push_back(z);
  SiteSet ks = make_site_set(std::move(k));
  if (ks.empty()) return false;
  // J is the deepest type and closed, so a spanning subset exists iff J is in the span,
  // and the span is read off the strong components of the closure
  auto res = sys.span_oracle(u, ks, j.shift);
  return std::find(res.begin(), res.end(), j) != res.end();
}

bool delta_event_exhaustive(const IcebergSystem& sys, const TypePath& u, const Iceberg& jp, const Iceberg& j,
                            const SiteSet& a) {
  if (jp.type != u || j.type != u) throw Error(ErrorKind::TypeMismatch, "both icebergs must have type u");
  std::vector<IVec> k;
  for (const auto& z : sys.points(jp)) k.push_back(z);
  for (const auto& z : a)
    if (sys.contains(j, z)) k.push_back(z);
  SiteSet ks = make_site_set(std::move(k));
  if (ks.size() > 16) throw Error(ErrorKind::PreconditionFailed, "too many sites for exhaustive search");
  for (std::uint32_t mask = 1; mask < (1u << ks.size()); ++mask) {
    SiteSet sub;
    for (std::size_t i = 0; i < ks.size(); ++i)
      if (mask >> i & 1u) sub.push_back(ks[i]);
    auto res = sys.iceberg_span(u, sub, j.shift);
    if (res.icebergs.size() == 1 && res.icebergs[0] == j) return true;
  }
  return false;
}

HierarchyWitness one_step_hierarchy(const Measures& m, const TypePath& u, const Iceberg& j, const SiteSet& witness,
                                    const Q& y, const ConstantsLedger& l) {
  const auto& sys = m.system();
  if (witness.empty()) throw Error(ErrorKind::PreconditionFailed, "empty witness");
  MergeTree t = span_tree(m, u, witness, l.delta, j.shift);
  if (t.roots.size() != 1 || t.nodes[static_cast<std::size_t>(t.roots[0])].iceberg != j)
    throw Error(ErrorKind::PreconditionFailed, "witness does not span J");
  HierarchyWitness w;
  w.y = y;
  w.diam = t.nodes[static_cast<std::size_t>(t.roots[0])].diam;
  const Q& D = w.diam;
  if (y < l.lambda) throw Error(ErrorKind::PreconditionFailed, "y below lambda");
  if (4 * y > D) throw Error(ErrorKind::PreconditionFailed, "y above diam*(J)/4 = " + q(D / 4));

  // K_0 > K_1 > ... keeping the side of larger diam*, ties to the lexicographically least site
  int cur = t.roots[0], kept = -1, other = -1;
  while (true) {
    const auto& n = t.nodes[static_cast<std::size_t>(cur)];
    if (n.left < 0) throw Error(ErrorKind::ExtractionFailed, "chain reached a single site before dropping by y");
    const auto& l1 = t.nodes[static_cast<std::size_t>(n.left)];
    const auto& r1 = t.nodes[static_cast<std::size_t>(n.right)];
    bool left = l1.diam > r1.diam || (l1.diam == r1.diam && l1.seeds.front() < r1.seeds.front());
    kept = left ? n.left : n.right;
    other = left ? n.right : n.left;
    ++w.step;
    if (D - t.nodes[static_cast<std::size_t>(kept)].diam >= y) break;
    cur = kept;
  }
  const auto& nk = t.nodes[static_cast<std::size_t>(kept)];
  w.first = node_extraction(nk);
  auto fail = [&](const std::string& s) { w.violations.push_back(s); };
  if (D - nk.diam >= 3 * y) {
    w.kind = HierarchyWitness::Case::A;
    w.second = node_extraction(t.nodes[static_cast<std::size_t>(other)]);
    const Q& d1 = w.first.diam;
    const Q& d2 = w.second.diam;
    if (!(y <= d2)) fail("y <= diam*(J2'): " + q(y) + " > " + q(d2));
    if (!(d2 <= d1)) fail("diam*(J2') <= diam*(J1'): " + q(d2) + " > " + q(d1));
    if (!(d1 <= D - 3 * y)) fail("diam*(J1') <= diam*(J) - 3y: " + q(d1) + " > " + q(D - 3 * y));
    if (!(D <= d1 + d2 + 2 * y)) fail("diam*(J) <= diam*(J1') + diam*(J2') + 2y: " + q(D) + " > " + q(d1 + d2 + 2 * y));
    if (!set_intersection(w.first.seeds, w.second.seeds).empty()) fail("seed sets intersect");
  } else {
    w.kind = HierarchyWitness::Case::B;
    Q gap = D - nk.diam;
    if (!(y <= gap && gap <= 3 * y)) fail("y <= diam*(J) - diam*(J') <= 3y: gap " + q(gap));
    w.same_type = nk.iceberg.type == u;
    if (w.same_type) {
      w.nested = is_subset(sys.points(nk.iceberg), sys.points(j));
      if (!w.nested) fail("J' is not inside J");
      w.delta_event = w.nested && delta_event(sys, u, nk.iceberg, j, witness);
      if (!w.delta_event) fail("delta event does not hold");
    }
  }
  return w;
}

QVec sideways_shift(const TypePath& u, const IVec& v, const QVec& anchor) {
  std::vector<IVec> rows(u.begin(), u.end());
  rows.push_back(v);
  const std::size_t k = rows.size();
  QMat gram(k, QVec(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t c = 0; c < k; ++c) gram[i][c] = Q(dot(rows[i], rows[c]));
  QVec b(k, Q(0));
  b[k - 1] = dot(v, anchor);
  auto y = solve_linear(gram, b);
  if (!y || rank(gram) != static_cast<int>(k)) throw Error(ErrorKind::PreconditionFailed, "path directions are dependent");
  QVec x(anchor.size(), Q(0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t c = 0; c < x.size(); ++c) x[c] += (*y)[i] * rows[i][c];
  return x;
}

SidewaysResult sideways_extract(const Measures& m, const TypePath& u, const Iceberg& j, const Iceberg& jp,
                                const SiteSet& a, const ConstantsLedger& l) {
  const auto& sys = m.system();
  const auto& tree = sys.tree();
  const int r = tree.depth() + 1;
  if (static_cast<int>(u.size()) > r - 3) throw Error(ErrorKind::PreconditionFailed, "depth of u exceeds r - 3");
  if (j.type != u || jp.type != u) throw Error(ErrorKind::PreconditionFailed, "both icebergs must have type u");
  for (const auto* ice : {&j, &jp})
    for (const auto& c : ice->shift)
      if (c != 0) throw Error(ErrorKind::PreconditionFailed, "icebergs must be unshifted");
  const Q& delta = l.delta;
  const QVec& y = sys.offset();

  SidewaysResult out;
  out.gamma = m.diam_star(j, delta) - m.diam_star(jp, delta);
  if (out.gamma < l.lambda) throw Error(ErrorKind::PreconditionFailed, "diam*(J) - diam*(J') below lambda");
  SiteSet outer = sys.points(j);
  SiteSet inner = sys.points(jp);
  if (!is_subset(inner, outer)) throw Error(ErrorKind::PreconditionFailed, "J' is not inside J");

  std::vector<IVec> pool(inner.begin(), inner.end());
  for (const auto& z : a)
    if (sys.contains(j, z)) pool.push_back(z);
  // K' is the span class with container J: the seeds inside the matching closure component
  SiteSet seeds = make_site_set(std::move(pool));
  SiteSet kp;
  for (const auto& comp : strong_components(sys.u_closure(u, seeds, j.shift), sys.r2()))
    if (sys.iceberg_container(u, comp, j.shift) == j) {
      kp = set_intersection(seeds, comp);
      break;
    }
  if (kp.empty()) throw Error(ErrorKind::PreconditionFailed, "delta event does not hold");

  if (set_intersection(kp, inner).empty()) {
    out.shift = QVec(sys.dim(), Q(0));
    out.iceberg = j;
    out.seeds = kp;
    out.path = u;
    out.diam = m.diam_star(j, delta);
    out.trivial = true;
    return out;
  }

  // the child direction along which J sticks out of J' the most
  const auto& ch = tree.children(u);
  Q best_gap;
  for (const auto& v : ch) {
    Q gap = support_of(v, outer, y) - support_of(v, inner, y);
    if (out.direction.empty() || gap > best_gap) {
      best_gap = gap;
      out.direction = v;
    }
  }
  const IVec& v = out.direction;
  out.path = u;
  out.path.push_back(v);
  if (tree.is_leaf(out.path)) throw Error(ErrorKind::PreconditionFailed, "tree is shallower than r - 1 along v");

  const Q inner_v = support_of(v, inner, y);
  const Q outer_v = support_of(v, outer, y);
  SiteSet strip;
  const IVec* anchor = nullptr;
  Q anchor_v;
  for (const auto& z : outer) {
    Q h = dot(v, point_of(z, y));
    if (h <= inner_v) continue;
    strip.push_back(z);
    if (!anchor || h < anchor_v) {
      anchor = &z;
      anchor_v = h;
    }
  }
  if (!anchor) throw Error(ErrorKind::ExtractionFailed, "empty strip");
  out.shift = sideways_shift(u, v, point_of(*anchor, y));

  SiteSet ks = set_intersection(kp, strip);
  if (ks.empty()) throw Error(ErrorKind::ExtractionFailed, "no seeds in the strip");
  SiteSet cl = sys.u_closure(out.path, ks, out.shift);
  const SiteSet* comp = nullptr;
  auto comps = strong_components(cl, sys.r2());
  for (const auto& c : comps)
    if (support_of(v, c, y) >= outer_v) {
      comp = &c;
      break;
    }
  if (!comp) throw Error(ErrorKind::ExtractionFailed, "no component reaches the top of J in direction v");
  out.seeds = set_intersection(*comp, ks);
  out.iceberg = sys.iceberg_container(out.path, *comp, out.shift);
  out.diam = m.diam_star(out.iceberg, delta);
  const Q need = delta * delta * delta * out.gamma;
  if (out.diam < need)
    throw Error(ErrorKind::ExtractionFailed, "diam*_x " + q(out.diam) + " below delta^3 gamma " + q(need));
  if (out.diam > out.gamma && out.gamma / 3 >= l.lambda) {
    auto trim = al_extract(m, out.path, out.seeds, out.gamma / 3, l, out.shift);
    out.seeds = trim.seeds;
    out.iceberg = trim.iceberg;
    out.diam = trim.diam;
    out.trimmed = true;
  }
  return out;
}

std::vector<Iceberg> enumerate_icebergs(const Measures& m, const Iceberg& j, const ConstantsLedger& l) {
  const auto& sys = m.system();
  const auto& tree = sys.tree();
  if (tree.depth() != 1 || !j.type.empty())
    throw Error(ErrorKind::PreconditionFailed, "enumeration needs a tree whose only non-leaf vertex is the root");
  const QVec& y = sys.offset();
  const Q D = m.diam_star(j, l.delta);
  SiteSet pts = sys.points(j);
  const auto& dirs = tree.children({});
  const auto& w = m.weights({});
  std::vector<Q> lam(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i)
    lam[i] = w.weights[static_cast<std::size_t>(std::find(w.dirs.begin(), w.dirs.end(), dirs[i]) - w.dirs.begin())];

  // b_v ranges over <y,v> + Z between the lowest point of J and d_v(J) + C D |v|
  std::vector<Q> lo(dirs.size()), hi(dirs.size());
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    Q mn = dot(dirs[i], point_of(pts.front(), y));
    for (const auto& z : pts) mn = std::min(mn, dot(dirs[i], point_of(z, y)));
    lo[i] = mn;
    hi[i] = support_of(dirs[i], pts, y) + ceil_sqrt(l.C2 * D * D * Q(norm2(dirs[i])));
  }
  std::vector<Q> rest(dirs.size() + 1, Q(0));
  for (std::size_t i = dirs.size(); i-- > 0;) rest[i] = rest[i + 1] + lam[i] * lo[i];

  std::vector<Iceberg> out;
  std::vector<Q> b(dirs.size());
  std::function<void(std::size_t, Q)> rec = [&](std::size_t i, Q partial) {
    if (i == dirs.size()) {
      Droplet dr{dirs, b};
      SiteSet inside = polytope_points(droplet_constraints(dr), sys.dim(), y);
      if (inside.empty() || !(min_droplet(dirs, inside, y) == dr)) return;
      if (set_intersection(inside, pts).empty()) return;
      out.push_back({{}, b, QVec(sys.dim(), Q(0))});
      return;
    }
    for (Q v = lo[i]; v <= hi[i]; v += 1) {
      Q p = partial + lam[i] * v;
      if (p + rest[i + 1] > D) break;
      b[i] = v;
      rec(i + 1, p);
    }
  };
  rec(0, Q(0));
  return out;
}

}  // namespace bootlab
