#include "bootlab/errors.hpp"
#include "bootlab/iceberg.hpp"
#include "bootlab/sphere.hpp"
#include "bootlab/tree.hpp"
#include "fixtures.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <map>
#include <memory>
#include <set>

using namespace bootlab;
using namespace bootlab::testing;

namespace {

// box scan of the prefix-i iceberg droplet containing k, by direct evaluation
SiteSet scan_iceberg(const IcebergSystem& s, const TypePath& u, std::size_t i, const SiteSet& k, const QVec& x,
                     Int box) {
  const int d = s.dim();
  const QVec& y = s.offset();
  TypePath p(u.begin(), u.begin() + static_cast<long>(i));
  const auto& dirs = s.tree().children(p);
  std::vector<Q> b;
  for (const auto& v : dirs) {
    Q m = Q(dot(k[0], v)) + dot(v, y);
    for (const auto& z : k) m = std::max(m, Q(dot(z, v)) + dot(v, y));
    b.push_back(m);
  }
  std::vector<IVec> out;
  IVec z(d, -box);
  while (true) {
    QVec py(d);
    for (int c = 0; c < d; ++c) py[c] = Q(z[c]) + y[c];
    bool in = true;
    for (std::size_t j = 0; j < dirs.size() && in; ++j) in = dot(to_q(dirs[j]), py) <= b[j];
    for (const auto& w : p) {
      QVec diff(d);
      for (int c = 0; c < d; ++c) diff[c] = py[c] - x[c];
      if (dot(to_q(w), diff) < 0) in = false;
    }
    if (in) out.push_back(z);
    int c = 0;
    while (c < d && z[c] == box) { z[c] = -box; ++c; }
    if (c == d) break;
    ++z[c];
  }
  return make_site_set(out);
}

// exists p in pts and q with <q - x, w> < 0 and |p - q| <= R, in squared form
bool near_halfspace(const SiteSet& pts, const IVec& w, const QVec& x, const QVec& y, const Q& r2) {
  for (const auto& z : pts) {
    Q h = 0;
    for (std::size_t c = 0; c < z.size(); ++c) h += Q(w[c]) * (Q(z[c]) + y[c] - x[c]);
    if (h < 0 || h * h < r2 * Q(norm2(w))) return true;
  }
  return false;
}

// largest index over all increasing permissible sequences, by subset enumeration
std::size_t oracle_container_index(const IcebergSystem& s, const TypePath& u, const SiteSet& k, const QVec& x,
                                   Int box) {
  const std::size_t kk = u.size();
  std::vector<SiteSet> js;
  for (std::size_t i = 0; i <= kk; ++i) js.push_back(scan_iceberg(s, u, i, k, x, box));
  std::size_t best = 0;
  for (unsigned mask = 0; mask < (1u << kk); ++mask) {
    std::vector<std::size_t> seq{0};
    for (std::size_t i = 1; i <= kk; ++i)
      if (mask & (1u << (i - 1))) seq.push_back(i);
    bool ok = true;
    for (std::size_t t = 0; t + 1 < seq.size() && ok; ++t)
      ok = near_halfspace(js[seq[t]], u[seq[t + 1] - 1], x, s.offset(), s.r2());
    if (ok) best = std::max(best, seq.back());
  }
  return best;
}

std::multiset<Iceberg> as_set(const std::vector<Iceberg>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(Droplet, MinDropletExample) {
  std::vector<IVec> t{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  auto d = min_droplet(t, make_site_set({{0, 0}, {3, 1}}));
  EXPECT_EQ(d.bounds, (std::vector<Q>{3, 0, 1, 0}));
  auto single = min_droplet(t, make_site_set({{2, -5}}));
  EXPECT_EQ(polytope_points(droplet_constraints(single), 2), make_site_set({{2, -5}}));
}

TEST(Droplet, TetrahedraFootnote) {
  // corners scaled by 10 so that c = 1/10 becomes an integer offset
  std::vector<IVec> d1{{10, 2, 0}, {10, -2, 0}, {-10, 0, 2}, {-10, 0, -2}};
  std::vector<IVec> d2{{10, 0, 2}, {10, 0, -2}, {-10, 2, 0}, {-10, -2, 0}};
  auto cross = [](const IVec& a, const IVec& b) {
    return IVec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  };
  std::vector<IVec> normals;
  for (const auto* tet : {&d1, &d2}) {
    for (int skip = 0; skip < 4; ++skip) {
      std::vector<IVec> f;
      for (int i = 0; i < 4; ++i)
        if (i != skip) f.push_back((*tet)[i]);
      IVec n = cross(f[1] - f[0], f[2] - f[0]);
      if (dot(n, (*tet)[skip] - f[0]) > 0) n = -n;
      normals.push_back(primitive(n));
    }
  }
  std::vector<IVec> corners = d1;
  corners.insert(corners.end(), d2.begin(), d2.end());
  auto d = min_droplet(normals, make_site_set(corners));
  EXPECT_TRUE(droplet_contains(d, {30, 0, 0}));
  EXPECT_TRUE(droplet_contains(d, {-30, 0, 0}));
  // far outside the convex hull of the corners, which ends at x = 10
  EXPECT_FALSE(droplet_contains(d, {0, 30, 0}));
}

TEST(Droplet, UnboundedPolytopeThrows) {
  try {
    polytope_points({{{1, 0}, Q(0)}}, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unbounded);
  }
}

TEST(Droplet, PolytopePointsMatchScan) {
  std::mt19937_64 g(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + static_cast<int>(g() % 2);
    std::vector<IVec> dirs;
    for (int i = 0; i < d; ++i) {
      IVec e(d, 0);
      e[i] = 1;
      dirs.push_back(e);
      dirs.push_back(-e);
    }
    for (int extra = 0; extra < 3; ++extra) dirs.push_back(bootlab::testing::rand_nonzero(g, d, -3, 3));
    std::vector<Constraint> cs;
    for (const auto& v : dirs) cs.push_back({v, Q(static_cast<long>(g() % 9), 1 + static_cast<long>(g() % 3))});
    QVec y(d);
    for (auto& c : y) c = Q(static_cast<long>(g() % 5), 5);
    std::vector<IVec> want;
    IVec z(d, -10);
    while (true) {
      bool in = true;
      for (const auto& c : cs) {
        Q s = 0;
        for (int i = 0; i < d; ++i) s += Q(c.a[i]) * (Q(z[i]) + y[i]);
        if (s > c.b) in = false;
      }
      if (in) want.push_back(z);
      int i = 0;
      while (i < d && z[i] == 10) { z[i] = -10; ++i; }
      if (i == d) break;
      ++z[i];
    }
    ASSERT_EQ(polytope_points(cs, d, y), make_site_set(want));
    ASSERT_EQ(polytope_count(cs, d, y), want.size());
  }
}

TEST(MinIceberg, RootIsMinDroplet) {
  const auto& s = *systems().n22;
  auto k = make_site_set({{0, 0}, {2, 3}});
  auto j = s.min_iceberg_droplet({}, k);
  EXPECT_EQ(j.bounds, min_droplet(s.tree().children({}), k).bounds);
  EXPECT_TRUE(j.type.empty());
}

TEST(MinIceberg, ThreeNeighbourDepthOne) {
  const auto& s = *systems().n33;
  TypePath u{{1, 0, 0}};
  auto j = s.min_iceberg_droplet(u, make_site_set({{5, 0, 0}}));
  for (const auto& b : j.bounds) EXPECT_EQ(b, Q(5));
  // x1 >= 0, x1 + |x2| <= 5, x1 + |x3| <= 5
  std::size_t want = 0;
  for (Int t = 0; t <= 5; ++t) want += static_cast<std::size_t>((2 * (5 - t) + 1) * (2 * (5 - t) + 1));
  EXPECT_EQ(s.count(j), want);
  for (const auto& z : s.points(j)) EXPECT_GE(z[0], 0);
}

TEST(MinIceberg, SitesInAssist) {
  const auto& s = *systems().n33;
  try {
    s.min_iceberg_droplet({{1, 0, 0}}, make_site_set({{-1, 0, 0}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SitesInAssist);
  }
}

TEST(UClosure, Examples) {
  const auto& s = *systems().n22;
  EXPECT_EQ(s.u_closure({}, make_site_set({{0, 0}, {1, 1}})), make_site_set({{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
  EXPECT_EQ(s.u_closure({}, make_site_set({{4, 4}})), make_site_set({{4, 4}}));
  const auto& t = *systems().n33;
  auto j = t.min_iceberg_droplet({{1, 0, 0}}, make_site_set({{3, 1, 0}, {0, -2, 1}}));
  auto pts = t.points(j);
  EXPECT_EQ(t.u_closure({{1, 0, 0}}, pts), pts);
}

TEST(Container, Examples) {
  const auto& s = *systems().n33;
  auto k = make_site_set({{0, 0, 0}, {1, 2, 0}});
  auto c0 = s.iceberg_container({}, k);
  EXPECT_TRUE(c0.type.empty());
  EXPECT_EQ(c0.bounds, s.min_iceberg_droplet({}, k).bounds);
  // far from x1 < 0: no sequence advances
  EXPECT_TRUE(s.iceberg_container({{1, 0, 0}}, make_site_set({{10, 0, 0}})).type.empty());
  EXPECT_EQ(s.iceberg_container({{1, 0, 0}}, make_site_set({{1, 0, 0}})).type, (TypePath{{1, 0, 0}}));
}

TEST(Container, TwoLinkChain) {
  const auto& s = *systems().chain;
  TypePath u{{1, 0}, {1, 1}};
  auto k = make_site_set({{1, 3}});
  // J_0 reaches H_{u_1} but not H_{u_2}; J_1 reaches H_{u_2}
  auto j0 = s.points(s.min_iceberg_droplet({}, k));
  auto j1 = s.points(s.min_iceberg_droplet(prefix(u, 1), k));
  EXPECT_TRUE(strongly_connected_to_halfspace(j0, {1, 0}, Q(0), s.r2()));
  EXPECT_FALSE(strongly_connected_to_halfspace(j0, {1, 1}, Q(0), s.r2()));
  EXPECT_TRUE(strongly_connected_to_halfspace(j1, {1, 1}, Q(0), s.r2()));
  auto c = s.iceberg_container(u, k);
  EXPECT_EQ(c.type, u);
  EXPECT_EQ(c, s.min_iceberg_droplet(u, k));
  EXPECT_TRUE(s.iceberg_container(u, make_site_set({{3, 3}})).type.empty());
}

TEST(Span, Examples) {
  const auto& s = *systems().n22;
  EXPECT_TRUE(s.iceberg_span({}, {}).icebergs.empty());
  auto one = s.iceberg_span({}, make_site_set({{0, 0}, {1, 1}}));
  ASSERT_EQ(one.icebergs.size(), 1u);
  EXPECT_EQ(s.points(one.icebergs[0]), make_site_set({{0, 0}, {0, 1}, {1, 0}, {1, 1}}));
  auto two = s.iceberg_span({}, make_site_set({{0, 0}, {10, 10}}));
  ASSERT_EQ(two.icebergs.size(), 2u);
  EXPECT_EQ(s.points(two.icebergs[0]), make_site_set({{0, 0}}));
  EXPECT_EQ(s.points(two.icebergs[1]), make_site_set({{10, 10}}));
}

TEST(Spanned, Examples) {
  const auto& s = *systems().n22;
  auto j = s.iceberg_span({}, make_site_set({{0, 0}, {1, 1}})).icebergs[0];
  auto w = s.is_iceberg_spanned({}, j, make_site_set({{0, 0}, {1, 1}}));
  EXPECT_TRUE(w.spanned);
  EXPECT_EQ(w.seeds, make_site_set({{0, 0}, {1, 1}}));
  EXPECT_TRUE(s.is_iceberg_spanned({}, j, s.points(j)).spanned);
  EXPECT_FALSE(s.is_iceberg_spanned({}, j, {}).spanned);
  EXPECT_FALSE(s.is_iceberg_spanned({}, j, make_site_set({{0, 0}})).spanned);

  auto dr = s.droplet_of(j);
  const auto& fam = s.family();
  EXPECT_TRUE(is_internally_spanned(fam, dr, make_site_set({{0, 0}, {1, 1}})));
  EXPECT_TRUE(is_internally_spanned(fam, dr, s.points(j)));
  EXPECT_FALSE(is_internally_spanned(fam, dr, {}));
  EXPECT_FALSE(is_internally_spanned(fam, dr, make_site_set({{0, 1}, {5, 5}})));
}

TEST(PenultimateSplit, Examples) {
  const auto& s = *systems().n22;
  auto [a, b] = s.penultimate_split({}, make_site_set({{0, 0}, {1, 1}}));
  EXPECT_EQ(a, make_site_set({{0, 0}}));
  EXPECT_EQ(b, make_site_set({{1, 1}}));

  auto k = make_site_set({{0, 0}, {1, 1}, {2, 2}});
  auto [k1, k2] = s.penultimate_split({}, k);
  EXPECT_EQ(k1.size() + k2.size(), 3u);
  EXPECT_EQ(set_union(k1, k2), k);
  auto c1 = s.u_closure({}, k1), c2 = s.u_closure({}, k2);
  EXPECT_EQ(strong_components(c1, s.r2()).size(), 1u);
  EXPECT_EQ(strong_components(c2, s.r2()).size(), 1u);
  EXPECT_EQ(strong_components(set_union(c1, c2), s.r2()).size(), 1u);

  try {
    s.penultimate_split({}, make_site_set({{0, 0}, {10, 10}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotConnected);
  }
  try {
    s.penultimate_split({}, make_site_set({{0, 0}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooSmall);
  }
}

// properties

TEST(IcebergProperty, UClosureMatchesSweep) {
  std::mt19937_64 g(41);
  for (int trial = 0; trial < 150; ++trial) {
    auto in = rand_instance(g, 4);
    const auto& s = *in.sys;
    const int d = s.dim();
    auto j = s.min_iceberg_droplet(in.u, in.k, in.shift);
    auto box = s.points(j);
    IVec lo = box.front(), hi = box.front();
    for (const auto& z : box)
      for (int c = 0; c < d; ++c) {
        lo[c] = std::min(lo[c], z[c] - 2);
        hi[c] = std::max(hi[c], z[c] + 2);
      }
    auto assist = [&](const IVec& z) { return s.in_assist(z, in.u, in.shift); };
    ASSERT_EQ(s.u_closure(in.u, in.k, in.shift), bootlab::testing::sweep_closure(s.family(), in.k, lo, hi, assist));
  }
}

TEST(IcebergProperty, ContainerMatchesSequenceEnumeration) {
  std::mt19937_64 g(42);
  for (int trial = 0; trial < 150; ++trial) {
    auto in = rand_instance(g, 4);
    const auto& s = *in.sys;
    const Int box = s.dim() == 2 ? 24 : 12;
    auto c = s.iceberg_container(in.u, in.k, in.shift);
    std::size_t i = oracle_container_index(s, in.u, in.k, in.shift, box);
    ASSERT_EQ(c.type, prefix(in.u, i));
    ASSERT_EQ(s.points(c), scan_iceberg(s, in.u, i, in.k, in.shift, box));
  }
}

TEST(IcebergProperty, SpanMatchesComponentOracle) {
  std::mt19937_64 g(43);
  for (int trial = 0; trial < 500; ++trial) {
    auto in = rand_instance(g, 5);
    const auto& s = *in.sys;
    auto res = s.iceberg_span(in.u, in.k, in.shift);
    ASSERT_EQ(as_set(res.icebergs), as_set(s.span_oracle(in.u, in.k, in.shift)));
    // the classes partition K
    SiteSet all;
    std::size_t total = 0;
    for (const auto& c : res.classes) {
      all = set_union(all, c);
      total += c.size();
    }
    ASSERT_EQ(all, in.k);
    ASSERT_EQ(total, in.k.size());
  }
}

TEST(IcebergProperty, MergeOrderInvariance) {
  std::mt19937_64 g(44);
  for (int trial = 0; trial < 40; ++trial) {
    auto in = rand_instance(g, 5);
    const auto& s = *in.sys;
    auto base = s.iceberg_span(in.u, in.k, in.shift);
    for (int order = 0; order < 20; ++order) {
      std::mt19937_64 pick(static_cast<unsigned long>(trial * 100 + order));
      auto res = s.iceberg_span(in.u, in.k, in.shift, [&](std::size_t n) { return static_cast<std::size_t>(pick() % n); });
      ASSERT_EQ(res.icebergs, base.icebergs);
      ASSERT_EQ(res.classes, base.classes);
    }
  }
}

TEST(IcebergProperty, ContainerTypeMonotone) {
  std::mt19937_64 g(45);
  for (int trial = 0; trial < 200; ++trial) {
    auto in = rand_instance(g, 4);
    const auto& s = *in.sys;
    auto more = set_union(in.k, rand_outside(g, s, in.u, in.shift, 1 + static_cast<int>(g() % 3)));
    ASSERT_LE(s.iceberg_container(in.u, in.k, in.shift).depth(), s.iceberg_container(in.u, more, in.shift).depth());
  }
}

TEST(IcebergProperty, ContainerIsClosed) {
  std::mt19937_64 g(46);
  for (int trial = 0; trial < 150; ++trial) {
    auto in = rand_instance(g, 4);
    const auto& s = *in.sys;
    auto pts = s.points(s.iceberg_container(in.u, in.k, in.shift));
    for (const auto& z : pts) ASSERT_FALSE(s.in_assist(z, in.u, in.shift));
    ASSERT_EQ(s.u_closure(in.u, pts, in.shift), pts);
  }
}

TEST(IcebergProperty, PrefixReduction) {
  std::mt19937_64 g(47);
  int nontrivial = 0;
  for (int trial = 0; trial < 600; ++trial) {
    auto in = rand_instance(g, 4);
    const auto& s = *in.sys;
    auto cl = s.u_closure(in.u, in.k, in.shift);
    auto c = s.iceberg_container(in.u, cl, in.shift);
    for (std::size_t j = c.type.size(); j < in.u.size(); ++j) {
      auto uj = prefix(in.u, j);
      auto clj = s.u_closure(uj, in.k, in.shift);
      ASSERT_EQ(clj, cl);
      ASSERT_EQ(s.iceberg_container(uj, clj, in.shift), c);
      ++nontrivial;
    }
  }
  EXPECT_GT(nontrivial, 20);
}

TEST(IcebergProperty, SpannedReduction) {
  std::mt19937_64 g(48);
  int checked = 0;
  for (int trial = 0; trial < 150; ++trial) {
    auto in = rand_instance(g, 5);
    const auto& s = *in.sys;
    for (const auto& j : s.iceberg_span(in.u, in.k, in.shift).icebergs) {
      ASSERT_TRUE(s.is_iceberg_spanned(in.u, j, in.k).spanned);
      for (std::size_t i = j.type.size(); i < in.u.size(); ++i) {
        ASSERT_TRUE(s.is_iceberg_spanned(prefix(in.u, i), j, in.k).spanned);
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(IcebergProperty, SpannedWitnessMatchesSubsetSearch) {
  std::mt19937_64 g(49);
  int positives = 0;
  for (int trial = 0; trial < 60; ++trial) {
    auto in = rand_instance(g, 3);
    const auto& s = *in.sys;
    // a candidate iceberg and a sparse random A inside it
    auto j = s.iceberg_container(in.u, s.u_closure(in.u, in.k, in.shift), in.shift);
    auto pts = s.points(j);
    std::vector<IVec> a;
    for (const auto& z : in.k) a.push_back(z);
    for (const auto& z : pts)
      if (g() % 4 == 0 && a.size() < 8) a.push_back(z);
    std::vector<IVec> inside;
    for (const auto& z : make_site_set(a))
      if (s.contains(j, z) && !s.in_assist(z, in.u, in.shift)) inside.push_back(z);
    if (g() % 2 == 0 && inside.size() > 1) inside.erase(inside.begin() + static_cast<long>(g() % inside.size()));
    bool want = false;
    for (unsigned mask = 1; mask < (1u << inside.size()) && !want; ++mask) {
      std::vector<IVec> sub;
      for (std::size_t b = 0; b < inside.size(); ++b)
        if (mask & (1u << b)) sub.push_back(inside[b]);
      auto sp = s.iceberg_span(in.u, make_site_set(sub), j.shift);
      want = sp.icebergs.size() == 1 && sp.icebergs[0] == j;
    }
    auto w = s.is_iceberg_spanned(in.u, j, make_site_set(inside));
    ASSERT_EQ(w.spanned, want);
    if (w.spanned) {
      auto sp = s.iceberg_span(in.u, w.seeds, j.shift);
      ASSERT_EQ(sp.icebergs, std::vector<Iceberg>{j});
      ++positives;
    }
  }
  EXPECT_GT(positives, 5);
}

TEST(IcebergProperty, InternallySpannedIsRootCase) {
  std::mt19937_64 g(50);
  for (int trial = 0; trial < 100; ++trial) {
    const auto& s = *systems().all[g() % systems().all.size()];
    auto a = rand_outside(g, s, {}, {}, 1 + static_cast<int>(g() % 4));
    auto j = s.min_iceberg_droplet({}, rand_outside(g, s, {}, {}, 2));
    ASSERT_EQ(is_internally_spanned(s.family(), s.droplet_of(j), a), s.is_iceberg_spanned({}, j, a).spanned);
    auto full = s.iceberg_container({}, s.u_closure({}, a));
    ASSERT_EQ(is_internally_spanned(s.family(), s.droplet_of(full), a), s.is_iceberg_spanned({}, full, a).spanned);
  }
}
