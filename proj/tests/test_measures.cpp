#include "bootlab/errors.hpp"
#include "bootlab/measures.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <iostream>

using namespace bootlab;
using namespace bootlab::testing;

namespace {

std::vector<IVec> axes(int d) {
  std::vector<IVec> out;
  for (int i = 0; i < d; ++i) {
    IVec e(d, 0);
    e[i] = 1;
    out.push_back(e);
    out.push_back(-e);
  }
  return out;
}

const Measures& measures(const IcebergSystem* s) {
  static std::map<const IcebergSystem*, std::unique_ptr<Measures>> cache;
  auto& m = cache[s];
  if (!m) m = std::make_unique<Measures>(*s);
  return *m;
}

PointSet rand_points(std::mt19937_64& g, int d, int n, long den) {
  PointSet x;
  for (int i = 0; i < n; ++i) {
    QVec p(d);
    for (auto& c : p) c = Q(static_cast<long>(g() % 21) - 10, 1 + static_cast<long>(g() % static_cast<unsigned long>(den)));
    x.push_back(p);
  }
  return x;
}

PointSet translate(const PointSet& x, const QVec& t) {
  PointSet out = x;
  for (auto& p : out)
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += t[i];
  return out;
}

// sup <x,v> by brute force over a finite set
Q brute_support(const IVec& v, const PointSet& x) {
  Q m = dot(to_q(v), x.front());
  for (const auto& p : x) m = std::max(m, dot(to_q(v), p));
  return m;
}

ConstantsLedger ledger_for(const IcebergSystem* s) {
  static std::map<const IcebergSystem*, ConstantsLedger> cache;
  auto it = cache.find(s);
  if (it != cache.end()) return it->second;
  LedgerOptions o;
  o.seed = 7;
  o.slack_samples = 80;
  int r = s->tree().depth() + 1;
  auto l = build_ledger(measures(s), r, o);
  cache[s] = l;
  return l;
}

}  // namespace

TEST(Weights, Examples) {
  auto w = compute_weights(axes(2));
  for (const auto& x : w.weights) EXPECT_EQ(x, Q(1, 4));
  auto t = compute_weights({{1, 0}, {-1, 1}, {-1, -1}});
  EXPECT_EQ(t.weights, (std::vector<Q>{Q(1, 2), Q(1, 4), Q(1, 4)}));
  try {
    compute_weights({{1, 0}, {0, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotBounding);
  }
}

TEST(Weights, BalanceExactly) {
  std::mt19937_64 g(61);
  int done = 0;
  while (done < 100) {
    const int d = 2 + static_cast<int>(g() % 2);
    std::vector<IVec> dirs = axes(d);
    for (int i = 0; i < 3; ++i) dirs.push_back(rand_nonzero(g, d, -3, 3));
    auto w = compute_weights(dirs);
    QVec s(d, Q(0));
    Q total = 0;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      ASSERT_GT(w.weights[i], 0);
      total += w.weights[i];
      for (int c = 0; c < d; ++c) s[c] += w.weights[i] * dirs[i][c];
    }
    ASSERT_EQ(total, Q(1));
    ASSERT_EQ(s, QVec(d, Q(0)));
    ++done;
  }
}

TEST(WeightedDiameter, Examples) {
  auto w = compute_weights(axes(2));
  EXPECT_EQ(wd(w, PointSet{{Q(3), Q(-7, 2)}}), Q(0));
  for (Int a = 0; a < 4; ++a)
    for (Int b = 0; b < 4; ++b) {
      PointSet box;
      for (Int x = 0; x <= a; ++x)
        for (Int y = 0; y <= b; ++y) box.push_back({Q(x), Q(y)});
      EXPECT_EQ(wd(w, box), Q(a + b, 4));
    }
}

TEST(WeightedDiameter, TranslationInvariant) {
  std::mt19937_64 g(62);
  auto w = compute_weights({{1, 0}, {-1, 2}, {-1, -3}, {0, 1}});
  for (int trial = 0; trial < 200; ++trial) {
    auto x = rand_points(g, 2, 1 + static_cast<int>(g() % 5), 4);
    auto t = rand_points(g, 2, 1, 7)[0];
    ASSERT_EQ(wd(w, x), wd(w, translate(x, t)));
  }
}

TEST(Regions, Examples) {
  const auto& s = *systems().n33;
  const auto& m = measures(&s);
  PointSet x{{Q(1), Q(2), Q(0)}, {Q(3), Q(-1), Q(1)}};
  EXPECT_EQ(m.g_region({}, x).halfspaces, m.f_region({}, x).halfspaces);
  // a single point on the cut
  TypePath u{{1, 0, 0}};
  PointSet one{{Q(0), Q(2), Q(-1)}};
  auto gr = m.g_region(u, one);
  EXPECT_TRUE(contains(gr, one[0]));
  EXPECT_EQ(diameter2(gr, 3), Q(0));
  try {
    m.g_region(u, PointSet{{Q(-1), Q(0), Q(0)}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyAboveCut);
  }
}

TEST(Regions, GRegionOfUnionTakesMaxima) {
  const auto& s = *systems().n33;
  const auto& m = measures(&s);
  TypePath u{{1, 0, 0}};
  auto j1 = s.min_iceberg_droplet(u, make_site_set({{2, 1, 0}, {0, -1, 2}}));
  auto j2 = s.min_iceberg_droplet(u, make_site_set({{4, 3, -1}}));
  auto p1 = lattice_points(s.points(j1)), p2 = lattice_points(s.points(j2));
  PointSet both = p1;
  both.insert(both.end(), p2.begin(), p2.end());
  auto g = m.g_region(u, both);
  const auto& kids = s.tree().children(u);
  ASSERT_EQ(g.halfspaces.size(), kids.size() + 1);
  for (std::size_t i = 0; i < kids.size(); ++i)
    EXPECT_EQ(g.halfspaces[i].b, std::max(brute_support(kids[i], p1), brute_support(kids[i], p2)));
  EXPECT_EQ(g.halfspaces.back().b, Q(0));
}

TEST(DiamStar, Examples) {
  const auto& s = *systems().n33;
  const auto& m = measures(&s);
  Q delta = m.default_delta();
  auto d0 = s.min_iceberg_droplet({}, make_site_set({{0, 0, 0}, {2, 1, 3}}));
  EXPECT_EQ(m.diam_star(d0, delta), m.wd({}, lattice_points(s.points(d0))));
  EXPECT_EQ(m.diam_star_star(d0, delta), m.diam_star(d0, delta));
  EXPECT_EQ(m.diam_star(s.min_iceberg_droplet({}, make_site_set({{5, 5, 5}})), delta), Q(0));
  TypePath u{{1, 0, 0}};
  auto j = s.min_iceberg_droplet(u, make_site_set({{2, 1, 0}}));
  Q w = m.wd(u, m.g_region(u, lattice_points(s.points(j))));
  EXPECT_EQ(m.diam_star(j, delta), delta * w);
  EXPECT_EQ(m.diam_star_star(j, delta), delta * delta * w);
}

TEST(ComparisonConstant, Examples) {
  const auto& m = measures(systems().n22);
  EXPECT_EQ(m.comparison_constant2(), Q(128));
  EXPECT_EQ(m.comparison_ceil(), 12);
  for (const auto& s : systems().all) EXPECT_GE(measures(s.get()).comparison_constant2(), Q(1));
  EXPECT_EQ(ceil_sqrt(Q(128)), 12);
  EXPECT_EQ(ceil_sqrt(Q(144)), 12);
  EXPECT_EQ(ceil_sqrt(Q(1, 4)), 1);
}

TEST(Ledger, EpsAndDelta) {
  auto e = default_eps(4, 3);
  ASSERT_EQ(e.size(), 3u);
  EXPECT_LT(e[0], Q(1, 2));
  for (std::size_t i = 1; i < e.size(); ++i) EXPECT_LT(e[i], e[i - 1]);
  EXPECT_GT(e.back(), 0);
  for (const auto& s : systems().all) {
    auto l = ledger_for(s.get());
    EXPECT_GT(l.delta, 0);
    EXPECT_LE(l.delta, Q(1, 4));
    EXPECT_GT(l.lambda, l.singleton_bound);
    EXPECT_GE(l.lambda, l.subadd_slack);
    EXPECT_GT(l.c, 0);
  }
  auto l = ledger_for(systems().n22);
  EXPECT_EQ(l.delta, Q(1, 48 * 48));
}

// properties

TEST(MeasureProperty, RegionSubadditivity) {
  std::mt19937_64 g(63);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto& s = *systems().all[g() % systems().all.size()];
    const auto& m = measures(&s);
    auto types = m.non_leaf();
    const auto& u = types[g() % types.size()];
    const int d = s.dim();
    auto common = rand_points(g, d, 1, 3);
    auto x1 = rand_points(g, d, static_cast<int>(g() % 4), 3);
    auto x2 = rand_points(g, d, static_cast<int>(g() % 4), 3);
    x1.push_back(common[0]);
    x2.push_back(common[0]);
    PointSet both = x1;
    both.insert(both.end(), x2.begin(), x2.end());
    ASSERT_LE(m.wd(u, m.f_region(u, both)), m.wd(u, x1) + m.wd(u, x2));
  }
}

TEST(MeasureProperty, SandwichAndComparisons) {
  std::mt19937_64 g(64);
  for (int trial = 0; trial < 400; ++trial) {
    const auto& s = *systems().all[g() % systems().all.size()];
    const auto& m = measures(&s);
    auto types = m.non_leaf();
    const auto& u = types[g() % types.size()];
    const auto& v = types[g() % types.size()];
    auto x = rand_points(g, s.dim(), 1 + static_cast<int>(g() % 5), 3);
    Q c2 = m.comparison_constant2(), n2 = m.norm2_max();
    Q diam2 = diameter2(x), wu = m.wd(u, x), wv = m.wd(v, x);
    ASSERT_GE(wu, 0);
    // (1/C) diam <= wd_u <= |v|max diam
    ASSERT_LE(diam2, c2 * wu * wu);
    ASSERT_LE(wu * wu, n2 * diam2);
    // wd_u <= |v|max C wd_v
    ASSERT_LE(wu * wu, n2 * c2 * wv * wv);
    // wd_u(F_v(X)) <= (|v|max C)^2 wd_u(X)
    Q wf = m.wd(u, m.f_region(v, x));
    ASSERT_LE(wf * wf, n2 * n2 * c2 * c2 * wu * wu);
  }
}

TEST(MeasureProperty, GRegionClosureInvariant) {
  std::mt19937_64 g(65);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto in = rand_instance(g, 4);
    const auto& s = *in.sys;
    if (in.u.empty()) continue;
    auto k = rand_outside(g, s, in.u, {}, 1 + static_cast<int>(g() % 4));
    const auto& m = measures(in.sys);
    auto cl = s.u_closure(in.u, k);
    ASSERT_EQ(m.g_region(in.u, lattice_points(cl, s.offset())).halfspaces,
              m.g_region(in.u, lattice_points(k, s.offset())).halfspaces);
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(MeasureProperty, IcebergSubadditivity) {
  std::mt19937_64 g(66);
  for (const auto& sp : systems().all) {
    const auto& s = *sp;
    const auto& m = measures(&s);
    auto l = ledger_for(&s);
    auto types = m.non_leaf();
    Q worst = 0;
    int found = 0;
    for (int attempt = 0; attempt < 400 && found < 30; ++attempt) {
      const auto& u = types[g() % types.size()];
      auto k = rand_outside(g, s, u, {}, 2 + static_cast<int>(g() % 4));
      if (k.size() < 2) continue;
      if (strong_components(s.u_closure(u, k), s.r2()).size() != 1) continue;
      auto [k1, k2] = s.penultimate_split(u, k);
      auto ds = [&](const SiteSet& x) { return m.diam_star(s.iceberg_container(u, s.u_closure(u, x)), l.delta); };
      Q excess = ds(k) - ds(k1) - ds(k2);
      worst = std::max(worst, excess);
      ASSERT_LE(excess, l.subadd_slack) << "fresh instance exceeds the measured slack";
      ++found;
    }
    std::cout << "subadditivity: ledger slack " << to_double(l.subadd_slack) << ", fresh max " << to_double(worst)
              << "\n";
  }
}

TEST(MeasureProperty, SingletonBoundStable) {
  for (const auto* sp : {systems().n22, systems().n33, systems().chain}) {
    const auto& m = measures(sp);
    Q delta = m.default_delta();
    Q a = m.singleton_bound(2, delta), b = m.singleton_bound(4, delta);
    std::cout << "singleton bound: window 2 " << to_double(a) << ", window 4 " << to_double(b) << "\n";
    EXPECT_EQ(a, b);
  }
}

TEST(MeasureProperty, VolumeBound) {
  std::mt19937_64 g(67);
  for (int trial = 0; trial < 200; ++trial) {
    auto in = rand_instance(g, 4);
    const auto& s = *in.sys;
    const auto& m = measures(in.sys);
    Q delta = m.default_delta();
    auto j = s.iceberg_container(in.u, s.u_closure(in.u, in.k, in.shift), in.shift);
    Q scale = Q(m.comparison_ceil());
    for (int i = 0; i < j.depth(); ++i) scale /= delta;
    Q side = scale * m.diam_star(j, delta) + 1;
    Q bound = 1;
    for (int i = 0; i < s.dim(); ++i) bound *= side;
    ASSERT_LE(Q(static_cast<long>(s.count(j))), bound);
  }
}
