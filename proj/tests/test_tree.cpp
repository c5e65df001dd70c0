#include "bootlab/errors.hpp"
#include "bootlab/lattice.hpp"
#include "bootlab/lp.hpp"
#include "bootlab/sphere.hpp"
#include "bootlab/tree.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

using namespace bootlab;

namespace {

BoundingTree axis_tree_2d() {
  BoundingTree t;
  t.dimension = 2;
  t.nodes.push_back({{}, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}});
  return t;
}

}  // namespace

TEST(VerifyTree, AxisTreeForTwoNeighbour) {
  auto rep = verify_tree(neighbour_family(2, 2), axis_tree_2d());
  EXPECT_TRUE(rep.overall);
  for (const auto& f : rep.failures) ADD_FAILURE() << f;
}

TEST(VerifyTree, MissingChildBreaksBounding) {
  auto t = axis_tree_2d();
  t.nodes[0].children.pop_back();
  auto rep = verify_tree(neighbour_family(2, 2), t);
  EXPECT_FALSE(rep.overall);
  EXPECT_FALSE(rep.nodes[0].bounding);
}

TEST(VerifyTree, ColinearPathIsDependent) {
  BoundingTree t;
  t.dimension = 3;
  std::vector<IVec> axes{{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  t.nodes.push_back({{}, axes});
  for (const auto& a : axes) {
    // the first child repeats the parent direction scaled by 2
    std::vector<IVec> ch{scale(2, a)};
    for (const auto& b : axes)
      if (dot(a, b) == 0) ch.push_back(a + b);
    t.nodes.push_back({{a}, ch});
  }
  auto rep = verify_tree(neighbour_family(3, 3), t);
  EXPECT_FALSE(rep.overall);
  bool dep = false;
  for (const auto& n : rep.nodes)
    if (!n.independent) dep = true;
  EXPECT_TRUE(dep);
}

TEST(ConstructTree, TwoNeighbourPlane) {
  auto u = neighbour_family(2, 2);
  auto t = construct_tree(u);
  EXPECT_EQ(t.depth(), 1);
  auto ch = t.children({});
  for (const IVec& e : {IVec{1, 0}, IVec{-1, 0}, IVec{0, 1}, IVec{0, -1}})
    EXPECT_NE(std::find(ch.begin(), ch.end(), e), ch.end());
  EXPECT_TRUE(verify_tree(u, t).overall);
}

TEST(ConstructTree, ThreeNeighbourSpace) {
  auto u = neighbour_family(3, 3);
  auto t = construct_tree(u);
  EXPECT_EQ(t.depth(), 2);
  EXPECT_EQ(t.children({}).size(), 6u);
  for (const auto& c : t.children({})) {
    auto ch = t.children({c});
    EXPECT_EQ(ch.size(), 4u);
    for (const auto& v : ch) EXPECT_GT(dot(v, c), 0);
  }
  auto children_e1 = t.children({{1, 0, 0}});
  std::sort(children_e1.begin(), children_e1.end());
  EXPECT_EQ(children_e1, (std::vector<IVec>{{1, -1, 0}, {1, 0, -1}, {1, 0, 1}, {1, 1, 0}}));
  auto rep = verify_tree(u, t);
  EXPECT_TRUE(rep.overall);
  for (const auto& f : rep.failures) ADD_FAILURE() << f;
}

TEST(ConstructTree, TwoNeighbourSpace) {
  auto u = neighbour_family(2, 3);
  auto t = construct_tree(u);
  EXPECT_EQ(t.depth(), 1);
  auto ch = t.children({});
  std::sort(ch.begin(), ch.end());
  EXPECT_EQ(ch, (std::vector<IVec>{{-1, 0, 0}, {0, -1, 0}, {0, 0, -1}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}}));
  EXPECT_TRUE(verify_tree(u, t).overall);
}

TEST(ConstructTree, RejectsNonCritical) {
  try {
    construct_tree(neighbour_family(1, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConstructionFailed);
  }
}

// properties

TEST(TreeProperty, ConstructedTreesVerify) {
  std::vector<UpdateFamily> fams{neighbour_family(2, 2), neighbour_family(2, 3), neighbour_family(3, 3)};
  std::mt19937_64 g(8);
  int random_critical = 0;
  while (random_critical < 50) {
    auto u = bootlab::testing::rand_family(g, 2, 2 + static_cast<int>(g() % 4), 3, 2);
    if (classify(u).cls != UniversalityClass::Critical) continue;
    fams.push_back(u);
    ++random_critical;
  }
  for (const auto& u : fams) {
    auto t = construct_tree(u);
    auto rep = verify_tree(u, t);
    ASSERT_TRUE(rep.overall);
    for (const auto& v : t.vertices()) {
      if (t.is_leaf(v)) continue;
      // N(u) misses the hemisphere around -u while M_T(u) bounds the sphere
      EXPECT_FALSE(positively_spans(t.children(v), u.dimension));
      EXPECT_TRUE(positively_spans(m_set(t, v), u.dimension));
    }
  }
}

TEST(TreeProperty, PathUnionIsClosed) {
  std::mt19937_64 g(9);
  for (const auto& u : {neighbour_family(2, 2), neighbour_family(3, 3)}) {
    auto t = construct_tree(u);
    auto paths = t.full_paths();
    const int d = u.dimension;
    const Int b = d == 2 ? 7 : 4;
    for (int trial = 0; trial < 100; ++trial) {
      const auto& p = paths[g() % paths.size()];
      QVec y(d);
      for (auto& c : y) c = Q(static_cast<long>(g() % 11), 11);
      HalfSpaceUnion hs;
      for (const auto& w : p) hs.push_back({w, Q(0)});
      std::vector<IVec> sites;
      IVec z(d, -b);
      while (true) {
        for (const auto& h : hs)
          if (in_halfspace(z, y, h)) { sites.push_back(z); break; }
        int i = 0;
        while (i < d && z[i] == b) z[i++] = -b;
        if (i == d) break;
        ++z[i];
      }
      LatticeConfig cfg;
      cfg.offset = y;
      cfg.domain = Domain::box(IVec(d, -b), IVec(d, b));
      auto out = closure(u, make_site_set(sites), {}, cfg, 1u << 20);
      for (const auto& s : out) {
        bool interior = true;
        for (Int c : s) interior &= std::abs(c) <= b - 2;
        if (!interior) continue;
        bool inside = false;
        for (const auto& h : hs) inside |= in_halfspace(s, y, h);
        ASSERT_TRUE(inside);
      }
    }
  }
}
