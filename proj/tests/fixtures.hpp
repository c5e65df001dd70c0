#pragma once

#include "bootlab/iceberg.hpp"
#include "bootlab/sphere.hpp"
#include "bootlab/tree.hpp"
#include "support.hpp"

#include <memory>
#include <random>
#include <vector>

namespace bootlab::testing {

// 3-neighbour plane with a hand-made depth-3 tree, used for containers with two links
inline BoundingTree chain_tree() {
  BoundingTree t;
  t.dimension = 2;
  t.nodes.push_back({{}, {{1, 0}, {-1, 0}, {0, 1}, {0, -1}}});
  t.nodes.push_back({{{1, 0}}, {{1, 1}, {1, -1}}});
  t.nodes.push_back({{{1, 0}, {1, 1}}, {{2, 1}, {1, 2}}});
  return t;
}

struct Systems {
  std::vector<std::unique_ptr<IcebergSystem>> all;
  IcebergSystem* n22 = nullptr;
  IcebergSystem* n33 = nullptr;
  IcebergSystem* chain = nullptr;

  Systems() {
    auto add = [&](const UpdateFamily& u, BoundingTree t) {
      all.push_back(std::make_unique<IcebergSystem>(u, std::move(t)));
      return all.back().get();
    };
    n22 = add(neighbour_family(2, 2), construct_tree(neighbour_family(2, 2)));
    n33 = add(neighbour_family(3, 3), construct_tree(neighbour_family(3, 3)));
    chain = add(neighbour_family(3, 2), chain_tree());
    std::mt19937_64 g(21);
    int extra = 0;
    while (extra < 6) {
      auto u = rand_family(g, 2, 2 + static_cast<int>(g() % 3), 3, 2);
      if (classify(u).cls != UniversalityClass::Critical) continue;
      add(u, construct_tree(u));
      ++extra;
    }
  }
};

inline const Systems& systems() {
  static Systems s;
  return s;
}

inline std::vector<TypePath> non_leaf(const BoundingTree& t) {
  std::vector<TypePath> out{{}};
  for (const auto& v : t.vertices())
    if (!t.is_leaf(v)) out.push_back(v);
  return out;
}

struct Instance {
  const IcebergSystem* sys;
  TypePath u;
  QVec shift;
  SiteSet k;
};

inline QVec rand_shift(std::mt19937_64& g, int d) {
  QVec x(d, Q(0));
  if (g() % 3 == 0)
    for (auto& c : x) c = Q(static_cast<long>(g() % 7) - 3, 1 + static_cast<long>(g() % 3));
  return x;
}

inline SiteSet rand_outside(std::mt19937_64& g, const IcebergSystem& s, const TypePath& u, const QVec& x, int n) {
  const int d = s.dim();
  const Int b = d == 2 ? 5 : 3;
  std::vector<IVec> out;
  int guard = 0;
  while (static_cast<int>(out.size()) < n && guard++ < 1000) {
    IVec z = rand_vec(g, d, -b, b);
    if (!s.in_assist(z, u, x)) out.push_back(z);
  }
  return make_site_set(out);
}

inline Instance rand_instance(std::mt19937_64& g, int max_sites) {
  const auto& all = systems().all;
  const IcebergSystem* s = all[g() % all.size()].get();
  auto types = non_leaf(s->tree());
  Instance in{s, types[g() % types.size()], rand_shift(g, s->dim()), {}};
  int n = 1 + static_cast<int>(g() % static_cast<unsigned>(s->dim() == 2 ? max_sites : std::max(1, max_sites - 1)));
  in.k = rand_outside(g, *s, in.u, in.shift, n);
  return in;
}

}  // namespace bootlab::testing
