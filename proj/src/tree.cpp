#include "bootlab/tree.hpp"

#include "bootlab/errors.hpp"
#include "bootlab/lp.hpp"
#include "bootlab/sphere.hpp"

#include <algorithm>
#include <set>

namespace bootlab {

const TreeNode* BoundingTree::find(const TypePath& path) const {
  for (const auto& n : nodes)
    if (n.path == path) return &n;
  return nullptr;
}

const std::vector<IVec>& BoundingTree::children(const TypePath& path) const {
  static const std::vector<IVec> none;
  const TreeNode* n = find(path);
  return n ? n->children : none;
}

std::vector<TypePath> BoundingTree::vertices() const {
  std::set<TypePath> out;
  for (const auto& n : nodes) {
    if (!n.path.empty()) out.insert(n.path);
    for (const auto& c : n.children) {
      TypePath p = n.path;
      p.push_back(c);
      out.insert(p);
    }
  }
  return {out.begin(), out.end()};
}

std::vector<TypePath> BoundingTree::full_paths() const {
  std::vector<TypePath> out;
  for (const auto& v : vertices())
    if (is_leaf(v)) out.push_back(v);
  return out;
}

int BoundingTree::depth() const {
  int d = 0;
  for (const auto& p : full_paths()) d = std::max(d, static_cast<int>(p.size()));
  return d;
}

std::vector<IVec> m_set(const BoundingTree& t, const TypePath& u) {
  std::vector<IVec> out = t.children(u);
  if (!u.empty()) out.push_back(-u.back());
  return out;
}

std::vector<IVec> m_plus_set(const BoundingTree& t, const TypePath& u) {
  std::vector<IVec> out = t.children(u);
  for (const auto& w : u) out.push_back(-w);
  return out;
}

namespace {

IVec project_out(const IVec& c, const IVec& u) {
  // |u|^2 c - <c,u> u, a positive multiple of the projection onto u^perp
  Int n = norm2(u), s = dot(c, u);
  IVec z(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) z[i] = n * c[i] - s * u[i];
  return z;
}

SphereContext complement_context(const IVec& u) {
  SphereContext ctx;
  ctx.ambient = static_cast<int>(u.size());
  ctx.ancestors = {u};
  ctx.basis = integer_nullspace({u}, ctx.ambient);
  return ctx;
}

// finite subset of {rho >= j} meeting every open hemisphere of the context sphere
std::vector<IVec> bounding_subset(const StableSetRep& rep, int j) {
  Arrangement arr = build_arrangement(rep);
  std::vector<int> rho = face_resistances(rep, arr);
  const int m = arr.m;
  struct Cand {
    QVec g, p;
  };
  std::vector<Cand> cands;
  for (std::size_t fi = 0; fi < arr.faces.size(); ++fi) {
    if (rho[fi] < j) continue;
    for (const auto& g : closure_generators(arr, {static_cast<int>(fi)})) cands.push_back({g, arr.faces[fi].t});
  }
  if (cands.empty()) throw Error(ErrorKind::ConstructionFailed, "no direction of the required induced resistance");
  // points g + eps p lie in the face of p for every eps > 0
  std::vector<QVec> pts;
  Q eps = 1;
  bool ok = false;
  for (int it = 0; it < 64 && !ok; ++it, eps /= 2) {
    pts.clear();
    for (const auto& c : cands) {
      QVec v(m);
      for (int k = 0; k < m; ++k) v[k] = c.g[k] + eps * c.p[k];
      pts.push_back(v);
    }
    ok = positively_spans(pts, m);
  }
  if (!ok) throw Error(ErrorKind::ConstructionFailed, "directions of the required induced resistance do not bound the sphere");
  std::vector<IVec> amb;
  for (const auto& p : pts) amb.push_back(to_ambient(rep.ctx, p));
  std::sort(amb.begin(), amb.end());
  amb.erase(std::unique(amb.begin(), amb.end()), amb.end());
  // greedy pruning, trying the longest vectors first
  std::stable_sort(amb.begin(), amb.end(), [](const IVec& a, const IVec& b) { return norm2(a) > norm2(b); });
  for (std::size_t i = 0; i < amb.size();) {
    std::vector<IVec> trial = amb;
    trial.erase(trial.begin() + static_cast<long>(i));
    if (bounds_sphere(rep.ctx, trial)) amb = std::move(trial);
    else ++i;
  }
  std::sort(amb.begin(), amb.end());
  return amb;
}

bool margin_holds(const std::vector<IVec>& vecs, const TypePath& ancestors, const IVec& c) {
  for (const auto& x : vecs)
    for (const auto& w : ancestors)
      if (dot(x, w) < 0 && dot(x, c) >= 0) return false;
  return true;
}

}  // namespace

BoundingTree construct_tree(const UpdateFamily& u) {
  const int d = u.dimension;
  StableSetRep root = stable_set_rep(u);
  const int r = resistance_of_rep(root);
  if (r < 2 || r > d) throw Error(ErrorKind::ConstructionFailed, "family is not critical (r = " + std::to_string(r) + ")");
  BoundingTree t;
  t.dimension = d;
  t.nodes.push_back({{}, bounding_subset(root, r - 1)});
  const std::vector<IVec> vecs = rule_vectors(u);
  std::vector<TypePath> frontier;
  for (const auto& c : t.nodes[0].children) frontier.push_back({c});
  for (int depth = 1; depth <= r - 2; ++depth) {
    std::vector<TypePath> next;
    for (const auto& path : frontier) {
      const IVec& uu = path.back();
      StableSetRep down = descend(root, uu);
      std::vector<IVec> zs = bounding_subset(down, r - depth - 1);
      TreeNode node{path, {}};
      for (const auto& z : zs) {
        bool found = false;
        for (Int k = 1; k <= (Int(1) << 30) && !found; k *= 2) {
          IVec c = primitive(scale(k, uu) + z);
          TypePath ext = path;
          ext.push_back(c);
          if (!linearly_independent(ext)) continue;
          if (induced_resistance(root, c) < r - depth - 1) continue;
          if (!margin_holds(vecs, path, c)) continue;
          node.children.push_back(c);
          next.push_back(ext);
          found = true;
        }
        if (!found) throw Error(ErrorKind::ConstructionFailed, "no admissible perturbation of a child direction");
      }
      t.nodes.push_back(std::move(node));
    }
    frontier = std::move(next);
  }
  return t;
}

TreeReport verify_tree(const UpdateFamily& u, const BoundingTree& t) {
  TreeReport rep;
  const int d = u.dimension;
  StableSetRep root = stable_set_rep(u);
  rep.resistance = resistance_of_rep(root);
  const int r = rep.resistance;
  auto fail = [&](const std::string& s) {
    rep.failures.push_back(s);
    rep.overall = false;
  };
  if (t.dimension != d) throw Error(ErrorKind::DimensionMismatch, "tree and family dimensions differ");
  auto paths = t.full_paths();
  if (paths.empty()) {
    rep.depth_ok = false;
    fail("tree has no vertices");
  }
  for (const auto& p : paths)
    if (static_cast<int>(p.size()) != r - 1) {
      rep.depth_ok = false;
      fail("leaf at depth " + std::to_string(p.size()) + ", expected " + std::to_string(r - 1));
      break;
    }
  auto vstr = [](const IVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
  };
  // root
  {
    NodeCheck nc;
    nc.bounding = positively_spans(t.children({}), d);
    if (!nc.bounding) fail("children of the root do not bound the sphere");
    rep.nodes.push_back(nc);
  }
  for (const auto& v : t.vertices()) {
    NodeCheck nc;
    nc.path = v;
    const IVec& uu = v.back();
    const int depth = static_cast<int>(v.size());
    nc.independent = linearly_independent(v);
    if (!nc.independent) fail("path to " + vstr(uu) + " is not linearly independent");
    nc.s_good = induced_resistance(root, uu) >= r - depth;
    if (!nc.s_good) fail("vertex " + vstr(uu) + " has induced resistance below " + std::to_string(r - depth));
    if (!t.is_leaf(v)) {
      const auto& ch = t.children(v);
      std::vector<IVec> proj;
      for (const auto& c : ch) {
        if (dot(c, uu) <= 0) nc.children_near = false;
        proj.push_back(project_out(c, uu));
      }
      nc.bounding = bounds_sphere(complement_context(uu), proj);
      nc.mt_bounding = positively_spans(m_set(t, v), d);
      if (!nc.bounding) fail("children of " + vstr(uu) + " do not bound its small sphere");
      if (!nc.children_near) fail("a child of " + vstr(uu) + " is not near it");
      if (!nc.mt_bounding) fail("M_T of " + vstr(uu) + " does not bound the sphere");
    }
    rep.nodes.push_back(nc);
  }
  for (const auto& p : paths) {
    for (const auto& rule : u.rules) {
      bool escapes = false;
      for (const auto& x : rule) {
        bool nonneg = true;
        for (const auto& w : p)
          if (dot(x, w) < 0) { nonneg = false; break; }
        if (nonneg) { escapes = true; break; }
      }
      if (!escapes) {
        rep.path_closure = false;
        fail("a rule lies in the union of half-spaces along the path to " + vstr(p.back()));
      }
    }
  }
  const std::vector<IVec> vecs = rule_vectors(u);
  for (const auto& v : t.vertices()) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i)
      for (const auto& x : vecs)
        if (dot(x, v[i]) < 0 && dot(x, v.back()) >= 0) {
          rep.margin = false;
          fail("margin fails between " + vstr(v[i]) + " and descendant " + vstr(v.back()));
        }
  }
  return rep;
}

}  // namespace bootlab
