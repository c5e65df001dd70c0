#pragma once

#include "bootlab/family.hpp"
#include "bootlab/rational.hpp"

#include <string>
#include <vector>

namespace bootlab {

// path of directions from the root; the root itself is the empty path
using TypePath = std::vector<IVec>;

struct TreeNode {
  TypePath path;
  std::vector<IVec> children;
};

// only non-leaf vertices are stored; leaves are the children of the deepest nodes
struct BoundingTree {
  int dimension = 0;
  std::vector<TreeNode> nodes;

  const TreeNode* find(const TypePath& path) const;
  const std::vector<IVec>& children(const TypePath& path) const;
  bool is_leaf(const TypePath& path) const { return find(path) == nullptr; }
  // every vertex other than the root, as its path
  std::vector<TypePath> vertices() const;
  // root-to-leaf paths
  std::vector<TypePath> full_paths() const;
  int depth() const;
};

struct NodeCheck {
  TypePath path;
  bool bounding = true;     // children bound the small sphere (root: the whole sphere)
  bool s_good = true;       // induced resistance of the vertex is at least r - depth
  bool independent = true;  // path directions linearly independent
  bool mt_bounding = true;  // N(u) plus -u bounds the whole sphere
  bool children_near = true;  // every child c has <c,u> > 0
};

struct TreeReport {
  int resistance = 0;
  bool depth_ok = true;
  bool path_closure = true;  // no rule inside a union of path half-spaces
  bool margin = true;        // negative on u implies negative on descendants
  std::vector<NodeCheck> nodes;
  std::vector<std::string> failures;
  bool overall = true;
};

TreeReport verify_tree(const UpdateFamily& u, const BoundingTree& t);
BoundingTree construct_tree(const UpdateFamily& u);

// N(u) + {-u}, or N(root) at the root
std::vector<IVec> m_set(const BoundingTree& t, const TypePath& u);
// N(u) + {-u_1, ..., -u_k}
std::vector<IVec> m_plus_set(const BoundingTree& t, const TypePath& u);

}  // namespace bootlab
