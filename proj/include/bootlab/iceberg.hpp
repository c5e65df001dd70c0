#pragma once

#include "bootlab/family.hpp"
#include "bootlab/lattice.hpp"
#include "bootlab/rational.hpp"
#include "bootlab/tree.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace bootlab {

// {y + z : <y + z, v> <= a_v for every v}
struct Droplet {
  std::vector<IVec> dirs;
  std::vector<Q> bounds;

  bool operator==(const Droplet& o) const = default;
};

Droplet min_droplet(const std::vector<IVec>& dirs, const SiteSet& k, const QVec& offset = {});
std::vector<Constraint> droplet_constraints(const Droplet& d);
bool droplet_contains(const Droplet& d, const IVec& z, const QVec& offset = {});

// lattice points z with y + z in the polytope; throws Unbounded
SiteSet polytope_points(const std::vector<Constraint>& cs, int dim, const QVec& offset = {});
std::size_t polytope_count(const std::vector<Constraint>& cs, int dim, const QVec& offset = {});

bool sets_strongly_connected(const SiteSet& a, const SiteSet& b, const Q& r2);

// (J, u) with J = droplet over N(u) minus H_T(u, shift); bounds follow the
// order of the tree's children of u
struct Iceberg {
  TypePath type;
  std::vector<Q> bounds;
  QVec shift;

  int depth() const { return static_cast<int>(type.size()); }
  bool operator==(const Iceberg& o) const = default;
  bool operator<(const Iceberg& o) const;
};

struct SpanResult {
  std::vector<SiteSet> classes;   // final partition of K
  std::vector<SiteSet> closures;  // u-closure of each class
  std::vector<Iceberg> icebergs;  // container of each closure
  std::vector<std::pair<SiteSet, SiteSet>> merges;  // in order
};

struct SpannedWitness {
  bool spanned = false;
  SiteSet seeds;  // K inside J and A with <K>_u = {J}
};

// chooses which eligible pair to merge; receives the number of eligible pairs
using MergeChooser = std::function<std::size_t(std::size_t)>;
// called after each merge with the merged class and its u-closure
using MergeObserver = std::function<void(const SiteSet&, const SiteSet&)>;

class IcebergSystem {
 public:
  IcebergSystem(UpdateFamily family, BoundingTree tree, QVec offset = {});

  const UpdateFamily& family() const { return family_; }
  const BoundingTree& tree() const { return tree_; }
  const QVec& offset() const { return offset_; }
  const Q& r2() const { return r2_; }
  int dim() const { return family_.dimension; }

  QVec normalize_shift(const QVec& shift) const;
  HalfSpaceUnion assist(const TypePath& u, const QVec& shift = {}) const;
  bool in_assist(const IVec& z, const TypePath& u, const QVec& shift = {}) const;

  Iceberg min_iceberg_droplet(const TypePath& u, const SiteSet& k, const QVec& shift = {}) const;
  std::vector<Constraint> constraints(const Iceberg& j) const;
  SiteSet points(const Iceberg& j) const;
  std::size_t count(const Iceberg& j) const;
  bool contains(const Iceberg& j, const IVec& z) const;
  // the N(u) droplet underlying J, without the half-space cut
  Droplet droplet_of(const Iceberg& j) const;

  SiteSet u_closure(const TypePath& u, const SiteSet& k, const QVec& shift = {}) const;
  // u-closure of seeds given the u-closures a and b of a partition of them
  SiteSet merge_closures(const TypePath& u, const SiteSet& seeds, const SiteSet& a, const SiteSet& b,
                         const QVec& shift = {}) const;
  Iceberg iceberg_container(const TypePath& u, const SiteSet& k, const QVec& shift = {}) const;
  SpanResult iceberg_span(const TypePath& u, const SiteSet& k, const QVec& shift = {},
                          const MergeChooser& choose = nullptr, const MergeObserver& observe = nullptr) const;
  // containers of the strong components of the u-closure
  std::vector<Iceberg> span_oracle(const TypePath& u, const SiteSet& k, const QVec& shift = {}) const;
  SpannedWitness is_iceberg_spanned(const TypePath& u, const Iceberg& j, const SiteSet& a) const;
  std::pair<SiteSet, SiteSet> penultimate_split(const TypePath& u, const SiteSet& k, const QVec& shift = {}) const;

 private:
  UpdateFamily family_;
  BoundingTree tree_;
  QVec offset_;
  Q r2_;
};

bool is_internally_spanned(const UpdateFamily& u, const Droplet& d, const SiteSet& a, const QVec& offset = {});

TypePath prefix(const TypePath& u, std::size_t i);

}  // namespace bootlab
