#pragma once

#include "bootlab/iceberg.hpp"
#include "bootlab/lattice.hpp"
#include "bootlab/measures.hpp"
#include "bootlab/rational.hpp"
#include "bootlab/tree.hpp"

#include <string>
#include <vector>

namespace bootlab {

struct Extraction {
  SiteSet seeds;
  Iceberg iceberg;
  Q diam;
};

// one run of the spanning algorithm kept as a binary merge tree
struct MergeTree {
  struct Node {
    SiteSet seeds;
    Iceberg iceberg;  // container of the u-closure of seeds
    Q diam;
    int left = -1, right = -1;
  };
  std::vector<Node> nodes;  // leaves first, then merges in order
  std::vector<int> roots;   // one per final class

  bool is_leaf(int i) const { return nodes[static_cast<std::size_t>(i)].left < 0; }
};

MergeTree span_tree(const Measures& m, const TypePath& u, const SiteSet& k, const Q& delta, const QVec& shift = {});

// subset K' of K with <K'>_u = {J'} and m <= diam*(J') <= 3m;
// throws Unspanned, BadScale, ExtractionFailed
Extraction al_extract(const Measures& m, const TypePath& u, const SiteSet& k, const Q& scale,
                      const ConstantsLedger& l, const QVec& shift = {});

// root droplet with target/3 <= diam* <= target spanned by lifted sites of A
// on the torus of side n; throws NoPercolation, WrapDetected, PreconditionFailed,
// ExtractionFailed
Extraction torus_al_extract(const Measures& m, const SiteSet& a, Int n, const Q& target, const ConstantsLedger& l);

struct HierarchyWitness {
  enum class Case { A, B };
  Case kind = Case::A;
  Q y;
  Q diam;  // diam*(J)
  int step = 0;  // index k along the chain
  // case A: first is the larger side
  Extraction first, second;
  // case B: first holds J'
  bool same_type = false;
  bool nested = false;
  bool delta_event = false;
  std::vector<std::string> violations;  // failed inequalities, empty when valid

  bool ok() const { return violations.empty(); }
};

// throws PreconditionFailed when <K>_u is not {J} or y is outside [lambda, diam*(J)/4]
HierarchyWitness one_step_hierarchy(const Measures& m, const TypePath& u, const Iceberg& j, const SiteSet& witness,
                                    const Q& y, const ConstantsLedger& l);

// some K in J' + (J cap A) spans J; throws TypeMismatch, PreconditionFailed
bool delta_event(const IcebergSystem& sys, const TypePath& u, const Iceberg& jp, const Iceberg& j, const SiteSet& a);

// brute force over every subset of J' + (J cap A); only for tiny instances
bool delta_event_exhaustive(const IcebergSystem& sys, const TypePath& u, const Iceberg& jp, const Iceberg& j,
                            const SiteSet& a);

struct SidewaysResult {
  QVec shift;
  Iceberg iceberg;
  SiteSet seeds;
  TypePath path;  // u or u + [v]
  IVec direction;  // v, empty in the trivial case
  Q gamma;        // diam*(J) - diam*(J')
  Q diam;         // diam*_x of the result
  bool trivial = false;
  bool trimmed = false;
};

// minimum-norm x with <x,w> = 0 along u and <x,v> = <anchor,v>
QVec sideways_shift(const TypePath& u, const IVec& v, const QVec& anchor);

// throws PreconditionFailed, ExtractionFailed
SidewaysResult sideways_extract(const Measures& m, const TypePath& u, const Iceberg& j, const Iceberg& jp,
                                const SiteSet& a, const ConstantsLedger& l);

// canonical root icebergs meeting J with diam* at most diam*(J); the tree must
// have the root as its only non-leaf vertex
std::vector<Iceberg> enumerate_icebergs(const Measures& m, const Iceberg& j, const ConstantsLedger& l);

}  // namespace bootlab
