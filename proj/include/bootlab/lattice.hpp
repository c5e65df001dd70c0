#pragma once

#include "bootlab/family.hpp"
#include "bootlab/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <unordered_set>
#include <vector>

namespace bootlab {

struct VecHash {
  std::size_t operator()(const IVec& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Int x : v) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull + (h >> 29);
    return h;
  }
};

using SiteHashSet = std::unordered_set<IVec, VecHash>;
// sorted, duplicate free
using SiteSet = std::vector<IVec>;

SiteSet make_site_set(std::vector<IVec> sites);
bool contains(const SiteSet& s, const IVec& x);
SiteSet set_union(const SiteSet& a, const SiteSet& b);
SiteSet set_difference(const SiteSet& a, const SiteSet& b);
SiteSet set_intersection(const SiteSet& a, const SiteSet& b);
bool is_subset(const SiteSet& a, const SiteSet& b);

// {x : <x,u> < a}
struct HalfSpace {
  IVec u;
  Q a;
};
using HalfSpaceUnion = std::vector<HalfSpace>;

// {x : <x,a> <= b}
struct Constraint {
  IVec a;
  Q b;

  bool operator==(const Constraint& o) const = default;
};

struct Domain {
  enum class Kind { Unbounded, Torus, Box, Region };
  Kind kind = Kind::Unbounded;
  Int n = 0;
  IVec lo, hi;                 // inclusive box on integer coordinates
  std::vector<Constraint> region;  // on points y + z

  static Domain unbounded() { return {}; }
  static Domain torus(Int n);
  static Domain box(IVec lo, IVec hi);
  static Domain polytope(std::vector<Constraint> cs);
};

struct LatticeConfig {
  QVec offset;  // y, the lattice is y + Z^d
  Domain domain;

  static LatticeConfig plain(int d, Domain dom = Domain::unbounded());
};

// integer form of the assist and domain tests for a fixed offset
class SiteTester {
 public:
  SiteTester(const HalfSpaceUnion& assist, const LatticeConfig& cfg);
  bool in_assist(const IVec& z) const;
  bool in_domain(const IVec& z) const;

 private:
  struct IntHalf {
    IVec u;
    Int t;  // member iff <z,u> <= t
  };
  std::vector<IntHalf> assist_;
  std::vector<IntHalf> region_;
  Domain::Kind kind_;
  IVec lo_, hi_;
};

bool in_halfspace(const IVec& z, const QVec& offset, const HalfSpace& h);

SiteSet closure(const UpdateFamily& u, const SiteSet& k, const HalfSpaceUnion& assist,
                const LatticeConfig& cfg, std::size_t cap);

// closure of closed + k where closed is already closed; only k seeds the work queue
SiteSet extend_closure(const UpdateFamily& u, const SiteSet& closed, const SiteSet& k, const HalfSpaceUnion& assist,
                       const LatticeConfig& cfg, std::size_t cap);

SiteSet torus_closure(const UpdateFamily& u, const SiteSet& a, Int n);

// flat-array torus closure; state has n^d bytes, nonzero means infected.
// returns the number of infected sites
class TorusEngine {
 public:
  TorusEngine(const UpdateFamily& u, Int n);
  std::size_t run(std::vector<unsigned char>& state) const;
  std::size_t volume() const { return volume_; }
  int dimension() const { return d_; }
  Int side() const { return n_; }
  std::size_t index(const IVec& z) const;
  IVec coords(std::size_t i) const;

 private:
  int d_;
  Int n_;
  std::size_t volume_;
  bool threshold_ = false;
  int r_ = 0;
  std::vector<IVec> vecs_;
  std::vector<std::vector<int>> rules_;  // indices into vecs_
  std::vector<std::vector<std::uint32_t>> plus_, minus_;  // neighbour tables per vector
  std::size_t shift(std::size_t i, const IVec& v) const;
};

std::vector<IVec> ball_offsets(int d, const Q& r2);

std::vector<SiteSet> strong_components(const SiteSet& k, const Q& r2);

bool strongly_connected_to_halfspace(const SiteSet& k, const IVec& u, const Q& a, const Q& r2,
                                     const QVec& offset = {});

}  // namespace bootlab
