#pragma once

#include "bootlab/family.hpp"
#include "bootlab/rational.hpp"

#include <cstddef>
#include <vector>

namespace bootlab {

// the sphere is the unit sphere of V = span(ancestors)^perp
struct SphereContext {
  int ambient = 0;
  std::vector<IVec> ancestors;
  std::vector<IVec> basis;  // integer basis of V

  static SphereContext root(int d);
  int subspace_dim() const { return static_cast<int>(basis.size()); }
  int effective_dim() const { return subspace_dim() - 1; }
  bool in_subspace(const IVec& v) const;
};

// v is in the set iff every clause has a centre x with <x,v> >= 0
struct StableSetRep {
  std::vector<std::vector<IVec>> clauses;
  bool empty = false;
  SphereContext ctx;

  bool contains(const IVec& v) const;
};

bool is_stable(const UpdateFamily& u, const IVec& dir);
StableSetRep stable_set_rep(const UpdateFamily& u);
StableSetRep descend(const StableSetRep& rep, const IVec& u);
int induced_resistance(const StableSetRep& rep, const IVec& u);
int resistance_of_rep(const StableSetRep& rep);

enum class UniversalityClass { Supercritical, Critical, Subcritical };

struct Classification {
  UniversalityClass cls;
  int resistance;
};

Classification classify(const UpdateFamily& u);
const char* class_name(UniversalityClass c);

// relatively open face of the central arrangement of the clause centres,
// restricted to V and written in coordinates t with point = basis^T t
struct Face {
  std::vector<signed char> sign;
  QVec t;     // relative interior point
  IVec point; // same point, ambient and primitive
  int dim = 0;
};

struct Arrangement {
  SphereContext ctx;
  std::vector<IVec> normals;    // distinct hyperplanes (ambient, primitive)
  std::vector<QVec> normals_t;  // in t coordinates
  std::vector<Face> faces;      // every face of positive dimension
  std::vector<QVec> lineality;  // basis of the common intersection, t coordinates
  int m = 0;
};

// cell cap, overridable through BOOTLAB_CELL_CAP
std::size_t cell_cap();

Arrangement build_arrangement(const StableSetRep& rep);
std::vector<int> face_resistances(const StableSetRep& rep, const Arrangement& arr);

// generators (t coordinates) of the closed cones over the chosen faces
std::vector<QVec> closure_generators(const Arrangement& arr, const std::vector<int>& faces);

IVec to_ambient(const SphereContext& ctx, const QVec& t);
QVec to_local(const SphereContext& ctx, const IVec& v);

// true iff the points meet every open hemisphere of the context sphere
bool bounds_sphere(const SphereContext& ctx, const std::vector<IVec>& pts);

}  // namespace bootlab
