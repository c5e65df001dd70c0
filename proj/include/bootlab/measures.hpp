#pragma once

#include "bootlab/iceberg.hpp"
#include "bootlab/lattice.hpp"
#include "bootlab/rational.hpp"
#include "bootlab/tree.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace bootlab {

// positive weights with sum lambda_v v = 0 and sum lambda_v = 1
struct WeightSystem {
  std::vector<IVec> dirs;
  std::vector<Q> weights;

  Q min_weight() const;
};

// max-min weights by exact LP; throws NotBounding
WeightSystem compute_weights(const std::vector<IVec>& dirs);

using PointSet = std::vector<QVec>;

PointSet lattice_points(const SiteSet& s, const QVec& offset = {});

enum class RegionKind { F, G, Generic };

// {x : <x,a> <= b for every half-space}
struct Region {
  std::vector<Constraint> halfspaces;
  RegionKind kind = RegionKind::Generic;
};

// d_v = sup <x,v>; max over a finite set, exact LP over a region
Q support(const IVec& v, const PointSet& x);
Q support(const IVec& v, const Region& r);
Q wd(const WeightSystem& w, const PointSet& x);
Q wd(const WeightSystem& w, const Region& r);
bool contains(const Region& r, const QVec& x);

// squared Euclidean diameters; regions by vertex enumeration
Q diameter2(const PointSet& x);
Q diameter2(const Region& r, int dim);
PointSet region_vertices(const Region& r, int dim);

struct ConstantsLedger {
  Q C2;               // squared comparison constant
  Int C_ceil = 0;     // ceil(C)
  Q norm2_max;        // max |v|^2 over weighted directions
  Q delta;
  Q singleton_bound;  // empirical, max diam* of a single-site container
  Q sideways_floor;   // 2 R |v| delta^k / (1 - delta) over vertices admitting a sideways step
  Q subadd_slack;     // empirical, max excess in iceberg sub-additivity
  Q lambda;           // empirical operating value
  Q c;                // empirical extremal constant
  std::vector<Q> eps;  // eps(2), ..., eps(r)
  Q lambda_footnote_base;           // c^-1 (1 - eps(2)(d-1))^-1
  int lambda_footnote_height = 0;   // number of exponentials
  double lambda_footnote = 0;       // capped at the largest double
  bool lambda_footnote_capped = false;
  int resistance = 0;
  int dimension = 0;
};

struct LedgerOptions {
  std::uint64_t seed = 1;
  Int window = 2;         // singleton sweep radius
  int slack_samples = 60;  // penultimate-split instances
  Int sample_box = 4;
  std::optional<Q> delta;
};

class Measures {
 public:
  explicit Measures(const IcebergSystem& sys);

  const IcebergSystem& system() const { return sys_; }
  const WeightSystem& weights(const TypePath& u) const;
  std::vector<TypePath> non_leaf() const;

  Q wd(const TypePath& u, const PointSet& x) const;
  Q wd(const TypePath& u, const Region& r) const;
  // minimal M_T(u)-region
  Region f_region(const TypePath& u, const PointSet& x) const;
  // minimal N(u)-region cut by <x,u> >= <shift,u>; F_0 at the root
  Region g_region(const TypePath& u, const PointSet& x, const QVec& shift = {}) const;

  Q diam_star(const Iceberg& j, const Q& delta) const;
  Q diam_star_star(const Iceberg& j, const Q& delta) const;
  // diam* of an iceberg whose bounds are attained, such as any container;
  // at the root this reads the bounds directly
  Q diam_star_tight(const Iceberg& j, const Q& delta) const;

  // C^2 with C = max_u diam(F_u) / min Xi_u, F_u the unit M_T(u)-region
  const Q& comparison_constant2() const { return c2_; }
  Int comparison_ceil() const { return c_ceil_; }
  const Q& norm2_max() const { return norm2_max_; }
  Q default_delta() const;

  // diam* of the container of the closure of a single site, over a window
  Q singleton_bound(Int window, const Q& delta) const;

 private:
  IcebergSystem sys_;
  std::map<TypePath, WeightSystem> weights_;
  Q c2_;
  Int c_ceil_ = 0;
  Q norm2_max_;
};

Int ceil_sqrt(const Q& x);
std::vector<Q> default_eps(int r, int d);
ConstantsLedger build_ledger(const Measures& m, int resistance, const LedgerOptions& opts = {});

}  // namespace bootlab
