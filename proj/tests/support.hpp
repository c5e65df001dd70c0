#pragma once

#include "bootlab/family.hpp"
#include "bootlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace bootlab::testing {

inline IVec rand_vec(std::mt19937_64& g, int d, Int lo, Int hi) {
  std::uniform_int_distribution<Int> dist(lo, hi);
  IVec v(d);
  for (auto& x : v) x = dist(g);
  return v;
}

inline IVec rand_nonzero(std::mt19937_64& g, int d, Int lo, Int hi) {
  while (true) {
    IVec v = rand_vec(g, d, lo, hi);
    for (Int x : v)
      if (x != 0) return v;
  }
}

inline SiteSet rand_sites(std::mt19937_64& g, int d, Int lo, Int hi, int count) {
  std::vector<IVec> s;
  for (int i = 0; i < count; ++i) s.push_back(rand_vec(g, d, lo, hi));
  return make_site_set(s);
}

// random family in dimension d with small rules
inline UpdateFamily rand_family(std::mt19937_64& g, int d, int nrules, int maxsize, Int coord) {
  std::vector<std::vector<IVec>> raw;
  std::uniform_int_distribution<int> sz(1, maxsize);
  for (int i = 0; i < nrules; ++i) {
    std::vector<IVec> r;
    int s = sz(g);
    for (int j = 0; j < s; ++j) r.push_back(rand_nonzero(g, d, -coord, coord));
    raw.push_back(r);
  }
  return canonicalize_family(raw, d);
}

// fixed point by repeated full sweeps over a box; assist sites count as infected
inline SiteSet sweep_closure(const UpdateFamily& u, SiteSet k, const IVec& lo, const IVec& hi,
                             const std::function<bool(const IVec&)>& assist = nullptr) {
  const int d = u.dimension;
  SiteHashSet inf(k.begin(), k.end());
  auto on = [&](const IVec& z) { return inf.count(z) || (assist && assist(z)); };
  bool changed = true;
  while (changed) {
    changed = false;
    IVec z = lo;
    while (true) {
      if (!on(z)) {
        for (const auto& rule : u.rules) {
          bool all = true;
          for (const auto& v : rule)
            if (!on(z + v)) { all = false; break; }
          if (all) {
            inf.insert(z);
            changed = true;
            break;
          }
        }
      }
      int i = 0;
      while (i < d && z[i] == hi[i]) { z[i] = lo[i]; ++i; }
      if (i == d) break;
      ++z[i];
    }
  }
  std::vector<IVec> out;
  for (const auto& z : inf)
    if (!(assist && assist(z))) out.push_back(z);
  return make_site_set(out);
}

// torus closure by full sweeps with modular coordinates
inline bool torus_fills(const UpdateFamily& u, Int n, std::vector<IVec> a) {
  const int d = u.dimension;
  SiteHashSet inf(a.begin(), a.end());
  auto wrap = [&](IVec z) {
    for (auto& x : z) x = ((x % n) + n) % n;
    return z;
  };
  std::vector<IVec> all;
  IVec z(d, 0);
  while (true) {
    all.push_back(z);
    int i = 0;
    while (i < d && ++z[i] == n) z[i++] = 0;
    if (i == d) break;
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& x : all) {
      if (inf.count(x)) continue;
      for (const auto& rule : u.rules) {
        bool ok = std::all_of(rule.begin(), rule.end(), [&](const IVec& v) { return inf.count(wrap(x + v)) > 0; });
        if (ok) {
          inf.insert(x);
          changed = true;
          break;
        }
      }
    }
  }
  return inf.size() == all.size();
}

// P_p(fill) on the 2x2 torus as coefficients c_k of p^k (1-p)^(4-k)
inline std::vector<int> two_torus_counts(const UpdateFamily& u) {
  std::vector<int> c(5, 0);
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<IVec> a;
    for (int i = 0; i < 4; ++i)
      if (mask >> i & 1) a.push_back({i % 2, i / 2});
    if (torus_fills(u, 2, a)) ++c[static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mask)))];
  }
  return c;
}

inline double poly(const std::vector<int>& c, double p) {
  double s = 0;
  for (int k = 0; k <= 4; ++k) s += c[static_cast<std::size_t>(k)] * std::pow(p, k) * std::pow(1 - p, 4 - k);
  return s;
}

inline double poly_root(const std::vector<int>& c) {
  double lo = 0, hi = 1;
  for (int i = 0; i < 200; ++i) {
    double mid = (lo + hi) / 2;
    (poly(c, mid) >= 0.5 ? hi : lo) = mid;
  }
  return (lo + hi) / 2;
}

}  // namespace bootlab::testing
