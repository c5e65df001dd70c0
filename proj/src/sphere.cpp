#include "bootlab/sphere.hpp"

#include "bootlab/errors.hpp"
#include "bootlab/lp.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>

namespace bootlab {

SphereContext SphereContext::root(int d) {
  SphereContext c;
  c.ambient = d;
  for (int i = 0; i < d; ++i) {
    IVec e(d, 0);
    e[i] = 1;
    c.basis.push_back(e);
  }
  return c;
}

bool SphereContext::in_subspace(const IVec& v) const {
  for (const auto& a : ancestors)
    if (dot(a, v) != 0) return false;
  return true;
}

bool StableSetRep::contains(const IVec& v) const {
  if (empty) return false;
  for (const auto& clause : clauses) {
    bool hit = false;
    for (const auto& x : clause)
      if (dot(x, v) >= 0) { hit = true; break; }
    if (!hit) return false;
  }
  return true;
}

bool is_stable(const UpdateFamily& u, const IVec& dir) {
  if (static_cast<int>(dir.size()) != u.dimension) throw Error(ErrorKind::DimensionMismatch, "direction dimension");
  for (const auto& rule : u.rules) {
    bool all_neg = true;
    for (const auto& x : rule)
      if (dot(x, dir) >= 0) { all_neg = false; break; }
    if (all_neg) return false;
  }
  return true;
}

StableSetRep stable_set_rep(const UpdateFamily& u) {
  StableSetRep rep;
  rep.ctx = SphereContext::root(u.dimension);
  rep.clauses = u.rules;
  return rep;
}

StableSetRep descend(const StableSetRep& rep, const IVec& u) {
  if (std::all_of(u.begin(), u.end(), [](Int x) { return x == 0; }))
    throw Error(ErrorKind::PreconditionFailed, "zero direction");
  if (!rep.ctx.in_subspace(u)) throw Error(ErrorKind::PreconditionFailed, "direction not on the context sphere");
  if (!rep.contains(u)) throw Error(ErrorKind::NotInSet, "direction not in the stable set");
  StableSetRep out;
  out.ctx.ambient = rep.ctx.ambient;
  out.ctx.ancestors = rep.ctx.ancestors;
  out.ctx.ancestors.push_back(primitive(u));
  out.ctx.basis = integer_nullspace(out.ctx.ancestors, rep.ctx.ambient);
  std::set<std::vector<IVec>> seen;
  for (const auto& clause : rep.clauses) {
    std::vector<IVec> kept;
    bool satisfied = false;
    for (const auto& x : clause) {
      Int s = dot(x, u);
      if (s > 0) { satisfied = true; break; }
      if (s == 0) kept.push_back(x);
    }
    if (satisfied) continue;
    if (kept.empty()) {
      out.empty = true;
      out.clauses.clear();
      return out;
    }
    std::sort(kept.begin(), kept.end());
    if (seen.insert(kept).second) out.clauses.push_back(kept);
  }
  return out;
}

std::size_t cell_cap() {
  if (const char* env = std::getenv("BOOTLAB_CELL_CAP")) {
    long long v = std::atoll(env);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return 200000;
}

IVec to_ambient(const SphereContext& ctx, const QVec& t) {
  QVec p(ctx.ambient, Q(0));
  for (std::size_t j = 0; j < ctx.basis.size(); ++j)
    for (int i = 0; i < ctx.ambient; ++i) p[i] += t[j] * ctx.basis[j][i];
  return clear_denominators(p);
}

QVec to_local(const SphereContext& ctx, const IVec& v) {
  // solve basis^T t = v
  QMat a(ctx.ambient, QVec(ctx.basis.size(), Q(0)));
  for (int i = 0; i < ctx.ambient; ++i)
    for (std::size_t j = 0; j < ctx.basis.size(); ++j) a[i][j] = ctx.basis[j][i];
  auto t = solve_linear(a, to_q(v));
  if (!t) throw Error(ErrorKind::PreconditionFailed, "vector not in the context subspace");
  return *t;
}

namespace {

QVec reduce(const SphereContext& ctx, const IVec& a) {
  QVec out(ctx.basis.size());
  for (std::size_t j = 0; j < ctx.basis.size(); ++j) out[j] = dot(a, ctx.basis[j]);
  return out;
}

IVec canonical_sign(IVec v) {
  v = primitive(v);
  for (Int x : v) {
    if (x == 0) continue;
    if (x < 0) v = -v;
    break;
  }
  return v;
}

std::vector<signed char> signs_of(const std::vector<QVec>& normals, const QVec& t) {
  std::vector<signed char> out(normals.size());
  for (std::size_t i = 0; i < normals.size(); ++i) {
    Q v = dot(normals[i], t);
    out[i] = static_cast<signed char>((v > 0) - (v < 0));
  }
  return out;
}

void combinations(int n, int k, int start, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& f) {
  if (static_cast<int>(cur.size()) == k) {
    f(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    combinations(n, k, i + 1, cur, f);
    cur.pop_back();
  }
}

}  // namespace

Arrangement build_arrangement(const StableSetRep& rep) {
  Arrangement arr;
  arr.ctx = rep.ctx;
  arr.m = rep.ctx.subspace_dim();
  std::set<IVec> hs;
  for (const auto& clause : rep.clauses)
    for (const auto& x : clause) {
      QVec red = reduce(rep.ctx, x);
      if (std::all_of(red.begin(), red.end(), [](const Q& q) { return q == 0; })) continue;
      hs.insert(canonical_sign(x));
    }
  arr.normals.assign(hs.begin(), hs.end());
  for (const auto& a : arr.normals) arr.normals_t.push_back(reduce(rep.ctx, a));
  const int m = arr.m;
  const int n = static_cast<int>(arr.normals.size());
  arr.lineality = nullspace(arr.normals_t, m);
  const int ldim = static_cast<int>(arr.lineality.size());
  if (m == 0) return arr;
  const std::size_t cap = cell_cap();

  // rays: faces of dimension ldim + 1, cut out by normal subsets of rank m - ldim - 1
  std::map<std::vector<signed char>, QVec> rays;
  std::vector<int> cur;
  combinations(n, m - ldim - 1, 0, cur, [&](const std::vector<int>& idx) {
    QMat rows;
    for (int i : idx) rows.push_back(arr.normals_t[i]);
    if (rank(rows) != m - ldim - 1) return;
    for (const auto& l : arr.lineality) rows.push_back(l);
    QMat line = nullspace(rows, m);
    if (line.size() != 1) return;
    QVec v = to_q(clear_denominators(line[0]));
    QVec w = v;
    for (auto& q : w) q = -q;
    for (const QVec& r : {v, w}) {
      auto sg = signs_of(arr.normals_t, r);
      if (!rays.count(sg)) rays.emplace(sg, r);
      if (rays.size() > cap) throw Error(ErrorKind::ArrangementTooLarge, "more than " + std::to_string(cap) + " rays");
    }
  });

  // every face is the cone over its rays, and the sign vector of a sum of
  // conformal points is the union of their supports
  std::map<std::vector<signed char>, QVec> faces(rays.begin(), rays.end());
  std::vector<std::pair<std::vector<signed char>, QVec>> frontier(rays.begin(), rays.end());
  while (!frontier.empty()) {
    std::vector<std::pair<std::vector<signed char>, QVec>> next;
    for (const auto& [sg, t] : frontier) {
      for (const auto& [rs, rt] : rays) {
        bool conformal = true, grows = false;
        for (int i = 0; i < n; ++i) {
          if (sg[i] * rs[i] < 0) { conformal = false; break; }
          if (sg[i] == 0 && rs[i] != 0) grows = true;
        }
        if (!conformal || !grows) continue;
        std::vector<signed char> comp(n);
        for (int i = 0; i < n; ++i) comp[i] = sg[i] != 0 ? sg[i] : rs[i];
        if (faces.count(comp)) continue;
        QVec sum(m);
        for (int j = 0; j < m; ++j) sum[j] = t[j] + rt[j];
        faces.emplace(comp, sum);
        next.push_back({comp, sum});
        if (faces.size() > cap) throw Error(ErrorKind::ArrangementTooLarge, "more than " + std::to_string(cap) + " faces");
      }
    }
    frontier = std::move(next);
  }
  if (ldim > 0) faces.emplace(std::vector<signed char>(n, 0), arr.lineality[0]);

  for (const auto& [sg, t] : faces) {
    Face f;
    f.sign = sg;
    f.t = t;
    QMat zero_rows;
    for (int i = 0; i < n; ++i)
      if (sg[i] == 0) zero_rows.push_back(arr.normals_t[i]);
    f.dim = m - rank(zero_rows);
    f.point = to_ambient(rep.ctx, f.t);
    arr.faces.push_back(std::move(f));
  }
  return arr;
}

int induced_resistance(const StableSetRep& rep, const IVec& u) {
  if (!rep.contains(u)) return 0;
  return resistance_of_rep(descend(rep, u));
}

std::vector<int> face_resistances(const StableSetRep& rep, const Arrangement& arr) {
  std::vector<int> rho;
  rho.reserve(arr.faces.size());
  for (const auto& f : arr.faces) rho.push_back(induced_resistance(rep, f.point));
  return rho;
}

std::vector<QVec> closure_generators(const Arrangement& arr, const std::vector<int>& faces) {
  std::vector<QVec> gens;
  if (faces.empty()) return gens;
  const int ldim = static_cast<int>(arr.lineality.size());
  for (const auto& l : arr.lineality) {
    gens.push_back(l);
    QVec neg = l;
    for (auto& q : neg) q = -q;
    gens.push_back(neg);
  }
  std::set<int> rays;
  for (int fi : faces) {
    const auto& f = arr.faces[fi];
    for (std::size_t gi = 0; gi < arr.faces.size(); ++gi) {
      const auto& g = arr.faces[gi];
      if (g.dim != ldim + 1) continue;
      bool below = true;
      for (std::size_t i = 0; i < g.sign.size(); ++i)
        if (g.sign[i] != 0 && g.sign[i] != f.sign[i]) { below = false; break; }
      if (below) rays.insert(static_cast<int>(gi));
    }
  }
  for (int gi : rays) gens.push_back(arr.faces[gi].t);
  return gens;
}

int resistance_of_rep(const StableSetRep& rep) {
  const int m = rep.ctx.subspace_dim();
  if (m == 0 || rep.empty) return 1;
  Arrangement arr = build_arrangement(rep);
  std::vector<int> rho = face_resistances(rep, arr);
  int top = 0;
  for (int r : rho) top = std::max(top, r);
  for (int j = top; j >= 1; --j) {
    std::vector<int> sel;
    for (std::size_t i = 0; i < rho.size(); ++i)
      if (rho[i] >= j) sel.push_back(static_cast<int>(i));
    if (positively_spans(closure_generators(arr, sel), m)) return j + 1;
  }
  return 1;
}

Classification classify(const UpdateFamily& u) {
  int r = resistance_of_rep(stable_set_rep(u));
  if (r == 1) return {UniversalityClass::Supercritical, r};
  if (r == u.dimension + 1) return {UniversalityClass::Subcritical, r};
  return {UniversalityClass::Critical, r};
}

const char* class_name(UniversalityClass c) {
  switch (c) {
    case UniversalityClass::Supercritical: return "supercritical";
    case UniversalityClass::Critical: return "critical";
    case UniversalityClass::Subcritical: return "subcritical";
  }
  return "?";
}

bool bounds_sphere(const SphereContext& ctx, const std::vector<IVec>& pts) {
  std::vector<QVec> loc;
  for (const auto& p : pts) loc.push_back(to_local(ctx, p));
  return positively_spans(loc, ctx.subspace_dim());
}

}  // namespace bootlab
