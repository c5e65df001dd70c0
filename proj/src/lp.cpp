#include "bootlab/lp.hpp"

#include <limits>

namespace bootlab {

namespace {

struct Tableau {
  int m = 0;
  int cols = 0;  // structural + slack + artificial, rhs stored separately
  std::vector<QVec> a;
  QVec rhs;
  std::vector<int> basis;

  void pivot(int r, int c) {
    Q inv = 1 / a[r][c];
    for (int k = 0; k < cols; ++k)
      if (a[r][k] != 0) a[r][k] *= inv;
    rhs[r] *= inv;
    for (int i = 0; i < m; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Q f = a[i][c];
      for (int k = 0; k < cols; ++k)
        if (a[r][k] != 0) a[i][k] -= f * a[r][k];
      rhs[i] -= f * rhs[r];
    }
    basis[r] = c;
  }

  // maximize cost . x over allowed columns; returns false when unbounded
  bool optimize(const QVec& cost, const std::vector<bool>& allowed) {
    while (true) {
      int enter = -1;
      for (int c = 0; c < cols && enter < 0; ++c) {
        if (!allowed[c]) continue;
        bool in_basis = false;
        for (int b : basis)
          if (b == c) { in_basis = true; break; }
        if (in_basis) continue;
        Q reduced = cost[c];
        for (int i = 0; i < m; ++i)
          if (a[i][c] != 0) reduced -= cost[basis[i]] * a[i][c];
        if (reduced > 0) enter = c;
      }
      if (enter < 0) return true;
      int leave = -1;
      Q best;
      for (int i = 0; i < m; ++i) {
        if (a[i][enter] <= 0) continue;
        Q ratio = rhs[i] / a[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LpResult solve_lp(const LinearProgram& lp) {
  const int n = lp.n;
  const int m = static_cast<int>(lp.rows.size());
  int slacks = 0;
  for (const auto& r : lp.rows)
    if (r.sense != Sense::Eq) ++slacks;
  const int nstruct = 2 * n;
  const int art0 = nstruct + slacks;
  Tableau t;
  t.m = m;
  t.cols = art0 + m;
  t.a.assign(m, QVec(t.cols, Q(0)));
  t.rhs.assign(m, Q(0));
  t.basis.assign(m, 0);
  int s = 0;
  for (int i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    for (int j = 0; j < n; ++j) {
      t.a[i][j] = row.a[j];
      t.a[i][n + j] = -row.a[j];
    }
    if (row.sense == Sense::Le) t.a[i][nstruct + s++] = 1;
    else if (row.sense == Sense::Ge) t.a[i][nstruct + s++] = -1;
    t.rhs[i] = row.b;
    if (t.rhs[i] < 0) {
      for (auto& v : t.a[i]) v = -v;
      t.rhs[i] = -t.rhs[i];
    }
    t.a[i][art0 + i] = 1;
    t.basis[i] = art0 + i;
  }

  std::vector<bool> all(t.cols, true);
  QVec phase1(t.cols, Q(0));
  for (int i = 0; i < m; ++i) phase1[art0 + i] = -1;
  t.optimize(phase1, all);
  Q infeas = 0;
  for (int i = 0; i < m; ++i)
    if (t.basis[i] >= art0) infeas += t.rhs[i];
  LpResult res;
  if (infeas > 0) {
    res.status = LpStatus::Infeasible;
    return res;
  }
  // drive zero-level artificials out of the basis, dropping redundant rows
  for (int i = 0; i < t.m; ++i) {
    if (t.basis[i] < art0) continue;
    int c = -1;
    for (int k = 0; k < art0; ++k)
      if (t.a[i][k] != 0) { c = k; break; }
    if (c >= 0) {
      t.pivot(i, c);
    } else {
      t.a.erase(t.a.begin() + i);
      t.rhs.erase(t.rhs.begin() + i);
      t.basis.erase(t.basis.begin() + i);
      --t.m;
      --i;
    }
  }
  std::vector<bool> allowed(t.cols, true);
  for (int k = art0; k < t.cols; ++k) allowed[k] = false;
  QVec cost(t.cols, Q(0));
  for (int j = 0; j < n; ++j) {
    cost[j] = lp.objective.empty() ? Q(0) : lp.objective[j];
    cost[n + j] = -cost[j];
  }
  if (!t.optimize(cost, allowed)) {
    res.status = LpStatus::Unbounded;
    return res;
  }
  QVec full(t.cols, Q(0));
  for (int i = 0; i < t.m; ++i) full[t.basis[i]] = t.rhs[i];
  res.x.assign(n, Q(0));
  for (int j = 0; j < n; ++j) res.x[j] = full[j] - full[n + j];
  res.value = 0;
  for (int j = 0; j < n; ++j)
    if (!lp.objective.empty()) res.value += lp.objective[j] * res.x[j];
  res.status = LpStatus::Optimal;
  return res;
}

std::vector<Q> balancing_weights(const std::vector<QVec>& gens, int n) {
  const int k = static_cast<int>(gens.size());
  if (k == 0) return {};
  // variables: lambda_0..lambda_{k-1}, t
  LinearProgram lp;
  lp.n = k + 1;
  for (int i = 0; i < k; ++i) {
    QVec a(k + 1, Q(0));
    a[i] = 1;
    a[k] = -1;
    lp.add(a, Sense::Ge, 0);
  }
  QVec sum(k + 1, Q(0));
  for (int i = 0; i < k; ++i) sum[i] = 1;
  lp.add(sum, Sense::Eq, 1);
  for (int c = 0; c < n; ++c) {
    QVec a(k + 1, Q(0));
    for (int i = 0; i < k; ++i) a[i] = gens[i][c];
    lp.add(a, Sense::Eq, 0);
  }
  lp.objective.assign(k + 1, Q(0));
  lp.objective[k] = 1;
  LpResult r = solve_lp(lp);
  if (r.status != LpStatus::Optimal || r.value <= 0) return {};
  return std::vector<Q>(r.x.begin(), r.x.begin() + k);
}

bool positively_spans(const std::vector<QVec>& gens, int n) {
  if (n == 0) return true;
  if (gens.empty()) return false;
  if (rank(gens) != n) return false;
  return !balancing_weights(gens, n).empty();
}

bool positively_spans(const std::vector<IVec>& gens, int n) {
  std::vector<QVec> q;
  for (const auto& g : gens) q.push_back(to_q(g));
  return positively_spans(q, n);
}

}  // namespace bootlab
