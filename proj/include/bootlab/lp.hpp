#pragma once

#include "bootlab/rational.hpp"

#include <vector>

namespace bootlab {

enum class Sense { Le, Ge, Eq };

struct LpRow {
  QVec a;
  Sense sense;
  Q b;
};

// maximize objective . x subject to rows; every variable is free
struct LinearProgram {
  int n = 0;
  std::vector<LpRow> rows;
  QVec objective;

  void add(QVec a, Sense s, Q b) { rows.push_back({std::move(a), s, std::move(b)}); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Q value;
  QVec x;
};

// exact two-phase simplex with Bland's rule
LpResult solve_lp(const LinearProgram& lp);

// true iff the vectors positively span R^n (every vector has dimension n)
bool positively_spans(const std::vector<QVec>& gens, int n);
bool positively_spans(const std::vector<IVec>& gens, int n);

// strictly positive convex weights with sum lambda_i g_i = 0 maximizing the
// least weight; empty if none exists
std::vector<Q> balancing_weights(const std::vector<QVec>& gens, int n);

}  // namespace bootlab
