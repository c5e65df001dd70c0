#pragma once

#include "bootlab/rational.hpp"

#include <vector>

namespace bootlab {

using Rule = std::vector<IVec>;

struct UpdateFamily {
  int dimension = 0;
  std::vector<Rule> rules;  // each rule sorted, rules sorted and distinct

  bool operator==(const UpdateFamily& o) const = default;
};

UpdateFamily canonicalize_family(const std::vector<std::vector<IVec>>& raw, int d);

// the (2d choose r) subsets of size r of {+-e_1,...,+-e_d}
UpdateFamily neighbour_family(int r, int d);

// squared range 4 max |x|^2
Q range2(const UpdateFamily& u);

// all distinct vectors occurring in some rule
std::vector<IVec> rule_vectors(const UpdateFamily& u);

// if the family is every r-subset of a vector set V, returns V and sets r
bool threshold_form(const UpdateFamily& u, std::vector<IVec>& vs, int& r);

}  // namespace bootlab
