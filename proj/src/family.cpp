#include "bootlab/family.hpp"

#include "bootlab/errors.hpp"

#include <algorithm>
#include <set>

namespace bootlab {

UpdateFamily canonicalize_family(const std::vector<std::vector<IVec>>& raw, int d) {
  if (d <= 0) throw Error(ErrorKind::DimensionMismatch, "dimension must be positive");
  std::set<Rule> rules;
  for (const auto& r : raw) {
    if (r.empty()) throw Error(ErrorKind::EmptyRule, "rule with no vectors");
    std::set<IVec> s;
    for (const auto& v : r) {
      if (static_cast<int>(v.size()) != d)
        throw Error(ErrorKind::DimensionMismatch, "vector of length " + std::to_string(v.size()) +
                                                      " in a family of dimension " + std::to_string(d));
      if (std::all_of(v.begin(), v.end(), [](Int x) { return x == 0; }))
        throw Error(ErrorKind::OriginInRule, "rule contains the origin");
      s.insert(v);
    }
    rules.insert(Rule(s.begin(), s.end()));
  }
  UpdateFamily f;
  f.dimension = d;
  f.rules.assign(rules.begin(), rules.end());
  return f;
}

namespace {

void subsets(const std::vector<IVec>& pool, int r, std::size_t start, Rule& cur, std::vector<Rule>& out) {
  if (static_cast<int>(cur.size()) == r) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = start; i < pool.size(); ++i) {
    cur.push_back(pool[i]);
    subsets(pool, r, i + 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

UpdateFamily neighbour_family(int r, int d) {
  if (r < 1 || r > 2 * d) throw Error(ErrorKind::PreconditionFailed, "need 1 <= r <= 2d");
  std::vector<IVec> pool;
  for (int i = 0; i < d; ++i) {
    IVec e(d, 0);
    e[i] = 1;
    pool.push_back(e);
    e[i] = -1;
    pool.push_back(e);
  }
  std::vector<Rule> raw;
  Rule cur;
  subsets(pool, r, 0, cur, raw);
  return canonicalize_family(raw, d);
}

Q range2(const UpdateFamily& u) {
  Int m = 0;
  for (const auto& r : u.rules)
    for (const auto& v : r) m = std::max(m, norm2(v));
  return Q(4 * m);
}

std::vector<IVec> rule_vectors(const UpdateFamily& u) {
  std::set<IVec> s;
  for (const auto& r : u.rules) s.insert(r.begin(), r.end());
  return {s.begin(), s.end()};
}

bool threshold_form(const UpdateFamily& u, std::vector<IVec>& vs, int& r) {
  if (u.rules.empty()) return false;
  vs = rule_vectors(u);
  r = static_cast<int>(u.rules.front().size());
  for (const auto& rule : u.rules)
    if (static_cast<int>(rule.size()) != r) return false;
  // count must equal |V| choose r; rules are distinct r-subsets of V
  double expect = 1;
  for (int i = 0; i < r; ++i) expect = expect * (vs.size() - i) / (i + 1);
  return static_cast<double>(u.rules.size()) == expect;
}

}  // namespace bootlab
