#include "bootlab/io.hpp"

#include "bootlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace bootlab {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad(std::string("missing field '") + key + "'");
  return j.at(key);
}

Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json interval(const Interval& i) { return Json::array({i.lo, i.hi}); }

std::string csv_double(double x) {
  std::ostringstream s;
  s.precision(17);
  s << x;
  return s.str();
}

Json q_json(const Q& q) { return q_str(q); }

Q q_from(const Json& j) {
  if (j.is_string()) return parse_q(j.get<std::string>());
  if (j.is_number_integer()) return Q(j.get<long long>());
  bad("expected a rational string");
}

}  // namespace

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

Json to_json(const IVec& v) { return Json(v); }

IVec ivec_from_json(const Json& j) {
  if (!j.is_array()) bad("expected an integer vector");
  IVec v;
  for (const auto& x : j) {
    if (!x.is_number_integer()) bad("expected an integer vector");
    v.push_back(x.get<Int>());
  }
  return v;
}

Json to_json(const QVec& v) {
  Json j = Json::array();
  for (const auto& q : v) j.push_back(q_json(q));
  return j;
}

QVec qvec_from_json(const Json& j) {
  if (!j.is_array()) bad("expected an array of rationals");
  QVec v;
  for (const auto& x : j) v.push_back(q_from(x));
  return v;
}

Json sites_json(const SiteSet& s) {
  Json j = Json::array();
  for (const auto& z : s) j.push_back(to_json(z));
  return j;
}

SiteSet sites_from_json(const Json& j) {
  if (!j.is_array()) bad("expected an array of sites");
  std::vector<IVec> s;
  for (const auto& z : j) s.push_back(ivec_from_json(z));
  for (const auto& z : s)
    if (z.size() != s.front().size()) bad("sites of different dimensions");
  return make_site_set(s);
}

Json to_json(const UpdateFamily& u) {
  Json rules = Json::array();
  for (const auto& r : u.rules) rules.push_back(sites_json(r));
  return {{"dimension", u.dimension}, {"rules", rules}};
}

UpdateFamily family_from_json(const Json& j) {
  const Json& dj = field(j, "dimension");
  if (!dj.is_number_integer() || dj.get<int>() < 1) bad("dimension must be a positive integer");
  int d = dj.get<int>();
  const Json& rj = field(j, "rules");
  if (!rj.is_array()) bad("rules must be an array");
  std::vector<std::vector<IVec>> raw;
  for (const auto& r : rj) {
    if (!r.is_array()) bad("each rule must be an array of vectors");
    std::vector<IVec> rule;
    for (const auto& v : r) {
      IVec x = ivec_from_json(v);
      if (static_cast<int>(x.size()) != d) throw Error(ErrorKind::DimensionMismatch, "rule vector of wrong dimension");
      rule.push_back(x);
    }
    raw.push_back(rule);
  }
  return canonicalize_family(raw, d);
}

Json to_json(const BoundingTree& t) {
  Json paths = Json::array();
  for (const auto& n : t.nodes) paths.push_back({{"dirs", sites_json(n.path)}, {"children", sites_json(n.children)}});
  return {{"dimension", t.dimension}, {"paths", paths}};
}

BoundingTree tree_from_json(const Json& j) {
  BoundingTree t;
  const Json& pj = field(j, "paths");
  if (!pj.is_array() || pj.empty()) bad("paths must be a non-empty array");
  for (const auto& n : pj) {
    TreeNode node;
    for (const auto& v : field(n, "dirs")) node.path.push_back(primitive(ivec_from_json(v)));
    for (const auto& v : field(n, "children")) node.children.push_back(primitive(ivec_from_json(v)));
    if (node.children.empty()) bad("a stored vertex needs children");
    t.nodes.push_back(node);
  }
  int d = j.contains("dimension") ? j.at("dimension").get<int>()
                                  : static_cast<int>(t.nodes.front().children.front().size());
  t.dimension = d;
  for (const auto& n : t.nodes) {
    for (const auto& v : n.path)
      if (static_cast<int>(v.size()) != d) throw Error(ErrorKind::DimensionMismatch, "tree direction of wrong dimension");
    for (const auto& v : n.children)
      if (static_cast<int>(v.size()) != d) throw Error(ErrorKind::DimensionMismatch, "tree direction of wrong dimension");
  }
  std::sort(t.nodes.begin(), t.nodes.end(), [](const TreeNode& a, const TreeNode& b) {
    if (a.path.size() != b.path.size()) return a.path.size() < b.path.size();
    return a.path < b.path;
  });
  for (std::size_t i = 1; i < t.nodes.size(); ++i)
    if (t.nodes[i].path == t.nodes[i - 1].path) bad("duplicate tree vertex");
  if (!t.nodes.front().path.empty()) bad("tree has no root");
  return t;
}

Json to_json(const Iceberg& j, const BoundingTree& t) {
  const auto& ch = t.children(j.type);
  if (ch.size() != j.bounds.size()) throw Error(ErrorKind::DimensionMismatch, "bounds do not match the tree");
  Json bounds = Json::object();
  for (std::size_t i = 0; i < ch.size(); ++i) bounds[to_json(ch[i]).dump()] = q_json(j.bounds[i]);
  return {{"type_path", sites_json(j.type)}, {"bounds", bounds}, {"shift", to_json(j.shift)}};
}

Iceberg iceberg_from_json(const Json& j, const BoundingTree& t) {
  Iceberg ice;
  for (const auto& v : field(j, "type_path")) ice.type.push_back(primitive(ivec_from_json(v)));
  if (t.is_leaf(ice.type)) throw Error(ErrorKind::PreconditionFailed, "iceberg type must be a non-leaf vertex");
  const Json& bj = field(j, "bounds");
  if (!bj.is_object()) bad("bounds must be an object keyed by direction");
  const auto& ch = t.children(ice.type);
  if (bj.size() != ch.size()) bad("bounds must list every child direction");
  for (const auto& c : ch) {
    std::string key = to_json(c).dump();
    if (!bj.contains(key)) bad("missing bound for " + key);
    ice.bounds.push_back(q_from(bj.at(key)));
  }
  ice.shift = j.contains("shift") ? qvec_from_json(j.at("shift")) : QVec{};
  if (ice.shift.empty()) ice.shift.assign(static_cast<std::size_t>(t.dimension), Q(0));
  return ice;
}

Json to_json(const ConstantsLedger& l) {
  Json eps = Json::array();
  for (const auto& e : l.eps) eps.push_back(q_json(e));
  return {{"C2", q_json(l.C2)},
          {"C_ceil", l.C_ceil},
          {"norm2_max", q_json(l.norm2_max)},
          {"delta", q_json(l.delta)},
          {"singleton_bound", q_json(l.singleton_bound)},
          {"sideways_floor", q_json(l.sideways_floor)},
          {"subadd_slack", q_json(l.subadd_slack)},
          {"lambda", q_json(l.lambda)},
          {"c", q_json(l.c)},
          {"eps", eps},
          {"lambda_footnote_base", q_json(l.lambda_footnote_base)},
          {"lambda_footnote_height", l.lambda_footnote_height},
          {"lambda_footnote", number(l.lambda_footnote)},
          {"lambda_footnote_capped", l.lambda_footnote_capped},
          {"resistance", l.resistance},
          {"dimension", l.dimension},
          {"empirical", {"singleton_bound", "subadd_slack", "lambda", "c"}}};
}

ConstantsLedger ledger_from_json(const Json& j) {
  ConstantsLedger l;
  l.C2 = q_from(field(j, "C2"));
  l.C_ceil = field(j, "C_ceil").get<Int>();
  l.norm2_max = q_from(field(j, "norm2_max"));
  l.delta = q_from(field(j, "delta"));
  l.singleton_bound = q_from(field(j, "singleton_bound"));
  l.sideways_floor = q_from(field(j, "sideways_floor"));
  l.subadd_slack = q_from(field(j, "subadd_slack"));
  l.lambda = q_from(field(j, "lambda"));
  l.c = q_from(field(j, "c"));
  for (const auto& e : field(j, "eps")) l.eps.push_back(q_from(e));
  l.lambda_footnote_base = q_from(field(j, "lambda_footnote_base"));
  l.lambda_footnote_height = field(j, "lambda_footnote_height").get<int>();
  const Json& lf = field(j, "lambda_footnote");
  l.lambda_footnote = lf.is_null() ? HUGE_VAL : lf.get<double>();
  l.lambda_footnote_capped = field(j, "lambda_footnote_capped").get<bool>();
  l.resistance = field(j, "resistance").get<int>();
  l.dimension = field(j, "dimension").get<int>();
  return l;
}

Json to_json(const StableSetRep& rep) {
  Json clauses = Json::array();
  for (const auto& c : rep.clauses) clauses.push_back(sites_json(c));
  return {{"clauses", clauses}, {"empty", rep.empty}};
}

Json to_json(const Classification& c, const StableSetRep& rep) {
  return {{"class", class_name(c.cls)}, {"resistance", c.resistance}, {"stable_rep", to_json(rep)}};
}

Json to_json(const TreeReport& r) {
  Json nodes = Json::array();
  for (const auto& n : r.nodes)
    nodes.push_back({{"path", sites_json(n.path)},
                     {"bounding", n.bounding},
                     {"s_good", n.s_good},
                     {"independent", n.independent},
                     {"mt_bounding", n.mt_bounding},
                     {"children_near", n.children_near}});
  return {{"resistance", r.resistance}, {"depth_ok", r.depth_ok}, {"path_closure", r.path_closure},
          {"margin", r.margin},         {"nodes", nodes},         {"failures", r.failures},
          {"overall", r.overall}};
}

Json to_json(const SuiteReport& r) { return parse_json(suite_json(r)); }

Json to_json(const Estimate& e) {
  return {{"successes", e.successes}, {"trials", e.trials}, {"estimate", e.value}, {"ci", interval(e.ci)}};
}

Json to_json(const PcEstimate& e) {
  Json levels = Json::array();
  for (const auto& l : e.levels)
    levels.push_back({{"level", l.level},
                      {"p", l.p},
                      {"successes", l.successes},
                      {"trials", l.trials},
                      {"ci_lo", l.ci.lo},
                      {"ci_hi", l.ci.hi}});
  return {{"p_hat", e.p_hat}, {"bracket", interval(e.bracket)}, {"ci", interval(e.ci)}, {"levels", levels}};
}

Json to_json(const ScanReport& r) {
  Json pts = Json::array();
  for (const auto& p : r.points) {
    Json pj = {{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}, {"filtered", p.filtered}};
    if (p.filtered)
      pj["reason"] = p.reason;
    else
      pj.update({{"lhs", p.lhs}, {"rhs", p.rhs}, {"margin", p.margin}});
    pts.push_back(pj);
  }
  return {{"lemma", lemma_name(r.lemma)}, {"evaluated", r.evaluated}, {"filtered", r.filtered},
          {"violations", r.violations},   {"min_margin", number(r.min_margin)}, {"passed", r.passed()},
          {"points", pts}};
}

std::string pc_csv(const PcEstimate& e) {
  std::string s = "level,p,successes,trials,ci_lo,ci_hi\n";
  for (const auto& l : e.levels)
    s += std::to_string(l.level) + "," + csv_double(l.p) + "," + std::to_string(l.successes) + "," +
         std::to_string(l.trials) + "," + csv_double(l.ci.lo) + "," + csv_double(l.ci.hi) + "\n";
  return s;
}

std::string scan_csv(const ScanReport& r) {
  std::string s = "lemma,alpha,beta,gamma,filtered,lhs,rhs,margin,reason\n";
  for (const auto& p : r.points) {
    s += std::string(lemma_name(r.lemma)) + "," + csv_double(p.alpha) + "," + csv_double(p.beta) + "," +
         csv_double(p.gamma) + "," + (p.filtered ? "1" : "0") + ",";
    if (p.filtered)
      s += ",,,\"" + p.reason + "\"\n";
    else
      s += csv_double(p.lhs) + "," + csv_double(p.rhs) + "," + csv_double(p.margin) + ",\n";
  }
  return s;
}

}  // namespace bootlab
