#pragma once

#include "bootlab/hierarchies.hpp"
#include "bootlab/measures.hpp"
#include "bootlab/montecarlo.hpp"
#include "bootlab/sphere.hpp"
#include "bootlab/suites.hpp"
#include "bootlab/tree.hpp"

#include <json.hpp>

#include <string>

namespace bootlab {

using Json = nlohmann::json;

// readers throw ParseError on malformed input
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);

Json to_json(const IVec& v);
IVec ivec_from_json(const Json& j);
Json to_json(const QVec& v);  // array of "p/q" strings
QVec qvec_from_json(const Json& j);
Json sites_json(const SiteSet& s);
SiteSet sites_from_json(const Json& j);

// {"dimension": d, "rules": [[[...], ...], ...]}, rules canonical
Json to_json(const UpdateFamily& u);
UpdateFamily family_from_json(const Json& j);

// {"dimension": d, "paths": [{"dirs": [...], "children": [...]}, ...]};
// the reader makes directions primitive and sorts nodes by path
Json to_json(const BoundingTree& t);
BoundingTree tree_from_json(const Json& j);

// bounds keyed by the child direction of the type vertex
Json to_json(const Iceberg& j, const BoundingTree& t);
Iceberg iceberg_from_json(const Json& j, const BoundingTree& t);

Json to_json(const ConstantsLedger& l);
ConstantsLedger ledger_from_json(const Json& j);

Json to_json(const StableSetRep& rep);
Json to_json(const Classification& c, const StableSetRep& rep);
Json to_json(const TreeReport& r);
Json to_json(const SuiteReport& r);
Json to_json(const Estimate& e);
Json to_json(const PcEstimate& e);
Json to_json(const ScanReport& r);

// level,p,successes,trials,ci_lo,ci_hi
std::string pc_csv(const PcEstimate& e);
// lemma,alpha,beta,gamma,filtered,lhs,rhs,margin,reason
std::string scan_csv(const ScanReport& r);

}  // namespace bootlab
