#pragma once

#include "bootlab/hierarchies.hpp"
#include "bootlab/measures.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace bootlab {

// seeded machine checks of the iceberg and extraction lemmas; instance i of a
// run draws from its own stream keyed by (seed, i)
struct SuiteReport {
  std::string name;
  int samples = 0;
  int failures = 0;
  int skipped = 0;  // generated instances that missed the suite's preconditions
  std::vector<std::string> counterexamples;  // first few failures
  std::map<std::string, double> stats;

  bool passed() const { return samples > 0 && failures == 0; }
};

struct SuiteSystem {
  std::string name;
  std::unique_ptr<Measures> m;
  ConstantsLedger l;
};

class SuiteContext {
 public:
  void add(const std::string& name, const UpdateFamily& u, const BoundingTree& t, std::uint64_t ledger_seed = 7);
  // N_2^2, N_2^3 and N_3^3 with constructed trees
  static SuiteContext standard();

  const std::vector<std::unique_ptr<SuiteSystem>>& systems() const { return systems_; }
  const SuiteSystem& get(const std::string& name) const;
  bool has(const std::string& name) const;

 private:
  std::vector<std::unique_ptr<SuiteSystem>> systems_;
};

std::mt19937_64 instance_stream(std::uint64_t seed, std::uint64_t index);

// p-random sites in the box [0, side_i)
SiteSet random_box_sites(std::mt19937_64& g, const IVec& side, double p);

// the root span class of A with the largest diam*
struct SpannedInstance {
  SiteSet a;
  SiteSet seeds;
  Iceberg iceberg;
  Q diam;
};
SpannedInstance largest_span_class(const Measures& m, const SiteSet& a, const Q& delta);

std::vector<std::string> suite_names();
std::string suite_description(const std::string& name);
// throws PreconditionFailed for an unknown name or a context lacking the needed system
SuiteReport run_suite(const std::string& name, const SuiteContext& ctx, int samples, std::uint64_t seed);

std::string suite_json(const SuiteReport& r);

}  // namespace bootlab
