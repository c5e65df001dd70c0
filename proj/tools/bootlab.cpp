// bootlab command-line front end; exit 0 on success, 1 on a failed check or
// scan (or a library error), 2 on usage errors
#include "bootlab/errors.hpp"
#include "bootlab/family.hpp"
#include "bootlab/hierarchies.hpp"
#include "bootlab/io.hpp"
#include "bootlab/lattice.hpp"
#include "bootlab/montecarlo.hpp"
#include "bootlab/sphere.hpp"
#include "bootlab/suites.hpp"
#include "bootlab/tree.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

using namespace bootlab;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// inline JSON, or @path for a file
Json json_arg(const std::string& s) { return !s.empty() && s[0] == '@' ? read_json_file(s.substr(1)) : parse_json(s); }

struct Options {
  std::string family, tree, sites, type = "[]", shift, iceberg, droplet, suite, lemma = "A1", grid = "default";
  std::string out = "json";
  std::optional<std::uint64_t> seed;
  Int box = 0, torus = 0, n = 0;
  long long cap = 1000000;
  int trials = 400, jobs = 1, samples = 100, slack_samples = 80;
  double tol = 1e-3, p = 0;
};

UpdateFamily load_family(const Options& o) { return family_from_json(read_json_file(o.family)); }

BoundingTree load_tree(const Options& o, const UpdateFamily& u) {
  return o.tree.empty() ? construct_tree(u) : tree_from_json(read_json_file(o.tree));
}

std::uint64_t need_seed(const Options& o) {
  if (!o.seed) throw UsageError("--seed is required for randomized commands");
  return *o.seed;
}

void emit(const Json& j) { std::cout << j.dump() << "\n"; }

void json_only(const Options& o) {
  if (o.out != "json") throw UsageError("this command only writes JSON");
}

int cmd_classify(const Options& o) {
  json_only(o);
  auto u = load_family(o);
  emit(to_json(classify(u), stable_set_rep(u)));
  return 0;
}

int cmd_close(const Options& o) {
  json_only(o);
  auto u = load_family(o);
  SiteSet k = sites_from_json(json_arg(o.sites));
  for (const auto& z : k)
    if (static_cast<int>(z.size()) != u.dimension) throw Error(ErrorKind::DimensionMismatch, "site of wrong dimension");
  if (o.box > 0 && o.torus > 0) throw UsageError("--box and --torus are exclusive");
  SiteSet out;
  if (o.torus > 0) {
    out = torus_closure(u, k, o.torus);
  } else {
    LatticeConfig cfg = LatticeConfig::plain(u.dimension);
    if (!o.shift.empty()) cfg.offset = qvec_from_json(json_arg(o.shift));
    if (o.box > 0) cfg.domain = Domain::box(IVec(static_cast<std::size_t>(u.dimension), -o.box),
                                            IVec(static_cast<std::size_t>(u.dimension), o.box));
    out = closure(u, k, {}, cfg, static_cast<std::size_t>(o.cap));
  }
  emit({{"count", out.size()}, {"sites", sites_json(out)}});
  return 0;
}

int cmd_span(const Options& o) {
  json_only(o);
  auto u = load_family(o);
  IcebergSystem sys(u, load_tree(o, u));
  TypePath type;
  for (const auto& v : json_arg(o.type)) type.push_back(ivec_from_json(v));
  QVec shift = o.shift.empty() ? QVec{} : qvec_from_json(json_arg(o.shift));
  SiteSet k = sites_from_json(json_arg(o.sites));
  SpanResult s = sys.iceberg_span(type, k, shift);
  Json classes = Json::array(), icebergs = Json::array();
  for (const auto& c : s.classes) classes.push_back(sites_json(c));
  for (const auto& j : s.icebergs) icebergs.push_back(to_json(j, sys.tree()));
  emit({{"classes", classes}, {"icebergs", icebergs}, {"merges", s.merges.size()}});
  return 0;
}

int cmd_verify_tree(const Options& o) {
  json_only(o);
  if (o.tree.empty()) throw UsageError("verify-tree needs -t");
  auto u = load_family(o);
  auto r = verify_tree(u, tree_from_json(read_json_file(o.tree)));
  emit(to_json(r));
  return r.overall ? 0 : 1;
}

int cmd_construct_tree(const Options& o) {
  json_only(o);
  emit(to_json(construct_tree(load_family(o))));
  return 0;
}

int cmd_constants(const Options& o) {
  json_only(o);
  std::uint64_t seed = need_seed(o);
  auto u = load_family(o);
  auto t = load_tree(o, u);
  Measures m{IcebergSystem(u, t)};
  LedgerOptions lo;
  lo.seed = seed;
  lo.slack_samples = o.slack_samples;
  emit(to_json(build_ledger(m, t.depth() + 1, lo)));
  return 0;
}

int cmd_pc(const Options& o) {
  std::uint64_t seed = need_seed(o);
  if (o.n < 1) throw UsageError("--n must be positive");
  auto u = load_family(o);
  auto e = estimate_pc(u, o.n, {seed, o.trials, o.jobs}, o.tol);
  if (o.out == "csv")
    std::cout << pc_csv(e);
  else
    emit(to_json(e));
  return 0;
}

int cmd_spanprob(const Options& o) {
  json_only(o);
  std::uint64_t seed = need_seed(o);
  if (o.iceberg.empty() == o.droplet.empty()) throw UsageError("give exactly one of --iceberg and --droplet");
  auto u = load_family(o);
  IcebergSystem sys(u, load_tree(o, u));
  Iceberg j = o.iceberg.empty() ? sys.min_iceberg_droplet({}, sites_from_json(json_arg(o.droplet)))
                                : iceberg_from_json(json_arg(o.iceberg), sys.tree());
  auto e = spanning_probability(sys, j.type, j, o.p, {seed, o.trials, o.jobs});
  Json out = to_json(e);
  out["iceberg"] = to_json(j, sys.tree());
  out["p"] = o.p;
  emit(out);
  return 0;
}

int cmd_check(const Options& o) {
  json_only(o);
  std::uint64_t seed = need_seed(o);
  auto names = suite_names();
  if (std::find(names.begin(), names.end(), o.suite) == names.end()) throw UsageError("unknown suite '" + o.suite + "'");
  auto r = run_suite(o.suite, SuiteContext::standard(), o.samples, seed);
  emit(to_json(r));
  return r.passed() ? 0 : 1;
}

int cmd_scan(const Options& o) {
  if (o.grid != "default") throw UsageError("only --grid default is defined");
  Lemma which = parse_lemma(o.lemma);
  UpdateFamily u = o.family.empty() ? neighbour_family(3, 3) : load_family(o);
  SuiteContext ctx;
  ctx.add("scan", u, load_tree(o, u));
  const auto& l = ctx.get("scan").l;
  ScanGrid g = default_grid(l);
  auto r = inequality_scan(which, g, scale_params(l, g.p));
  if (o.out == "csv")
    std::cout << scan_csv(r);
  else
    emit(to_json(r));
  return r.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bootstrap percolation lab"};
  app.require_subcommand(1);
  Options o;

  auto fam = [&](CLI::App* c, bool required) {
    auto* opt = c->add_option("-f,--family", o.family, "family JSON file");
    if (required) opt->required();
    c->add_option("--out", o.out, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  };
  auto tree = [&](CLI::App* c) { c->add_option("-t,--tree", o.tree, "tree JSON file (constructed when absent)"); };
  auto seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "RNG seed (required)"); };
  auto jobs = [&](CLI::App* c) { c->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber); };

  auto* classify_cmd = app.add_subcommand("classify", "universality class and resistance");
  fam(classify_cmd, true);
  auto* resistance_cmd = app.add_subcommand("resistance", "resistance and class");
  fam(resistance_cmd, true);

  auto* close_cmd = app.add_subcommand("close", "bootstrap closure of a finite set");
  fam(close_cmd, true);
  close_cmd->add_option("--sites", o.sites, "JSON array of sites")->required();
  close_cmd->add_option("--box", o.box, "restrict to [-n, n]^d")->check(CLI::PositiveNumber);
  close_cmd->add_option("--torus", o.torus, "close on the torus of side n")->check(CLI::PositiveNumber);
  close_cmd->add_option("--offset", o.shift, "lattice offset, JSON array of rationals");
  close_cmd->add_option("--cap", o.cap, "bound on newly infected sites")->check(CLI::PositiveNumber);

  auto* span_cmd = app.add_subcommand("span", "iceberg span of a finite set");
  fam(span_cmd, true);
  tree(span_cmd);
  span_cmd->add_option("--sites", o.sites, "JSON array of sites")->required();
  span_cmd->add_option("--type", o.type, "type path, JSON array of directions");
  span_cmd->add_option("--shift", o.shift, "iceberg shift, JSON array of rationals");

  auto* verify_cmd = app.add_subcommand("verify-tree", "check a bounding tree");
  fam(verify_cmd, true);
  tree(verify_cmd);
  auto* construct_cmd = app.add_subcommand("construct-tree", "build a bounding tree");
  fam(construct_cmd, true);

  auto* constants_cmd = app.add_subcommand("constants", "constants ledger");
  fam(constants_cmd, true);
  tree(constants_cmd);
  seed(constants_cmd);
  constants_cmd->add_option("--slack-samples", o.slack_samples, "sub-additivity slack instances")
      ->check(CLI::PositiveNumber);

  auto* pc_cmd = app.add_subcommand("pc", "critical probability on the torus by coupled bisection");
  fam(pc_cmd, true);
  seed(pc_cmd);
  jobs(pc_cmd);
  pc_cmd->add_option("--n", o.n, "torus side")->required();
  pc_cmd->add_option("--trials", o.trials, "trials per level")->check(CLI::PositiveNumber);
  pc_cmd->add_option("--tol", o.tol, "bracket width")->check(CLI::PositiveNumber);

  auto* spanprob_cmd = app.add_subcommand("spanprob", "probability that p-random sites span an iceberg");
  fam(spanprob_cmd, true);
  tree(spanprob_cmd);
  seed(spanprob_cmd);
  jobs(spanprob_cmd);
  spanprob_cmd->add_option("--iceberg", o.iceberg, "iceberg JSON");
  spanprob_cmd->add_option("--droplet", o.droplet, "sites whose minimal root droplet is the target");
  spanprob_cmd->add_option("--p", o.p, "site density")->required()->check(CLI::Range(0.0, 1.0));
  spanprob_cmd->add_option("--trials", o.trials, "trials")->check(CLI::PositiveNumber);

  auto* check_cmd = app.add_subcommand("check", "seeded property suite");
  check_cmd->add_option("--out", o.out, "json")->check(CLI::IsMember({"json", "csv"}));
  check_cmd->add_option("--suite", o.suite, "suite name")->required();
  check_cmd->add_option("--samples", o.samples, "instances")->check(CLI::PositiveNumber);
  seed(check_cmd);

  auto* scan_cmd = app.add_subcommand("scan", "grid scan of the scale inequalities");
  fam(scan_cmd, false);
  tree(scan_cmd);
  scan_cmd->add_option("--lemma", o.lemma, "A1, A2 or A3")->check(CLI::IsMember({"A1", "A2", "A3"}));
  scan_cmd->add_option("--grid", o.grid, "grid name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "classify" || name == "resistance") return cmd_classify(o);
    if (name == "close") return cmd_close(o);
    if (name == "span") return cmd_span(o);
    if (name == "verify-tree") return cmd_verify_tree(o);
    if (name == "construct-tree") return cmd_construct_tree(o);
    if (name == "constants") return cmd_constants(o);
    if (name == "pc") return cmd_pc(o);
    if (name == "spanprob") return cmd_spanprob(o);
    if (name == "check") return cmd_check(o);
    if (name == "scan") return cmd_scan(o);
    throw UsageError("unknown command");
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) {
      std::cerr << "usage error: " << e.what() << "\n";
      return 2;
    }
    std::cout << Json{{"error", kind_name(e.kind())}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}
