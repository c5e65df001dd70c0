#include "bootlab/errors.hpp"
#include "bootlab/io.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace bootlab;

// every entry point takes and returns JSON text; the Python layer converts
namespace {

UpdateFamily family(const std::string& f) { return family_from_json(parse_json(f)); }

BoundingTree tree_or_constructed(const UpdateFamily& u, const std::string& t) {
  return t.empty() ? construct_tree(u) : tree_from_json(parse_json(t));
}

std::string classify_json(const std::string& f) {
  auto u = family(f);
  return to_json(classify(u), stable_set_rep(u)).dump();
}

bool stable(const std::string& f, const std::vector<Int>& dir) { return is_stable(family(f), dir); }

std::string torus_closure_json(const std::string& f, const std::string& sites, Int n) {
  return sites_json(torus_closure(family(f), sites_from_json(parse_json(sites)), n)).dump();
}

std::string construct_tree_json(const std::string& f) { return to_json(construct_tree(family(f))).dump(); }

std::string verify_tree_json(const std::string& f, const std::string& t) {
  return to_json(verify_tree(family(f), tree_from_json(parse_json(t)))).dump();
}

std::string span_json(const std::string& f, const std::string& t, const std::string& sites) {
  auto u = family(f);
  IcebergSystem sys(u, tree_or_constructed(u, t));
  SpanResult s = sys.iceberg_span({}, sites_from_json(parse_json(sites)));
  Json icebergs = Json::array();
  for (const auto& j : s.icebergs) icebergs.push_back(to_json(j, sys.tree()));
  return icebergs.dump();
}

std::string constants_json(const std::string& f, const std::string& t, std::uint64_t seed, int slack_samples) {
  auto u = family(f);
  auto tree = tree_or_constructed(u, t);
  Measures m{IcebergSystem(u, tree)};
  LedgerOptions lo;
  lo.seed = seed;
  lo.slack_samples = slack_samples;
  return to_json(build_ledger(m, tree.depth() + 1, lo)).dump();
}

std::string pc_json(const std::string& f, Int n, int trials, double tol, std::uint64_t seed, int jobs) {
  py::gil_scoped_release release;
  return to_json(estimate_pc(family(f), n, {seed, trials, jobs}, tol)).dump();
}

std::string check_json(const std::string& suite, int samples, std::uint64_t seed) {
  py::gil_scoped_release release;
  return to_json(run_suite(suite, SuiteContext::standard(), samples, seed)).dump();
}

std::string scan_json(const std::string& lemma, const std::string& f) {
  Lemma which = parse_lemma(lemma);
  UpdateFamily u = f.empty() ? neighbour_family(3, 3) : family(f);
  SuiteContext ctx;
  ctx.add("scan", u, construct_tree(u));
  const auto& l = ctx.get("scan").l;
  ScanGrid g = default_grid(l);
  return to_json(inequality_scan(which, g, scale_params(l, g.p))).dump();
}

}  // namespace

PYBIND11_MODULE(_bootlab, m) {
  static py::exception<Error> error(m, "BootlabError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ParseError) {
        PyErr_SetString(PyExc_ValueError, e.what());
      } else {
        py::object exc = error;
        py::object inst = exc(e.what());
        inst.attr("kind") = kind_name(e.kind());
        PyErr_SetObject(error.ptr(), inst.ptr());
      }
    } catch (const Json::exception& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    }
  });

  m.def("neighbour_family", [](int r, int d) { return to_json(neighbour_family(r, d)).dump(); });
  m.def("classify", &classify_json);
  m.def("is_stable", &stable);
  m.def("torus_closure", &torus_closure_json);
  m.def("construct_tree", &construct_tree_json);
  m.def("verify_tree", &verify_tree_json);
  m.def("span", &span_json);
  m.def("constants", &constants_json);
  m.def("estimate_pc", &pc_json);
  m.def("suite_names", &suite_names);
  m.def("check", &check_json);
  m.def("scan", &scan_json);
  m.def("wilson_interval", [](std::int64_t k, std::int64_t n) {
    Interval i = wilson_interval(k, n);
    return std::pair{i.lo, i.hi};
  });
}
