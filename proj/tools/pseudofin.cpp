// pseudofin: construct groups and structures, run the checkers, emit JSON.
//
// Exit codes: 0 expected verdicts, 1 refutation event, 2 usage or input
// errors.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pseudofin/bilinear.hpp"
#include "pseudofin/comprehensive.hpp"
#include "pseudofin/error.hpp"
#include "pseudofin/groups.hpp"
#include "pseudofin/modelcheck.hpp"
#include "pseudofin/report.hpp"
#include "pseudofin/suite.hpp"
#include "pseudofin/textio.hpp"

using namespace pseudofin;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRefuted = 1;
constexpr int kExitUsage = 2;

struct UsageError : Error {
  using Error::Error;
};

struct Options {
  std::string kind;
  std::vector<std::string> params;
  std::string check;
  std::string input;
  std::string suite;
  std::string out;
  std::string mode = "exhaustive";
  std::string instances;
  std::string exponents;
  std::string element;
  std::string generators;
  std::string powers = "2,3";
  std::uint64_t budget = kDefaultMapBudget;
  std::uint64_t seed = 1;
  std::uint64_t samples = 100'000;
  std::uint64_t max_instances = kDefaultStarInstances;
  unsigned threads = 1;
  std::size_t k = 1;
  std::size_t max_rank = 1;
  std::uint32_t p = 3;
  std::size_t n = 2;
  std::size_t d = 2;
};

// argv without --threads/--out and their values, so that reports do not
// depend on worker count or destination.
Json command_echo(int argc, char** argv) {
  Json echo = Json::array();
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--threads" || a == "--out") {
      ++i;
      continue;
    }
    if (a.rfind("--threads=", 0) == 0 || a.rfind("--out=", 0) == 0) continue;
    echo.push_back(a);
  }
  return echo;
}

std::vector<std::uint64_t> parse_list(const std::string& text, const std::string& flag) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw UsageError(flag + ": '" + item + "' is not a non-negative integer");
    }
  }
  if (out.empty()) throw UsageError(flag + " needs at least one value");
  return out;
}

std::string slurp(const std::string& path) {
  try {
    return read_file(path);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

std::uint64_t param(const Options& o, std::size_t i, const std::string& what) {
  if (i >= o.params.size()) throw UsageError("construct " + o.kind + ": missing " + what);
  return parse_list(o.params[i], what).front();
}

CheckMode check_mode(const Options& o) {
  if (o.mode == "exhaustive") return CheckMode::exhaustive();
  if (o.mode == "sample") return CheckMode::sample(o.samples, o.seed);
  throw UsageError("--mode must be 'exhaustive' or 'sample'");
}

std::string need_input(const Options& o) {
  if (o.input.empty()) throw UsageError("check " + o.check + " needs an input file");
  return slurp(o.input);
}

bool starts_with_group_header(const std::string& text) {
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') {
      std::getline(in, tok);
      continue;
    }
    return tok == "bilinear" || tok == "table";
  }
  return false;
}

BilinearStructure load_structure(const std::string& text) {
  if (!starts_with_group_header(text)) return parse_structure(text);
  const LoadedGroup g = parse_group(text);
  if (!g.class2) throw UsageError("a bilinear structure or bilinear group is required");
  return g.class2->structure();
}

Class2Group load_class2(const std::string& text) {
  const LoadedGroup g = parse_group(text);
  if (!g.class2) throw UsageError("this check needs a 'bilinear' group file");
  return *g.class2;
}

void emit(const Options& o, const Json& report) {
  const std::string text = dump(report);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    write_file(o.out, text);
  }
}

Json base_report(int argc, char** argv, const std::string& digest) {
  Json r;
  r["schema"] = kReportSchema;
  r["tool"] = "pseudofin";
  r["version"] = kToolVersion;
  r["command"] = command_echo(argc, argv);
  r["input_digest"] = digest.empty() ? Json(nullptr) : Json(digest);
  return r;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

// ---------------------------------------------------------------------------
// construct

int cmd_construct(const Options& o) {
  std::string text;
  Json cert;
  const auto& kind = o.kind;
  auto class2 = [&](const Class2Group& g) {
    text = format_group(g);
    cert = to_json(certify(g, o.seed, 200'000, o.threads));
    if (!cert["passed"].get<bool>()) throw Error("construction certificate failed");
  };
  auto table = [&](const TableGroup& g) {
    text = format_group(g);
    const auto assoc = associativity_check(g, CheckMode::exhaustive(), o.threads);
    const auto series = lower_central_series(g);
    cert = {{"order", g.order()},
            {"associativity", to_json(assoc)},
            {"associativity_exhaustive", g.order() <= kExhaustiveAssociativityLimit},
            {"series", to_json(series)}};
    if (!assoc.holds) throw Error("table is not associative");
  };
  if (kind == "extraspecial") {
    class2(extraspecial(static_cast<std::uint32_t>(param(o, 0, "p")), param(o, 1, "k")));
  } else if (kind == "heisenberg") {
    const std::size_t m = o.params.size() > 2 ? param(o, 2, "m") : 1;
    class2(heisenberg(static_cast<std::uint32_t>(param(o, 0, "p")), param(o, 1, "n"), m));
  } else if (kind == "central-product") {
    if (o.params.empty()) throw UsageError("construct central-product: missing group file");
    class2(central_product(load_class2(slurp(o.params[0])), param(o, 1, "copies")));
  } else if (kind == "direct-power") {
    if (o.params.empty()) throw UsageError("construct direct-power: missing group file");
    table(direct_power(load_class2(slurp(o.params[0])), param(o, 1, "k")));
  } else if (kind == "ut") {
    table(ut_group(static_cast<std::uint32_t>(param(o, 0, "p")), param(o, 1, "dim")));
  } else if (kind == "from-bilinear") {
    if (o.params.empty()) throw UsageError("construct from-bilinear: missing structure file");
    class2(group_from_bilinear(parse_structure(slurp(o.params[0]))));
  } else if (kind == "load") {
    // Re-emits a group file in canonical form.
    if (o.params.empty()) throw UsageError("construct load: missing group file");
    const auto loaded = parse_group(slurp(o.params[0]));
    if (loaded.class2) {
      class2(*loaded.class2);
    } else {
      table(*loaded.table);
    }
  } else {
    throw UsageError("unknown construct kind '" + kind + "'");
  }
  if (o.out.empty()) {
    std::cout << text;
    std::cerr << dump(cert);
  } else {
    write_file(o.out, text);
    std::cout << dump(cert);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// check

struct Outcome {
  Json verdict;
  bool expected = true;
  bool sampled = false;
};

Outcome run_check(const Options& o, const std::string& text) {
  const std::string& c = o.check;
  Outcome out;
  if (c == "psi") {
    const auto s = load_structure(text);
    const auto v = psi_check(s);
    out.verdict = to_json(v);
    if (v.counterexample) {
      const bool ok = counterexample_is_valid(s, *v.counterexample);
      out.verdict["counterexample_valid"] = ok;
      out.expected = ok;
    }
  } else if (c == "sigma") {
    const auto s = load_structure(text);
    const auto v = sigma_check(s, o.k);
    out.verdict = to_json(v);
    out.verdict["k"] = o.k;
    if (v.counterexample) {
      const bool ok = counterexample_is_valid(s, *v.counterexample);
      out.verdict["counterexample_valid"] = ok;
      out.expected = ok;
    }
    if (starts_with_group_header(text)) {
      const Class2Group g = load_class2(text);
      const auto gv = sigma_on_group(g, o.k);
      out.verdict["group_level"] = to_json(gv);
      if (g.is_abelian()) {
        // G/Z is trivial: there is no reduced structure to compare with.
        out.verdict["reduction_agrees"] = nullptr;
      } else {
        const bool agree = gv.holds == sigma_check(reduce_to_bilinear(g), o.k).holds;
        out.verdict["reduction_agrees"] = agree;
        out.expected = out.expected && agree;
      }
    }
  } else if (c == "rho") {
    out.verdict = to_json(rho_check(load_class2(text)));
  } else if (c == "lemma-bil") {
    const auto r = lemma_bil_exhaust(o.p, o.n, o.d, o.budget, o.threads);
    out.verdict = to_json(r);
    out.expected = !r.refutation;
  } else if (c == "counting-bound") {
    const auto b = counting_bound(o.p, o.n, o.d);
    out.verdict = to_json(b);
    out.expected = !(o.d >= 2 && b.packing_possible);
  } else if (c == "density") {
    out.verdict = to_json(sigma_failure_density(load_structure(text), o.k, o.threads));
    out.verdict["k"] = o.k;
  } else if (c == "series") {
    out.verdict = to_json(lower_central_series(parse_group(text).as_table_group()));
  } else if (c == "hall-witt") {
    const auto mode = check_mode(o);
    const auto r = hall_witt_check(parse_group(text).as_table_group(), mode, o.threads);
    out.verdict = to_json(r);
    out.verdict["mode"] = o.mode;
    out.expected = r.holds;
    out.sampled = mode.kind == CheckMode::Kind::kSample;
  } else if (c == "laurent") {
    const auto r = laurent_bound_check(parse_group(text).as_table_group());
    out.verdict = to_json(r);
    out.expected = r.holds;
  } else if (c == "chains") {
    const auto r = sop_chain_direct_power(load_class2(text), o.k);
    out.verdict = to_json(r);
    out.expected = r.valid();
  } else if (c == "maximality") {
    const auto r = finite_stage_maximality(load_class2(text), o.k);
    out.verdict = to_json(r);
    out.expected = r.validated;
  } else if (c == "star") {
    const Class2Group g = load_class2(text);
    if (!o.instances.empty()) {
      Json rows = Json::array();
      for (const auto& inst : parse_instances(slurp(o.instances), g)) {
        const auto v = star_witness(g, inst);
        Json row = to_json(inst);
        row["witness"] = v.witness ? Json(*v.witness) : Json(nullptr);
        row["elements_scanned"] = v.elements_scanned;
        rows.push_back(row);
      }
      out.verdict = {{"instances", rows}};
    } else {
      out.verdict = to_json(star_scan(g, o.max_rank, o.max_instances));
      out.verdict["max_rank"] = o.max_rank;
    }
  } else if (c == "height" || c == "purity") {
    if (o.exponents.empty()) throw UsageError("--exponents is required");
    std::vector<std::size_t> exps;
    for (auto e : parse_list(o.exponents, "--exponents")) exps.push_back(e);
    const AbelianPGroup a(o.p, exps);
    auto element = [&](const std::string& s, const std::string& flag) {
      const auto v = parse_list(s, flag);
      if (!a.contains(v)) throw UsageError(flag + ": element not in the group");
      return v;
    };
    auto height_json = [](std::size_t h) {
      return h == kInfiniteHeight ? Json("infinite") : Json(h);
    };
    if (c == "height") {
      if (o.element.empty()) throw UsageError("--element is required");
      const auto g = element(o.element, "--element");
      out.verdict = {{"element", g}, {"height", height_json(height(a, g))}};
    } else {
      if (o.generators.empty()) throw UsageError("--generators is required");
      std::vector<AbelianPGroup::Element> gens;
      std::stringstream ss(o.generators);
      std::string item;
      while (std::getline(ss, item, ';')) gens.push_back(element(item, "--generators"));
      const AbelianSubgroup b(a, gens);
      Json heights = Json::array();
      for (auto idx : b.elements()) {
        const auto g = a.element_at(idx);
        heights.push_back({{"element", g},
                           {"height_in_subgroup", height_json(height_in(b, g))},
                           {"height_in_group", height_json(height(a, g))}});
      }
      out.verdict = {{"subgroup_order", b.order()},
                     {"pure", is_pure(a, b)},
                     {"heights", heights}};
    }
    out.verdict["p"] = o.p;
    out.verdict["exponents"] = a.exponents();
  } else if (c == "commutator-identities") {
    const auto mode = check_mode(o);
    const auto r = commutator_power_check(load_class2(text), parse_list(o.powers, "--powers"),
                                          mode);
    out.verdict = to_json(r);
    out.verdict["mode"] = o.mode;
    out.expected = r.holds;
    out.sampled = mode.kind == CheckMode::Kind::kSample;
  } else {
    throw UsageError("unknown check '" + c + "'");
  }
  return out;
}

const std::vector<std::string> kCheckNames = {
    "psi",     "sigma",      "rho",  "lemma-bil", "counting-bound",
    "density", "series",     "hall-witt", "laurent", "chains",
    "maximality", "star", "height", "purity", "commutator-identities"};

bool check_needs_input(const std::string& c) {
  return !(c == "lemma-bil" || c == "counting-bound" || c == "height" || c == "purity");
}

int cmd_check(const Options& o, int argc, char** argv) {
  const auto start = std::chrono::steady_clock::now();
  if (std::find(kCheckNames.begin(), kCheckNames.end(), o.check) == kCheckNames.end()) {
    throw UsageError("unknown check '" + o.check + "'");
  }
  std::string text;
  if (check_needs_input(o.check)) text = need_input(o);
  const Outcome out = run_check(o, text);
  Json report = base_report(argc, argv, text.empty() ? "" : fnv1a_hex(text));
  report["check"] = o.check;
  report["seed"] = out.sampled ? Json(o.seed) : Json(nullptr);
  report["verdict"] = out.verdict;
  report["expected"] = out.expected;
  report["exit_code"] = out.expected ? kExitOk : kExitRefuted;
  report[kTimingField] = static_cast<std::int64_t>(elapsed_ms(start));
  emit(o, report);
  return out.expected ? kExitOk : kExitRefuted;
}

// ---------------------------------------------------------------------------
// suite

int cmd_suite(const Options& o, int argc, char** argv) {
  if (!is_known_suite(o.suite)) throw UsageError("unknown suite '" + o.suite + "'");
  const auto start = std::chrono::steady_clock::now();
  const auto results = run_suite(o.suite, {o.threads, o.seed});
  Json report = base_report(argc, argv, "");
  report["suite"] = o.suite;
  report["seed"] = o.seed;
  Json criteria = Json::array();
  std::size_t passed = 0;
  for (const auto& r : results) {
    criteria.push_back(to_json(r));
    passed += r.pass;
    std::fprintf(stderr, "criterion %d  %-40s %s  (%.0f ms)\n", r.id, r.name.c_str(),
                 r.pass ? "PASS" : "FAIL", r.wall_time_ms);
  }
  report["criteria"] = criteria;
  report["summary"] = {{"passed", passed},
                       {"failed", results.size() - passed},
                       {"all_pass", passed == results.size()}};
  report[kTimingField] = static_cast<std::int64_t>(elapsed_ms(start));
  emit(o, report);
  return passed == results.size() ? kExitOk : kExitRefuted;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-stage checks for class-2 p-groups and bilinear structures"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threads", o.threads, "Worker threads (results do not depend on it)")
        ->check(CLI::Range(1u, 256u));
    sub->add_option("--seed", o.seed, "Seed for sampled checks");
    sub->add_option("--out", o.out, "Write the output here instead of stdout");
  };

  auto* construct = app.add_subcommand("construct", "Build a group and print it");
  construct->add_option("kind", o.kind,
                        "extraspecial | heisenberg | central-product | direct-power | ut | "
                        "from-bilinear | load")
      ->required();
  construct->add_option("params", o.params, "Kind-specific parameters");
  add_common(construct);

  auto* check = app.add_subcommand("check", "Run one checker and print a JSON report");
  check->add_option("name", o.check, "Checker name")->required();
  check->add_option("input", o.input, "Structure, group or instance input file");
  add_common(check);
  check->add_option("--budget", o.budget, "Enumeration cap for lemma-bil");
  check->add_option("--k", o.k, "Tuple size, chain length or power");
  check->add_option("--p", o.p, "Prime");
  check->add_option("--n", o.n, "dim V");
  check->add_option("--d", o.d, "dim W");
  check->add_option("--mode", o.mode, "exhaustive | sample");
  check->add_option("--samples", o.samples, "Sample count in sample mode");
  check->add_option("--powers", o.powers, "Comma-separated exponents n for [x,y]^n = [x^n,y]");
  check->add_option("--exponents", o.exponents, "Cyclic factor exponents, e.g. 2,1");
  check->add_option("--element", o.element, "Element coordinates, e.g. 3,0");
  check->add_option("--generators", o.generators, "Subgroup generators, e.g. '3,0;0,1'");
  check->add_option("--max-rank", o.max_rank, "Largest rank of A in the star scan");
  check->add_option("--max-instances", o.max_instances, "Instance budget for the star scan");
  check->add_option("--instances", o.instances, "Instance file for the star check");

  auto* suite = app.add_subcommand("suite", "Run a named bundle of criteria");
  suite->add_option("name", o.suite, "acceptance | quick")->required();
  add_common(suite);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*construct) return cmd_construct(o);
    if (*check) return cmd_check(o, argc, argv);
    return cmd_suite(o, argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionError& e) {
    std::cerr << "dimension: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRefuted;
  }
}
