#include "pwreath/cli.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "pwreath/catalog.hpp"
#include "pwreath/errors.hpp"
#include "pwreath/isoclinism.hpp"
#include "pwreath/stabcoh.hpp"
#include "pwreath/verify.hpp"
#include "pwreath/wreath.hpp"

namespace pwreath {

namespace {

using nlohmann::json;

struct Outcome {
  std::string status = "ok";  // ok | fail | budget
  json payload = json::object();
  json reason;
};

struct Options {
  std::uint64_t seed = 1;
  std::size_t cap = kDefaultOrderCap;
  bool timing = false;

  std::string group, element, first, second, witness_path, format = "json", suite;
  std::uint64_t budget = kDefaultSearchBudget;
  std::size_t witness_cap = 256;
  bool certificate = false, check = false, no_filter = false, hall = false, maximal = false;
  unsigned p = 0, n = 0, max_degree = 0;
  int degree = -1;
  std::uint64_t gl_n = 0, gl_q = 0, gl_p = 0;
};

constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

std::string power_string(unsigned p, std::size_t e) {
  return std::to_string(p) + "^" + std::to_string(e);
}

json subgroup_members(const FiniteGroup& g, const Subgroup& s) {
  json out = json::array();
  for (auto m : s.members()) {
    if (g.has_labels()) {
      out.push_back(g.label(m));
    } else {
      out.push_back(m);
    }
  }
  return out;
}

Outcome cmd_centralizer(const Options& o, json& config) {
  config = {{"group", o.group}, {"element", o.element}, {"certificate", o.certificate},
            {"check", o.check}, {"witness_cap", o.witness_cap}, {"budget", o.budget}};
  const auto ws = parse_wreath_name(o.group);
  if (!ws) throw InvalidInput("centralizer needs a group of the form wreath:p=P,n=N");
  if (ws->n < 2) throw InvalidInput("centralizer classification needs n >= 2");
  const WreathTower t(ws->p, ws->n, kUnbounded);
  const WreathElement x = t.parse(ws->n, o.element);
  const CentralizerReport r = classify_centralizer(t, x);

  Outcome out;
  out.payload["element"] = t.format(x);
  out.payload["report"] = to_json(t, r);
  out.payload["centralizer_order"] = power_string(ws->p, r.core.exponent);
  if (o.certificate) {
    CertificateOptions co;
    co.witness_order_cap = o.witness_cap;
    co.budget = o.budget;
    out.payload["certificate"] = to_json(cp_certificate(t, x, co));
  }
  if (o.check) {
    if (t.order(ws->n) > o.cap) throw OrderOverflow("group above the order cap for --check");
    const FiniteGroup g = t.materialize(ws->n);
    std::vector<Element> gens;
    for (const auto& y : r.generators) gens.push_back(static_cast<Element>(t.encode(y)));
    const Subgroup brute = centralizer_bruteforce(g, static_cast<Element>(t.encode(x)));
    const bool agrees = generate(g, gens) == brute;
    out.payload["check"] = {{"bruteforce_order", brute.order()}, {"agrees", agrees}};
    if (!agrees) {
      out.status = "fail";
      out.reason = {{"error", "Mismatch"}, {"message", "generators disagree with brute force"}};
    }
  }
  return out;
}

Outcome cmd_isoclinic(const Options& o, json& config) {
  config = {{"first", o.first}, {"second", o.second}, {"budget", o.budget},
            {"filter", !o.no_filter}, {"hall", o.hall}};
  if (!o.witness_path.empty()) config["witness"] = o.witness_path;
  const FiniteGroup a = resolve_group(o.first, o.cap);
  const FiniteGroup b = resolve_group(o.second, o.cap);
  IsoclinismOptions io;
  io.budget = o.budget;
  io.use_invariant_filter = !o.no_filter;
  const IsoclinismResult r = is_isoclinic(a, b, io);

  Outcome out;
  out.payload["search_status"] = to_string(r.status);
  out.payload["nodes"] = r.nodes;
  if (r.status == SearchStatus::BudgetExhausted) {
    out.status = "budget";
    out.reason = {{"error", "BudgetExhausted"}, {"message", r.reason}};
    return out;
  }
  out.payload["verdict"] = r.isoclinic();
  if (!r.isoclinic()) {
    out.payload["reason"] = r.reason;
    return out;
  }
  const json w = witness_to_json(*r.witness);
  out.payload["witness"] = w;
  if (!o.witness_path.empty()) {
    std::ofstream f(o.witness_path);
    if (!f) throw InvalidInput("cannot write " + o.witness_path);
    f << w.dump(2) << "\n";
  }
  if (!r.witness->square_verified) {
    out.status = "fail";
    out.reason = {{"error", "WitnessUnverified"}, {"message", "commuting square failed"}};
  }
  if (o.hall) {
    const HallReport hall = hall_correspondence_spotcheck(*r.witness, io);
    json pairs = json::array();
    for (const auto& pr : hall.pairs) {
      pairs.push_back({{"first", subgroup_members(a, pr.first)},
                       {"second", subgroup_members(b, pr.second)},
                       {"centralizer", pr.from_centralizer},
                       {"verdict", to_string(pr.verdict)}});
    }
    out.payload["hall"] = {{"pairs", pairs}, {"all_pass", hall.all_pass()}};
    if (!hall.all_pass()) {
      out.status = "fail";
      out.reason = {{"error", "HallMismatch"}, {"message", "a corresponding pair is not isoclinic"}};
    }
  }
  return out;
}

json bruteforce_classes(const FiniteGroup& g, bool maximal_only) {
  const ElabEnumeration en = elem_abelians_bruteforce(g);
  std::map<std::size_t, json> classes;
  for (std::size_t i = 0; i < en.subgroups.size(); ++i) {
    if (maximal_only && !en.maximal[i]) continue;
    auto [it, inserted] = classes.emplace(en.class_id[i], json::object());
    if (inserted) {
      it->second = {{"rank", en.rank[i]},
                    {"maximal", static_cast<bool>(en.maximal[i])},
                    {"representative", subgroup_members(g, en.subgroups[i])},
                    {"class_size", 0}};
    }
    it->second["class_size"] = it->second["class_size"].get<std::size_t>() + 1;
  }
  json out = json::array();
  for (auto& [id, c] : classes) out.push_back(std::move(c));
  return out;
}

Outcome cmd_elab(const Options& o, json& config) {
  config = {{"group", o.group}, {"maximal", o.maximal}};
  Outcome out;
  if (const auto ws = parse_wreath_name(o.group)) {
    const WreathTower t(ws->p, ws->n, kUnbounded);
    json descs = json::array();
    unsigned max_rank = 0;
    for (const auto& d : maximal_elem_abelians(t, ws->n)) {
      json j = to_json(d);
      json gens = json::array();
      for (const auto& g : elab_generators(t, d)) gens.push_back(t.format(g));
      j["generators"] = gens;
      descs.push_back(j);
      max_rank = std::max(max_rank, d.rank);
    }
    out.payload["descriptors"] = descs;
    out.payload["max_rank"] = max_rank;
    if (t.order(ws->n) <= kElabBruteCap) {
      const ElabAgreement agree = compare_elab_descriptors(t, ws->n);
      out.payload["bruteforce"] = {{"agrees", agree.agrees},
                                   {"maximal_classes", agree.bruteforce_classes},
                                   {"detail", agree.detail}};
      if (!o.maximal) out.payload["bruteforce"]["classes"] = bruteforce_classes(t.materialize(ws->n), false);
      if (!agree.agrees) {
        out.status = "fail";
        out.reason = {{"error", "Mismatch"}, {"message", agree.detail}};
      }
    }
    return out;
  }
  const FiniteGroup g = resolve_group(o.group, o.cap);
  out.payload["classes"] = bruteforce_classes(g, o.maximal);
  return out;
}

Outcome cmd_hilbert(const Options& o, json& config) {
  config = {{"p", o.p}, {"n", o.n}, {"max_degree", o.max_degree}, {"format", o.format}};
  Outcome out;
  out.payload["coefficients"] = hilbert_series(o.p, o.n, o.max_degree);
  return out;
}

Outcome cmd_detect(const Options& o, json& config) {
  config = {{"p", o.p}, {"n", o.n}};
  if (o.degree >= 0) config["degree"] = o.degree;
  const StableModel model(o.p, o.n);
  Outcome out;
  json descs = json::array();
  for (const auto& d : model.descriptors(o.n)) descs.push_back(to_json(d));
  out.payload["descriptors"] = descs;
  json degrees = json::array();
  bool all_full = true;
  const unsigned lo = o.degree >= 0 ? static_cast<unsigned>(o.degree) : 0;
  const unsigned hi = o.degree >= 0 ? static_cast<unsigned>(o.degree) : model.top_degree(o.n);
  for (unsigned k = lo; k <= hi; ++k) {
    const DetectionMatrix m = model.detection_matrix(o.n, k);
    json rows = json::array();
    for (auto id : m.rows) rows.push_back(model.format(o.n, id));
    json cols = json::array();
    for (const auto& [d, mask] : m.columns) {
      ExteriorElement mono(o.p, model.descriptors(o.n)[d].rank);
      mono.add_term(mask, 1);
      cols.push_back(std::to_string(d) + ":" + mono.to_string());
    }
    degrees.push_back({{"degree", k},
                       {"rows", rows},
                       {"columns", cols},
                       {"matrix", m.entries},
                       {"rank", m.rank},
                       {"full_rank", m.full_rank()}});
    all_full = all_full && m.full_rank();
  }
  out.payload["degrees"] = degrees;
  out.payload["full_rank"] = all_full;
  if (!all_full) {
    out.status = "fail";
    out.reason = {{"error", "RankDeficient"}, {"message", "some degree is not detected"}};
  }
  return out;
}

Outcome cmd_stable_basis(const Options& o, json& config) {
  config = {{"p", o.p}, {"n", o.n}, {"degree", o.degree}};
  if (o.degree < 0) throw InvalidInput("degree must be non-negative");
  const StableModel model(o.p, o.n);
  Outcome out;
  json basis = json::array();
  for (auto id : model.basis_in_degree(o.n, static_cast<unsigned>(o.degree)))
    basis.push_back(model.format(o.n, id));
  out.payload["dimension"] = basis.size();
  out.payload["basis"] = basis;
  return out;
}

Outcome cmd_sylow(const Options& o, json& config) {
  config = {{"n", o.gl_n}, {"q", o.gl_q}, {"p", o.gl_p}};
  const SylowGLParams s = sylow_gl_parameters(o.gl_n, o.gl_q, o.gl_p);
  Outcome out;
  out.payload = to_json(s);
  const std::uint64_t v = gl_order_valuation(o.gl_n, o.gl_q, o.gl_p);
  out.payload["valuation"] = v;
  out.payload["identity_holds"] = v == s.exponent();
  if (v != s.exponent()) {
    out.status = "fail";
    out.reason = {{"error", "Mismatch"}, {"message", "exponent sum differs from valuation"}};
  }
  return out;
}

Outcome cmd_verify(const Options& o, json& config, std::ostream& err) {
  config = {{"suite", o.suite}};
  const SuiteResult r = run_suite(o.suite, o.seed);
  Outcome out;
  json checks = json::array();
  std::size_t passed = 0;
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    passed += c.pass;
    err << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.detail.empty()) err << ": " << c.detail;
    err << "\n";
  }
  out.payload = {{"suite", r.suite}, {"checks", checks}, {"passed", passed},
                 {"total", r.checks.size()}};
  if (!r.all_pass()) {
    out.status = "fail";
    out.reason = {{"error", "CheckFailed"},
                  {"message", std::to_string(r.checks.size() - passed) + " checks failed"}};
  }
  return out;
}

const char* error_name(const std::exception& e) {
  if (dynamic_cast<const InvalidInput*>(&e)) return "InvalidInput";
  if (dynamic_cast<const NotNormal*>(&e)) return "NotNormal";
  if (dynamic_cast<const OrderOverflow*>(&e)) return "OrderOverflow";
  if (dynamic_cast<const CapExceeded*>(&e)) return "CapExceeded";
  if (dynamic_cast<const LevelMismatch*>(&e)) return "LevelMismatch";
  if (dynamic_cast<const NotCaseB*>(&e)) return "NotCaseB";
  if (dynamic_cast<const UnsupportedParameters*>(&e)) return "UnsupportedParameters";
  if (dynamic_cast<const WitnessBudgetExhausted*>(&e)) return "WitnessBudgetExhausted";
  if (dynamic_cast<const RankDeficient*>(&e)) return "RankDeficient";
  return "Error";
}

bool is_budget_error(const std::exception& e) {
  return dynamic_cast<const OrderOverflow*>(&e) || dynamic_cast<const CapExceeded*>(&e) ||
         dynamic_cast<const WitnessBudgetExhausted*>(&e);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Finite p-group computations: isoclinism, iterated wreath products of Z/p, "
               "their maximal elementary abelian subgroups and stable mod-p cohomology.",
               "pwreath"};
  app.require_subcommand(1);
  app.add_option("--seed", o.seed, "Seed for randomized checks")->capture_default_str();
  app.add_option("--cap", o.cap, "Order cap for materialized groups")->capture_default_str();
  app.add_flag("--timing", o.timing, "Add wall-clock milliseconds to the report");
  app.footer("Groups: cyclic:m, dihedral:2m, quaternion8, elab:p^r, wreath:p=P,n=N, a JSON "
             "file, or factors joined by '*'.\nThreads: PWREATH_THREADS (default: all cores).\n"
             "Exit codes: 0 ok, 1 fail, 2 budget or cap exceeded, 64 usage.");

  auto* centralizer = app.add_subcommand("centralizer", "Classify the centralizer of a wreath element");
  centralizer->add_option("--group", o.group, "wreath:p=P,n=N")->required();
  centralizer->add_option("--element", o.element, "Element, e.g. [[1,0];1]")->required();
  centralizer->add_flag("--certificate", o.certificate, "Attach the construction certificate");
  centralizer->add_flag("--check", o.check, "Compare with a brute-force centralizer");
  centralizer->add_option("--witness-cap", o.witness_cap,
                          "Largest centralizer order given an isoclinism witness")
      ->capture_default_str();
  centralizer->add_option("--budget", o.budget, "Isoclinism search budget (nodes)")
      ->capture_default_str();

  auto* isoclinic = app.add_subcommand("isoclinic", "Decide isoclinism of two groups");
  isoclinic->add_option("A", o.first, "First group")->required();
  isoclinic->add_option("B", o.second, "Second group")->required();
  isoclinic->add_option("--budget", o.budget, "Search budget (nodes)")->capture_default_str();
  isoclinic->add_option("--witness", o.witness_path, "Write the witness JSON to this file");
  isoclinic->add_flag("--no-filter", o.no_filter, "Skip the invariant filter and fingerprints");
  isoclinic->add_flag("--hall", o.hall, "Spot-check the subgroup correspondence (order <= 64)");

  auto* elab = app.add_subcommand("elab", "Elementary abelian subgroups");
  elab->add_option("--group", o.group, "Group name or file")->required();
  elab->add_flag("--maximal", o.maximal, "Only maximal ones");

  auto* hilbert = app.add_subcommand("hilbert", "Hilbert series of the stable cohomology of G_n");
  hilbert->add_option("--p", o.p, "Prime")->required();
  hilbert->add_option("--n", o.n, "Number of wreath factors")->required();
  hilbert->add_option("--max-degree", o.max_degree, "Largest degree")->required();
  hilbert->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();

  auto* detect = app.add_subcommand("detect", "Detection matrices and their ranks");
  detect->add_option("--p", o.p, "Prime")->required();
  detect->add_option("--n", o.n, "Number of wreath factors")->required();
  detect->add_option("--degree", o.degree, "Only this degree")->check(CLI::NonNegativeNumber);

  auto* basis = app.add_subcommand("stable-basis", "Canonical basis in one degree");
  basis->add_option("--p", o.p, "Prime")->required();
  basis->add_option("--n", o.n, "Number of wreath factors")->required();
  basis->add_option("--degree", o.degree, "Degree")->required()->check(CLI::NonNegativeNumber);

  auto* sylow = app.add_subcommand("sylow-gl", "Sylow p-subgroup shape of GL_n(F_q)");
  sylow->add_option("--n", o.gl_n, "Matrix size")->required();
  sylow->add_option("--q", o.gl_q, "Field size (odd prime)")->required();
  sylow->add_option("--p", o.gl_p, "Odd prime different from q")->required();

  auto* verify = app.add_subcommand("verify", "Run an acceptance battery");
  verify->add_option("suite", o.suite, "Suite name")->required()->check(CLI::IsMember(verify_suites()));

  std::vector<std::string> storage{"pwreath"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    const CLI::App* target = &app;
    for (const auto* sc : app.get_subcommands()) target = sc;
    err << "error: " << e.what() << "\n\n" << target->help();
    return kExitUsage;
  }

  const std::string verb = app.get_subcommands().front()->get_name();
  const auto start = std::chrono::steady_clock::now();
  json config;
  Outcome outcome;
  try {
    if (verb == "centralizer") outcome = cmd_centralizer(o, config);
    else if (verb == "isoclinic") outcome = cmd_isoclinic(o, config);
    else if (verb == "elab") outcome = cmd_elab(o, config);
    else if (verb == "hilbert") outcome = cmd_hilbert(o, config);
    else if (verb == "detect") outcome = cmd_detect(o, config);
    else if (verb == "stable-basis") outcome = cmd_stable_basis(o, config);
    else if (verb == "sylow-gl") outcome = cmd_sylow(o, config);
    else outcome = cmd_verify(o, config, err);
  } catch (const std::exception& e) {
    outcome = Outcome{};
    outcome.status = is_budget_error(e) ? "budget" : "fail";
    outcome.payload = nullptr;
    outcome.reason = {{"error", error_name(e)}, {"message", e.what()}};
    err << "error: " << e.what() << "\n";
  }

  if (verb == "hilbert" && o.format == "csv" && outcome.status == "ok") {
    out << "degree,dimension\n";
    const auto& c = outcome.payload["coefficients"];
    for (std::size_t k = 0; k < c.size(); ++k) out << k << "," << c[k].get<std::uint64_t>() << "\n";
    return kExitOk;
  }

  config["seed"] = o.seed;
  config["cap"] = o.cap;
  json report = {{"command", verb}, {"status", outcome.status}, {"config", config},
                 {"payload", outcome.payload}};
  if (!outcome.reason.is_null()) report["reason"] = outcome.reason;
  if (o.timing) {
    report["timing_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count();
  }
  out << report.dump(2) << "\n";
  if (outcome.status == "ok") return kExitOk;
  return outcome.status == "budget" ? kExitBudget : kExitFail;
}

}  // namespace pwreath
