#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

namespace cfrac::cli {

namespace {

constexpr double kCompatibilityTol = 1e-9;
constexpr double kMonotonicityTol = 1e-7;

/// Exit code 1: the inputs are well formed but the model fails the request.
class DomainFailure : public Error {
 public:
  using Error::Error;
};

/// Exit code 2 for arguments that parse but make no sense together.
class UsageError : public Error {
 public:
  using Error::Error;
};

enum class LogLevel { Quiet, Info, Debug };

LogLevel log_level() {
  const char* v = std::getenv("CFRAC_LOG");
  if (!v) return LogLevel::Quiet;
  const std::string s = v;
  if (s == "debug") return LogLevel::Debug;
  if (s == "info") return LogLevel::Info;
  return LogLevel::Quiet;
}

struct Globals {
  std::optional<double> tol;
  std::optional<unsigned long long> seed;
  std::string json_path;
  std::string csv_path;
};

struct Session {
  Globals globals;
  RunReport report;
  std::ostream& err;
  LogLevel log = log_level();

  void info(const std::string& msg) const {
    if (log != LogLevel::Quiet) err << msg << "\n";
  }
};

Json compatibility_json(const CompatibilityReport& r, const MeasurementScenario& s) {
  Json j = Json{{"compatible", r.compatible}, {"max_discrepancy", r.max_discrepancy}};
  if (r.worst_pair) {
    j["worst_pair"] = {s.describe(s.context(r.worst_pair->first)), s.describe(s.context(r.worst_pair->second))};
    j["overlap"] = s.describe(r.overlap);
  }
  if (!r.detail.empty()) j["detail"] = r.detail;
  return j;
}

void require_compatible(const EmpiricalModel& e, Session& ctx) {
  const auto r = check_compatibility(e, kCompatibilityTol);
  ctx.report.results["compatibility"] = compatibility_json(r, e.scenario());
  if (!r.compatible) throw DomainFailure("model is not compatible: " + r.detail);
}

EmpiricalModel load_model(const std::string& path, Session& ctx) {
  ctx.report.add_input(path);
  return read_model_file(path);
}

std::optional<NCFResult> exact_ncf(const EmpiricalModel& e, double tol) {
  if (e.is_discrete()) return ncf(e, tol);
  if (auto a = atomic_model(e)) return ncf(*a, tol);
  return std::nullopt;
}

double model_distance(const EmpiricalModel& a, const EmpiricalModel& b) {
  double d = 0.0;
  for (std::size_t c = 0; c < a.data().size(); ++c) {
    const auto& ta = a.table(c);
    const auto& tb = b.table(c);
    for (std::size_t i = 0; i < ta.support.size(); ++i) d = std::max(d, std::abs(ta.probs[i] - tb.prob(ta.support[i])));
    for (std::size_t i = 0; i < tb.support.size(); ++i) d = std::max(d, std::abs(tb.probs[i] - ta.prob(tb.support[i])));
  }
  return d;
}

std::pair<int, int> parse_k_range(const std::string& text) {
  auto to_int = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      throw UsageError("bad --k value '" + text + "' (expected k or k1..k2)");
    }
    if (used != s.size()) throw UsageError("bad --k value '" + text + "' (expected k or k1..k2)");
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const int k = to_int(text);
    return {k, k};
  }
  return {to_int(text.substr(0, dots)), to_int(text.substr(dots + 2))};
}

// ---------------------------------------------------------------------------
// Commands

void cmd_validate(const std::string& scenario_file, const std::string& model_file, Session& ctx) {
  ctx.report.add_input(scenario_file);
  const ScenarioSpec spec = scenario_spec_from_json(read_json_file(scenario_file), scenario_file);
  const ValidationReport vr = validate_scenario(spec);
  Json issues = Json::array();
  for (const auto& i : vr.issues) issues.push_back(i.message);
  ctx.report.results["scenario"] = Json{{"valid", vr.ok()}, {"issues", issues}};
  if (!vr.ok()) throw DomainFailure("invalid scenario: " + vr.summary());
  if (model_file.empty()) return;

  const MeasurementScenario s = MeasurementScenario::build(spec);
  ctx.report.add_input(model_file);
  std::optional<EmpiricalModel> e;
  try {
    e = read_model_file(model_file, s);
  } catch (const InvalidArgument& err) {
    ctx.report.results["model"] = Json{{"valid", false}, {"issues", Json::array({err.what()})}};
    throw DomainFailure(err.what());
  }
  const auto r = check_compatibility(*e, ctx.globals.tol.value_or(kCompatibilityTol));
  Json m = compatibility_json(r, s);
  m["valid"] = true;
  m["discrete"] = e->is_discrete();
  ctx.report.results["model"] = m;
  if (!r.compatible) throw DomainFailure("model is not compatible: " + r.detail);
}

void cmd_ncf_lp(const std::string& model_file, const std::string& bell_file, bool witness, Session& ctx) {
  const double tol = ctx.globals.tol.value_or(kDefaultLpTol);
  ctx.report.config["tol"] = tol;
  const EmpiricalModel e = load_model(model_file, ctx);
  if (!e.is_discrete()) {
    throw UsageError("ncf-lp needs finite outcome spaces in every context; use ncf-sdp for continuous models");
  }
  require_compatible(e, ctx);
  const NCFResult r = ncf(e, tol);
  const Json rj = to_json(r, e.scenario(), witness);
  for (const auto& [k, v] : rj.items()) ctx.report.results[k] = v;
  if (!bell_file.empty()) {
    const BellInequality b = bell_from_dual(e.scenario(), r.dual_witness);
    write_json_file(bell_file, to_json(b, e.scenario()));
    Json bj = Json{{"file", bell_file}, {"pairing", pairing(b, e)}, {"norm", b.norm()},
                   {"max_global_excess", max_global_excess(b, e.scenario())}};
    try {
      bj["normalized_violation"] = normalized_violation(b, e);
    } catch (const InvalidArgument&) {
      bj["normalized_violation"] = nullptr;
    }
    ctx.report.results["bell"] = bj;
  }
}

void cmd_ncf_sdp(const std::string& model_file, const std::string& k_range, bool dual, bool parallel, Session& ctx) {
  HierarchyConfig cfg;
  std::tie(cfg.k_min, cfg.k_max) = parse_k_range(k_range);
  if (ctx.globals.tol) cfg.solver.tol = *ctx.globals.tol;
  cfg.solve_dual = dual;
  cfg.parallel = parallel;
  cfg.solver.verbose = ctx.log == LogLevel::Debug;
  try {
    cfg.validate();
  } catch (const InvalidArgument& err) {
    throw UsageError(err.what());
  }
  ctx.report.config["k_min"] = cfg.k_min;
  ctx.report.config["k_max"] = cfg.k_max;
  ctx.report.config["tol"] = cfg.solver.tol;
  ctx.report.config["max_iterations"] = cfg.solver.max_iterations;
  ctx.report.config["dual"] = dual;
  ctx.report.config["compatibility_degree"] = cfg.compatibility_degree;

  const EmpiricalModel e = load_model(model_file, ctx);
  const auto cr = check_compatibility(e, cfg.compatibility_tol, cfg.compatibility_degree);
  ctx.report.results["compatibility"] = compatibility_json(cr, e.scenario());
  if (!cr.compatible) throw DomainFailure("model is not compatible: " + cr.detail);
  if (static_cast<int>(e.scenario().size()) > kMaxHierarchyDim) {
    throw UsageError("the hierarchy supports at most " + std::to_string(kMaxHierarchyDim) + " measurements");
  }

  ctx.info("solving levels " + std::to_string(cfg.k_min) + ".." + std::to_string(cfg.k_max));
  const HierarchyResult r = run_hierarchy(e, cfg);
  const Json rj = to_json(r);
  for (const auto& [k, v] : rj.items()) ctx.report.results[k] = v;
  if (!ctx.globals.csv_path.empty()) {
    if (ctx.globals.csv_path == "-") {
      write_bounds_csv(ctx.err, r);
    } else {
      std::ofstream out(ctx.globals.csv_path);
      if (!out) throw UsageError("cannot write " + ctx.globals.csv_path);
      write_bounds_csv(out, r);
    }
  }
  for (const auto& b : r.bounds) {
    if (b.status != SolveStatus::Optimal || (b.dual_status && *b.dual_status != SolveStatus::Optimal)) {
      ctx.report.exit_code = kSolverFailure;
      ctx.report.results["error"] = "level " + std::to_string(b.k) + " did not reach optimality";
      break;
    }
  }
}

void cmd_bell(const std::string& bell_file, const std::string& model_file, Session& ctx) {
  ctx.report.add_input(bell_file);
  const Json bj = read_json_file(bell_file);
  const std::filesystem::path base = std::filesystem::path(bell_file).parent_path();
  const BellInequality b = bell_from_json(bj, base);
  const MeasurementScenario s = bell_scenario_from_json(bj, base);
  ctx.report.add_input(model_file);
  const EmpiricalModel e = read_model_file(model_file, s);
  if (!e.is_discrete()) throw UsageError("bell needs a model with finite outcome spaces");
  require_compatible(e, ctx);
  const double excess = max_global_excess(b, s);
  const double tol = ctx.globals.tol.value_or(kCompatibilityTol);
  auto& r = ctx.report.results;
  r["pairing"] = pairing(b, e);
  r["bound"] = b.bound;
  r["norm"] = b.norm();
  r["max_global_excess"] = excess;
  r["valid"] = excess <= tol;
  if (excess > tol) throw DomainFailure("not a Bell inequality: some global assignment exceeds the bound");
  r["normalized_violation"] = normalized_violation(b, e);
}

void compare_cf(const std::string& op, const std::vector<EmpiricalModel>& inputs, const EmpiricalModel& out,
                double lambda, Session& ctx) {
  const double tol = ctx.globals.tol.value_or(kDefaultLpTol);
  auto out_ncf = exact_ncf(out, tol);
  if (!out_ncf) {
    ctx.report.results["compare_cf"] = Json{{"available", false}, {"reason", "result has no finite or atomic data"}};
    return;
  }
  std::vector<std::optional<NCFResult>> in;
  for (const auto& e : inputs) in.push_back(exact_ncf(e, tol));
  for (const auto& r : in) {
    if (!r) {
      ctx.report.results["compare_cf"] = Json{{"available", false}, {"reason", "an input has no finite or atomic data"},
                                               {"cf_out", out_ncf->cf}};
      return;
    }
  }
  Json j = Json{{"available", true}};
  if (op == "mix") {
    const double bound = lambda * in[0]->cf + (1.0 - lambda) * in[1]->cf;
    j["cf_1"] = in[0]->cf;
    j["cf_2"] = in[1]->cf;
    j["lambda"] = lambda;
    j["cf_out"] = out_ncf->cf;
    j["bound"] = bound;
    j["holds"] = out_ncf->cf <= bound + kMonotonicityTol;
  } else if (op == "product") {
    const double bound = in[0]->ncf * in[1]->ncf;
    j["ncf_1"] = in[0]->ncf;
    j["ncf_2"] = in[1]->ncf;
    j["ncf_out"] = out_ncf->ncf;
    j["bound"] = bound;
    j["holds"] = out_ncf->ncf >= bound - kMonotonicityTol;
  } else {
    j["cf_in"] = in[0]->cf;
    j["cf_out"] = out_ncf->cf;
    j["holds"] = out_ncf->cf <= in[0]->cf + kMonotonicityTol;
  }
  ctx.report.results["compare_cf"] = j;
}

struct TransformArgs {
  std::string model;
  std::string output;
  std::string spec;
  std::string other;
  double lambda = 0.5;
  std::string prefix1;
  std::string prefix2;
  bool compare = false;
};

void cmd_transform(const std::string& op, const TransformArgs& a, Session& ctx) {
  ctx.report.config["op"] = op;
  std::vector<EmpiricalModel> inputs{load_model(a.model, ctx)};
  const EmpiricalModel& e = inputs.front();
  std::optional<EmpiricalModel> out;
  if (op == "bin" || op == "translate") {
    ctx.report.add_input(a.spec);
    const Json sj = read_json_file(a.spec);
    if (op == "bin" && sj.contains("maps")) throw UsageError("bin takes only \"bins\"; use translate for value maps");
    out = translate_outcomes(e, translations_from_json(sj, e.scenario(), a.spec));
  } else if (op == "mix") {
    if (!(a.lambda >= 0.0 && a.lambda <= 1.0)) throw UsageError("--lambda must lie in [0, 1]");
    ctx.report.config["lambda"] = a.lambda;
    inputs.push_back(load_model(a.other, ctx));
    out = mix(inputs[0], inputs[1], a.lambda);
  } else {
    ctx.report.config["prefix1"] = a.prefix1;
    ctx.report.config["prefix2"] = a.prefix2;
    inputs.push_back(load_model(a.other, ctx));
    out = product(inputs[0], inputs[1], a.prefix1, a.prefix2);
  }

  write_json_file(a.output, to_json(*out));
  const auto cr = check_compatibility(*out, kCompatibilityTol);
  auto& r = ctx.report.results;
  r["output"] = a.output;
  r["output_hash"] = file_hash(a.output);
  r["measurements"] = out->scenario().size();
  r["contexts"] = out->scenario().contexts().size();
  r["discrete"] = out->is_discrete();
  r["compatibility"] = compatibility_json(cr, out->scenario());
  if (a.compare) compare_cf(op, inputs, *out, a.lambda, ctx);
}

void fab_from_hv(const HiddenVariableModel& h, Session& ctx) {
  auto& r = ctx.report.results;
  const HvClass cls = classify_hv(h);
  const EmpiricalModel e = hv_to_empirical(h);
  r["source"] = "hidden_variable_model";
  r["deterministic"] = cls.deterministic;
  r["factorisable"] = cls.factorisable;
  if (!cls.factorisable) throw DomainFailure("hidden-variable model is not factorisable");

  const DiscreteTable mu = factorisable_hv_to_global(h);
  const double rect = model_distance(marginal_model(mu, h.scenario), e);
  const HiddenVariableModel det = global_to_deterministic_hv(mu, h.scenario);
  const HvClass det_cls = classify_hv(det);
  const double back = model_distance(hv_to_empirical(det), e);
  r["global_support"] = mu.support.size();
  r["rectangle_deviation"] = rect;
  r["deterministic_deviation"] = back;
  r["deterministic_model_factorisable"] = det_cls.factorisable;
  r["max_deviation"] = std::max(rect, back);
}

void fab_from_model(const EmpiricalModel& e, Session& ctx) {
  auto& r = ctx.report.results;
  r["source"] = "empirical_model";
  if (!e.is_discrete()) throw UsageError("fab-roundtrip needs finite outcome spaces");
  require_compatible(e, ctx);
  const NCFResult n = ncf(e, ctx.globals.tol.value_or(kDefaultLpTol));
  r["ncf"] = n.ncf;
  if (n.ncf < 1.0 - kMonotonicityTol) throw DomainFailure("model is contextual (NCF < 1); no global measure exists");

  DiscreteTable mu = n.witness;
  const double mass = mu.total();
  for (auto& p : mu.probs) p /= mass;
  const HiddenVariableModel det = global_to_deterministic_hv(mu, e.scenario());
  const HvClass cls = classify_hv(det);
  const double back = model_distance(hv_to_empirical(det), e);
  const DiscreteTable mu2 = factorisable_hv_to_global(det);
  const double rect = model_distance(marginal_model(mu2, e.scenario()), e);
  r["global_support"] = mu.support.size();
  r["deterministic"] = cls.deterministic;
  r["factorisable"] = cls.factorisable;
  r["deterministic_deviation"] = back;
  r["rectangle_deviation"] = rect;
  r["max_deviation"] = std::max(rect, back);
}

void cmd_fab(const std::string& file, Session& ctx) {
  ctx.report.add_input(file);
  const Json j = read_json_file(file);
  const std::filesystem::path base = std::filesystem::path(file).parent_path();
  if (j.is_object() && j.contains("lambdas")) {
    fab_from_hv(hv_from_json(j, base), ctx);
  } else {
    fab_from_model(model_from_json(j, base), ctx);
  }
}

}  // namespace

void RunReport::add_input(const std::string& path) {
  Json entry = Json{{"path", path}};
  try {
    entry["fnv1a64"] = file_hash(path);
  } catch (const ParseError&) {
    entry["fnv1a64"] = nullptr;
  }
  inputs.push_back(entry);
}

Json RunReport::to_json() const {
  return Json{{"command", command}, {"inputs", inputs},         {"config", config},
              {"results", results}, {"exit_code", exit_code},   {"wall_seconds", wall_seconds}};
}

std::string file_hash(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char ch = 0;
  while (in.get(ch)) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  CLI::App app{"Contextual fraction of empirical models", "cfrac"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--tol", g.tol, "Solver tolerance (LP default 1e-9, SDP default 1e-7)")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Recorded in the report; commands are deterministic");
  app.add_option("--json", g.json_path, "Also write the report to this file");
  app.add_option("--csv", g.csv_path, "ncf-sdp: write the bound sequence as CSV (\"-\" for stderr)");

  std::string scenario_file, model_file, bell_file, emit_bell, k_range = "1..3", hv_file;
  bool witness = false, dual = false, parallel = false;

  auto* validate = app.add_subcommand("validate", "Check a scenario and optionally a model on it");
  validate->add_option("scenario", scenario_file, "Scenario JSON")->required();
  validate->add_option("model", model_file, "Model JSON");

  auto* lp = app.add_subcommand("ncf-lp", "Exact noncontextual fraction of a discrete model");
  lp->add_option("model", model_file, "Model JSON")->required();
  lp->add_option("--emit-bell", emit_bell, "Write the Bell inequality read off the dual");
  lp->add_flag("--witness", witness, "Include the global witness table");

  auto* sdp = app.add_subcommand("ncf-sdp", "Moment-hierarchy upper bounds on NCF");
  sdp->add_option("model", model_file, "Model JSON")->required();
  sdp->add_option("--k", k_range, "Level or range k1..k2")->capture_default_str();
  sdp->add_flag("--dual", dual, "Also solve the sum-of-squares duals");
  sdp->add_flag("--parallel", parallel, "Solve levels concurrently");

  auto* bell = app.add_subcommand("bell", "Evaluate a Bell inequality on a model");
  bell->add_option("inequality", bell_file, "Bell inequality JSON")->required();
  bell->add_option("model", model_file, "Model JSON")->required();

  TransformArgs ta;
  auto* transform = app.add_subcommand("transform", "Apply a free operation and write the new model");
  transform->require_subcommand(1);
  transform->add_option("-o,--output", ta.output, "Output model file")->required();
  transform->add_flag("--compare-cf", ta.compare, "Compare contextual fractions before and after");
  auto* t_bin = transform->add_subcommand("bin", "Bin outcomes");
  auto* t_translate = transform->add_subcommand("translate", "Bin or relabel outcomes");
  auto* t_mix = transform->add_subcommand("mix", "Convex mixture of two models");
  auto* t_product = transform->add_subcommand("product", "Product of two models");
  for (auto* sub : {t_bin, t_translate, t_mix, t_product}) sub->add_option("model", ta.model, "Model JSON")->required();
  for (auto* sub : {t_bin, t_translate}) sub->add_option("--spec", ta.spec, "Bins / maps JSON")->required();
  for (auto* sub : {t_mix, t_product}) sub->add_option("--with", ta.other, "Second model JSON")->required();
  t_mix->add_option("--lambda", ta.lambda, "Weight of the first model")->required();
  t_product->add_option("--prefix1", ta.prefix1, "Label prefix for the first model");
  t_product->add_option("--prefix2", ta.prefix2, "Label prefix for the second model");

  auto* fab = app.add_subcommand("fab-roundtrip", "Run the hidden-variable constructions and report deviations");
  fab->add_option("file", hv_file, "Hidden-variable model or empirical model JSON")->required();

  std::vector<std::string> argv_store{"cfrac"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  Session ctx{g, {}, err};
  if (g.tol) ctx.report.config["tol"] = *g.tol;
  if (g.seed) ctx.report.config["seed"] = *g.seed;
  try {
    if (validate->parsed()) {
      ctx.report.command = "validate";
      cmd_validate(scenario_file, model_file, ctx);
    } else if (lp->parsed()) {
      ctx.report.command = "ncf-lp";
      cmd_ncf_lp(model_file, emit_bell, witness, ctx);
    } else if (sdp->parsed()) {
      ctx.report.command = "ncf-sdp";
      cmd_ncf_sdp(model_file, k_range, dual, parallel, ctx);
    } else if (bell->parsed()) {
      ctx.report.command = "bell";
      cmd_bell(bell_file, model_file, ctx);
    } else if (transform->parsed()) {
      std::string op;
      for (auto* sub : {t_bin, t_translate, t_mix, t_product}) {
        if (sub->parsed()) op = sub->get_name();
      }
      ctx.report.command = "transform " + op;
      cmd_transform(op, ta, ctx);
    } else {
      ctx.report.command = "fab-roundtrip";
      cmd_fab(hv_file, ctx);
    }
  } catch (const DomainFailure& e) {
    ctx.report.exit_code = kDomainFailure;
    ctx.report.results["error"] = e.what();
  } catch (const InvalidScenario& e) {
    ctx.report.exit_code = kDomainFailure;
    ctx.report.results["error"] = e.what();
  } catch (const SolverError& e) {
    ctx.report.exit_code = kSolverFailure;
    ctx.report.results["error"] = e.what();
  } catch (const ParseError& e) {
    ctx.report.exit_code = kUsageError;
    ctx.report.results["error"] = e.what();
  } catch (const UsageError& e) {
    ctx.report.exit_code = kUsageError;
    ctx.report.results["error"] = e.what();
  } catch (const InvalidArgument& e) {
    ctx.report.exit_code = ctx.report.command == "validate" ? kDomainFailure : kUsageError;
    ctx.report.results["error"] = e.what();
  }
  ctx.report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (ctx.report.results.contains("error")) err << "error: " << ctx.report.results["error"].get<std::string>() << "\n";

  const Json j = ctx.report.to_json();
  out << j.dump(2) << "\n";
  if (!g.json_path.empty()) {
    try {
      write_json_file(g.json_path, j);
    } catch (const InvalidArgument& e) {
      err << "error: " << e.what() << "\n";
      return kUsageError;
    }
  }
  return ctx.report.exit_code;
}

}  // namespace cfrac::cli
