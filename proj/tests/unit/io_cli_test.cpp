#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "cfrac/catalog.hpp"
#include "cfrac/json_io.hpp"
#include "cli.hpp"
#include "support/oracles.hpp"

using namespace cfrac;
namespace fs = std::filesystem;

namespace {

const fs::path kData = CFRAC_DATA_DIR;

fs::path scratch() {
  static const fs::path dir = fs::temp_directory_path() / ("cfrac_io_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

struct Run {
  int code;
  Json report;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  Json report;
  try {
    report = parse_json(out.str());
  } catch (const ParseError&) {
  }
  return {code, report, err.str()};
}

std::string data(const char* name) { return (kData / name).string(); }

}  // namespace

TEST_CASE("scenario and model files round-trip exactly") {
  const std::vector<EmpiricalModel> models{pr_box(), tsirelson_box(), dirac_embedding(tsirelson_box()),
                                           uniform_box_product(), product(pr_box(), uniform_noise_box(), "L", "R")};
  for (const auto& e : models) {
    const Json j = to_json(e);
    CHECK(model_from_json(parse_json(j.dump())) == e);
    CHECK(scenario_from_json(to_json(e.scenario())) == e.scenario());
  }
  testing::Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto e = testing::random_dirac_chsh_model(rng);
    CHECK(model_from_json(parse_json(to_json(e).dump())) == e);
  }

  // raw moments
  ScenarioSpec spec;
  spec.measurements = {"x", "y"};
  spec.contexts = {{"x", "y"}};
  spec.outcomes = {{"x", OutcomeSpace::interval(-1, 1)}, {"y", OutcomeSpace::interval(-1, 1)}};
  const auto s = MeasurementScenario::build(spec);
  RawMoments raw{{0, 1}, 1, {{{0, 0}, 1.0}, {{1, 0}, 0.25}, {{0, 1}, -0.5}}};
  const EmpiricalModel e(s, {MeasureDesc{raw}});
  CHECK(model_from_json(parse_json(to_json(e).dump())) == e);

  const auto y = context_moments(e.data(0), 1);
  CHECK(moments_from_json(to_json(y, s), s) == y);
}

TEST_CASE("other files round-trip") {
  testing::Rng rng(12);
  const auto h = testing::random_factorisable_hv(rng, 3);
  const auto back = hv_from_json(parse_json(to_json(h).dump()));
  CHECK(back.scenario == h.scenario);
  CHECK(back.lambdas == h.lambdas);
  CHECK(back.prior == h.prior);
  CHECK(back.kernels == h.kernels);

  const auto b = extract_bell(tsirelson_box());
  const auto bj = parse_json(to_json(b, chsh_scenario()).dump());
  const auto b2 = bell_from_json(bj);
  CHECK(b2.bound == b.bound);
  REQUIRE(b2.beta.size() == b.beta.size());
  for (std::size_t i = 0; i < b.beta.size(); ++i) CHECK(b2.beta[i] == b.beta[i]);
}

TEST_CASE("parsers reject malformed documents with a key path") {
  CHECK_THROWS_AS(parse_json("{\"a\": [1,"), ParseError);
  Json j = to_json(pr_box());
  j["extra"] = 1;
  CHECK_THROWS_WITH_AS(model_from_json(j), "model.extra: unknown key", ParseError);

  j = to_json(pr_box());
  j["data"][2]["table"]["1,x"] = 0.1;
  CHECK_THROWS_WITH_AS(model_from_json(j), doctest::Contains("model.data[2].table.1,x"), ParseError);

  j = to_json(pr_box());
  j["scenario"]["outcomes"]["a0"] = Json{{"finite", {-1, 1}}, {"range", 1}};
  CHECK_THROWS_WITH_AS(model_from_json(j), doctest::Contains("model.scenario.outcomes.a0.range"), ParseError);

  j = to_json(pr_box());
  j["data"][0]["context"] = {"a0", "zz"};
  CHECK_THROWS_AS(model_from_json(j), ParseError);

  j = to_json(pr_box());
  j["data"].erase(1);
  CHECK_THROWS_WITH_AS(model_from_json(j), doctest::Contains("no entry for context"), ParseError);

  j = to_json(pr_box());
  j["data"][0]["table"]["1,1"] = 0.7;
  CHECK_THROWS_AS(model_from_json(j), InvalidArgument);
}

TEST_CASE("context coordinates may be written in any order") {
  Json j = to_json(pr_box());
  Json entry = j["data"][3];
  Json swapped = Json::object();
  for (const auto& [k, v] : entry["table"].items()) {
    const auto comma = k.find(',');
    swapped[k.substr(comma + 1) + "," + k.substr(0, comma)] = v;
  }
  j["data"][3] = Json{{"context", {"b1", "a1"}}, {"table", swapped}};
  CHECK(model_from_json(j) == pr_box());
}

TEST_CASE("bins and value maps") {
  const auto s = chsh_scenario(true);
  const auto t = translations_from_json(read_json_file(kData / "sign_bins.json"), s);
  CHECK(t.size() == 4);
  CHECK(std::get<BinSpec>(t.at(0)).labels == std::vector<double>{-1, 1});
  const auto plain = bins_from_json(parse_json(R"({"a0": [-1, 0, 1]})"), s);
  CHECK(plain.at(0).labels == std::vector<double>{0, 1});
  CHECK_THROWS_AS(bins_from_json(parse_json(R"({"zz": [-1, 1]})"), s), ParseError);
  const auto maps = translations_from_json(parse_json(R"({"maps": {"b0": [[-1, 1], [1, 1]]}})"), chsh_scenario());
  CHECK(std::get<ValueMap>(maps.at(2)).pairs.size() == 2);
}

TEST_CASE("hierarchy results serialise") {
  HierarchyResult r;
  r.bounds.push_back(LevelBound{1, 0.75, SolveStatus::Optimal, 0.1, 9, 0.8, SolveStatus::Optimal});
  r.ncf_upper = 0.75;
  r.cf_lower = 0.25;
  const Json j = to_json(r);
  CHECK(j["bounds"][0]["status"] == "optimal");
  CHECK(j["ncf_upper"] == 0.75);
  std::ostringstream os;
  write_bounds_csv(os, r);
  CHECK(os.str() == "k,value,status,seconds,iterations,dual_value,dual_status\n1,0.75,optimal,0.1,9,0.8,optimal\n");
}

TEST_CASE("cli: validate") {
  auto r = run({"validate", data("chsh_scenario.json"), data("pr_box.json")});
  CHECK(r.code == 0);
  CHECK(r.report["results"]["model"]["compatible"] == true);
  CHECK(r.report["command"] == "validate");
  CHECK(r.report["inputs"][0]["fnv1a64"].get<std::string>().size() == 16);

  r = run({"validate", data("chsh_scenario.json"), data("signalling_pr.json")});
  CHECK(r.code == 1);
  CHECK(r.report["results"]["model"]["overlap"].is_string());

  r = run({"validate", data("chsh_scenario.json"), data("malformed.json")});
  CHECK(r.code == 2);
  CHECK(r.report["results"]["error"].get<std::string>().find("line") != std::string::npos);

  const auto bad = scratch() / "bad_scenario.json";
  std::ofstream(bad) << R"({"measurements": ["a", "b"], "contexts": [["a"]], "outcomes": {"a": {"finite": [0, 1]}}})";
  r = run({"validate", bad.string()});
  CHECK(r.code == 1);
  CHECK(r.report["results"]["scenario"]["issues"].size() >= 2);

  CHECK(run({"validate"}).code == 2);
  CHECK(run({"no-such-command"}).code == 2);
}

TEST_CASE("cli: ncf-lp and bell") {
  auto r = run({"ncf-lp", data("pr_box.json")});
  CHECK(r.code == 0);
  CHECK(r.report["results"]["cf"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));

  const auto bell = (scratch() / "bell.json").string();
  r = run({"ncf-lp", data("tsirelson_box.json"), "--emit-bell", bell, "--witness"});
  CHECK(r.code == 0);
  CHECK(r.report["results"]["witness"]["table"].size() > 0);
  CHECK(r.report["results"]["bell"]["normalized_violation"].get<double>() ==
        doctest::Approx(std::sqrt(2.0) - 1).epsilon(1e-6));

  r = run({"bell", bell, data("tsirelson_box.json")});
  CHECK(r.code == 0);
  CHECK(r.report["results"]["valid"] == true);
  r = run({"bell", bell, data("noise_box.json")});
  CHECK(r.code == 0);
  CHECK(r.report["results"]["normalized_violation"] == 0.0);

  CHECK(run({"ncf-lp", data("diracs_pr.json")}).code == 2);
  CHECK(run({"ncf-lp", data("signalling_pr.json")}).code == 1);
  CHECK(run({"ncf-lp", data("pr_box.json"), "--tol", "-1"}).code == 2);
}

TEST_CASE("cli: ncf-sdp") {
  const auto csv = (scratch() / "bounds.csv").string();
  const auto json = (scratch() / "report.json").string();
  auto r = run({"ncf-sdp", data("diracs_pr.json"), "--k", "1..2", "--dual", "--csv", csv, "--json", json});
  CHECK(r.code == 0);
  const auto& b = r.report["results"]["bounds"];
  REQUIRE(b.size() == 2);
  CHECK(b[1]["value"].get<double>() <= b[0]["value"].get<double>() + 1e-6);
  CHECK(r.report["results"]["monotone"] == true);
  CHECK(r.report["results"]["weak_duality_ok"] == true);
  CHECK(read_json_file(json)["command"] == "ncf-sdp");
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("k,value", 0) == 0);

  CHECK(run({"ncf-sdp", data("pr_box.json"), "--k", "2..1"}).code == 2);
  CHECK(run({"ncf-sdp", data("pr_box.json"), "--k", "one"}).code == 2);
}

TEST_CASE("cli: transform") {
  const auto out = (scratch() / "binned.json").string();
  auto r = run({"transform", "-o", out, "--compare-cf", "bin", data("diracs_pr.json"), "--spec", data("sign_bins.json")});
  CHECK(r.code == 0);
  CHECK(read_model_file(out) == pr_box());
  CHECK(r.report["results"]["compare_cf"]["holds"] == true);

  const auto mixed = (scratch() / "mixed.json").string();
  r = run({"transform", "-o", mixed, "--compare-cf", "mix", data("pr_box.json"), "--with", data("noise_box.json"),
           "--lambda", "0.3"});
  CHECK(r.code == 0);
  CHECK(read_model_file(mixed) == mix(pr_box(), uniform_noise_box(), 0.3));

  const auto prod = (scratch() / "product.json").string();
  r = run({"transform", "-o", prod, "product", data("pr_box.json"), "--with", data("pr_box.json"), "--prefix1", "L",
           "--prefix2", "R"});
  CHECK(r.code == 0);
  CHECK(read_model_file(prod).scenario().size() == 8);
  CHECK(run({"transform", "-o", prod, "product", data("pr_box.json"), "--with", data("pr_box.json")}).code == 2);
  CHECK(run({"transform", "-o", prod, "mix", data("pr_box.json"), "--with", data("pr_box.json"), "--lambda", "2"})
            .code == 2);
}

TEST_CASE("cli: fab-roundtrip") {
  auto r = run({"fab-roundtrip", data("hv_factorisable.json")});
  CHECK(r.code == 0);
  CHECK(r.report["results"]["max_deviation"].get<double>() <= 1e-12);
  r = run({"fab-roundtrip", data("noise_box.json")});
  CHECK(r.code == 0);
  CHECK(r.report["results"]["deterministic"] == true);
  CHECK(run({"fab-roundtrip", data("pr_box.json")}).code == 1);
}
