#pragma once

// JSON files for scenarios, models, transformations, hidden-variable models,
// Bell inequalities and results. Readers reject unknown keys and report the
// key path of the offending value in ParseError messages.
//
// Scenario:
//   {"measurements": ["a", "b"], "contexts": [["a", "b"]],
//    "outcomes": {"a": {"finite": [-1, 1]}, "b": {"interval": [-1, 1]}}}
//
// Model: a scenario (inline object, or a path relative to the model file)
// and one entry per maximal context. Coordinates of joint outcomes, points
// and boxes follow the entry's "context" list.
//   {"scenario": ..., "data": [
//      {"context": ["a", "b"], "table": {"-1,1": 0.5, "1,-1": 0.5}},
//      {"context": [...], "dirac": [{"point": [0.5, 1], "weight": 1}]},
//      {"context": [...], "uniform_boxes": [{"box": [[-1, 0], [0, 1]], "weight": 1}]},
//      {"context": [...], "moments": {"degree": 2, "values": {"0,0": 1, ...}}}]}
//
// Transformations: {"bins": {"a": [-1, 0, 1]}} or with explicit cell labels
// {"bins": {"a": {"cuts": [-1, 0, 1], "labels": [-1, 1]}}}; finite relabelling
// {"maps": {"a": [[0, 1], [1, 1], [2, 0]]}}.
//
// Hidden-variable model:
//   {"scenario": ..., "lambdas": ["l0", "l1"], "prior": [0.5, 0.5],
//    "kernels": {"0": {"l0": table, "l1": table}, "1": {...}}}
// with kernels keyed by maximal-context index.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "cfrac/empirical.hpp"
#include "cfrac/fab.hpp"
#include "cfrac/lp_cf.hpp"
#include "cfrac/moments.hpp"
#include "cfrac/sdp_hierarchy.hpp"

namespace cfrac {

using Json = nlohmann::ordered_json;

/// Throws ParseError with line and column on malformed text.
Json parse_json(const std::string& text, const std::string& source = "input");
Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

/// Shortest text that reads back as the same double.
std::string format_real(double v);
std::string format_outcome(const std::vector<double>& values);  // "1,-1"

ScenarioSpec scenario_spec_from_json(const Json& j, const std::string& path = "scenario");
/// Throws InvalidScenario for well-formed but invalid scenarios.
MeasurementScenario scenario_from_json(const Json& j, const std::string& path = "scenario");
Json to_json(const MeasurementScenario& s);

/// Joint-outcome table on context `c`; the key coordinates follow `order`,
/// which must be a permutation of c (defaults to c itself).
DiscreteTable table_from_json(const Json& j, const MeasurementScenario& s, const Context& c,
                              const std::string& path, const Context& order = {});
Json table_to_json(const DiscreteTable& t);

/// `base` resolves a scenario given as a relative path. When `scenario` is
/// supplied it is used instead of the file's own, which must then be absent
/// or equal to it.
EmpiricalModel model_from_json(const Json& j, const std::filesystem::path& base = {},
                               const std::optional<MeasurementScenario>& scenario = std::nullopt);
Json to_json(const EmpiricalModel& e);
EmpiricalModel read_model_file(const std::filesystem::path& path,
                               const std::optional<MeasurementScenario>& scenario = std::nullopt);

/// Reads {"bins": ...} and/or {"maps": ...}.
TranslationMap translations_from_json(const Json& j, const MeasurementScenario& s,
                                      const std::string& path = "transform");
BinMap bins_from_json(const Json& j, const MeasurementScenario& s, const std::string& path = "bins");

HiddenVariableModel hv_from_json(const Json& j, const std::filesystem::path& base = {});
Json to_json(const HiddenVariableModel& h);

/// {"scenario": ..., "bound": R, "beta": [{"context": [...], "values": {...}}]}
BellInequality bell_from_json(const Json& j, const std::filesystem::path& base = {});
Json to_json(const BellInequality& b, const MeasurementScenario& s);
MeasurementScenario bell_scenario_from_json(const Json& j, const std::filesystem::path& base = {});

Json to_json(const NCFResult& r, const MeasurementScenario& s, bool with_witness);
Json to_json(const HierarchyResult& r);
/// Header "k,value,status,seconds,iterations,dual_value,dual_status".
void write_bounds_csv(std::ostream& os, const HierarchyResult& r);

/// {"vars": [...labels], "degree": n, "values": {"2,0": y, ...}}
Json to_json(const MomentSequence& y, const MeasurementScenario& s);
MomentSequence moments_from_json(const Json& j, const MeasurementScenario& s, const std::string& path = "moments");

}  // namespace cfrac
