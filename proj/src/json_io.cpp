#include "cfrac/json_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <set>
#include <sstream>

namespace cfrac {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ParseError(path + ": " + what); }

std::string key_path(const std::string& path, const std::string& key) { return path + "." + key; }
std::string item_path(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void require_object(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      fail(key_path(path, key), "unknown key");
    }
  }
}

const Json& member(const Json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(path, std::string("missing key '") + key + "'");
  return *it;
}

const Json& array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

double real(const Json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::string text(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> reals(const Json& j, const std::string& path) {
  std::vector<double> out;
  for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(real(j[i], item_path(path, i)));
  return out;
}

std::vector<std::string> texts(const Json& j, const std::string& path) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < array(j, path).size(); ++i) out.push_back(text(j[i], item_path(path, i)));
  return out;
}

std::vector<double> parse_outcome(const std::string& key, const std::string& path) {
  std::vector<double> out;
  const char* p = key.data();
  const char* end = p + key.size();
  while (true) {
    double v = 0.0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc() || next == p) fail(path, "bad outcome key '" + key + "'");
    out.push_back(v);
    if (next == end) break;
    if (*next != ',') fail(path, "bad outcome key '" + key + "'");
    p = next + 1;
  }
  return out;
}

std::size_t measurement(const MeasurementScenario& s, const std::string& label, const std::string& path) {
  auto x = s.index_of(label);
  if (!x) fail(path, "unknown measurement '" + label + "'");
  return *x;
}

// Measurement indices in the order written, and the sorted context.
std::pair<Context, Context> read_context(const Json& j, const MeasurementScenario& s, const std::string& path) {
  Context order;
  auto names = texts(j, path);
  for (std::size_t i = 0; i < names.size(); ++i) order.push_back(measurement(s, names[i], item_path(path, i)));
  Context sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) fail(path, "repeated measurement");
  return {order, sorted};
}

// Maps coordinates written in `order` onto the sorted context `c`.
std::vector<double> reorder(const std::vector<double>& v, const Context& order, const Context& c,
                            const std::string& path) {
  if (v.size() != c.size()) fail(path, "expected " + std::to_string(c.size()) + " coordinates");
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    out[static_cast<std::size_t>(std::find(c.begin(), c.end(), order[i]) - c.begin())] = v[i];
  }
  return out;
}

Json labels_of(const MeasurementScenario& s, const Context& c) {
  Json out = Json::array();
  for (auto x : c) out.push_back(s.label(x));
  return out;
}

Json outcome_space_json(const OutcomeSpace& o) {
  Json j = Json::object();
  if (o.is_finite()) {
    j["finite"] = o.values;
  } else {
    j["interval"] = {o.lo, o.hi};
  }
  return j;
}

Json dirac_json(const DiracMixture& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.points.size(); ++i) out.push_back(Json{{"point", m.points[i]}, {"weight", m.weights[i]}});
  return out;
}

Json boxes_json(const UniformBoxMixture& m) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.boxes.size(); ++i) {
    Json box = Json::array();
    for (const auto& iv : m.boxes[i]) box.push_back({iv.lo, iv.hi});
    out.push_back(Json{{"box", box}, {"weight", m.weights[i]}});
  }
  return out;
}

Json raw_moments_json(const RawMoments& m) {
  Json values = Json::object();
  for (const auto& alpha : MultiIndexSet(static_cast<int>(m.context.size()), m.degree)) {
    auto it = m.values.find(alpha);
    if (it != m.values.end()) values[to_string(alpha)] = it->second;
  }
  return Json{{"degree", m.degree}, {"values", values}};
}

MultiIndex permute_index(const MultiIndex& alpha, const Context& order, const Context& c) {
  MultiIndex out(c.size(), 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    out[static_cast<std::size_t>(std::find(c.begin(), c.end(), order[i]) - c.begin())] = alpha[i];
  }
  return out;
}

ContextData read_entry(const Json& j, const MeasurementScenario& s, const std::string& path) {
  require_object(j, path, {"context", "table", "dirac", "uniform_boxes", "moments"});
  auto [order, c] = read_context(member(j, path, "context"), s, key_path(path, "context"));
  int kinds = 0;
  for (const char* k : {"table", "dirac", "uniform_boxes", "moments"}) kinds += j.contains(k) ? 1 : 0;
  if (kinds != 1) fail(path, "expected exactly one of table, dirac, uniform_boxes, moments");

  if (j.contains("table")) return table_from_json(j["table"], s, c, key_path(path, "table"), order);
  if (j.contains("dirac")) {
    const std::string p = key_path(path, "dirac");
    DiracMixture m;
    m.context = c;
    for (std::size_t i = 0; i < array(j["dirac"], p).size(); ++i) {
      const std::string ip = item_path(p, i);
      require_object(j["dirac"][i], ip, {"point", "weight"});
      m.points.push_back(reorder(reals(member(j["dirac"][i], ip, "point"), key_path(ip, "point")), order, c, ip));
      m.weights.push_back(real(member(j["dirac"][i], ip, "weight"), key_path(ip, "weight")));
    }
    return MeasureDesc{m};
  }
  if (j.contains("uniform_boxes")) {
    const std::string p = key_path(path, "uniform_boxes");
    UniformBoxMixture m;
    m.context = c;
    for (std::size_t i = 0; i < array(j["uniform_boxes"], p).size(); ++i) {
      const std::string ip = item_path(p, i);
      const Json& e = j["uniform_boxes"][i];
      require_object(e, ip, {"box", "weight"});
      const std::string bp = key_path(ip, "box");
      const Json& box = array(member(e, ip, "box"), bp);
      if (box.size() != c.size()) fail(bp, "expected " + std::to_string(c.size()) + " intervals");
      std::vector<Interval> written;
      for (std::size_t t = 0; t < box.size(); ++t) {
        auto iv = reals(box[t], item_path(bp, t));
        if (iv.size() != 2) fail(item_path(bp, t), "expected [lo, hi]");
        written.push_back({iv[0], iv[1]});
      }
      std::vector<Interval> sorted(c.size());
      for (std::size_t t = 0; t < order.size(); ++t) {
        sorted[static_cast<std::size_t>(std::find(c.begin(), c.end(), order[t]) - c.begin())] = written[t];
      }
      m.boxes.push_back(sorted);
      m.weights.push_back(real(member(e, ip, "weight"), key_path(ip, "weight")));
    }
    return MeasureDesc{m};
  }
  const std::string p = key_path(path, "moments");
  const Json& mj = j["moments"];
  require_object(mj, p, {"degree", "values"});
  RawMoments m;
  m.context = c;
  m.degree = integer(member(mj, p, "degree"), key_path(p, "degree"));
  const std::string vp = key_path(p, "values");
  const Json& values = member(mj, p, "values");
  if (!values.is_object()) fail(vp, "expected an object");
  for (const auto& [key, value] : values.items()) {
    MultiIndex alpha;
    try {
      alpha = parse_multi_index(key);
    } catch (const ParseError& err) {
      fail(key_path(vp, key), err.what());
    }
    if (alpha.size() != c.size()) fail(key_path(vp, key), "multi-index has the wrong length");
    m.values[permute_index(alpha, order, c)] = real(value, key_path(vp, key));
  }
  return MeasureDesc{m};
}

MeasurementScenario scenario_member(const Json& j, const std::filesystem::path& base, const std::string& path) {
  const Json& sj = member(j, path, "scenario");
  const std::string sp = key_path(path, "scenario");
  if (sj.is_string()) {
    std::filesystem::path file = sj.get<std::string>();
    if (file.is_relative() && !base.empty()) file = base / file;
    return scenario_from_json(read_json_file(file), file.string());
  }
  return scenario_from_json(sj, sp);
}

BinSpec bin_spec_from_json(const Json& j, const std::string& path) {
  BinSpec b;
  if (j.is_array()) {
    b = BinSpec::with_index_labels(reals(j, path));
  } else {
    require_object(j, path, {"cuts", "labels"});
    b.cuts = reals(member(j, path, "cuts"), key_path(path, "cuts"));
    if (j.contains("labels")) {
      b.labels = reals(j["labels"], key_path(path, "labels"));
    } else {
      b = BinSpec::with_index_labels(b.cuts);
    }
  }
  try {
    b.validate();
  } catch (const InvalidArgument& err) {
    throw InvalidArgument(path + ": " + err.what());
  }
  return b;
}

std::string status_text(SolveStatus s) { return to_string(s); }

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& err) {
    throw ParseError(source + ": " + err.what());
  }
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path.string());
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument(path.string() + ": cannot write file");
  out << j.dump(2) << "\n";
}

std::string format_real(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

std::string format_outcome(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += format_real(values[i]);
  }
  return out;
}

ScenarioSpec scenario_spec_from_json(const Json& j, const std::string& path) {
  require_object(j, path, {"measurements", "contexts", "outcomes"});
  ScenarioSpec spec;
  spec.measurements = texts(member(j, path, "measurements"), key_path(path, "measurements"));
  const std::string cp = key_path(path, "contexts");
  const Json& contexts = array(member(j, path, "contexts"), cp);
  for (std::size_t i = 0; i < contexts.size(); ++i) spec.contexts.push_back(texts(contexts[i], item_path(cp, i)));
  const std::string op = key_path(path, "outcomes");
  const Json& outcomes = member(j, path, "outcomes");
  if (!outcomes.is_object()) fail(op, "expected an object");
  for (const auto& [label, o] : outcomes.items()) {
    const std::string p = key_path(op, label);
    require_object(o, p, {"finite", "interval"});
    if (o.size() != 1) fail(p, "expected exactly one of finite, interval");
    if (o.contains("finite")) {
      spec.outcomes.emplace(label, OutcomeSpace::finite(reals(o["finite"], key_path(p, "finite"))));
    } else {
      auto iv = reals(o["interval"], key_path(p, "interval"));
      if (iv.size() != 2) fail(key_path(p, "interval"), "expected [lo, hi]");
      spec.outcomes.emplace(label, OutcomeSpace::interval(iv[0], iv[1]));
    }
  }
  return spec;
}

MeasurementScenario scenario_from_json(const Json& j, const std::string& path) {
  return MeasurementScenario::build(scenario_spec_from_json(j, path));
}

Json to_json(const MeasurementScenario& s) {
  Json j = Json::object();
  j["measurements"] = s.labels();
  Json contexts = Json::array();
  for (const auto& c : s.contexts()) contexts.push_back(labels_of(s, c));
  j["contexts"] = contexts;
  Json outcomes = Json::object();
  for (std::size_t x = 0; x < s.size(); ++x) outcomes[s.label(x)] = outcome_space_json(s.outcome_space(x));
  j["outcomes"] = outcomes;
  return j;
}

DiscreteTable table_from_json(const Json& j, const MeasurementScenario& s, const Context& c, const std::string& path,
                              const Context& order) {
  const Context& ord = order.empty() ? c : order;
  if (!j.is_object()) fail(path, "expected an object of outcome keys");
  std::vector<Assignment> support;
  std::vector<double> probs;
  std::set<std::vector<double>> seen;
  for (const auto& [key, value] : j.items()) {
    const std::string p = key_path(path, key);
    auto values = reorder(parse_outcome(key, p), ord, c, p);
    if (!seen.insert(values).second) fail(p, "repeated outcome");
    support.push_back({c, values});
    probs.push_back(real(value, p));
  }
  DiscreteTable t = DiscreteTable::canonical(c, support, probs);
  try {
    validate(t, s);
  } catch (const InvalidArgument& err) {
    throw InvalidArgument(path + ": " + err.what());
  }
  return t;
}

Json table_to_json(const DiscreteTable& t) {
  Json j = Json::object();
  for (std::size_t i = 0; i < t.support.size(); ++i) j[format_outcome(t.support[i].values)] = t.probs[i];
  return j;
}

EmpiricalModel model_from_json(const Json& j, const std::filesystem::path& base,
                               const std::optional<MeasurementScenario>& scenario) {
  const std::string path = "model";
  require_object(j, path, {"scenario", "data"});
  std::optional<MeasurementScenario> s = scenario;
  if (j.contains("scenario")) {
    auto own = scenario_member(j, base, path);
    if (s && !(own == *s)) fail(key_path(path, "scenario"), "differs from the scenario given separately");
    s = std::move(own);
  }
  if (!s) fail(path, "missing key 'scenario'");

  const std::string dp = key_path(path, "data");
  const Json& data = array(member(j, path, "data"), dp);
  std::vector<std::optional<ContextData>> slots(s->contexts().size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::string ip = item_path(dp, i);
    ContextData d = read_entry(data[i], *s, ip);
    auto ci = s->context_index(context_of(d));
    if (!ci) fail(ip, "'" + s->describe(context_of(d)) + "' is not a maximal context");
    if (slots[*ci]) fail(ip, "second entry for context " + s->describe(context_of(d)));
    slots[*ci] = std::move(d);
  }
  std::vector<ContextData> entries;
  for (std::size_t c = 0; c < slots.size(); ++c) {
    if (!slots[c]) fail(dp, "no entry for context " + s->describe(s->context(c)));
    entries.push_back(std::move(*slots[c]));
  }
  try {
    return EmpiricalModel(*s, std::move(entries));
  } catch (const InvalidArgument& err) {
    throw InvalidArgument(dp + ": " + err.what());
  }
}

Json to_json(const EmpiricalModel& e) {
  const auto& s = e.scenario();
  Json data = Json::array();
  for (const auto& d : e.data()) {
    Json entry = Json::object();
    entry["context"] = labels_of(s, context_of(d));
    if (const auto* t = std::get_if<DiscreteTable>(&d)) {
      entry["table"] = table_to_json(*t);
    } else {
      const auto& m = std::get<MeasureDesc>(d);
      if (const auto* dm = std::get_if<DiracMixture>(&m)) entry["dirac"] = dirac_json(*dm);
      else if (const auto* bm = std::get_if<UniformBoxMixture>(&m)) entry["uniform_boxes"] = boxes_json(*bm);
      else entry["moments"] = raw_moments_json(std::get<RawMoments>(m));
    }
    data.push_back(entry);
  }
  return Json{{"scenario", to_json(s)}, {"data", data}};
}

EmpiricalModel read_model_file(const std::filesystem::path& path, const std::optional<MeasurementScenario>& scenario) {
  return model_from_json(read_json_file(path), path.parent_path(), scenario);
}

BinMap bins_from_json(const Json& j, const MeasurementScenario& s, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  BinMap bins;
  for (const auto& [label, spec] : j.items()) {
    const std::string p = key_path(path, label);
    bins[measurement(s, label, p)] = bin_spec_from_json(spec, p);
  }
  return bins;
}

TranslationMap translations_from_json(const Json& j, const MeasurementScenario& s, const std::string& path) {
  require_object(j, path, {"bins", "maps"});
  TranslationMap t;
  if (j.contains("bins")) {
    for (auto& [x, b] : bins_from_json(j["bins"], s, key_path(path, "bins"))) t[x] = b;
  }
  if (j.contains("maps")) {
    const std::string mp = key_path(path, "maps");
    if (!j["maps"].is_object()) fail(mp, "expected an object");
    for (const auto& [label, pairs] : j["maps"].items()) {
      const std::string p = key_path(mp, label);
      const std::size_t x = measurement(s, label, p);
      if (t.count(x)) fail(p, "measurement is both binned and mapped");
      ValueMap m;
      for (std::size_t i = 0; i < array(pairs, p).size(); ++i) {
        auto v = reals(pairs[i], item_path(p, i));
        if (v.size() != 2) fail(item_path(p, i), "expected [from, to]");
        m.pairs.emplace_back(v[0], v[1]);
      }
      t[x] = m;
    }
  }
  return t;
}

HiddenVariableModel hv_from_json(const Json& j, const std::filesystem::path& base) {
  const std::string path = "hv";
  require_object(j, path, {"scenario", "lambdas", "prior", "kernels"});
  HiddenVariableModel h{scenario_member(j, base, path), {}, {}, {}};
  h.lambdas = texts(member(j, path, "lambdas"), key_path(path, "lambdas"));
  h.prior = reals(member(j, path, "prior"), key_path(path, "prior"));
  if (h.prior.size() != h.lambdas.size()) fail(key_path(path, "prior"), "one prior weight per lambda expected");
  const std::string kp = key_path(path, "kernels");
  const Json& kernels = member(j, path, "kernels");
  if (!kernels.is_object()) fail(kp, "expected an object");
  const std::size_t nc = h.scenario.contexts().size();
  h.kernels.assign(nc, std::vector<DiscreteTable>(h.lambdas.size()));
  std::vector<std::vector<bool>> filled(nc, std::vector<bool>(h.lambdas.size(), false));
  for (const auto& [ckey, per_lambda] : kernels.items()) {
    const std::string cp = key_path(kp, ckey);
    std::size_t c = 0;
    auto [end, ec] = std::from_chars(ckey.data(), ckey.data() + ckey.size(), c);
    if (ec != std::errc() || end != ckey.data() + ckey.size() || c >= nc) fail(cp, "expected a maximal-context index");
    if (!per_lambda.is_object()) fail(cp, "expected an object keyed by lambda");
    for (const auto& [lname, table] : per_lambda.items()) {
      const std::string lp = key_path(cp, lname);
      auto it = std::find(h.lambdas.begin(), h.lambdas.end(), lname);
      if (it == h.lambdas.end()) fail(lp, "unknown lambda");
      const auto l = static_cast<std::size_t>(it - h.lambdas.begin());
      h.kernels[c][l] = table_from_json(table, h.scenario, h.scenario.context(c), lp);
      filled[c][l] = true;
    }
  }
  for (std::size_t c = 0; c < nc; ++c) {
    for (std::size_t l = 0; l < h.lambdas.size(); ++l) {
      if (!filled[c][l]) fail(kp, "no kernel for context " + std::to_string(c) + " and lambda " + h.lambdas[l]);
    }
  }
  try {
    h.validate();
  } catch (const InvalidArgument& err) {
    throw InvalidArgument(path + ": " + err.what());
  }
  return h;
}

Json to_json(const HiddenVariableModel& h) {
  Json kernels = Json::object();
  for (std::size_t c = 0; c < h.kernels.size(); ++c) {
    Json per = Json::object();
    for (std::size_t l = 0; l < h.lambdas.size(); ++l) per[h.lambdas[l]] = table_to_json(h.kernels[c][l]);
    kernels[std::to_string(c)] = per;
  }
  return Json{{"scenario", to_json(h.scenario)}, {"lambdas", h.lambdas}, {"prior", h.prior}, {"kernels", kernels}};
}

MeasurementScenario bell_scenario_from_json(const Json& j, const std::filesystem::path& base) {
  require_object(j, "bell", {"scenario", "bound", "norm", "beta"});
  return scenario_member(j, base, "bell");
}

BellInequality bell_from_json(const Json& j, const std::filesystem::path& base) {
  const std::string path = "bell";
  const MeasurementScenario s = bell_scenario_from_json(j, base);
  if (!s.all_finite()) fail(path, "Bell inequalities need finite outcome spaces");
  BellInequality b;
  if (j.contains("bound")) b.bound = real(j["bound"], key_path(path, "bound"));
  const std::string bp = key_path(path, "beta");
  const Json& beta = array(member(j, path, "beta"), bp);
  std::vector<std::optional<ContextFunction>> slots(s.contexts().size());
  for (std::size_t i = 0; i < beta.size(); ++i) {
    const std::string ip = item_path(bp, i);
    require_object(beta[i], ip, {"context", "values"});
    auto [order, c] = read_context(member(beta[i], ip, "context"), s, key_path(ip, "context"));
    auto ci = s.context_index(c);
    if (!ci) fail(ip, "not a maximal context");
    if (slots[*ci]) fail(ip, "second entry for context " + s.describe(c));
    ContextFunction f;
    f.context = c;
    f.outcomes = enumerate_assignments(s, c);
    f.values.assign(f.outcomes.size(), 0.0);
    const std::string vp = key_path(ip, "values");
    const Json& values = member(beta[i], ip, "values");
    if (!values.is_object()) fail(vp, "expected an object");
    for (const auto& [key, value] : values.items()) {
      const std::string p = key_path(vp, key);
      Assignment o{c, reorder(parse_outcome(key, p), order, c, p)};
      if (!assignment_valid(s, o)) fail(p, "not a joint outcome of the context");
      f.values[assignment_rank(s, o)] = real(value, p);
    }
    slots[*ci] = std::move(f);
  }
  for (std::size_t c = 0; c < slots.size(); ++c) {
    if (!slots[c]) fail(bp, "no entry for context " + s.describe(s.context(c)));
    b.beta.push_back(std::move(*slots[c]));
  }
  return b;
}

Json to_json(const BellInequality& b, const MeasurementScenario& s) {
  Json beta = Json::array();
  for (const auto& f : b.beta) {
    Json values = Json::object();
    for (std::size_t i = 0; i < f.outcomes.size(); ++i) values[format_outcome(f.outcomes[i].values)] = f.values[i];
    beta.push_back(Json{{"context", labels_of(s, f.context)}, {"values", values}});
  }
  return Json{{"scenario", to_json(s)}, {"bound", b.bound}, {"norm", b.norm()}, {"beta", beta}};
}

Json to_json(const NCFResult& r, const MeasurementScenario& s, bool with_witness) {
  Json j = Json{{"ncf", r.ncf}, {"cf", r.cf}, {"gap", r.duality_gap}, {"dual_value", r.dual_value},
                {"iterations", r.iterations}};
  if (with_witness) {
    j["witness"] = Json{{"context", labels_of(s, r.witness.context)}, {"table", table_to_json(r.witness)}};
  }
  return j;
}

Json to_json(const HierarchyResult& r) {
  Json bounds = Json::array();
  for (const auto& b : r.bounds) {
    Json e = Json{{"k", b.k}, {"value", b.value}, {"status", status_text(b.status)}, {"seconds", b.seconds},
                  {"iterations", b.iterations}};
    if (b.dual_value) e["dual_value"] = *b.dual_value;
    if (b.dual_status) e["dual_status"] = status_text(*b.dual_status);
    bounds.push_back(e);
  }
  return Json{{"bounds", bounds},          {"ncf_upper", r.ncf_upper},
              {"cf_lower", r.cf_lower},    {"monotone", r.monotone},
              {"weak_duality_ok", r.weak_duality_ok}};
}

void write_bounds_csv(std::ostream& os, const HierarchyResult& r) {
  os << "k,value,status,seconds,iterations,dual_value,dual_status\n";
  for (const auto& b : r.bounds) {
    os << b.k << ',' << format_real(b.value) << ',' << status_text(b.status) << ',' << format_real(b.seconds) << ','
       << b.iterations << ',' << (b.dual_value ? format_real(*b.dual_value) : "") << ','
       << (b.dual_status ? status_text(*b.dual_status) : "") << '\n';
  }
}

Json to_json(const MomentSequence& y, const MeasurementScenario& s) {
  Json values = Json::object();
  const auto idx = y.indices();
  for (std::size_t i = 0; i < idx.size(); ++i) values[to_string(idx[i])] = y.values[i];
  return Json{{"vars", labels_of(s, y.vars)}, {"degree", y.degree}, {"values", values}};
}

MomentSequence moments_from_json(const Json& j, const MeasurementScenario& s, const std::string& path) {
  require_object(j, path, {"vars", "degree", "values"});
  MomentSequence y;
  Context order;
  std::tie(order, y.vars) = read_context(member(j, path, "vars"), s, key_path(path, "vars"));
  if (order != y.vars) fail(key_path(path, "vars"), "variables must follow the scenario's measurement order");
  y.degree = integer(member(j, path, "degree"), key_path(path, "degree"));
  if (y.degree < 0) fail(key_path(path, "degree"), "must be nonnegative");
  const auto idx = y.indices();
  y.values.assign(idx.size(), 0.0);
  std::vector<bool> seen(idx.size(), false);
  const std::string vp = key_path(path, "values");
  const Json& values = member(j, path, "values");
  if (!values.is_object()) fail(vp, "expected an object");
  for (const auto& [key, value] : values.items()) {
    MultiIndex alpha;
    try {
      alpha = parse_multi_index(key);
    } catch (const ParseError& err) {
      fail(key_path(vp, key), err.what());
    }
    auto pos = idx.find(alpha);
    if (!pos) fail(key_path(vp, key), "multi-index outside the declared degree");
    y.values[*pos] = real(value, key_path(vp, key));
    seen[*pos] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) fail(vp, "missing entries");
  return y;
}

}  // namespace cfrac
