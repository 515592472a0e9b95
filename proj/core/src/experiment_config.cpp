#include "liso/errors.hpp"
#include "liso/experiment.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace liso {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
  throw ConfigError("experiment config: " + message);
}

template <typename T>
T get(const json& doc, const char* key) {
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception&) {
    fail(std::string("key '") + key + "' has the wrong type");
  }
}

std::uint64_t get_count(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_number_unsigned()) fail(std::string("key '") + key + "' must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

Vector get_vector(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_array()) fail(std::string("key '") + key + "' must be an array of numbers");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(std::string("key '") + key + "' must be an array of numbers");
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "objective",    "external_command", "minimizer",        "dimension",
      "methods",      "trials",           "seed",             "budget",
      "alpha0",       "q0_offset",        "q0_variance",      "sigma2",
      "mixture_weight", "batch_size",     "fixed_alpha",      "normalize_es_weights",
      "box_lower",    "box_upper",        "checkpoint_first", "checkpoint_count",
      "title",        "csv",              "svg"};
  return keys;
}

}  // namespace

ExperimentSpec parse_experiment_spec(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    fail(std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("top level must be a JSON object");
  for (const auto& [key, value] : doc.items())
    if (!known_keys().contains(key)) fail("unknown key '" + key + "'");

  ExperimentSpec spec;
  if (!doc.contains("dimension")) fail("missing required key 'dimension'");
  if (!doc.contains("methods")) fail("missing required key 'methods'");

  if (doc.contains("objective")) spec.objective = get<std::string>(doc, "objective");
  if (doc.contains("external_command"))
    spec.external_command = get<std::string>(doc, "external_command");
  if (doc.contains("minimizer")) spec.minimizer = get_vector(doc, "minimizer");
  spec.dimension = get<int>(doc, "dimension");
  for (const auto& name : get<std::vector<std::string>>(doc, "methods")) {
    const auto m = parse_method(name);
    if (!m) fail("unknown method '" + name + "'");
    spec.methods.push_back(*m);
  }
  if (doc.contains("trials")) spec.trials = get_count(doc, "trials");
  if (doc.contains("seed")) spec.seed = get_count(doc, "seed");
  if (doc.contains("budget")) spec.budget = get_count(doc, "budget");
  if (doc.contains("alpha0")) spec.alpha0 = get<double>(doc, "alpha0");
  if (doc.contains("q0_offset")) spec.q0_offset = get<double>(doc, "q0_offset");
  if (doc.contains("q0_variance")) spec.q0_variance = get<double>(doc, "q0_variance");
  if (doc.contains("sigma2")) spec.sigma2 = get<double>(doc, "sigma2");
  if (doc.contains("mixture_weight")) spec.mixture_weight = get<double>(doc, "mixture_weight");
  if (doc.contains("batch_size")) spec.batch_size = get_count(doc, "batch_size");
  if (doc.contains("fixed_alpha")) spec.fixed_alpha = get<bool>(doc, "fixed_alpha");
  if (doc.contains("normalize_es_weights"))
    spec.normalize_es_weights = get<bool>(doc, "normalize_es_weights");
  if (doc.contains("box_lower") != doc.contains("box_upper"))
    fail("box_lower and box_upper must be given together");
  if (doc.contains("box_lower"))
    spec.projection_box = Box{get_vector(doc, "box_lower"), get_vector(doc, "box_upper")};
  if (doc.contains("checkpoint_first")) spec.checkpoint_first = get_count(doc, "checkpoint_first");
  if (doc.contains("checkpoint_count"))
    spec.checkpoint_count = static_cast<std::size_t>(get_count(doc, "checkpoint_count"));
  if (doc.contains("title")) spec.title = get<std::string>(doc, "title");
  if (doc.contains("csv")) spec.csv_path = get<std::string>(doc, "csv");
  if (doc.contains("svg")) spec.svg_path = get<std::string>(doc, "svg");

  try {
    validate(spec);
  } catch (const InvalidArgument& e) {
    fail(e.what());
  }
  return spec;
}

ExperimentSpec load_experiment_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read experiment config '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_experiment_spec(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string echo_experiment_spec(const ExperimentSpec& spec) {
  json doc = json::object();
  doc["objective"] = spec.objective;
  if (!spec.external_command.empty()) doc["external_command"] = spec.external_command;
  if (spec.minimizer)
    doc["minimizer"] = std::vector<double>(spec.minimizer->begin(), spec.minimizer->end());
  doc["dimension"] = spec.dimension;
  json methods = json::array();
  for (Method m : spec.methods) methods.push_back(std::string(method_name(m)));
  doc["methods"] = methods;
  doc["trials"] = spec.trials;
  doc["seed"] = spec.seed;
  doc["budget"] = spec.budget;
  if (spec.alpha0) doc["alpha0"] = *spec.alpha0;
  if (spec.q0_offset) doc["q0_offset"] = *spec.q0_offset;
  if (spec.q0_variance) doc["q0_variance"] = *spec.q0_variance;
  if (spec.sigma2) doc["sigma2"] = *spec.sigma2;
  doc["mixture_weight"] = spec.mixture_weight;
  doc["batch_size"] = spec.batch_size;
  doc["fixed_alpha"] = spec.fixed_alpha;
  doc["normalize_es_weights"] = spec.normalize_es_weights;
  if (spec.projection_box) {
    const Box& box = *spec.projection_box;
    doc["box_lower"] = std::vector<double>(box.lower.begin(), box.lower.end());
    doc["box_upper"] = std::vector<double>(box.upper.begin(), box.upper.end());
  }
  doc["checkpoint_first"] = spec.checkpoint_first;
  doc["checkpoint_count"] = spec.checkpoint_count;
  if (!spec.title.empty()) doc["title"] = spec.title;
  if (!spec.csv_path.empty()) doc["csv"] = spec.csv_path;
  if (!spec.svg_path.empty()) doc["svg"] = spec.svg_path;
  return doc.dump(2);
}

}  // namespace liso
