#include "qdirac/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "qdirac/errors.hpp"

namespace qdirac {

namespace {

[[noreturn]] void parse_error(const std::string& what) {
  throw Error(ErrorCode::kConfigParse, what);
}

void reject_unknown(const YAML::Node& node, const std::string& where,
                    const std::set<std::string>& known) {
  if (!node.IsMap()) parse_error(fmt::format("'{}' must be a mapping", where));
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!known.count(key)) parse_error(fmt::format("unknown key '{}' in {}", key, where));
  }
}

template <class T>
void read(const YAML::Node& node, const char* key, T& out) {
  if (!node[key]) return;
  try {
    out = node[key].as<T>();
  } catch (const YAML::Exception& e) {
    parse_error(fmt::format("key '{}': {}", key, e.what()));
  }
}

}  // namespace

std::string format_real(double value) {
  if (std::isfinite(value) && value == std::trunc(value) && std::abs(value) < 1e15) {
    return fmt::format("{:.0f}", value);
  }
  if (std::isinf(value)) return value > 0 ? ".inf" : "-.inf";
  if (std::isnan(value)) return ".nan";
  return fmt::format("{:.17g}", value);
}

void ExperimentConfig::check() const {
  trunc.check();
  if (samples < 1) throw Error(ErrorCode::kInvalidTruncation, "samples must be >= 1");
  if (grid < 1) throw Error(ErrorCode::kInvalidTruncation, "grid must be positive");
  if (hs_from < 1 || hs_to < hs_from) throw Error(ErrorCode::kInvalidTruncation, "bad hs range");
  if (classical_from < 0 || classical_to > 64 || classical_to < classical_from) {
    throw Error(ErrorCode::kInvalidTruncation, "classical range must lie in [0, 64]");
  }
  if (classical_modes < 1) throw Error(ErrorCode::kInvalidTruncation, "classical modes >= 1");
}

WeightFamily make_family(const FamilySpec& spec) {
  if (spec.name == "q") return q_weight_family(spec.q);
  if (spec.name == "constant-a") return constant_family();
  if (spec.name == "geometric") return geometric_family(spec.base_n, spec.base_k);
  parse_error(fmt::format("unknown family '{}' (q, constant-a, geometric)", spec.name));
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig cfg) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    parse_error(e.what());
  }
  if (root.IsNull()) return cfg;
  reject_unknown(root, "document",
                 {"family", "truncation", "samples", "seed", "grid", "hs", "classical", "output"});
  if (const auto f = root["family"]) {
    reject_unknown(f, "family", {"name", "q", "base_n", "base_k"});
    read(f, "name", cfg.family.name);
    read(f, "q", cfg.family.q);
    read(f, "base_n", cfg.family.base_n);
    read(f, "base_k", cfg.family.base_k);
  }
  if (const auto t = root["truncation"]) {
    reject_unknown(t, "truncation", {"n_max", "k_max", "k_tail", "margin", "tol_identity",
                                     "tol_tail", "tol_trace"});
    read(t, "n_max", cfg.trunc.n_max);
    read(t, "k_max", cfg.trunc.k_max);
    read(t, "k_tail", cfg.trunc.k_tail);
    read(t, "margin", cfg.trunc.margin);
    read(t, "tol_identity", cfg.trunc.tol_identity);
    read(t, "tol_tail", cfg.trunc.tol_tail);
    read(t, "tol_trace", cfg.trunc.tol_trace);
  }
  read(root, "samples", cfg.samples);
  read(root, "seed", cfg.seed);
  read(root, "grid", cfg.grid);
  read(root, "output", cfg.output);
  if (const auto h = root["hs"]) {
    reject_unknown(h, "hs", {"n_from", "n_to"});
    read(h, "n_from", cfg.hs_from);
    read(h, "n_to", cfg.hs_to);
  }
  if (const auto c = root["classical"]) {
    reject_unknown(c, "classical", {"n_from", "n_to", "modes"});
    read(c, "n_from", cfg.classical_from);
    read(c, "n_to", cfg.classical_to);
    read(c, "modes", cfg.classical_modes);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) parse_error(fmt::format("cannot read '{}'", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

std::string dump_config(const ExperimentConfig& c) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "family" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << c.family.name;
  out << YAML::Key << "q" << YAML::Value << format_real(c.family.q);
  out << YAML::Key << "base_n" << YAML::Value << format_real(c.family.base_n);
  out << YAML::Key << "base_k" << YAML::Value << format_real(c.family.base_k);
  out << YAML::EndMap;
  out << YAML::Key << "truncation" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "n_max" << YAML::Value << c.trunc.n_max;
  out << YAML::Key << "k_max" << YAML::Value << c.trunc.k_max;
  out << YAML::Key << "k_tail" << YAML::Value << c.trunc.k_tail;
  out << YAML::Key << "margin" << YAML::Value << c.trunc.margin;
  out << YAML::Key << "tol_identity" << YAML::Value << format_real(c.trunc.tol_identity);
  out << YAML::Key << "tol_tail" << YAML::Value << format_real(c.trunc.tol_tail);
  out << YAML::Key << "tol_trace" << YAML::Value << format_real(c.trunc.tol_trace);
  out << YAML::EndMap;
  out << YAML::Key << "samples" << YAML::Value << c.samples;
  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::Key << "grid" << YAML::Value << c.grid;
  out << YAML::Key << "hs" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "n_from" << YAML::Value << c.hs_from;
  out << YAML::Key << "n_to" << YAML::Value << c.hs_to;
  out << YAML::EndMap;
  out << YAML::Key << "classical" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "n_from" << YAML::Value << c.classical_from;
  out << YAML::Key << "n_to" << YAML::Value << c.classical_to;
  out << YAML::Key << "modes" << YAML::Value << c.classical_modes;
  out << YAML::EndMap;
  out << YAML::Key << "output" << YAML::Value << c.output;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace qdirac
