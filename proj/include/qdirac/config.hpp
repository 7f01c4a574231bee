#pragma once

#include <cstdint>
#include <string>

#include "qdirac/truncation.hpp"
#include "qdirac/weights.hpp"

namespace qdirac {

struct FamilySpec {
  std::string name = "q";  // q | constant-a | geometric
  double q = 0.5;
  double base_n = 2.0;  // geometric only
  double base_k = 2.0;
};

/// Every knob of a run. Defaults match the documented configuration.
struct ExperimentConfig {
  FamilySpec family;
  TruncationSpec trunc;
  int samples = 20;
  std::uint64_t seed = 12345;
  Index grid = 512;
  int hs_from = 1;
  int hs_to = 20;
  int classical_from = 1;
  int classical_to = 32;
  int classical_modes = 16;
  std::string output = "out";

  /// Throws Error(kInvalidTruncation) or Error(kConfigParse).
  void check() const;
};

/// Builds the family; throws Error(kInvalidQ) or Error(kConfigParse).
WeightFamily make_family(const FamilySpec& spec);

/// Parses a YAML document; keys left out keep their defaults and unknown
/// keys are rejected. Throws Error(kConfigParse).
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// YAML rendering that parse_config reads back unchanged.
std::string dump_config(const ExperimentConfig& config);

/// Shortest text that round-trips for integers, else 17 significant digits.
std::string format_real(double value);

}  // namespace qdirac
