#pragma once

#include <string>
#include <vector>

#include "qdirac/config.hpp"

namespace qdirac {

/// A report file: name relative to the output directory and its content.
struct Document {
  std::string name;
  std::string content;
};

/// Documents produced by one command. `pass` is the conjunction of every
/// pass flag they contain.
struct CommandResult {
  std::string command;
  std::vector<Document> documents;
  bool pass = false;
  std::string summary;  // one line for the terminal
};

CommandResult cmd_validate(const ExperimentConfig& config);
CommandResult cmd_verify(const ExperimentConfig& config);
CommandResult cmd_hs(const ExperimentConfig& config);
CommandResult cmd_kernel(const ExperimentConfig& config);
CommandResult cmd_classical(const ExperimentConfig& config);
CommandResult cmd_report_all(const ExperimentConfig& config);

/// Writes every document under `directory`, creating it if needed.
void write_documents(const CommandResult& result, const std::string& directory);

}  // namespace qdirac
