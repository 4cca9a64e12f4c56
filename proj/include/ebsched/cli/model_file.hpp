#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ebsched/model/compose.hpp"

namespace ebsched::cli {

/// Parsed contents of an .ebt file: one machine, an optional abstract
/// machine it refines, an optional partition and any number of tasks.
struct ModelFile {
  std::string origin;  // path the text came from, empty for strings
  model::Machine machine;
  std::optional<std::string> refines;
  std::optional<model::Partition> partition;
  std::vector<model::TaskDecl> tasks;
  std::map<std::string, std::string> options;

  const model::TaskDecl* find_task(const std::string& name) const;
  /// refines, resolved against the directory of `origin`.
  std::optional<std::string> refines_path() const;
};

ModelFile parse_model(const std::string& text, const std::string& origin = {});
ModelFile load_model(const std::string& path);
std::string write_model(const ModelFile& file);

/// FNV-1a over the file text, as 16 hex digits.
std::string digest(const std::string& text);

}  // namespace ebsched::cli
