#pragma once

#include <filesystem>
#include <string>

#include "fusched/schedule.hpp"
#include "fusched/types.hpp"

namespace fusched {

/// JSON documents. Parsing rejects unknown keys and wrong value types with InputError.
std::string dag_to_json(const DagSpec& dag);
DagSpec dag_from_json(const std::string& text);

std::string schedule_to_json(const Schedule& schedule);
Schedule schedule_from_json(const std::string& text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

DagSpec load_dag(const std::filesystem::path& path);

}  // namespace fusched
