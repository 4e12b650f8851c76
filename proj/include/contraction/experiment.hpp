#pragma once

#include "contraction/gallery.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace contraction {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolkitVersion = "0.1.0";

/// Config or usage problem; maps to process exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class TaskKind { Axioms, Classify, Iterate, Certify, Profile };

std::string task_kind_name(TaskKind kind);
TaskKind task_kind_from_name(const std::string& name);

struct TaskSpec {
    TaskKind kind = TaskKind::Classify;
    nlohmann::json params;  // validated per kind before any task runs
};

struct ExperimentConfig {
    Instance instance;
    nlohmann::json instance_echo;  // registry name or the inline definition
    SampleSpec sampling;           // region defaults to the instance sample region
    std::vector<TaskSpec> tasks;
    std::string output_format = "json";  // "json" | "csv"
    std::string output_path;             // empty = stdout
};

/// Builds an Instance from an inline JSON definition (see README for the
/// schema). Throws ConfigError on malformed input.
Instance instance_from_json(const nlohmann::json& doc);

/// Parses and fully validates a config document; no tasks run on failure.
ExperimentConfig parse_config(const nlohmann::json& doc);

struct RunReport {
    nlohmann::json document;  // full report: config echo, results, timing
    nlohmann::json results;   // per-task results only; deterministic given the seed
    std::string csv;          // orbit CSV when output_format == "csv"
    int exit_code = 0;        // 0 ok, 1 task failure or ground-truth regression
};

/// Executes tasks in order; per-task failures are recorded and the run
/// continues.
RunReport run(const ExperimentConfig& config);

}  // namespace contraction
