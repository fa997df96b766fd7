#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stance/eval.hpp"

namespace stance::cli {

enum class Protocol { LooByEvent, LooGlobal, Split };

std::string_view to_string(Protocol p) noexcept;
std::optional<Protocol> parse_protocol(std::string_view s) noexcept;

/// Fully resolved experiment settings. Relative paths in a config file are
/// taken relative to that file's directory.
struct ExperimentConfig {
    std::vector<std::filesystem::path> datasets;  // files or directories of *.jsonl
    std::optional<std::filesystem::path> test_dataset;
    std::optional<std::filesystem::path> raw;     // PHEME-layout export for `ingest`
    std::string name;                             // ingest output name
    std::filesystem::path resources;
    ClassifierConfig classifier;
    GroupSet features = GroupSet::all();
    Protocol protocol = Protocol::LooByEvent;
    std::uint64_t seed = 1;
    std::optional<Timestamp> now;
    std::filesystem::path out = "out";
    unsigned jobs = 1;
    std::vector<std::string> ablate{"AF_SS", "AF_DS", "AF_NDS", "AF_SPS", "AF_ITS", "AF_IQ", "AF"};
    std::optional<std::filesystem::path> model;
    std::optional<std::filesystem::path> input;

    /// Every setting with defaults materialized; `runtime` adds jobs and out.
    nlohmann::ordered_json to_json(bool runtime = true) const;
};

/// Reads the JSON config object. Throws ConfigError on unknown keys or bad values.
ExperimentConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Loads and merges every dataset path (a directory contributes its *.jsonl
/// files in name order). Throws ConfigError when a path is missing.
Dataset load_datasets(const std::vector<std::filesystem::path>& paths);

/// Entry point: returns 0 on success, 2 on configuration errors, 1 otherwise.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace stance::cli
