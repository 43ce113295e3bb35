#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "vsa/evaluation.hpp"
#include "vsa/io.hpp"

namespace vsa::cli {

/// Dataset path that selects the built-in synthetic corpus.
inline constexpr const char* kSyntheticDataset = "synthetic";

struct RunConfig {
    std::string dataset = kSyntheticDataset;
    io::DatasetFormat format = io::DatasetFormat::canonical_tsv;
    evaluation::BenchmarkConfig bench;  // extraction settings live in bench.extraction
    std::string out = "vsa_out";
    std::size_t signers = 20;  // synth and sample_geometry without a dataset
};

using Settings = std::vector<std::pair<std::string, std::string>>;

/// key=value lines; blank lines and lines starting with '#' are skipped.
Settings parse_settings(std::istream& in, const std::string& name);
Settings read_settings_file(const std::string& path);

/// Keys match the long flag names; '_' and '-' are interchangeable.
/// Throws Error(invalid_argument) on unknown keys or bad values.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Defaults, then the config file, then flags.
RunConfig resolve_config(const Settings& file, const Settings& flags);

/// Every effective setting in key=value form, as recorded in run manifests.
std::map<std::string, std::string> describe(const RunConfig& config);

Dataset load_configured_dataset(const RunConfig& config);

// Commands return the process exit code and write their files under
// config.out. Progress lines go to `log`.
int cmd_extract(const RunConfig& config, std::ostream& log);
int cmd_validate(const RunConfig& config, std::ostream& log);
int cmd_benchmark(const RunConfig& config, std::ostream& log);
int cmd_sample_geometry(const RunConfig& config, std::ostream& log);
int cmd_synth(const RunConfig& config, std::ostream& log);
int cmd_convert(const RunConfig& config, std::ostream& log);

/// {"error": code, "message": ...} for a caught exception.
nlohmann::json error_record(const std::exception& e);

}  // namespace vsa::cli
