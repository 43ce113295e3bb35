#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "vsa/dataset.hpp"
#include "vsa/evaluation.hpp"

namespace vsa::io {

namespace fs = std::filesystem;

enum class DatasetFormat { canonical_tsv, svc_style };

DatasetFormat parse_format(const std::string& name);
std::string to_string(DatasetFormat f);

// ---------------------------------------------------------------------------
// Canonical signature files
//
//   #columns t_ms x y pressure pen_state azimuth_rad inclination_rad
//   #lines_per_mm 1
//   0   12.5   3.25   0.41   1   1.04   2.35
//
// Tab or space separated. `#columns` is mandatory and must come before the
// first sample; t_ms, x and y are required, the other columns optional and
// in any order. x and y are divided by lines_per_mm (the file directive wins
// over the dataset default). Without pen_state a sample is down when its
// pressure is positive, or always when pressure is absent too.

SignatureTrajectory parse_signature(std::istream& in, const std::string& name,
                                    double default_lines_per_mm = 1.0);
SignatureTrajectory read_signature(const fs::path& file, double default_lines_per_mm = 1.0);

/// Writes millimetres with `#lines_per_mm 1` using shortest round-trip
/// number formatting, so read(write(t)) reproduces every field exactly.
void write_signature(std::ostream& out, const SignatureTrajectory& traj);
void write_signature(const fs::path& file, const SignatureTrajectory& traj);

// ---------------------------------------------------------------------------
// Datasets
//
// canonical_tsv: either <root>/index.tsv with lines
//   signer_id <TAB> genuine|forgery <TAB> relative/path.tsv
// (acquisition order = line order), or the directory layout
//   <root>/<signer>/genuine/*.tsv and <root>/<signer>/forgery/*.tsv
// (acquisition order = natural filename order).
//
// svc_style: files U<signer>S<n>.TXT anywhere below <root>; the first line
// holds the sample count, then "X Y T button azimuth altitude pressure" per
// line with angles in degrees. S1..S20 are genuine, S21..S40 forgeries.
//
// Both read an optional <root>/dataset.meta of key=value lines (device,
// units, sample_rate_hz, lines_per_mm).

Dataset load_dataset(const fs::path& root, DatasetFormat format);

DatasetMetadata read_metadata(const fs::path& root);

/// Writes the directory layout plus dataset.meta.
void write_dataset(const fs::path& root, const Dataset& ds);

/// "a2" < "a10".
bool natural_less(const std::string& a, const std::string& b);

// ---------------------------------------------------------------------------
// Reports

/// Shortest representation that parses back to the same double.
std::string format_double(double v);

/// The report without wall-clock time, so equal results give equal JSON.
nlohmann::json report_to_json(const evaluation::EERReport& report);

void write_roc_csv(std::ostream& out, const std::vector<evaluation::RocPoint>& roc);
void write_trials_csv(std::ostream& out, const std::vector<evaluation::TrialScore>& trials);
void write_snr_csv(std::ostream& out, const std::vector<evaluation::SnrRecord>& records);

void write_text(const fs::path& file, const std::string& content);

}  // namespace vsa::io
