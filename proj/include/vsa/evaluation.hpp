#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vsa/dataset.hpp"
#include "vsa/features.hpp"

namespace vsa::evaluation {

using kinematics::ArmGeometry;
using kinematics::Vec3;

// ---------------------------------------------------------------------------
// Protocol

inline constexpr std::size_t kEnrollCount = 5;

struct SignerSplit {
    std::string signer_id;
    std::vector<SignatureTrajectory> enroll;
    std::vector<SignatureTrajectory> test_genuine;
    std::vector<SignatureTrajectory> rf_impostors;  // first genuine of every other signer
    std::vector<SignatureTrajectory> sf_impostors;  // the signer's skilled forgeries
};

/// Throws Error(insufficient_genuine) if a signer has fewer than 6 genuine.
std::vector<SignerSplit> split_protocol(const Dataset& ds);

// ---------------------------------------------------------------------------
// Error rates

struct RocPoint {
    double threshold;
    double far;  // fraction of impostor scores >= threshold
    double frr;  // fraction of genuine scores < threshold
};

/// One point per distinct pooled score plus a final point at +infinity.
std::vector<RocPoint> roc_points(std::span<const double> genuine, std::span<const double> impostor);

/// Equal error rate in percent, larger scores meaning more genuine. The rate
/// is linearly interpolated between the two ROC points where FRR first
/// reaches FAR. Throws Error(empty_scores).
double compute_eer(std::span<const double> genuine, std::span<const double> impostor);

// ---------------------------------------------------------------------------
// Signal-to-noise ratio

inline constexpr double kSnrCap = 300.0;  // dB

/// 10 log10(sum |a - mean(a)|^2 / sum |a - b|^2), clamped to +-kSnrCap.
/// Equal-length inputs are compared sample by sample; otherwise both are
/// resampled uniformly in arc length to the longer length.
double snr(std::span<const Vec3> a, std::span<const Vec3> b);

/// Resamples a polyline to `n` points spaced uniformly in arc length. Falls
/// back to index-uniform spacing for paths of zero length.
std::vector<Vec3> resample_arc_length(std::span<const Vec3> path, std::size_t n);

// ---------------------------------------------------------------------------
// Benchmark

enum class VerifierKind { dtw, manhattan };
enum class FusionMode { none, feature, score };
enum class GeometryMode { fixed, realistic };

struct BenchmarkConfig {
    features::ExtractionConfig extraction;
    VerifierKind verifier = VerifierKind::dtw;
    features::FeatureKind feature_kind = features::FeatureKind::fused;
    FusionMode fusion = FusionMode::score;
    double omega = 0.4;
    GeometryMode geometry = GeometryMode::fixed;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

/// Geometry used for every signature scored against `signer_id`.
ArmGeometry signer_geometry(GeometryMode mode, std::uint64_t seed, const std::string& signer_id);

enum class TrialKind { genuine, random_forgery, skilled_forgery };

struct TrialScore {
    std::string claimed_signer;
    std::string signer_id;  // owner of the questioned signature
    std::string signature_id;
    TrialKind kind;
    double score;         // normalized, larger is more genuine
    double raw_position;  // raw distance of the position (or only) channel
    double raw_angle;     // raw distance of the angle channel, NaN when unused
};

struct EERReport {
    std::string feature_kind;
    std::string verifier;
    std::string fusion_mode;
    std::string geometry_mode;
    double omega = 0.4;
    std::uint64_t seed = 0;

    double eer_rf = 0.0;
    std::optional<double> eer_sf;  // absent without skilled forgeries
    std::size_t genuine_count = 0;
    std::size_t rf_count = 0;
    std::size_t sf_count = 0;

    std::vector<TrialScore> trials;  // signer order, then trial order
    std::vector<RocPoint> roc_rf;
    std::vector<RocPoint> roc_sf;

    double runtime_ms = 0.0;  // wall clock; not part of the result
};

/// Runs the enrollment protocol for every signer and pools the scores.
/// Results are independent of `threads`.
EERReport run_benchmark(const Dataset& ds, const BenchmarkConfig& config);

std::string to_string(VerifierKind v);
std::string to_string(FusionMode f);
std::string to_string(GeometryMode g);
std::string to_string(features::FeatureKind k);
std::string to_string(TrialKind k);

// ---------------------------------------------------------------------------
// Round-trip validation

struct SnrRecord {
    std::string signer_id;
    std::string signature_id;
    std::size_t samples = 0;
    double snr_db = 0.0;
};

/// Extracts angles with `extract`, rebuilds the pen path with forward
/// kinematics on `reconstruct` and compares against the preprocessed input.
double roundtrip_snr(const SignatureTrajectory& traj, const ArmGeometry& extract,
                     const features::ExtractionConfig& config, const ArmGeometry& reconstruct);

std::vector<SnrRecord> roundtrip_validation(const Dataset& ds, const ArmGeometry& g,
                                            const features::ExtractionConfig& config);

/// Per-signer geometry variant.
std::vector<SnrRecord> roundtrip_validation(const Dataset& ds,
                                            const features::ExtractionConfig& config,
                                            GeometryMode mode, std::uint64_t seed);

}  // namespace vsa::evaluation
