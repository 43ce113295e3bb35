#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vsa/features.hpp"

namespace vsa::verifiers {

using features::FeatureMatrix;
using kinematics::JointAngles;
using kinematics::Vec3;

// ---------------------------------------------------------------------------
// Scores

struct ScoreStats {
    double mean = 0.0;
    double std = 1.0;
};

/// `value` is the normalized similarity in (0, 1), larger is more genuine.
/// `raw_distance` is the verifier's dissimilarity before normalization.
struct Score {
    double value = 0.0;
    double raw_distance = 0.0;
};

inline constexpr double kStdFloor = 1e-9;
inline constexpr double kTanhSpread = 0.01;

/// Population mean and standard deviation, std floored at kStdFloor.
ScoreStats score_stats(std::span<const double> similarities);

/// tanh-estimator: 0.5 * (tanh(0.01 * (s - mean) / std) + 1).
double tanh_normalize(double similarity, const ScoreStats& stats);
std::vector<double> tanh_normalize(std::span<const double> similarities, const ScoreStats& stats);

/// omega * s_p + (1 - omega) * s_a.
double fuse_scores(double position_score, double angle_score, double omega);

// ---------------------------------------------------------------------------
// Function-based verifier

struct DtwAlignment {
    double cost = 0.0;
    std::size_t length = 0;  // number of matched pairs on the path
};

/**
 * Minimum-cost monotone alignment with the symmetric (1,0), (0,1), (1,1)
 * step pattern and Euclidean local distance. Among equal-cost paths the
 * shortest is taken, so the result is well defined for exact ties.
 */
DtwAlignment dtw_align(const FeatureMatrix& a, const FeatureMatrix& b);

/// Alignment cost divided by path length. Throws Error(channel_mismatch).
double dtw_distance(const FeatureMatrix& a, const FeatureMatrix& b);

struct DtwTemplate {
    std::string signer_id;
    std::vector<FeatureMatrix> references;
    double mean_reference_distance = 0.0;
    ScoreStats stats;
};

inline constexpr double kDistanceFloor = 1e-9;

/// Needs at least two references; stats come from leave-one-out
/// reference-vs-reference scores.
DtwTemplate build_dtw_template(std::string signer_id, std::vector<FeatureMatrix> references);

/// Similarity before tanh: -(min reference distance / mean reference distance).
double dtw_similarity(const DtwTemplate& t, const FeatureMatrix& questioned);
Score dtw_verify(const DtwTemplate& t, const FeatureMatrix& questioned);

// ---------------------------------------------------------------------------
// Histogram-based verifier

enum class FrequencyKind { absolute, relative };

struct HistogramSegment {
    std::string name;
    std::size_t offset = 0;
    std::size_t length = 0;
    FrequencyKind kind = FrequencyKind::relative;
};

struct HistogramVector {
    Eigen::VectorXd values;
    std::vector<HistogramSegment> layout;
};

inline constexpr int kPolarBins = 16;
inline constexpr int kDeltaBins = 16;
inline constexpr int kDeltaDeltaBins = 24;
inline constexpr int kPairBins = 16;
inline constexpr double kRangeSigmas = 2.0;
inline constexpr double kAbsoluteEpsilon = 0.4;
inline constexpr double kRelativeEpsilon = 0.004;

/// Bin of `value` among `bins` equal bins over [lo, hi]; out-of-range values
/// land in the edge bins.
int clipped_bin(double value, double lo, double hi, int bins);

struct BinRange {
    double lo;
    double hi;
};

/// [mean - 2 sd, mean + 2 sd]; degenerate spreads widen to mean +- 1.
BinRange sigma_range(std::span<const double> values);

/// In-plane orthonormal basis (u, v) of the plane orthogonal to `normal`.
/// For normal = +z this is (x, y).
std::pair<Vec3, Vec3> plane_basis(const Vec3& normal);

/**
 * Polar histograms of one joint path projected on the plane orthogonal to
 * `normal`, about the projected centroid: 16 radial bins over the radius
 * mean +- 2 sd and 16 angular bins over [-pi, pi], each as absolute counts
 * and relative frequencies. Throws Error(degenerate) when all points
 * coincide.
 */
HistogramVector polar_histograms(std::span<const Vec3> path, const Vec3& normal,
                                 const std::string& joint);

/// [h_e || h_w || h_f] for the elbow, wrist and finger paths.
HistogramVector position_histograms(const features::AnthroSequence& seq, const Vec3& normal);

/// [h1 || h2 || h3]: per-joint histograms of first differences (16 bins),
/// second differences (24 bins) and 16x16 joint histograms of lag-1 and
/// lag-2 pairs of first differences. Throws Error(too_short) below 3 samples.
HistogramVector angle_histograms(std::span<const JointAngles> angles);

/// Concatenation, first argument first.
HistogramVector fuse_histograms(const HistogramVector& first, const HistogramVector& second);

/// Manhattan distance where per-bin differences at or below the segment's
/// epsilon count as zero. Throws Error(layout_mismatch).
double manhattan_distance(const HistogramVector& a, const HistogramVector& b);

struct HistogramTemplate {
    std::string signer_id;
    HistogramVector mean;
    ScoreStats stats;
};

HistogramTemplate build_histogram_template(std::string signer_id,
                                           const std::vector<HistogramVector>& references);
Score manhattan_score(const HistogramTemplate& t, const HistogramVector& questioned);

}  // namespace vsa::verifiers
