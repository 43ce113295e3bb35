#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "vsa/kinematics.hpp"
#include "vsa/trajectory.hpp"

namespace vsa::features {

using kinematics::ArmGeometry;
using kinematics::JointAngles;
using kinematics::Vec3;

enum class PenAngleMode { raw, smoothed, fixed };
enum class PenUpMode { lift5mm, flat, flat_q6_bump };
enum class Scale { one_to_ten, one_to_one, ten_to_one };

double scale_factor(Scale scale);

struct ExtractionConfig {
    PenAngleMode pen_angle_mode = PenAngleMode::fixed;
    double fixed_theta = 1.0471975511965976;  // pi/3
    double fixed_phi = 2.356194490192345;     // 3pi/4
    Scale scale = Scale::one_to_one;
    PenUpMode penup_mode = PenUpMode::lift5mm;
    Vec3 gamma = Vec3::Zero();
    double fuse_omega = 0.4;
};

inline constexpr int kSmoothingSpan = 15;
inline constexpr double kPenUpLift = 5.0;  // mm

SignatureTrajectory resolve_pen_angles(SignatureTrajectory traj, const ExtractionConfig& config);
SignatureTrajectory apply_penup_lift(SignatureTrajectory traj, PenUpMode mode);
SignatureTrajectory apply_scale(SignatureTrajectory traj, Scale scale);
SignatureTrajectory rotate_writing_plane(SignatureTrajectory traj, const Vec3& gamma);

/// Translates the trajectory so its first sample sits on the pen tip of the
/// initial posture for geometry `g`.
SignatureTrajectory anchor_to_workspace(SignatureTrajectory traj, const ArmGeometry& g);

/// Runs the full preprocessing chain: pen angles, pen-up lift, scale,
/// writing-plane rotation, anchoring.
SignatureTrajectory prepare_trajectory(SignatureTrajectory traj, const ArmGeometry& g,
                                       const ExtractionConfig& config);

/// Per-sample joint angles and the reduced (elbow, wrist, finger) positions.
struct AnthroSequence {
    std::vector<JointAngles> angles;
    std::vector<Vec3> elbow;
    std::vector<Vec3> wrist;
    std::vector<Vec3> finger;

    std::size_t size() const { return angles.size(); }
};

/// Joint angles and positions for a prepared trajectory. IK of sample i is
/// seeded with sample i-1 (sample 0 with the initial posture); angle
/// channels are phase-unwrapped along the sequence.
AnthroSequence extract_anthro(const SignatureTrajectory& prepared, const ArmGeometry& g,
                              const ExtractionConfig& config);

/// prepare_trajectory followed by extract_anthro.
AnthroSequence extract_features(const SignatureTrajectory& raw, const ArmGeometry& g,
                                const ExtractionConfig& config);

enum class FeatureKind { position, angle, fused };

/// Time-major feature matrix: one row per sample, one column per channel.
struct FeatureMatrix {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> values;
    std::vector<std::string> channel_names;
    FeatureKind kind = FeatureKind::position;

    std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
    std::size_t channels() const { return static_cast<std::size_t>(values.cols()); }
};

/// Appends first and second differences to `base` (columns: base, d, dd).
/// Differences keep the row count by repeating the first difference.
Eigen::MatrixXd with_derivatives(const Eigen::MatrixXd& base);

/// Per-column z-score (population variance). Zero-variance columns become 0.
void zscore_columns(Eigen::Ref<Eigen::MatrixXd> m);

/// Raw base channels: 9 positions or 6 angles per sample.
Eigen::MatrixXd base_channels(const AnthroSequence& seq, FeatureKind kind);

/// Verifier-ready matrix: base + d + dd channels, z-scored. Throws
/// Error(too_short) for fewer than 3 samples.
FeatureMatrix build_feature_matrix(const AnthroSequence& seq, FeatureKind kind);

/// Channel concatenation, position block first.
FeatureMatrix fuse_features(const FeatureMatrix& position, const FeatureMatrix& angle);

enum class Gender { male, female };

/// Per-signer bone lengths: L2 (humerus) and L4 (radius) from forensic
/// normal distributions, L3 = 1 mm, L1 and L5 from `base`.
ArmGeometry sample_realistic_geometry(std::uint64_t signer_seed,
                                      std::optional<Gender> gender = std::nullopt,
                                      const ArmGeometry& base = kinematics::default_geometry());

/// Gender the seeded coin flip of sample_realistic_geometry assigns.
Gender sampled_gender(std::uint64_t signer_seed);

/// Stable 64-bit seed for (global seed, signer id).
std::uint64_t signer_seed(std::uint64_t global_seed, const std::string& signer_id);

}  // namespace vsa::features
