#include "vsa/features.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vsa/errors.hpp"

namespace vsa::features {

namespace kin = vsa::kinematics;

double scale_factor(Scale scale) {
    switch (scale) {
        case Scale::one_to_ten: return 0.1;
        case Scale::one_to_one: return 1.0;
        case Scale::ten_to_one: return 10.0;
    }
    return 1.0;
}

namespace {

// Centered moving average; the window shrinks near the ends.
std::vector<double> moving_average(const std::vector<double>& v, int span) {
    const int half = span / 2;
    const int n = static_cast<int>(v.size());
    std::vector<double> out(v.size());
    for (int i = 0; i < n; ++i) {
        const int lo = std::max(0, i - half);
        const int hi = std::min(n - 1, i + half);
        double sum = 0.0;
        for (int j = lo; j <= hi; ++j) sum += v[j];
        out[i] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

}  // namespace

SignatureTrajectory resolve_pen_angles(SignatureTrajectory traj, const ExtractionConfig& config) {
    switch (config.pen_angle_mode) {
        case PenAngleMode::fixed:
            for (auto& s : traj.samples) {
                s.theta = config.fixed_theta;
                s.phi = config.fixed_phi;
            }
            return traj;
        case PenAngleMode::raw:
        case PenAngleMode::smoothed:
            if (!traj.has_angles) {
                throw Error(ErrorCode::missing_angles,
                            traj.signer_id + "/" + traj.signature_id +
                                ": device provided no pen angles");
            }
            break;
    }
    if (config.pen_angle_mode == PenAngleMode::smoothed) {
        std::vector<double> theta, phi;
        theta.reserve(traj.samples.size());
        phi.reserve(traj.samples.size());
        for (const auto& s : traj.samples) {
            theta.push_back(s.theta);
            phi.push_back(s.phi);
        }
        theta = moving_average(theta, kSmoothingSpan);
        phi = moving_average(phi, kSmoothingSpan);
        for (std::size_t i = 0; i < traj.samples.size(); ++i) {
            traj.samples[i].theta = theta[i];
            traj.samples[i].phi = phi[i];
        }
    }
    return traj;
}

SignatureTrajectory apply_penup_lift(SignatureTrajectory traj, PenUpMode mode) {
    for (auto& s : traj.samples) {
        s.z = (mode == PenUpMode::lift5mm && !s.pen_down) ? kPenUpLift : 0.0;
    }
    return traj;
}

SignatureTrajectory apply_scale(SignatureTrajectory traj, Scale scale) {
    if (scale == Scale::one_to_one) return traj;
    const double f = scale_factor(scale);
    for (auto& s : traj.samples) {
        s.x *= f;
        s.y *= f;
    }
    return traj;
}

SignatureTrajectory rotate_writing_plane(SignatureTrajectory traj, const Vec3& gamma) {
    for (auto& s : traj.samples) s = kin::rotate_writing_plane(s, gamma);
    return traj;
}

SignatureTrajectory anchor_to_workspace(SignatureTrajectory traj, const ArmGeometry& g) {
    if (traj.samples.empty()) return traj;
    const Vec3 anchor =
        kin::forward_positions(kin::initial_posture(), g).finger() - g.surface_offset;
    const PenSample first = traj.samples.front();
    const Vec3 shift = anchor - Vec3(first.x, first.y, first.z);
    for (auto& s : traj.samples) {
        s.x += shift.x();
        s.y += shift.y();
        s.z += shift.z();
    }
    // Pin the first sample exactly so anchoring is idempotent.
    traj.samples.front().x = anchor.x();
    traj.samples.front().y = anchor.y();
    traj.samples.front().z = anchor.z();
    return traj;
}

SignatureTrajectory prepare_trajectory(SignatureTrajectory traj, const ArmGeometry& g,
                                       const ExtractionConfig& config) {
    traj = resolve_pen_angles(std::move(traj), config);
    traj = apply_penup_lift(std::move(traj), config.penup_mode);
    traj = apply_scale(std::move(traj), config.scale);
    traj = rotate_writing_plane(std::move(traj), config.gamma);
    return anchor_to_workspace(std::move(traj), g);
}

AnthroSequence extract_anthro(const SignatureTrajectory& prepared, const ArmGeometry& g,
                              const ExtractionConfig& config) {
    constexpr double kBump = std::numbers::pi / 180.0;

    AnthroSequence seq;
    const std::size_t n = prepared.samples.size();
    seq.angles.reserve(n);
    seq.elbow.reserve(n);
    seq.wrist.reserve(n);
    seq.finger.reserve(n);

    JointAngles prev = kin::initial_posture();
    for (std::size_t i = 0; i < n; ++i) {
        const PenSample& s = prepared.samples[i];
        const kin::Transform4 target =
            kin::pen_pose_matrix({Vec3(s.x, s.y, s.z), s.theta, s.phi}, g);

        JointAngles q;
        try {
            q = kin::inverse_kinematics(target, g, prev);
        } catch (const UnreachableError& e) {
            throw UnreachableError(prepared.signer_id + "/" + prepared.signature_id +
                                       " sample " + std::to_string(i) + ": " + e.what(),
                                   i);
        }
        for (std::size_t k = 0; k < 6; ++k) q[k] = kin::unwrap_to(q[k], prev[k]);
        prev = q;

        const auto pos = kin::forward_positions(q, g);
        seq.elbow.push_back(pos.elbow());
        seq.wrist.push_back(pos.wrist());
        seq.finger.push_back(pos.finger());
        seq.angles.push_back(q);
    }

    // The hand twist does not move the pen tip, so positions are unaffected.
    if (config.penup_mode == PenUpMode::flat_q6_bump) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!prepared.samples[i].pen_down) seq.angles[i][5] += kBump;
        }
    }
    return seq;
}

AnthroSequence extract_features(const SignatureTrajectory& raw, const ArmGeometry& g,
                                const ExtractionConfig& config) {
    return extract_anthro(prepare_trajectory(raw, g, config), g, config);
}

Eigen::MatrixXd with_derivatives(const Eigen::MatrixXd& base) {
    const Eigen::Index n = base.rows();
    const Eigen::Index c = base.cols();

    auto diff = [n, c](const Eigen::MatrixXd& m) {
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, c);
        if (n < 2) return d;
        d.bottomRows(n - 1) = m.bottomRows(n - 1) - m.topRows(n - 1);
        d.row(0) = d.row(1);
        return d;
    };

    const Eigen::MatrixXd d1 = diff(base);
    const Eigen::MatrixXd d2 = diff(d1);
    Eigen::MatrixXd out(n, 3 * c);
    out << base, d1, d2;
    return out;
}

void zscore_columns(Eigen::Ref<Eigen::MatrixXd> m) {
    const double n = static_cast<double>(m.rows());
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        auto col = m.col(j);
        const double mean = col.sum() / n;
        col.array() -= mean;
        const double var = col.squaredNorm() / n;
        // Relative floor: constant channels carry rounding noise after centering.
        if (var <= 1e-24 * std::max(1.0, mean * mean)) {
            col.setZero();
        } else {
            col /= std::sqrt(var);
        }
    }
}

Eigen::MatrixXd base_channels(const AnthroSequence& seq, FeatureKind kind) {
    const auto n = static_cast<Eigen::Index>(seq.size());
    if (kind == FeatureKind::position) {
        Eigen::MatrixXd m(n, 9);
        for (Eigen::Index i = 0; i < n; ++i) {
            m.block<1, 3>(i, 0) = seq.elbow[i].transpose();
            m.block<1, 3>(i, 3) = seq.wrist[i].transpose();
            m.block<1, 3>(i, 6) = seq.finger[i].transpose();
        }
        return m;
    }
    if (kind == FeatureKind::angle) {
        Eigen::MatrixXd m(n, 6);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index k = 0; k < 6; ++k) m(i, k) = seq.angles[i][k];
        }
        return m;
    }
    Eigen::MatrixXd m(n, 15);
    m << base_channels(seq, FeatureKind::position), base_channels(seq, FeatureKind::angle);
    return m;
}

namespace {

std::vector<std::string> channel_names(FeatureKind kind) {
    std::vector<std::string> base;
    if (kind == FeatureKind::position) {
        for (const char* joint : {"e", "w", "f"}) {
            for (const char* axis : {"x", "y", "z"}) base.push_back(std::string(axis) + "_" + joint);
        }
    } else {
        for (int k = 1; k <= 6; ++k) base.push_back("q" + std::to_string(k));
    }
    std::vector<std::string> out;
    for (const char* prefix : {"", "d", "dd"}) {
        for (const auto& b : base) out.push_back(prefix + b);
    }
    return out;
}

}  // namespace

FeatureMatrix build_feature_matrix(const AnthroSequence& seq, FeatureKind kind) {
    if (seq.size() < 3) {
        throw Error(ErrorCode::too_short, "feature matrix needs at least 3 samples, got " +
                                              std::to_string(seq.size()));
    }
    if (kind == FeatureKind::fused) {
        return fuse_features(build_feature_matrix(seq, FeatureKind::position),
                             build_feature_matrix(seq, FeatureKind::angle));
    }
    Eigen::MatrixXd m = with_derivatives(base_channels(seq, kind));
    zscore_columns(m);

    FeatureMatrix out;
    out.values = m;
    out.channel_names = channel_names(kind);
    out.kind = kind;
    return out;
}

FeatureMatrix fuse_features(const FeatureMatrix& position, const FeatureMatrix& angle) {
    if (position.rows() != angle.rows()) {
        throw Error(ErrorCode::length_mismatch,
                    "cannot fuse feature matrices with " + std::to_string(position.rows()) +
                        " and " + std::to_string(angle.rows()) + " samples");
    }
    FeatureMatrix out;
    out.values.resize(position.values.rows(), position.values.cols() + angle.values.cols());
    out.values << position.values, angle.values;
    out.channel_names = position.channel_names;
    out.channel_names.insert(out.channel_names.end(), angle.channel_names.begin(),
                             angle.channel_names.end());
    out.kind = FeatureKind::fused;
    return out;
}

}  // namespace vsa::features
