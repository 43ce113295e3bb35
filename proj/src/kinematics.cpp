#include "vsa/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "vsa/errors.hpp"

namespace vsa::kinematics {

namespace {

constexpr double kPi = std::numbers::pi;

double clamp_unit(double value, const char* what) {
    if (!std::isfinite(value) || value > 1.0 + kDomainSlack || value < -1.0 - kDomainSlack) {
        throw UnreachableError(std::string(what) + " argument " + std::to_string(value) +
                               " outside [-1, 1]");
    }
    return std::clamp(value, -1.0, 1.0);
}

struct WristSolution {
    double q4;
    double q5;
    double q6;
};

double branch_distance(const WristSolution& w, const JointAngles& prev) {
    const double d4 = unwrap_to(w.q4, prev[3]) - prev[3];
    const double d5 = unwrap_to(w.q5, prev[4]) - prev[4];
    const double d6 = unwrap_to(w.q6, prev[5]) - prev[5];
    return d4 * d4 + d5 * d5 + d6 * d6;
}

}  // namespace

Eigen::Matrix4d Transform4::matrix() const {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = r;
    m.topRightCorner<3, 1>() = p;
    return m;
}

Transform4 compose(const Transform4& a, const Transform4& b) {
    return {a.r * b.r, a.r * b.p + a.p};
}

Transform4 invert(const Transform4& t) {
    const Mat3 rt = t.r.transpose();
    return {rt, -(rt * t.p)};
}

double ArmGeometry::l34() const { return std::hypot(l3, l4); }

JointAngles initial_posture() {
    return {{0.0, 3.0 * kPi / 4.0, -2.0 * kPi / 3.0, 0.0, kPi / 2.0, 0.0}};
}

Vec3 initial_pen_position() { return {475.29, 0.0, -73.65}; }

ArmGeometry datasheet_geometry() {
    ArmGeometry g;
    g.l1 = 290.0;
    g.l2 = 270.0;
    g.l3 = 70.0;
    g.l4 = 302.0;
    g.l5 = 72.0;
    return g;
}

ArmGeometry calibrate_geometry(const ArmGeometry& base, const JointAngles& posture,
                               const Vec3& target) {
    const Vec3 tip = forward_positions(posture, base).finger();

    ArmGeometry unit4 = base;
    unit4.l4 += 1.0;
    ArmGeometry unit5 = base;
    unit5.l5 += 1.0;

    Eigen::Matrix<double, 3, 2> jac;
    jac.col(0) = forward_positions(posture, unit4).finger() - tip;
    jac.col(1) = forward_positions(posture, unit5).finger() - tip;
    const Eigen::Vector2d step = jac.colPivHouseholderQr().solve(target - tip);

    ArmGeometry out = base;
    out.l4 += step(0);
    out.l5 += step(1);
    return out;
}

const ArmGeometry& default_geometry() {
    static const ArmGeometry g =
        calibrate_geometry(datasheet_geometry(), initial_posture(), initial_pen_position());
    return g;
}

Transform4 dh_transform(const DHRow& row) {
    const double cd = std::cos(row.delta);
    const double sd = std::sin(row.delta);
    const double ca = std::cos(row.alpha);
    const double sa = std::sin(row.alpha);

    Transform4 t;
    t.r << cd, -ca * sd, sa * sd,
           sd, ca * cd, -sa * cd,
           0.0, sa, ca;
    t.p = Vec3(row.a * cd, row.a * sd, row.d);
    return t;
}

std::array<DHRow, 6> dh_table(const JointAngles& q, const ArmGeometry& g) {
    return {{
        {q[0], g.l1, 0.0, -kPi / 2.0},
        {q[1] - kPi / 2.0, 0.0, g.l2, 0.0},
        {q[2], 0.0, g.l3, -kPi / 2.0},
        {q[3], g.l4, 0.0, kPi / 2.0},
        {q[4], 0.0, 0.0, -kPi / 2.0},
        {q[5], g.l5, 0.0, 0.0},
    }};
}

std::array<Transform4, 6> forward_transforms(const JointAngles& q, const ArmGeometry& g) {
    const auto rows = dh_table(q, g);
    std::array<Transform4, 6> out;
    Transform4 acc = Transform4::identity();
    for (std::size_t k = 0; k < rows.size(); ++k) {
        acc = acc * dh_transform(rows[k]);
        out[k] = acc;
    }
    return out;
}

JointPositions forward_positions(const JointAngles& q, const ArmGeometry& g) {
    const auto chain = forward_transforms(q, g);
    JointPositions out;
    out.p[0] = Vec3::Zero();
    for (std::size_t k = 0; k < chain.size(); ++k) {
        out.p[k + 1] = chain[k].p;
    }
    return out;
}

Transform4 forward_pose(const JointAngles& q, const ArmGeometry& g) {
    return forward_transforms(q, g).back();
}

Mat3 pen_rotation(double theta, double phi) {
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    const double sp = std::sin(phi);
    const double cp = std::cos(phi);
    Mat3 r;
    r << -st * sp, -ct, -st * cp,
         -ct * sp, st, -ct * cp,
         cp, 0.0, -sp;
    return r;
}

Transform4 pen_pose_matrix(const PenPose& pose, const ArmGeometry& g) {
    return {pen_rotation(pose.theta, pose.phi), g.surface_offset + pose.position};
}

double elbow_flexion(double q3, const ArmGeometry& g) {
    return -q3 - std::atan2(g.l4, g.l3);
}

JointAngles inverse_kinematics(const Transform4& target, const ArmGeometry& g,
                               const std::optional<JointAngles>& prev) {
    JointAngles q;

    // Wrist centre: back off from the pen tip along the pen axis.
    const Vec3 wrist = target.p - g.l5 * target.a();

    const double r1 = std::hypot(wrist.x(), wrist.y());
    const double r2 = wrist.z() - g.l1;
    if (r1 < 1e-12) {
        q[0] = prev ? (*prev)[0] : 0.0;
    } else {
        q[0] = std::atan2(wrist.y(), wrist.x());
    }

    const double l2 = g.l2;
    const double l34 = g.l34();
    const double phi3 = std::atan2(g.l4, g.l3);
    const double cos_phi4 =
        clamp_unit((r1 * r1 + r2 * r2 - l2 * l2 - l34 * l34) / (2.0 * l2 * l34), "elbow acos");
    const double phi4 = std::acos(cos_phi4);
    const double phi1 = std::atan2(l34 * std::sin(phi4), l2 + l34 * std::cos(phi4));
    const double phi2 = std::atan2(r2, r1);

    q[1] = kPi / 2.0 + phi1 - phi2;
    q[2] = -phi3 - phi4;

    const auto rows = dh_table(q, g);
    const Transform4 base_to_elbow =
        dh_transform(rows[0]) * dh_transform(rows[1]) * dh_transform(rows[2]);
    const Mat3 r36 = base_to_elbow.r.transpose() * target.r;

    const double ax = r36(0, 2);
    const double ay = r36(1, 2);
    const double az = r36(2, 2);
    const double nz = r36(2, 0);
    const double oz = r36(2, 1);
    const double s5 = std::hypot(ax, ay);

    if (s5 < kSingularSin) {
        if (!prev) {
            throw Error(ErrorCode::singular,
                        "wrist singularity (|sin q5| = " + std::to_string(s5) +
                            ") without a previous posture");
        }
        // q4 and q6 are coupled; hold q4 and solve the remaining rotation.
        q[3] = (*prev)[3];
        // rest = Rz(q5) Rx(-pi/2) Rz(q6)
        const Mat3 r34 = dh_transform({q[3], 0.0, 0.0, kPi / 2.0}).r;
        const Mat3 rest = r34.transpose() * r36;
        q[4] = std::atan2(-rest(0, 2), rest(1, 2));
        q[5] = std::atan2(-rest(2, 0), -rest(2, 1));
        return q;
    }

    // Third column of 3R6 is (-c4 s5, -s4 s5, c5); the two wrist branches
    // differ by (q4 + pi, -q5, q6 + pi).
    const WristSolution up{std::atan2(-ay, -ax), std::atan2(s5, az), std::atan2(-oz, nz)};
    const WristSolution down{std::atan2(ay, ax), std::atan2(-s5, az), std::atan2(oz, -nz)};

    WristSolution chosen = up;
    if (prev) {
        if (branch_distance(down, *prev) < branch_distance(up, *prev)) chosen = down;
    } else if (!(up.q4 > -kPi / 2.0 && up.q4 <= kPi / 2.0)) {
        chosen = down;
    }
    q[3] = chosen.q4;
    q[4] = chosen.q5;
    q[5] = chosen.q6;
    return q;
}

Mat3 writing_plane_rotation(const Vec3& gamma) {
    return (Eigen::AngleAxisd(gamma.z(), Vec3::UnitZ()) *
            Eigen::AngleAxisd(gamma.y(), Vec3::UnitY()) *
            Eigen::AngleAxisd(gamma.x(), Vec3::UnitX()))
        .toRotationMatrix();
}

PenSample rotate_writing_plane(const PenSample& s, const Vec3& gamma) {
    if (gamma.isZero(0.0)) return s;

    const Mat3 rot = writing_plane_rotation(gamma);
    PenSample out = s;
    const Vec3 pos = rot * Vec3(s.x, s.y, s.z);
    out.x = pos.x();
    out.y = pos.y();
    out.z = pos.z();

    const Vec3 axis = rot * pen_rotation(s.theta, s.phi).col(2);
    const double sin_phi = -axis.z();
    double cos_phi = std::hypot(axis.x(), axis.y());
    if (std::cos(s.phi) < 0.0) cos_phi = -cos_phi;

    out.phi = unwrap_to(std::atan2(sin_phi, cos_phi), s.phi);
    if (std::abs(cos_phi) > 1e-12) {
        out.theta = unwrap_to(std::atan2(-axis.x() / cos_phi, -axis.y() / cos_phi), s.theta);
    }
    return out;
}

double unwrap_to(double angle, double reference) {
    const double two_pi = 2.0 * kPi;
    return angle - two_pi * std::round((angle - reference) / two_pi);
}

}  // namespace vsa::kinematics
