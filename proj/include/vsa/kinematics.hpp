#pragma once

#include <array>
#include <optional>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "vsa/trajectory.hpp"

/**
 * Virtual skeletal arm kinematics.
 *
 * Six revolute joints (waist, shoulder, elbow, forearm roll, wrist, hand)
 * with standard Denavit-Hartenberg links:
 *
 *   | k | delta      | d  | a  | alpha |
 *   |---|------------|----|----|-------|
 *   | 1 | q1         | L1 | 0  | -pi/2 |
 *   | 2 | q2 - pi/2  | 0  | L2 | 0     |
 *   | 3 | q3         | 0  | L3 | -pi/2 |
 *   | 4 | q4         | L4 | 0  | pi/2  |
 *   | 5 | q5         | 0  | 0  | -pi/2 |
 *   | 6 | q6         | L5 | 0  | 0     |
 *
 * Frame 0 sits on the waist with z pointing up; frame 6 sits on the pen tip
 * with z along the pen. All lengths are in mm.
 */
namespace vsa::kinematics {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Rigid homogeneous transform; the implicit bottom row is [0 0 0 1].
struct Transform4 {
    Mat3 r = Mat3::Identity();
    Vec3 p = Vec3::Zero();

    static Transform4 identity() { return {}; }
    static Transform4 translation(const Vec3& t) { return {Mat3::Identity(), t}; }
    static Transform4 translation(double x, double y, double z) {
        return translation(Vec3(x, y, z));
    }

    Eigen::Matrix4d matrix() const;

    // Columns of the rotation block.
    Vec3 n() const { return r.col(0); }
    Vec3 o() const { return r.col(1); }
    Vec3 a() const { return r.col(2); }
};

Transform4 compose(const Transform4& a, const Transform4& b);
Transform4 invert(const Transform4& t);
inline Transform4 operator*(const Transform4& a, const Transform4& b) { return compose(a, b); }

struct ArmGeometry {
    double l1 = 0.0;  // trunk
    double l2 = 0.0;  // humerus
    double l3 = 0.0;  // elbow offset
    double l4 = 0.0;  // forearm
    double l5 = 0.0;  // hand + pen
    Vec3 surface_offset = Vec3::Zero();

    /// sqrt(L3^2 + L4^2): elbow-to-wrist distance.
    double l34() const;
};

struct DHRow {
    double delta = 0.0;
    double d = 0.0;
    double a = 0.0;
    double alpha = 0.0;
};

struct JointAngles {
    std::array<double, 6> q{};

    double& operator[](std::size_t k) { return q[k]; }
    double operator[](std::size_t k) const { return q[k]; }
};

/// Positions of the seven frame origins, p[0] (waist) .. p[6] (pen tip).
struct JointPositions {
    std::array<Vec3, 7> p;

    const Vec3& elbow() const { return p[2]; }
    const Vec3& wrist() const { return p[5]; }
    const Vec3& finger() const { return p[6]; }
};

struct PenPose {
    Vec3 position = Vec3::Zero();
    double theta = 0.0;  // azimuth
    double phi = 0.0;    // inclination
};

/// Writing posture used as the starting pose of every trajectory:
/// (0, 3pi/4, -2pi/3, 0, pi/2, 0).
JointAngles initial_posture();

/// Pen-tip position the initial posture must reach, in mm.
Vec3 initial_pen_position();

/// Datasheet link lengths of the reference arm (L1 = 290, L2 = 270, L3 = 70,
/// L4 = 302, L5 = 72).
ArmGeometry datasheet_geometry();

/**
 * Adjusts L4 and L5 of `base` so the pen tip of `posture` lands on `target`.
 *
 * Joint positions are linear in the link lengths for a fixed posture, so this
 * is an exact 2x2 linear solve in the (x, z) plane of the arm. L5 alone
 * cannot reach the default checkpoint; at the initial posture the L4 link is
 * orthogonal to the pen axis, which makes (L4, L5) the smallest correction.
 */
ArmGeometry calibrate_geometry(const ArmGeometry& base, const JointAngles& posture,
                               const Vec3& target);

/// Datasheet geometry calibrated against the initial posture checkpoint.
const ArmGeometry& default_geometry();

Transform4 dh_transform(const DHRow& row);
std::array<DHRow, 6> dh_table(const JointAngles& q, const ArmGeometry& g);

/// Cumulative transforms 0T1 .. 0T6.
std::array<Transform4, 6> forward_transforms(const JointAngles& q, const ArmGeometry& g);
JointPositions forward_positions(const JointAngles& q, const ArmGeometry& g);
Transform4 forward_pose(const JointAngles& q, const ArmGeometry& g);

/// Rotation block of the pen frame for azimuth/inclination (theta, phi).
Mat3 pen_rotation(double theta, double phi);
/// Pose of the pen tip in the arm base frame.
Transform4 pen_pose_matrix(const PenPose& pose, const ArmGeometry& g);

/// Elbow angle measured from full extension (0) to full contraction (pi).
double elbow_flexion(double q3, const ArmGeometry& g);

inline constexpr double kSingularSin = 1e-3;
inline constexpr double kDomainSlack = 1e-9;

/**
 * Closed-form inverse kinematics by kinematic decoupling.
 *
 * Throws UnreachableError when the wrist lies outside the annulus reachable
 * by (L2, L34), and Error(singular) when |sin q5| < 1e-3 and no `prev` is
 * given. With `prev`, the wrist branch closest to `prev` is returned; without
 * it, the branch with q4 in (-pi/2, pi/2].
 */
JointAngles inverse_kinematics(const Transform4& target, const ArmGeometry& g,
                               const std::optional<JointAngles>& prev = std::nullopt);

/// Rz(rz) * Ry(ry) * Rx(rx).
Mat3 writing_plane_rotation(const Vec3& gamma);

/// Rotates the pen position and pen axis of `s` by the writing-plane
/// rotation and re-extracts (theta, phi) from the rotated axis. The returned
/// angles keep the sign of cos(phi) and are wrapped to the 2pi-representative
/// nearest the input angles.
PenSample rotate_writing_plane(const PenSample& s, const Vec3& gamma);

/// Wraps `angle` by multiples of 2pi to the value closest to `reference`.
double unwrap_to(double angle, double reference);

}  // namespace vsa::kinematics
