#pragma once

#include <string>
#include <vector>

namespace vsa {

/// One tablet sample. Lengths in mm, time in ms, angles in rad.
struct PenSample {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;  // pen height above the writing surface
    double pressure = 0.0;
    double t = 0.0;
    double theta = 0.0;  // azimuth
    double phi = 0.0;    // inclination
    bool pen_down = true;
};

enum class SignatureLabel { genuine, skilled_forgery };

struct SignatureTrajectory {
    std::vector<PenSample> samples;
    std::string signer_id;
    std::string signature_id;
    SignatureLabel label = SignatureLabel::genuine;
    // False when the device did not report azimuth/inclination.
    bool has_angles = false;
};

/// Throws Error(invalid_argument) unless the trajectory is non-empty, has a
/// pen-down sample and strictly increasing timestamps.
void validate_trajectory(const SignatureTrajectory& traj);

}  // namespace vsa
