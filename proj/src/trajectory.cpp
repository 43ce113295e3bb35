#include "vsa/trajectory.hpp"

#include <algorithm>

#include "vsa/errors.hpp"

namespace vsa {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::unreachable: return "Unreachable";
        case ErrorCode::singular: return "Singular";
        case ErrorCode::missing_angles: return "MissingAngles";
        case ErrorCode::too_short: return "TooShort";
        case ErrorCode::channel_mismatch: return "ChannelMismatch";
        case ErrorCode::empty_template: return "EmptyTemplate";
        case ErrorCode::degenerate: return "Degenerate";
        case ErrorCode::layout_mismatch: return "LayoutMismatch";
        case ErrorCode::length_mismatch: return "LengthMismatch";
        case ErrorCode::insufficient_genuine: return "InsufficientGenuine";
        case ErrorCode::empty_scores: return "EmptyScores";
        case ErrorCode::parse_error: return "ParseError";
        case ErrorCode::missing_manifest: return "MissingManifest";
        case ErrorCode::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

void validate_trajectory(const SignatureTrajectory& traj) {
    const std::string who = traj.signer_id + "/" + traj.signature_id;
    if (traj.samples.empty()) {
        throw Error(ErrorCode::invalid_argument, who + ": empty trajectory");
    }
    const bool any_down = std::any_of(traj.samples.begin(), traj.samples.end(),
                                      [](const PenSample& s) { return s.pen_down; });
    if (!any_down) {
        throw Error(ErrorCode::invalid_argument, who + ": no pen-down sample");
    }
    for (std::size_t i = 1; i < traj.samples.size(); ++i) {
        if (!(traj.samples[i].t > traj.samples[i - 1].t)) {
            throw Error(ErrorCode::invalid_argument,
                        who + ": timestamps not strictly increasing at sample " +
                            std::to_string(i));
        }
    }
}

}  // namespace vsa
