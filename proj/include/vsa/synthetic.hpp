#pragma once

#include <cstdint>

#include "vsa/dataset.hpp"

namespace vsa::synthetic {

/// Parameters of the bundled synthetic corpus. Each signer owns a random
/// prototype made of spline strokes; genuine signatures add a per-signature
/// affine wobble, mild tempo variation and per-sample jitter; skilled
/// forgeries time-warp the prototype and rescale each stroke's amplitude.
struct CorpusConfig {
    std::size_t signers = 20;
    std::size_t genuine = 10;
    std::size_t forgeries = 10;
    std::uint64_t seed = 0;
    double sample_period_ms = 10.0;     // 100 Hz
    double jitter_mm = 0.3;             // per-sample position noise (sd)
    double forgery_amplitude = 0.15;    // max per-stroke amplitude change
};

Dataset make_corpus(const CorpusConfig& config = {});

/// Signer ids are "s00", "s01", ...
std::string signer_name(std::size_t index);

}  // namespace vsa::synthetic
