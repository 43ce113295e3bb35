#include <random>

#include "vsa/features.hpp"

namespace vsa::features {

namespace {

struct BoneDistribution {
    double humerus_mean;
    double humerus_sd;
    double radius_mean;
    double radius_sd;
};

// Forensic long-bone lengths in mm.
constexpr BoneDistribution kMale{334.0, 15.8, 265.0, 15.4};
constexpr BoneDistribution kFemale{307.0, 15.9, 238.0, 10.7};

constexpr double kElbowEpsilon = 1.0;

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t signer_seed(std::uint64_t global_seed, const std::string& signer_id) {
    return splitmix64(global_seed ^ splitmix64(fnv1a(signer_id)));
}

Gender sampled_gender(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    std::mt19937_64 rng(seq);
    return std::bernoulli_distribution(0.5)(rng) ? Gender::male : Gender::female;
}

ArmGeometry sample_realistic_geometry(std::uint64_t seed, std::optional<Gender> gender,
                                      const ArmGeometry& base) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    std::mt19937_64 rng(seq);

    // The coin is always drawn so a given seed yields the same bone draws
    // whether or not the gender is forced.
    const bool coin_male = std::bernoulli_distribution(0.5)(rng);
    const Gender g = gender.value_or(coin_male ? Gender::male : Gender::female);
    const BoneDistribution& dist = g == Gender::male ? kMale : kFemale;

    std::normal_distribution<double> humerus(dist.humerus_mean, dist.humerus_sd);
    std::normal_distribution<double> radius(dist.radius_mean, dist.radius_sd);

    ArmGeometry out = base;
    out.l2 = humerus(rng);
    out.l3 = kElbowEpsilon;
    out.l4 = radius(rng);
    return out;
}

}  // namespace vsa::features
