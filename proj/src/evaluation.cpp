#include "vsa/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "vsa/errors.hpp"

namespace vsa::evaluation {

namespace kin = vsa::kinematics;

std::vector<SignerSplit> split_protocol(const Dataset& ds) {
    std::vector<SignerSplit> out;
    out.reserve(ds.signers.size());
    for (const auto& s : ds.signers) {
        if (s.genuine.size() < kEnrollCount + 1) {
            throw Error(ErrorCode::insufficient_genuine,
                        "signer '" + s.id + "' has " + std::to_string(s.genuine.size()) +
                            " genuine signatures, the protocol needs at least " +
                            std::to_string(kEnrollCount + 1));
        }
    }
    for (std::size_t i = 0; i < ds.signers.size(); ++i) {
        const auto& s = ds.signers[i];
        SignerSplit sp;
        sp.signer_id = s.id;
        sp.enroll.assign(s.genuine.begin(), s.genuine.begin() + kEnrollCount);
        sp.test_genuine.assign(s.genuine.begin() + kEnrollCount, s.genuine.end());
        for (std::size_t j = 0; j < ds.signers.size(); ++j) {
            if (j != i) sp.rf_impostors.push_back(ds.signers[j].genuine.front());
        }
        sp.sf_impostors = s.skilled_forgeries;
        out.push_back(std::move(sp));
    }
    return out;
}

std::vector<RocPoint> roc_points(std::span<const double> genuine, std::span<const double> impostor) {
    if (genuine.empty() || impostor.empty()) {
        throw Error(ErrorCode::empty_scores, "ROC needs genuine and impostor scores");
    }
    std::vector<double> g(genuine.begin(), genuine.end());
    std::vector<double> im(impostor.begin(), impostor.end());
    std::sort(g.begin(), g.end());
    std::sort(im.begin(), im.end());

    std::vector<double> thresholds;
    thresholds.reserve(g.size() + im.size() + 1);
    std::merge(g.begin(), g.end(), im.begin(), im.end(), std::back_inserter(thresholds));
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
    thresholds.push_back(std::numeric_limits<double>::infinity());

    const double ng = static_cast<double>(g.size());
    const double ni = static_cast<double>(im.size());
    std::vector<RocPoint> out;
    out.reserve(thresholds.size());
    std::size_t below_g = 0;  // genuine scores < t
    std::size_t below_i = 0;  // impostor scores < t
    for (double t : thresholds) {
        while (below_g < g.size() && g[below_g] < t) ++below_g;
        while (below_i < im.size() && im[below_i] < t) ++below_i;
        out.push_back({t, static_cast<double>(im.size() - below_i) / ni,
                       static_cast<double>(below_g) / ng});
    }
    return out;
}

double compute_eer(std::span<const double> genuine, std::span<const double> impostor) {
    const auto roc = roc_points(genuine, impostor);
    for (std::size_t k = 0; k < roc.size(); ++k) {
        const double gap = roc[k].far - roc[k].frr;
        if (gap > 0.0) continue;
        if (gap == 0.0 || k == 0) return 100.0 * roc[k].frr;
        const double prev_gap = roc[k - 1].far - roc[k - 1].frr;
        const double alpha = prev_gap / (prev_gap - gap);
        return 100.0 * (roc[k - 1].frr + alpha * (roc[k].frr - roc[k - 1].frr));
    }
    return 100.0 * roc.back().frr;  // unreachable: the last point has FAR 0, FRR 1
}

std::vector<Vec3> resample_arc_length(std::span<const Vec3> path, std::size_t n) {
    std::vector<Vec3> out;
    if (path.empty() || n == 0) return out;
    if (path.size() == 1 || n == 1) {
        out.assign(n, path.front());
        return out;
    }
    std::vector<double> s(path.size(), 0.0);
    for (std::size_t i = 1; i < path.size(); ++i) s[i] = s[i - 1] + (path[i] - path[i - 1]).norm();
    const double total = s.back();
    if (!(total > 0.0)) {
        for (std::size_t i = 0; i < path.size(); ++i) {
            s[i] = static_cast<double>(i);
        }
    }
    const double len = s.back();

    out.reserve(n);
    std::size_t seg = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double target = len * static_cast<double>(k) / static_cast<double>(n - 1);
        while (seg + 2 < path.size() && s[seg + 1] < target) ++seg;
        const double span = s[seg + 1] - s[seg];
        const double w = span > 0.0 ? std::clamp((target - s[seg]) / span, 0.0, 1.0) : 0.0;
        out.push_back((1.0 - w) * path[seg] + w * path[seg + 1]);
    }
    out.back() = path.back();
    return out;
}

double snr(std::span<const Vec3> a, std::span<const Vec3> b) {
    if (a.empty() || b.empty()) {
        throw Error(ErrorCode::invalid_argument, "SNR needs two non-empty trajectories");
    }
    std::vector<Vec3> ra, rb;
    if (a.size() != b.size()) {
        const std::size_t n = std::max(a.size(), b.size());
        ra = resample_arc_length(a, n);
        rb = resample_arc_length(b, n);
        a = ra;
        b = rb;
    }
    Vec3 mean = Vec3::Zero();
    for (const auto& p : a) mean += p;
    mean /= static_cast<double>(a.size());

    double signal = 0.0;
    double residual = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        signal += (a[i] - mean).squaredNorm();
        residual += (a[i] - b[i]).squaredNorm();
    }
    if (residual == 0.0) return kSnrCap;
    if (signal == 0.0) return -kSnrCap;
    return std::clamp(10.0 * std::log10(signal / residual), -kSnrCap, kSnrCap);
}

ArmGeometry signer_geometry(GeometryMode mode, std::uint64_t seed, const std::string& signer_id) {
    if (mode == GeometryMode::fixed) return kin::default_geometry();
    return features::sample_realistic_geometry(features::signer_seed(seed, signer_id));
}

double roundtrip_snr(const SignatureTrajectory& traj, const ArmGeometry& extract,
                     const features::ExtractionConfig& config, const ArmGeometry& reconstruct) {
    const SignatureTrajectory prepared = features::prepare_trajectory(traj, extract, config);
    const features::AnthroSequence seq = features::extract_anthro(prepared, extract, config);

    std::vector<Vec3> input, rebuilt;
    input.reserve(prepared.samples.size());
    rebuilt.reserve(prepared.samples.size());
    for (std::size_t i = 0; i < prepared.samples.size(); ++i) {
        const auto& s = prepared.samples[i];
        input.emplace_back(s.x, s.y, s.z);
        rebuilt.push_back(kin::forward_positions(seq.angles[i], reconstruct).finger() -
                          reconstruct.surface_offset);
    }
    return snr(input, rebuilt);
}

namespace {

template <class GeometryFn>
std::vector<SnrRecord> validate_all(const Dataset& ds, const features::ExtractionConfig& config,
                                    GeometryFn geometry_for) {
    std::vector<SnrRecord> out;
    for (const auto& signer : ds.signers) {
        const ArmGeometry g = geometry_for(signer.id);
        for (const auto* list : {&signer.genuine, &signer.skilled_forgeries}) {
            for (const auto& traj : *list) {
                SnrRecord r;
                r.signer_id = signer.id;
                r.signature_id = traj.signature_id;
                r.samples = traj.samples.size();
                try {
                    r.snr_db = roundtrip_snr(traj, g, config, g);
                } catch (const Error& e) {
                    throw Error(e.code(), signer.id + "/" + traj.signature_id + ": " + e.what());
                }
                out.push_back(std::move(r));
            }
        }
    }
    return out;
}

}  // namespace

std::vector<SnrRecord> roundtrip_validation(const Dataset& ds, const ArmGeometry& g,
                                            const features::ExtractionConfig& config) {
    return validate_all(ds, config, [&g](const std::string&) { return g; });
}

std::vector<SnrRecord> roundtrip_validation(const Dataset& ds,
                                            const features::ExtractionConfig& config,
                                            GeometryMode mode, std::uint64_t seed) {
    return validate_all(ds, config, [mode, seed](const std::string& id) {
        return signer_geometry(mode, seed, id);
    });
}

std::string to_string(VerifierKind v) { return v == VerifierKind::dtw ? "dtw" : "man"; }

std::string to_string(FusionMode f) {
    switch (f) {
        case FusionMode::none: return "none";
        case FusionMode::feature: return "feature";
        case FusionMode::score: return "score";
    }
    return "none";
}

std::string to_string(GeometryMode g) { return g == GeometryMode::fixed ? "fixed" : "realistic"; }

std::string to_string(features::FeatureKind k) {
    switch (k) {
        case features::FeatureKind::position: return "position";
        case features::FeatureKind::angle: return "angle";
        case features::FeatureKind::fused: return "fused";
    }
    return "fused";
}

std::string to_string(TrialKind k) {
    switch (k) {
        case TrialKind::genuine: return "genuine";
        case TrialKind::random_forgery: return "rf";
        case TrialKind::skilled_forgery: return "sf";
    }
    return "genuine";
}

}  // namespace vsa::evaluation
