#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "vsa/errors.hpp"
#include "vsa/evaluation.hpp"
#include "vsa/verifiers.hpp"

namespace vsa::evaluation {

namespace {

namespace ver = vsa::verifiers;
using features::FeatureKind;

// One verifier channel: what gets templated and scored on its own.
enum class Channel { position, angle, fused };

std::vector<Channel> channels_for(const BenchmarkConfig& c) {
    switch (c.feature_kind) {
        case FeatureKind::position: return {Channel::position};
        case FeatureKind::angle: return {Channel::angle};
        case FeatureKind::fused:
            if (c.fusion == FusionMode::score) return {Channel::position, Channel::angle};
            return {Channel::fused};
    }
    return {Channel::fused};
}

struct Representation {
    ver::FeatureMatrix matrix;
    ver::HistogramVector histogram;
};

Representation represent(const features::AnthroSequence& seq, Channel ch, VerifierKind v,
                         const Vec3& normal) {
    Representation r;
    if (v == VerifierKind::dtw) {
        const FeatureKind k = ch == Channel::position ? FeatureKind::position
                              : ch == Channel::angle  ? FeatureKind::angle
                                                      : FeatureKind::fused;
        r.matrix = features::build_feature_matrix(seq, k);
        return r;
    }
    switch (ch) {
        case Channel::position: r.histogram = ver::position_histograms(seq, normal); break;
        case Channel::angle: r.histogram = ver::angle_histograms(seq.angles); break;
        case Channel::fused:
            r.histogram = ver::fuse_histograms(ver::position_histograms(seq, normal),
                                               ver::angle_histograms(seq.angles));
            break;
    }
    return r;
}

struct Questioned {
    const SignatureTrajectory* traj;
    TrialKind kind;
};

struct SignerResult {
    std::vector<TrialScore> trials;
};

std::string context(const SignatureTrajectory& t) { return t.signer_id + "/" + t.signature_id; }

SignerResult score_signer(const SignerSplit& split, const BenchmarkConfig& config,
                          const Vec3& normal) {
    const ArmGeometry g = signer_geometry(config.geometry, config.seed, split.signer_id);
    const auto channels = channels_for(config);

    auto extract = [&](const SignatureTrajectory& t) {
        try {
            return features::extract_features(t, g, config.extraction);
        } catch (const Error& e) {
            throw Error(e.code(), "claimed signer " + split.signer_id + ", signature " +
                                      context(t) + ": " + e.what());
        }
    };
    auto represent_all = [&](const features::AnthroSequence& seq, const SignatureTrajectory& t) {
        std::vector<Representation> reps;
        try {
            for (Channel ch : channels) reps.push_back(represent(seq, ch, config.verifier, normal));
        } catch (const Error& e) {
            throw Error(e.code(), "signature " + context(t) + ": " + e.what());
        }
        return reps;
    };

    // Templates, one per channel.
    std::vector<std::vector<Representation>> enrolled(channels.size());
    for (const auto& t : split.enroll) {
        auto reps = represent_all(extract(t), t);
        for (std::size_t c = 0; c < channels.size(); ++c) enrolled[c].push_back(std::move(reps[c]));
    }
    std::vector<ver::DtwTemplate> dtw_templates;
    std::vector<ver::HistogramTemplate> hist_templates;
    for (std::size_t c = 0; c < channels.size(); ++c) {
        if (config.verifier == VerifierKind::dtw) {
            std::vector<ver::FeatureMatrix> refs;
            for (auto& r : enrolled[c]) refs.push_back(std::move(r.matrix));
            dtw_templates.push_back(ver::build_dtw_template(split.signer_id, std::move(refs)));
        } else {
            std::vector<ver::HistogramVector> refs;
            for (auto& r : enrolled[c]) refs.push_back(std::move(r.histogram));
            hist_templates.push_back(ver::build_histogram_template(split.signer_id, refs));
        }
    }

    std::vector<Questioned> questioned;
    for (const auto& t : split.test_genuine) questioned.push_back({&t, TrialKind::genuine});
    for (const auto& t : split.rf_impostors) questioned.push_back({&t, TrialKind::random_forgery});
    for (const auto& t : split.sf_impostors) questioned.push_back({&t, TrialKind::skilled_forgery});

    SignerResult out;
    out.trials.reserve(questioned.size());
    for (const auto& q : questioned) {
        const auto reps = represent_all(extract(*q.traj), *q.traj);
        std::vector<ver::Score> scores;
        for (std::size_t c = 0; c < channels.size(); ++c) {
            scores.push_back(config.verifier == VerifierKind::dtw
                                 ? ver::dtw_verify(dtw_templates[c], reps[c].matrix)
                                 : ver::manhattan_score(hist_templates[c], reps[c].histogram));
        }
        TrialScore ts;
        ts.claimed_signer = split.signer_id;
        ts.signer_id = q.traj->signer_id;
        ts.signature_id = q.traj->signature_id;
        ts.kind = q.kind;
        if (scores.size() == 2) {
            ts.score = ver::fuse_scores(scores[0].value, scores[1].value, config.omega);
            ts.raw_position = scores[0].raw_distance;
            ts.raw_angle = scores[1].raw_distance;
        } else {
            ts.score = scores[0].value;
            ts.raw_position = scores[0].raw_distance;
            ts.raw_angle = std::numeric_limits<double>::quiet_NaN();
        }
        out.trials.push_back(std::move(ts));
    }
    return out;
}

}  // namespace

EERReport run_benchmark(const Dataset& ds, const BenchmarkConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    const auto splits = split_protocol(ds);
    const Vec3 normal = kinematics::writing_plane_rotation(config.extraction.gamma) * Vec3::UnitZ();

    // Work is handed out by signer index; results land in fixed slots and
    // are reduced in signer order, so scheduling cannot affect the report.
    std::vector<SignerResult> results(splits.size());
    std::vector<std::exception_ptr> errors(splits.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < splits.size(); i = next++) {
            try {
                results[i] = score_signer(splits[i], config, normal);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const unsigned threads =
        std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(splits.size())));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    EERReport report;
    report.feature_kind = to_string(config.feature_kind);
    report.verifier = to_string(config.verifier);
    report.fusion_mode =
        config.feature_kind == FeatureKind::fused
            ? to_string(config.fusion == FusionMode::score ? FusionMode::score : FusionMode::feature)
            : to_string(FusionMode::none);
    report.geometry_mode = to_string(config.geometry);
    report.omega = config.omega;
    report.seed = config.seed;

    std::vector<double> genuine, rf, sf;
    for (auto& r : results) {
        for (auto& t : r.trials) {
            switch (t.kind) {
                case TrialKind::genuine: genuine.push_back(t.score); break;
                case TrialKind::random_forgery: rf.push_back(t.score); break;
                case TrialKind::skilled_forgery: sf.push_back(t.score); break;
            }
            report.trials.push_back(std::move(t));
        }
    }
    report.genuine_count = genuine.size();
    report.rf_count = rf.size();
    report.sf_count = sf.size();
    report.eer_rf = compute_eer(genuine, rf);
    report.roc_rf = roc_points(genuine, rf);
    if (!sf.empty()) {
        report.eer_sf = compute_eer(genuine, sf);
        report.roc_sf = roc_points(genuine, sf);
    }
    report.runtime_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    return report;
}

}  // namespace vsa::evaluation
