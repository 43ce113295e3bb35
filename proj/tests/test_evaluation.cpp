#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "vsa/errors.hpp"
#include "vsa/evaluation.hpp"
#include "vsa/io.hpp"
#include "vsa/synthetic.hpp"

namespace ev = vsa::evaluation;
namespace kin = vsa::kinematics;
using kin::Vec3;

namespace {

vsa::SignatureTrajectory stub(const std::string& signer, const std::string& id) {
    vsa::SignatureTrajectory t;
    t.signer_id = signer;
    t.signature_id = id;
    t.samples.emplace_back();
    return t;
}

vsa::Dataset stub_dataset(std::size_t signers, std::size_t genuine, std::size_t forgeries) {
    vsa::Dataset ds;
    for (std::size_t s = 0; s < signers; ++s) {
        vsa::SignerData sd;
        sd.id = "u" + std::to_string(s);
        for (std::size_t g = 0; g < genuine; ++g) sd.genuine.push_back(stub(sd.id, "g" + std::to_string(g)));
        for (std::size_t f = 0; f < forgeries; ++f) {
            sd.skilled_forgeries.push_back(stub(sd.id, "f" + std::to_string(f)));
        }
        ds.signers.push_back(std::move(sd));
    }
    return ds;
}

const vsa::Dataset& small_corpus() {
    static const vsa::Dataset ds = [] {
        vsa::synthetic::CorpusConfig c;
        c.signers = 4;
        c.genuine = 7;
        c.forgeries = 3;
        c.seed = 3;
        return vsa::synthetic::make_corpus(c);
    }();
    return ds;
}

void expect_same_trials(const ev::EERReport& a, const ev::EERReport& b) {
    ASSERT_EQ(a.trials.size(), b.trials.size());
    for (std::size_t i = 0; i < a.trials.size(); ++i) {
        EXPECT_EQ(a.trials[i].signature_id, b.trials[i].signature_id);
        EXPECT_EQ(a.trials[i].claimed_signer, b.trials[i].claimed_signer);
        EXPECT_EQ(a.trials[i].score, b.trials[i].score) << i;
    }
    EXPECT_EQ(a.eer_rf, b.eer_rf);
    EXPECT_EQ(a.eer_sf, b.eer_sf);
}

}  // namespace

// ---------------------------------------------------------------------------
// Protocol

TEST(Protocol, FiveEnrollTwentyTest) {
    const auto splits = ev::split_protocol(stub_dataset(100, 25, 25));
    ASSERT_EQ(splits.size(), 100u);
    for (std::size_t i = 0; i < splits.size(); ++i) {
        const auto& s = splits[i];
        EXPECT_EQ(s.enroll.size(), 5u);
        EXPECT_EQ(s.test_genuine.size(), 20u);
        EXPECT_EQ(s.rf_impostors.size(), 99u);
        EXPECT_EQ(s.sf_impostors.size(), 25u);
        EXPECT_EQ(s.enroll.front().signature_id, "g0");
        EXPECT_EQ(s.test_genuine.front().signature_id, "g5");
        for (const auto& r : s.rf_impostors) {
            EXPECT_NE(r.signer_id, s.signer_id);
            EXPECT_EQ(r.signature_id, "g0");
        }
    }
}

TEST(Protocol, NoForgeries) {
    const auto splits = ev::split_protocol(stub_dataset(3, 6, 0));
    for (const auto& s : splits) {
        EXPECT_TRUE(s.sf_impostors.empty());
        EXPECT_EQ(s.test_genuine.size(), 1u);
    }
}

TEST(Protocol, InsufficientGenuine) {
    auto ds = stub_dataset(3, 6, 0);
    ds.signers[1].genuine.pop_back();
    try {
        ev::split_protocol(ds);
        FAIL();
    } catch (const vsa::Error& e) {
        EXPECT_EQ(e.code(), vsa::ErrorCode::insufficient_genuine);
        EXPECT_NE(std::string(e.what()).find("u1"), std::string::npos);
    }
}

// ---------------------------------------------------------------------------
// EER

TEST(Eer, HandExample) {
    const std::vector<double> g{0.9, 0.8, 0.2}, i{0.7, 0.1, 0.15};
    EXPECT_NEAR(ev::compute_eer(g, i), 100.0 / 3.0, 1e-12);
}

TEST(Eer, PerfectSeparationIsZero) {
    const std::vector<double> g{0.9, 0.8, 0.7}, i{0.1, 0.2};
    EXPECT_EQ(ev::compute_eer(g, i), 0.0);
}

TEST(Eer, IdenticalScoresGiveFifty) {
    const std::vector<double> g{0.5, 0.5}, i{0.5, 0.5, 0.5};
    EXPECT_DOUBLE_EQ(ev::compute_eer(g, i), 50.0);
}

TEST(Eer, FullyInvertedIsHundred) {
    const std::vector<double> g{0.1, 0.2}, i{0.8, 0.9};
    EXPECT_DOUBLE_EQ(ev::compute_eer(g, i), 100.0);
}

TEST(Eer, MatchesBruteForceOracle) {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> count(1, 30), level(0, 20);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> g(static_cast<std::size_t>(count(rng)));
        std::vector<double> i(static_cast<std::size_t>(count(rng)));
        for (auto& v : g) v = 0.05 * level(rng) + 0.2;
        for (auto& v : i) v = 0.05 * level(rng);
        ASSERT_NEAR(ev::compute_eer(g, i), vsa::testing::brute_force_eer(g, i), 1e-9) << trial;
    }
}

TEST(Eer, InvariantUnderMonotoneMaps) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> g(20), i(35);
        for (auto& v : g) v = n01(rng) + 1.0;
        for (auto& v : i) v = n01(rng);
        auto mg = g, mi = i;
        for (auto& v : mg) v = std::exp(v);
        for (auto& v : mi) v = std::exp(v);
        EXPECT_EQ(ev::compute_eer(g, i), ev::compute_eer(mg, mi));
    }
}

TEST(Eer, FlipSymmetryForDistinctScores) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> g(15), i(15);
        for (auto& v : g) v = n01(rng) + 0.8;
        for (auto& v : i) v = n01(rng);
        std::vector<double> fg, fi;
        for (double v : i) fg.push_back(-v);
        for (double v : g) fi.push_back(-v);
        EXPECT_NEAR(ev::compute_eer(g, i), ev::compute_eer(fg, fi), 100.0 / 15.0 + 1e-9);
    }
}

TEST(Eer, RocEndpoints) {
    const std::vector<double> g{0.9, 0.4}, i{0.4, 0.1};
    const auto roc = ev::roc_points(g, i);
    ASSERT_EQ(roc.size(), 4u);
    EXPECT_EQ(roc.front().far, 1.0);
    EXPECT_EQ(roc.front().frr, 0.0);
    EXPECT_TRUE(std::isinf(roc.back().threshold));
    EXPECT_EQ(roc.back().far, 0.0);
    EXPECT_EQ(roc.back().frr, 1.0);
    EXPECT_EQ(roc[1].threshold, 0.4);
    EXPECT_EQ(roc[1].far, 0.5);
    EXPECT_EQ(roc[1].frr, 0.0);
}

TEST(Eer, EmptyScores) {
    const std::vector<double> g{0.5}, none;
    for (auto fn : {+[](std::span<const double> a, std::span<const double> b) { ev::compute_eer(a, b); }}) {
        try {
            fn(g, none);
            FAIL();
        } catch (const vsa::Error& e) {
            EXPECT_EQ(e.code(), vsa::ErrorCode::empty_scores);
        }
        try {
            fn(none, g);
            FAIL();
        } catch (const vsa::Error& e) {
            EXPECT_EQ(e.code(), vsa::ErrorCode::empty_scores);
        }
    }
}

// ---------------------------------------------------------------------------
// SNR

TEST(Snr, CapsAndHandExample) {
    const std::vector<Vec3> a{{0, 0, 0}, {2, 0, 0}, {0, 2, 0}, {2, 2, 0}};
    EXPECT_EQ(ev::snr(a, a), ev::kSnrCap);
    auto b = a;
    b[3].x() += 0.1;
    // Signal 4 * 2 = 8, residual 0.01.
    EXPECT_NEAR(ev::snr(a, b), 10.0 * std::log10(800.0), 1e-9);
    const std::vector<Vec3> flat(4, Vec3(1, 1, 1));
    EXPECT_EQ(ev::snr(flat, a), -ev::kSnrCap);
}

TEST(Snr, MeanReconstructionIsZeroDb) {
    const std::vector<Vec3> a{{0, 0, 0}, {3, 1, 0}, {1, 4, 2}};
    const Vec3 mean = (a[0] + a[1] + a[2]) / 3.0;
    const std::vector<Vec3> b(3, mean);
    EXPECT_NEAR(ev::snr(a, b), 0.0, 1e-12);
}

TEST(Snr, TranslationInvariant) {
    const std::vector<Vec3> a{{0, 0, 0}, {3, 1, 0}, {1, 4, 2}, {5, 5, 5}};
    const std::vector<Vec3> b{{0.1, 0, 0}, {3, 1.2, 0}, {1, 4, 2.1}, {5, 5, 5}};
    const Vec3 shift(400, -20, 7);
    std::vector<Vec3> as, bs;
    for (const auto& p : a) as.push_back(p + shift);
    for (const auto& p : b) bs.push_back(p + shift);
    EXPECT_NEAR(ev::snr(a, b), ev::snr(as, bs), 1e-9);
}

TEST(Snr, UnequalLengthsResampleByArcLength) {
    const std::vector<Vec3> a{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    const std::vector<Vec3> b{{0, 0, 0}, {0.5, 0, 0}, {1, 0, 0}, {1.5, 0, 0}, {2, 0, 0}};
    EXPECT_GE(ev::snr(a, b), 250.0);
    const auto r = ev::resample_arc_length(a, 5);
    ASSERT_EQ(r.size(), 5u);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR((r[i] - b[i]).norm(), 0.0, 1e-12);
}

TEST(Roundtrip, TwoPointStroke) {
    vsa::SignatureTrajectory t;
    t.signer_id = "u";
    t.signature_id = "two";
    for (int i = 0; i < 2; ++i) {
        vsa::PenSample s;
        s.x = 3.0 * i;
        s.y = 1.0 * i;
        s.t = 10.0 * i;
        t.samples.push_back(s);
    }
    const auto& g = kin::default_geometry();
    EXPECT_GE(ev::roundtrip_snr(t, g, {}, g), 200.0);
}

TEST(Roundtrip, WrongHandLengthIsDetected) {
    const auto& t = small_corpus().signers[0].genuine[0];
    const auto& g = kin::default_geometry();
    EXPECT_GE(ev::roundtrip_snr(t, g, {}, g), 60.0);
    auto longer = g;
    longer.l5 += 10.0;
    EXPECT_LT(ev::roundtrip_snr(t, g, {}, longer), 60.0);
}

TEST(Roundtrip, RealisticGeometriesValidate) {
    const auto records =
        ev::roundtrip_validation(small_corpus(), {}, ev::GeometryMode::realistic, 7);
    EXPECT_EQ(records.size(), small_corpus().signature_count());
    for (const auto& r : records) EXPECT_GE(r.snr_db, 60.0) << r.signer_id << "/" << r.signature_id;
}

// ---------------------------------------------------------------------------
// Benchmark

TEST(Benchmark, CountsAndDeterminism) {
    ev::BenchmarkConfig c;
    const auto a = ev::run_benchmark(small_corpus(), c);
    EXPECT_EQ(a.genuine_count, 4u * 2u);
    EXPECT_EQ(a.rf_count, 4u * 3u);
    EXPECT_EQ(a.sf_count, 4u * 3u);
    EXPECT_EQ(a.trials.size(), 8u + 12u + 12u);
    ASSERT_TRUE(a.eer_sf.has_value());
    EXPECT_EQ(a.fusion_mode, "score");
    for (const auto& t : a.trials) {
        EXPECT_GE(t.score, 0.0);
        EXPECT_LE(t.score, 1.0);
        EXPECT_FALSE(std::isnan(t.raw_angle));
    }
    const auto b = ev::run_benchmark(small_corpus(), c);
    EXPECT_EQ(vsa::io::report_to_json(a), vsa::io::report_to_json(b));
    expect_same_trials(a, b);
}

TEST(Benchmark, ThreadCountDoesNotChangeResults) {
    for (auto verifier : {ev::VerifierKind::dtw, ev::VerifierKind::manhattan}) {
        ev::BenchmarkConfig c;
        c.verifier = verifier;
        const auto one = ev::run_benchmark(small_corpus(), c);
        c.threads = 3;
        const auto three = ev::run_benchmark(small_corpus(), c);
        EXPECT_EQ(vsa::io::report_to_json(one), vsa::io::report_to_json(three));
        expect_same_trials(one, three);
    }
}

TEST(Benchmark, OmegaEndpointsMatchSingleChannel) {
    for (auto verifier : {ev::VerifierKind::dtw, ev::VerifierKind::manhattan}) {
        ev::BenchmarkConfig fused;
        fused.verifier = verifier;
        ev::BenchmarkConfig single = fused;

        fused.omega = 1.0;
        single.feature_kind = vsa::features::FeatureKind::position;
        expect_same_trials(ev::run_benchmark(small_corpus(), fused),
                           ev::run_benchmark(small_corpus(), single));

        fused.omega = 0.0;
        single.feature_kind = vsa::features::FeatureKind::angle;
        expect_same_trials(ev::run_benchmark(small_corpus(), fused),
                           ev::run_benchmark(small_corpus(), single));
    }
}

TEST(Benchmark, FeatureFusionUsesOneChannel) {
    ev::BenchmarkConfig c;
    c.fusion = ev::FusionMode::feature;
    const auto r = ev::run_benchmark(small_corpus(), c);
    EXPECT_EQ(r.fusion_mode, "feature");
    for (const auto& t : r.trials) EXPECT_TRUE(std::isnan(t.raw_angle));
}

TEST(Benchmark, WithoutForgeriesOmitsSkilledRate) {
    vsa::Dataset ds = small_corpus();
    for (auto& s : ds.signers) s.skilled_forgeries.clear();
    const auto r = ev::run_benchmark(ds, {});
    EXPECT_FALSE(r.eer_sf.has_value());
    EXPECT_EQ(r.sf_count, 0u);
    EXPECT_TRUE(vsa::io::report_to_json(r)["eer_sf"].is_null());
}

TEST(Benchmark, RealisticGeometryIsSeeded) {
    ev::BenchmarkConfig c;
    c.geometry = ev::GeometryMode::realistic;
    c.seed = 7;
    const auto a = ev::run_benchmark(small_corpus(), c);
    const auto b = ev::run_benchmark(small_corpus(), c);
    expect_same_trials(a, b);
    EXPECT_EQ(a.geometry_mode, "realistic");
}
