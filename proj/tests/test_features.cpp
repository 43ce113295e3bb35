#include <gtest/gtest.h>

#include "support.hpp"
#include "vsa/errors.hpp"
#include "vsa/evaluation.hpp"
#include "vsa/features.hpp"
#include "vsa/synthetic.hpp"

namespace kin = vsa::kinematics;
namespace ft = vsa::features;
using kin::Vec3;
using vsa::testing::kPi;

namespace {

vsa::SignatureTrajectory line_trajectory(std::size_t n, double dx = 0.5) {
    vsa::SignatureTrajectory t;
    t.signer_id = "u";
    t.signature_id = "line";
    for (std::size_t i = 0; i < n; ++i) {
        vsa::PenSample s;
        s.x = dx * static_cast<double>(i);
        s.y = 0.2 * static_cast<double>(i);
        s.t = 10.0 * static_cast<double>(i);
        s.pen_down = true;
        t.samples.push_back(s);
    }
    return t;
}

const vsa::Dataset& corpus() {
    static const vsa::Dataset ds = vsa::synthetic::make_corpus();
    return ds;
}

}  // namespace

TEST(PenAngles, FixedModeOverwrites) {
    auto t = line_trajectory(5);
    t.samples[2].theta = 1.0;
    const auto r = ft::resolve_pen_angles(t, ft::ExtractionConfig{});
    for (const auto& s : r.samples) {
        EXPECT_DOUBLE_EQ(s.theta, kPi / 3);
        EXPECT_DOUBLE_EQ(s.phi, 3 * kPi / 4);
    }
}

TEST(PenAngles, RawModeNeedsAngles) {
    ft::ExtractionConfig c;
    c.pen_angle_mode = ft::PenAngleMode::raw;
    try {
        ft::resolve_pen_angles(line_trajectory(5), c);
        FAIL();
    } catch (const vsa::Error& e) {
        EXPECT_EQ(e.code(), vsa::ErrorCode::missing_angles);
    }
}

TEST(PenAngles, SmoothingConstantIsUnchanged) {
    auto t = line_trajectory(20);
    t.has_angles = true;
    for (auto& s : t.samples) {
        s.theta = 0.8;
        s.phi = 2.0;
    }
    ft::ExtractionConfig c;
    c.pen_angle_mode = ft::PenAngleMode::smoothed;
    const auto r = ft::resolve_pen_angles(t, c);
    for (const auto& s : r.samples) {
        EXPECT_NEAR(s.theta, 0.8, 1e-15);
        EXPECT_NEAR(s.phi, 2.0, 1e-15);
    }
}

TEST(PenAngles, SmoothingSpikeSpreadsOverSpan) {
    auto t = line_trajectory(16);
    t.has_angles = true;
    for (auto& s : t.samples) s.theta = 0.0;
    t.samples[1].theta = 15.0;
    ft::ExtractionConfig c;
    c.pen_angle_mode = ft::PenAngleMode::smoothed;
    const auto r = ft::resolve_pen_angles(t, c);
    // Sample 8 has the full 15-sample window [1, 15], which covers the spike.
    EXPECT_NEAR(r.samples[8].theta, 1.0, 1e-12);
    // Sample 9's window [2, 15] (truncated at the end) misses it.
    EXPECT_NEAR(r.samples[9].theta, 0.0, 1e-12);
    // Near the start the window shrinks: sample 0 averages [0, 7].
    EXPECT_NEAR(r.samples[0].theta, 15.0 / 8.0, 1e-12);
}

TEST(PenUp, LiftModes) {
    auto t = line_trajectory(6);
    for (std::size_t i = 0; i < 6; ++i) t.samples[i].pen_down = i % 2 == 0;
    const auto lift = ft::apply_penup_lift(t, ft::PenUpMode::lift5mm);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(lift.samples[i].z, i % 2 == 0 ? 0.0 : 5.0);
    for (auto mode : {ft::PenUpMode::flat, ft::PenUpMode::flat_q6_bump}) {
        for (const auto& s : ft::apply_penup_lift(t, mode).samples) EXPECT_EQ(s.z, 0.0);
    }
    for (const auto& s : ft::apply_penup_lift(line_trajectory(4), ft::PenUpMode::lift5mm).samples) {
        EXPECT_EQ(s.z, 0.0);
    }
}

TEST(Scale, Factors) {
    vsa::SignatureTrajectory t;
    vsa::PenSample s;
    s.x = 3;
    s.y = 4;
    t.samples.push_back(s);
    const auto big = ft::apply_scale(t, ft::Scale::ten_to_one);
    EXPECT_DOUBLE_EQ(big.samples[0].x, 30);
    EXPECT_DOUBLE_EQ(big.samples[0].y, 40);
    const auto same = ft::apply_scale(t, ft::Scale::one_to_one);
    EXPECT_EQ(same.samples[0].x, 3);
    const auto back = ft::apply_scale(ft::apply_scale(t, ft::Scale::one_to_ten), ft::Scale::ten_to_one);
    EXPECT_NEAR(back.samples[0].x, 3, 1e-12);
    EXPECT_NEAR(back.samples[0].y, 4, 1e-12);
}

TEST(Anchor, FirstSampleOnInitialPenTip) {
    const auto& g = kin::default_geometry();
    const auto a = ft::anchor_to_workspace(line_trajectory(5), g);
    const Vec3 expected =
        kin::forward_positions(kin::initial_posture(), g).finger() - g.surface_offset;
    EXPECT_EQ(Vec3(a.samples[0].x, a.samples[0].y, a.samples[0].z), expected);
    const auto twice = ft::anchor_to_workspace(a, g);
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        EXPECT_EQ(twice.samples[i].x, a.samples[i].x);
        EXPECT_EQ(twice.samples[i].y, a.samples[i].y);
        EXPECT_EQ(twice.samples[i].z, a.samples[i].z);
    }
}

TEST(Anchor, TranslationInvariance) {
    const auto& g = kin::default_geometry();
    const ft::ExtractionConfig c;
    const auto& t = corpus().signers[3].genuine[0];
    auto shifted = t;
    for (auto& s : shifted.samples) {
        s.x += 37.0;
        s.y -= 12.5;
    }
    const auto a = ft::extract_features(t, g, c);
    const auto b = ft::extract_features(shifted, g, c);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t k = 0; k < 6; ++k) EXPECT_NEAR(a.angles[i][k], b.angles[i][k], 1e-9);
        EXPECT_LT((a.finger[i] - b.finger[i]).norm(), 1e-9);
    }
}

TEST(Extract, StationaryTrajectoryGivesConstantAngles) {
    auto t = line_trajectory(10, 0.0);
    for (auto& s : t.samples) s.y = 0.0;
    const auto seq = ft::extract_features(t, kin::default_geometry(), {});
    for (std::size_t i = 1; i < seq.size(); ++i) {
        for (std::size_t k = 0; k < 6; ++k) EXPECT_NEAR(seq.angles[i][k], seq.angles[0][k], 1e-9);
    }
}

TEST(Extract, ReconstructionSnrAndContinuity) {
    const auto& g = kin::default_geometry();
    const ft::ExtractionConfig c;
    for (std::size_t s = 0; s < 4; ++s) {
        for (const auto& t : corpus().signers[s].genuine) {
            EXPECT_GE(vsa::evaluation::roundtrip_snr(t, g, c, g), 60.0);
            const auto seq = ft::extract_features(t, g, c);
            for (std::size_t i = 1; i < seq.size(); ++i) {
                for (std::size_t k = 0; k < 6; ++k) {
                    ASSERT_LT(std::abs(seq.angles[i][k] - seq.angles[i - 1][k]), kPi / 2);
                }
            }
        }
    }
}

TEST(Extract, Deterministic) {
    const auto& t = corpus().signers[0].skilled_forgeries[2];
    const auto g = ft::sample_realistic_geometry(99);
    const auto a = ft::extract_features(t, g, {});
    const auto b = ft::extract_features(t, g, {});
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a.angles[i].q, b.angles[i].q);
        EXPECT_EQ(a.elbow[i], b.elbow[i]);
    }
}

TEST(Extract, PenUpBumpOnlyTouchesQ6) {
    const auto& t = corpus().signers[1].genuine[0];
    const auto& g = kin::default_geometry();
    ft::ExtractionConfig flat;
    flat.penup_mode = ft::PenUpMode::flat;
    ft::ExtractionConfig bump;
    bump.penup_mode = ft::PenUpMode::flat_q6_bump;
    const auto a = ft::extract_features(t, g, flat);
    const auto b = ft::extract_features(t, g, bump);
    std::size_t bumped = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(a.angles[i][k], b.angles[i][k]);
        const double d = b.angles[i][5] - a.angles[i][5];
        if (t.samples[i].pen_down) {
            EXPECT_EQ(d, 0.0);
        } else {
            EXPECT_NEAR(d, kPi / 180, 1e-12);
            ++bumped;
        }
        EXPECT_EQ(a.finger[i], b.finger[i]);
    }
    EXPECT_GT(bumped, 0u);
}

TEST(Extract, UnreachableCarriesSampleIndex) {
    auto t = line_trajectory(20);
    t.samples[12].x = 4000.0;
    try {
        ft::extract_features(t, kin::default_geometry(), {});
        FAIL();
    } catch (const vsa::UnreachableError& e) {
        ASSERT_TRUE(e.sample().has_value());
        EXPECT_EQ(*e.sample(), 12u);
    }
}

TEST(FeatureMatrix, ChannelCountsAndNames) {
    const auto seq = ft::extract_features(corpus().signers[0].genuine[0], kin::default_geometry(), {});
    const auto p = ft::build_feature_matrix(seq, ft::FeatureKind::position);
    const auto a = ft::build_feature_matrix(seq, ft::FeatureKind::angle);
    const auto f = ft::build_feature_matrix(seq, ft::FeatureKind::fused);
    EXPECT_EQ(p.channels(), 27u);
    EXPECT_EQ(a.channels(), 18u);
    EXPECT_EQ(f.channels(), 45u);
    EXPECT_EQ(f.channel_names.front(), "x_e");
    EXPECT_EQ(f.channel_names[27], "q1");
    EXPECT_EQ(f.channel_names.back(), "ddq6");
    EXPECT_EQ(f.kind, ft::FeatureKind::fused);
    EXPECT_EQ(p.rows(), seq.size());
}

TEST(FeatureMatrix, ZScoreInvariant) {
    const auto seq = ft::extract_features(corpus().signers[2].genuine[1], kin::default_geometry(), {});
    const auto f = ft::build_feature_matrix(seq, ft::FeatureKind::fused);
    const double n = static_cast<double>(f.rows());
    for (Eigen::Index j = 0; j < f.values.cols(); ++j) {
        const auto col = f.values.col(j);
        const double mean = col.sum() / n;
        const double var = (col.array() - mean).square().sum() / n;
        EXPECT_NEAR(mean, 0.0, 1e-9) << f.channel_names[static_cast<std::size_t>(j)];
        if (col.cwiseAbs().maxCoeff() > 0.0) {
            EXPECT_NEAR(var, 1.0, 1e-9) << f.channel_names[static_cast<std::size_t>(j)];
        }
    }
}

TEST(FeatureMatrix, ConstantAndRampChannels) {
    Eigen::MatrixXd base(6, 2);
    for (int i = 0; i < 6; ++i) {
        base(i, 0) = 4.0;
        base(i, 1) = 2.0 * i + 1.0;
    }
    const auto d = ft::with_derivatives(base);
    ASSERT_EQ(d.cols(), 6);
    for (int i = 0; i < 6; ++i) {
        EXPECT_EQ(d(i, 2), 0.0);  // d of constant
        EXPECT_EQ(d(i, 3), 2.0);  // d of ramp
        EXPECT_EQ(d(i, 4), 0.0);
        EXPECT_EQ(d(i, 5), 0.0);  // dd of ramp
    }
    Eigen::MatrixXd z = d;
    ft::zscore_columns(z);
    EXPECT_TRUE(z.col(0).isZero(0.0));
    EXPECT_TRUE(z.col(3).isZero(0.0));
    EXPECT_TRUE(z.col(5).isZero(0.0));
}

TEST(FeatureMatrix, ConstantSequenceIsAllZero) {
    ft::AnthroSequence seq;
    for (int i = 0; i < 5; ++i) {
        seq.angles.push_back(kin::initial_posture());
        seq.elbow.push_back(Vec3(1, 2, 3));
        seq.wrist.push_back(Vec3(4, 5, 6));
        seq.finger.push_back(Vec3(7, 8, 9));
    }
    EXPECT_TRUE(ft::build_feature_matrix(seq, ft::FeatureKind::fused).values.isZero(0.0));
}

TEST(FeatureMatrix, TooShort) {
    ft::AnthroSequence seq;
    for (int i = 0; i < 2; ++i) {
        seq.angles.push_back(kin::initial_posture());
        seq.elbow.push_back(Vec3::Zero());
        seq.wrist.push_back(Vec3::Zero());
        seq.finger.push_back(Vec3::Zero());
    }
    try {
        ft::build_feature_matrix(seq, ft::FeatureKind::angle);
        FAIL();
    } catch (const vsa::Error& e) {
        EXPECT_EQ(e.code(), vsa::ErrorCode::too_short);
    }
}

TEST(FeatureFusion, ConcatenatesPositionFirst) {
    ft::FeatureMatrix p, a;
    p.values = Eigen::MatrixXd::Constant(4, 27, 1.0);
    p.channel_names.assign(27, "p");
    a.values = Eigen::MatrixXd::Zero(4, 18);
    a.channel_names.assign(18, "a");
    const auto f = ft::fuse_features(p, a);
    EXPECT_EQ(f.channels(), 45u);
    EXPECT_TRUE(f.values.leftCols(27).isApprox(p.values));
    EXPECT_TRUE(f.values.rightCols(18).isZero(0.0));
    a.values = Eigen::MatrixXd::Zero(5, 18);
    try {
        ft::fuse_features(p, a);
        FAIL();
    } catch (const vsa::Error& e) {
        EXPECT_EQ(e.code(), vsa::ErrorCode::length_mismatch);
    }
}

TEST(RealisticGeometry, DeterministicAndShaped) {
    const auto a = ft::sample_realistic_geometry(42);
    const auto b = ft::sample_realistic_geometry(42);
    EXPECT_EQ(a.l2, b.l2);
    EXPECT_EQ(a.l4, b.l4);
    EXPECT_EQ(a.l3, 1.0);
    EXPECT_EQ(a.l1, kin::default_geometry().l1);
    EXPECT_EQ(a.l5, kin::default_geometry().l5);
}

TEST(RealisticGeometry, MaleDistribution) {
    constexpr int n = 100000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto g = ft::sample_realistic_geometry(static_cast<std::uint64_t>(i), ft::Gender::male);
        sum += g.l2;
        sq += g.l2 * g.l2;
        ASSERT_EQ(g.l3, 1.0);
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sq / n - mean * mean);
    EXPECT_NEAR(mean, 334.0, 3.34);
    EXPECT_NEAR(sd, 15.8, 0.79);
}

TEST(RealisticGeometry, CoinFlipAssignsBothGenders) {
    int male = 0;
    for (std::uint64_t s = 0; s < 1000; ++s) male += ft::sampled_gender(s) == ft::Gender::male;
    EXPECT_GT(male, 400);
    EXPECT_LT(male, 600);
}

TEST(RealisticGeometry, SignerSeedsDiffer) {
    EXPECT_NE(ft::signer_seed(7, "s00"), ft::signer_seed(7, "s01"));
    EXPECT_NE(ft::signer_seed(7, "s00"), ft::signer_seed(8, "s00"));
    EXPECT_EQ(ft::signer_seed(7, "s00"), ft::signer_seed(7, "s00"));
}
