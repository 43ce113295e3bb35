#include "vsa/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include <Eigen/Core>

#include "vsa/features.hpp"

namespace vsa::synthetic {

namespace {

constexpr double kPi = std::numbers::pi;
using Vec2 = Eigen::Vector2d;
using Rng = std::mt19937_64;

Rng make_rng(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    return Rng(seq);
}

double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double normal(Rng& rng, double sd) { return std::normal_distribution<double>(0.0, sd)(rng); }

// Uniform in [lo, hi] with a random sign.
double signed_uniform(Rng& rng, double lo, double hi) {
    const double v = uniform(rng, lo, hi);
    return std::bernoulli_distribution(0.5)(rng) ? v : -v;
}

using Stroke = std::vector<Vec2>;  // spline control points

struct Prototype {
    std::vector<Stroke> strokes;
    double speed;  // mm per sample
};

Prototype make_prototype(Rng& rng) {
    Prototype p;
    const int strokes = std::uniform_int_distribution<int>(2, 4)(rng);
    double x0 = 0.0;
    for (int k = 0; k < strokes; ++k) {
        const int points = std::uniform_int_distribution<int>(5, 8)(rng);
        const double width = uniform(rng, 12.0, 26.0);
        Stroke s;
        for (int i = 0; i < points; ++i) {
            const double x = x0 + width * i / (points - 1) + normal(rng, 3.0);
            const double y = uniform(rng, -9.0, 9.0);
            s.emplace_back(x, y);
        }
        p.strokes.push_back(std::move(s));
        x0 += width + uniform(rng, 3.0, 8.0);
    }
    p.speed = uniform(rng, 0.7, 1.0);
    return p;
}

// Uniform Catmull-Rom spline through the control points, u in [0, 1].
Vec2 catmull_rom(const Stroke& c, double u) {
    const int segments = static_cast<int>(c.size()) - 1;
    const double x = std::clamp(u, 0.0, 1.0) * segments;
    const int i = std::min(static_cast<int>(x), segments - 1);
    const double t = x - i;
    const Vec2& p1 = c[i];
    const Vec2& p2 = c[i + 1];
    const Vec2& p0 = i > 0 ? c[i - 1] : p1 + (p1 - p2);
    const Vec2& p3 = i + 2 < static_cast<int>(c.size()) ? c[i + 2] : p2 + (p2 - p1);
    const double t2 = t * t;
    const double t3 = t2 * t;
    return 0.5 * ((2.0 * p1) + (-p0 + p2) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t2 +
                  (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t3);
}

double stroke_length(const Stroke& c) {
    double len = 0.0;
    Vec2 prev = catmull_rom(c, 0.0);
    for (int i = 1; i <= 200; ++i) {
        const Vec2 q = catmull_rom(c, i / 200.0);
        len += (q - prev).norm();
        prev = q;
    }
    return len;
}

// Monotone warp of [0, 1]: derivative 1 + a cos(2 pi u) > 0 for |a| < 1.
double warp(double u, double a) { return u + a * std::sin(2.0 * kPi * u) / (2.0 * kPi); }

struct Rendition {
    std::vector<Stroke> strokes;
    std::vector<double> warps;  // one per stroke
    double tempo;               // sample-count multiplier
    Eigen::Matrix2d affine;
    Vec2 shift;
};

SignatureTrajectory render(const Rendition& r, double speed, double jitter, double period_ms,
                           Rng& rng) {
    std::vector<Vec2> points;
    std::vector<bool> down;
    for (std::size_t k = 0; k < r.strokes.size(); ++k) {
        const Stroke& s = r.strokes[k];
        const int n = std::max(8, static_cast<int>(std::lround(stroke_length(s) / speed * r.tempo)));
        if (k > 0) {
            // Pen-up hop from the previous stroke end.
            const Vec2 from = points.back();
            const Vec2 to = catmull_rom(s, 0.0);
            const int hop = std::max(4, static_cast<int>(std::lround((to - from).norm() / 1.5)));
            for (int i = 1; i < hop; ++i) {
                points.push_back(from + (to - from) * (static_cast<double>(i) / hop));
                down.push_back(false);
            }
        }
        for (int i = 0; i < n; ++i) {
            const double u = warp(static_cast<double>(i) / (n - 1), r.warps[k]);
            points.push_back(catmull_rom(s, u));
            down.push_back(true);
        }
    }

    SignatureTrajectory traj;
    traj.has_angles = true;
    const double phase = uniform(rng, 0.0, 2.0 * kPi);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Vec2 p = r.affine * points[i] + r.shift;
        PenSample s;
        s.x = p.x() + normal(rng, jitter);
        s.y = p.y() + normal(rng, jitter);
        s.t = static_cast<double>(i) * period_ms;
        s.pen_down = down[i];
        s.pressure = down[i] ? 0.5 + 0.3 * std::sin(0.05 * static_cast<double>(i) + phase) : 0.0;
        s.theta = kPi / 3.0 + 0.05 * std::sin(0.02 * static_cast<double>(i) + phase);
        s.phi = 3.0 * kPi / 4.0 + 0.04 * std::cos(0.03 * static_cast<double>(i) + phase);
        traj.samples.push_back(s);
    }
    return traj;
}

Eigen::Matrix2d wobble(Rng& rng) {
    const double rot = uniform(rng, -2.0, 2.0) * kPi / 180.0;
    Eigen::Matrix2d r;
    r << std::cos(rot), -std::sin(rot), std::sin(rot), std::cos(rot);
    Eigen::Matrix2d a;
    a << 1.0 + uniform(rng, -0.03, 0.03), uniform(rng, -0.02, 0.02), 0.0,
        1.0 + uniform(rng, -0.03, 0.03);
    return r * a;
}

Rendition genuine_rendition(const Prototype& p, Rng& rng) {
    Rendition r;
    r.strokes = p.strokes;
    for (std::size_t k = 0; k < p.strokes.size(); ++k) r.warps.push_back(uniform(rng, -0.05, 0.05));
    r.tempo = uniform(rng, 0.92, 1.08);
    r.affine = wobble(rng);
    r.shift = Vec2(uniform(rng, -5.0, 5.0), uniform(rng, -5.0, 5.0));
    return r;
}

Rendition forgery_rendition(const Prototype& p, double amplitude, Rng& rng) {
    Rendition r;
    for (const Stroke& s : p.strokes) {
        Vec2 centre = Vec2::Zero();
        for (const Vec2& c : s) centre += c;
        centre /= static_cast<double>(s.size());
        const double sx = 1.0 + signed_uniform(rng, 0.4 * amplitude, amplitude);
        const double sy = 1.0 + signed_uniform(rng, 0.4 * amplitude, amplitude);
        Stroke out;
        for (const Vec2& c : s) {
            const Vec2 d = c - centre;
            out.push_back(centre + Vec2(sx * d.x(), sy * d.y()));
        }
        r.strokes.push_back(std::move(out));
        r.warps.push_back(signed_uniform(rng, 0.3, 0.6));
    }
    r.tempo = uniform(rng, 1.1, 1.4);  // imitations are written more slowly
    r.affine = wobble(rng);
    r.shift = Vec2(uniform(rng, -5.0, 5.0), uniform(rng, -5.0, 5.0));
    return r;
}

std::string padded(char prefix, std::size_t index) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%c%02zu", prefix, index);
    return buf;
}

}  // namespace

std::string signer_name(std::size_t index) { return padded('s', index); }

Dataset make_corpus(const CorpusConfig& config) {
    Dataset ds;
    ds.metadata.device = "synthetic";
    ds.metadata.units = "mm";
    ds.metadata.sample_rate_hz = 1000.0 / config.sample_period_ms;
    ds.metadata.lines_per_mm = 1.0;

    for (std::size_t s = 0; s < config.signers; ++s) {
        SignerData signer;
        signer.id = signer_name(s);
        const std::uint64_t base = features::signer_seed(config.seed, signer.id);
        Rng proto_rng = make_rng(base);
        const Prototype proto = make_prototype(proto_rng);

        for (std::size_t j = 0; j < config.genuine; ++j) {
            Rng rng = make_rng(features::signer_seed(base, padded('g', j)));
            auto traj = render(genuine_rendition(proto, rng), proto.speed, config.jitter_mm,
                               config.sample_period_ms, rng);
            traj.signer_id = signer.id;
            traj.signature_id = padded('g', j);
            traj.label = SignatureLabel::genuine;
            signer.genuine.push_back(std::move(traj));
        }
        for (std::size_t j = 0; j < config.forgeries; ++j) {
            Rng rng = make_rng(features::signer_seed(base, padded('f', j)));
            auto traj = render(forgery_rendition(proto, config.forgery_amplitude, rng), proto.speed,
                               config.jitter_mm, config.sample_period_ms, rng);
            traj.signer_id = signer.id;
            traj.signature_id = padded('f', j);
            traj.label = SignatureLabel::skilled_forgery;
            signer.skilled_forgeries.push_back(std::move(traj));
        }
        ds.signers.push_back(std::move(signer));
    }
    return ds;
}

}  // namespace vsa::synthetic
