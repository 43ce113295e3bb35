#pragma once

// Independent reference implementations used as test oracles, plus shared
// generators. Kept deliberately naive.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "vsa/features.hpp"
#include "vsa/kinematics.hpp"
#include "vsa/verifiers.hpp"

namespace vsa::testing {

constexpr double kPi = std::numbers::pi;

/// Smallest signed difference of two angles.
inline double angle_diff(double a, double b) {
    return std::remainder(a - b, 2.0 * kPi);
}

/// Joint tuple inside the identifiable workspace: elbow flexion in
/// (0.1pi + 0.05, pi - 0.05), |sin q5| > 1e-3, q4 on the canonical wrist
/// branch and the wrist in front of the waist axis so q1 is defined.
inline kinematics::JointAngles random_posture(std::mt19937_64& rng, const kinematics::ArmGeometry& g) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double phi3 = std::atan2(g.l4, g.l3);
    for (;;) {
        kinematics::JointAngles q;
        q[0] = -kPi + 2.0 * kPi * u(rng);
        q[1] = kPi * u(rng);
        const double phi4 = 0.1 * kPi + 0.05 + (0.9 * kPi - 0.1) * u(rng);
        q[2] = -phi3 - phi4;
        q[3] = -kPi / 2.0 + 1e-6 + (kPi - 2e-6) * u(rng);
        q[4] = -kPi + 2.0 * kPi * u(rng);
        q[5] = -kPi + 2.0 * kPi * u(rng);
        if (std::abs(std::sin(q[4])) <= 1e-3) continue;
        const auto pos = kinematics::forward_positions(q, g);
        const kinematics::Vec3 w = pos.wrist();
        const double forward = w.x() * std::cos(q[0]) + w.y() * std::sin(q[0]);
        if (forward < 1.0) continue;
        return q;
    }
}

/// Exhaustive monotone alignment: minimum (cost, length) over every path.
inline double brute_force_dtw(const std::vector<std::vector<double>>& a,
                              const std::vector<std::vector<double>>& b) {
    const std::size_t n = a.size(), m = b.size();
    auto local = [&](std::size_t i, std::size_t j) {
        double s = 0.0;
        for (std::size_t k = 0; k < a[i].size(); ++k) s += (a[i][k] - b[j][k]) * (a[i][k] - b[j][k]);
        return std::sqrt(s);
    };
    double best_cost = std::numeric_limits<double>::infinity();
    std::size_t best_len = 0;
    std::function<void(std::size_t, std::size_t, double, std::size_t)> walk =
        [&](std::size_t i, std::size_t j, double cost, std::size_t len) {
            cost += local(i, j);
            ++len;
            if (i == n - 1 && j == m - 1) {
                if (cost < best_cost || (cost == best_cost && len < best_len)) {
                    best_cost = cost;
                    best_len = len;
                }
                return;
            }
            if (i + 1 < n) walk(i + 1, j, cost, len);
            if (j + 1 < m) walk(i, j + 1, cost, len);
            if (i + 1 < n && j + 1 < m) walk(i + 1, j + 1, cost, len);
        };
    walk(0, 0, 0.0, 0);
    return best_cost / static_cast<double>(best_len);
}

/// Threshold sweep counting every score at every candidate threshold.
inline double brute_force_eer(const std::vector<double>& genuine,
                              const std::vector<double>& impostor) {
    std::vector<double> t = genuine;
    t.insert(t.end(), impostor.begin(), impostor.end());
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    t.push_back(std::numeric_limits<double>::infinity());

    double prev_far = 0.0, prev_frr = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        double fr = 0.0, fa = 0.0;
        for (double g : genuine) fr += g < t[k] ? 1.0 : 0.0;
        for (double i : impostor) fa += i >= t[k] ? 1.0 : 0.0;
        fr /= static_cast<double>(genuine.size());
        fa /= static_cast<double>(impostor.size());
        if (fr >= fa) {
            if (fr == fa || k == 0) return 100.0 * fr;
            // Intersect the two segments (prev_frr -> fr) and (prev_far -> fa).
            const double a = (prev_far - prev_frr) / ((prev_far - prev_frr) - (fa - fr));
            return 100.0 * (prev_frr + a * (fr - prev_frr));
        }
        prev_far = fa;
        prev_frr = fr;
    }
    return 100.0;
}

/// Naive equal-width binning with edge clipping.
inline std::vector<double> brute_force_histogram(const std::vector<double>& v, double lo,
                                                 double hi, int bins) {
    std::vector<double> h(static_cast<std::size_t>(bins), 0.0);
    const double width = (hi - lo) / bins;
    for (double x : v) {
        int b = 0;
        for (int k = 0; k < bins; ++k) {
            if (x >= lo + k * width) b = k;
        }
        h[static_cast<std::size_t>(b)] += 1.0;
    }
    return h;
}

inline features::FeatureMatrix column_matrix(const std::vector<double>& v) {
    features::FeatureMatrix m;
    m.values.resize(static_cast<Eigen::Index>(v.size()), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m.values(static_cast<Eigen::Index>(i), 0) = v[i];
    m.channel_names = {"c"};
    return m;
}

/// Relative-frequency segments and their sums.
inline std::vector<double> relative_segment_sums(const verifiers::HistogramVector& h) {
    std::vector<double> out;
    for (const auto& seg : h.layout) {
        if (seg.kind != verifiers::FrequencyKind::relative) continue;
        out.push_back(h.values.segment(static_cast<Eigen::Index>(seg.offset),
                                       static_cast<Eigen::Index>(seg.length))
                          .sum());
    }
    return out;
}

}  // namespace vsa::testing
