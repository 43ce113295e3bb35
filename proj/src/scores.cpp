#include <cmath>

#include "vsa/verifiers.hpp"

namespace vsa::verifiers {

ScoreStats score_stats(std::span<const double> similarities) {
    ScoreStats s;
    if (similarities.empty()) {
        s.std = kStdFloor;
        return s;
    }
    const double n = static_cast<double>(similarities.size());
    double sum = 0.0;
    for (double v : similarities) sum += v;
    s.mean = sum / n;
    double ss = 0.0;
    for (double v : similarities) ss += (v - s.mean) * (v - s.mean);
    s.std = std::max(std::sqrt(ss / n), kStdFloor);
    return s;
}

double tanh_normalize(double similarity, const ScoreStats& stats) {
    const double sd = std::max(stats.std, kStdFloor);
    return 0.5 * (std::tanh(kTanhSpread * (similarity - stats.mean) / sd) + 1.0);
}

std::vector<double> tanh_normalize(std::span<const double> similarities, const ScoreStats& stats) {
    std::vector<double> out;
    out.reserve(similarities.size());
    for (double s : similarities) out.push_back(tanh_normalize(s, stats));
    return out;
}

double fuse_scores(double position_score, double angle_score, double omega) {
    return omega * position_score + (1.0 - omega) * angle_score;
}

}  // namespace vsa::verifiers
