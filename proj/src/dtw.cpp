#include <cmath>
#include <limits>

#include "vsa/errors.hpp"
#include "vsa/verifiers.hpp"

namespace vsa::verifiers {

namespace {

struct Cell {
    double cost;
    std::size_t length;
};

bool better(const Cell& x, const Cell& y) {
    return x.cost < y.cost || (x.cost == y.cost && x.length < y.length);
}

void require_same_channels(const FeatureMatrix& a, const FeatureMatrix& b) {
    if (a.channels() != b.channels()) {
        throw Error(ErrorCode::channel_mismatch,
                    "DTW needs equal channel counts, got " + std::to_string(a.channels()) +
                        " and " + std::to_string(b.channels()));
    }
}

}  // namespace

DtwAlignment dtw_align(const FeatureMatrix& a, const FeatureMatrix& b) {
    require_same_channels(a, b);
    const std::size_t n = a.rows();
    const std::size_t m = b.rows();
    if (n == 0 || m == 0) {
        throw Error(ErrorCode::too_short, "DTW needs non-empty sequences");
    }
    const Eigen::Index c = a.values.cols();

    // Two rolling rows over b.
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<Cell> prev(m, Cell{kInf, 0});
    std::vector<Cell> curr(m, Cell{kInf, 0});

    for (std::size_t i = 0; i < n; ++i) {
        const double* ai = a.values.data() + i * c;
        for (std::size_t j = 0; j < m; ++j) {
            const double* bj = b.values.data() + j * c;
            double sq = 0.0;
            for (Eigen::Index k = 0; k < c; ++k) {
                const double d = ai[k] - bj[k];
                sq += d * d;
            }
            const double local = std::sqrt(sq);

            Cell best{kInf, 0};
            if (i == 0 && j == 0) {
                best = Cell{0.0, 0};
            } else {
                if (i > 0 && j > 0 && better(prev[j - 1], best)) best = prev[j - 1];
                if (i > 0 && better(prev[j], best)) best = prev[j];
                if (j > 0 && better(curr[j - 1], best)) best = curr[j - 1];
            }
            curr[j] = Cell{best.cost + local, best.length + 1};
        }
        std::swap(prev, curr);
    }
    return {prev[m - 1].cost, prev[m - 1].length};
}

double dtw_distance(const FeatureMatrix& a, const FeatureMatrix& b) {
    const DtwAlignment al = dtw_align(a, b);
    return al.cost / static_cast<double>(al.length);
}

DtwTemplate build_dtw_template(std::string signer_id, std::vector<FeatureMatrix> references) {
    if (references.size() < 2) {
        throw Error(ErrorCode::empty_template,
                    "DTW template for '" + signer_id + "' needs at least 2 references, got " +
                        std::to_string(references.size()));
    }
    const std::size_t r = references.size();
    for (std::size_t i = 1; i < r; ++i) require_same_channels(references[0], references[i]);

    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(r),
                                              static_cast<Eigen::Index>(r));
    double sum = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = i + 1; j < r; ++j) {
            const double v = dtw_distance(references[i], references[j]);
            d(i, j) = d(j, i) = v;
            sum += v;
        }
    }

    DtwTemplate t;
    t.signer_id = std::move(signer_id);
    t.mean_reference_distance = sum / static_cast<double>(r * (r - 1) / 2);
    const double denom = std::max(t.mean_reference_distance, kDistanceFloor);

    // Leave-one-out: each reference scored against the others.
    std::vector<double> loo;
    loo.reserve(r);
    for (std::size_t i = 0; i < r; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < r; ++j) {
            if (j != i) best = std::min(best, d(i, j));
        }
        loo.push_back(-best / denom);
    }
    t.stats = score_stats(loo);
    t.references = std::move(references);
    return t;
}

namespace {

double min_reference_distance(const DtwTemplate& t, const FeatureMatrix& q) {
    if (t.references.empty()) {
        throw Error(ErrorCode::empty_template, "DTW template '" + t.signer_id + "' is empty");
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& ref : t.references) best = std::min(best, dtw_distance(ref, q));
    return best;
}

}  // namespace

double dtw_similarity(const DtwTemplate& t, const FeatureMatrix& questioned) {
    return -min_reference_distance(t, questioned) /
           std::max(t.mean_reference_distance, kDistanceFloor);
}

Score dtw_verify(const DtwTemplate& t, const FeatureMatrix& questioned) {
    const double raw = min_reference_distance(t, questioned);
    const double sim = -raw / std::max(t.mean_reference_distance, kDistanceFloor);
    return {tanh_normalize(sim, t.stats), raw};
}

}  // namespace vsa::verifiers
