#include <array>
#include <cmath>
#include <numbers>

#include "vsa/errors.hpp"
#include "vsa/verifiers.hpp"

namespace vsa::verifiers {

namespace {

constexpr double kPi = std::numbers::pi;

class Builder {
public:
    void add(std::string name, const std::vector<double>& bins, FrequencyKind kind) {
        layout_.push_back({std::move(name), values_.size(), bins.size(), kind});
        values_.insert(values_.end(), bins.begin(), bins.end());
    }

    // Adds the counts as absolute and/or relative segments.
    void add_counts(const std::string& name, const std::vector<double>& counts, bool absolute,
                    bool relative) {
        if (absolute) add(name + ".abs", counts, FrequencyKind::absolute);
        if (relative) {
            double total = 0.0;
            for (double c : counts) total += c;
            std::vector<double> rel(counts.size(), 0.0);
            if (total > 0.0) {
                for (std::size_t i = 0; i < counts.size(); ++i) rel[i] = counts[i] / total;
            }
            add(name + ".rel", rel, FrequencyKind::relative);
        }
    }

    HistogramVector finish() && {
        HistogramVector h;
        h.values = Eigen::Map<const Eigen::VectorXd>(values_.data(),
                                                     static_cast<Eigen::Index>(values_.size()));
        h.layout = std::move(layout_);
        return h;
    }

private:
    std::vector<double> values_;
    std::vector<HistogramSegment> layout_;
};

std::vector<double> differences(const std::vector<double>& v) {
    std::vector<double> d;
    if (v.size() < 2) return d;
    d.reserve(v.size() - 1);
    for (std::size_t i = 1; i < v.size(); ++i) d.push_back(v[i] - v[i - 1]);
    return d;
}

std::vector<double> histogram_1d(std::span<const double> values, const BinRange& range, int bins) {
    std::vector<double> counts(static_cast<std::size_t>(bins), 0.0);
    for (double v : values) counts[static_cast<std::size_t>(clipped_bin(v, range.lo, range.hi, bins))] += 1.0;
    return counts;
}

bool same_layout(const HistogramVector& a, const HistogramVector& b) {
    if (a.values.size() != b.values.size() || a.layout.size() != b.layout.size()) return false;
    for (std::size_t i = 0; i < a.layout.size(); ++i) {
        const auto& x = a.layout[i];
        const auto& y = b.layout[i];
        if (x.name != y.name || x.offset != y.offset || x.length != y.length || x.kind != y.kind) {
            return false;
        }
    }
    return true;
}

}  // namespace

int clipped_bin(double value, double lo, double hi, int bins) {
    const double pos = (value - lo) / (hi - lo) * static_cast<double>(bins);
    if (!(pos > 0.0)) return 0;  // also catches NaN
    if (pos >= static_cast<double>(bins)) return bins - 1;
    return static_cast<int>(pos);
}

BinRange sigma_range(std::span<const double> values) {
    if (values.empty()) return {-1.0, 1.0};
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / n);
    const double half = kRangeSigmas * sd;
    if (!(half > 1e-12 * std::max(1.0, std::abs(mean)))) return {mean - 1.0, mean + 1.0};
    return {mean - half, mean + half};
}

std::pair<Vec3, Vec3> plane_basis(const Vec3& normal) {
    const Vec3 n = normal.normalized();
    Vec3 seed = Vec3::UnitX();
    if (std::abs(n.dot(seed)) > 1.0 - 1e-9) seed = Vec3::UnitY();
    const Vec3 u = (seed - seed.dot(n) * n).normalized();
    return {u, n.cross(u)};
}

HistogramVector polar_histograms(std::span<const Vec3> path, const Vec3& normal,
                                 const std::string& joint) {
    if (path.empty()) throw Error(ErrorCode::degenerate, joint + ": empty path");
    const auto [u, v] = plane_basis(normal);

    std::vector<double> pu, pv;
    pu.reserve(path.size());
    pv.reserve(path.size());
    double cu = 0.0, cv = 0.0;
    for (const Vec3& p : path) {
        pu.push_back(p.dot(u));
        pv.push_back(p.dot(v));
        cu += pu.back();
        cv += pv.back();
    }
    cu /= static_cast<double>(path.size());
    cv /= static_cast<double>(path.size());

    std::vector<double> radius, angle;
    radius.reserve(path.size());
    angle.reserve(path.size());
    double max_r = 0.0;
    for (std::size_t i = 0; i < path.size(); ++i) {
        const double du = pu[i] - cu;
        const double dv = pv[i] - cv;
        radius.push_back(std::hypot(du, dv));
        angle.push_back(std::atan2(dv, du));
        max_r = std::max(max_r, radius.back());
    }
    if (max_r <= 1e-9) {
        throw Error(ErrorCode::degenerate, joint + ": all projected points coincide");
    }

    const auto radial = histogram_1d(radius, sigma_range(radius), kPolarBins);
    const auto angular = histogram_1d(angle, {-kPi, kPi}, kPolarBins);

    Builder b;
    b.add_counts(joint + ".radial", radial, true, false);
    b.add_counts(joint + ".angular", angular, true, false);
    b.add_counts(joint + ".radial", radial, false, true);
    b.add_counts(joint + ".angular", angular, false, true);
    return std::move(b).finish();
}

HistogramVector position_histograms(const features::AnthroSequence& seq, const Vec3& normal) {
    return fuse_histograms(
        fuse_histograms(polar_histograms(seq.elbow, normal, "e"),
                        polar_histograms(seq.wrist, normal, "w")),
        polar_histograms(seq.finger, normal, "f"));
}

HistogramVector angle_histograms(std::span<const JointAngles> angles) {
    if (angles.size() < 3) {
        throw Error(ErrorCode::too_short, "angle histograms need at least 3 samples, got " +
                                              std::to_string(angles.size()));
    }

    std::array<std::vector<double>, 6> d1, d2;
    std::array<BinRange, 6> r1, r2;
    for (std::size_t k = 0; k < 6; ++k) {
        std::vector<double> q;
        q.reserve(angles.size());
        for (const auto& a : angles) q.push_back(a[k]);
        d1[k] = differences(q);
        d2[k] = differences(d1[k]);
        r1[k] = sigma_range(d1[k]);
        r2[k] = sigma_range(d2[k]);
    }

    Builder b;
    for (std::size_t k = 0; k < 6; ++k) {
        b.add_counts("h1.q" + std::to_string(k + 1), histogram_1d(d1[k], r1[k], kDeltaBins), false,
                     true);
    }
    for (std::size_t k = 0; k < 6; ++k) {
        b.add_counts("h2.q" + std::to_string(k + 1), histogram_1d(d2[k], r2[k], kDeltaDeltaBins),
                     false, true);
    }
    // Three consecutive angle samples give a pair of consecutive differences;
    // lag-2 pairs add the next-but-one difference.
    for (std::size_t k = 0; k < 6; ++k) {
        std::vector<double> counts(static_cast<std::size_t>(kPairBins * kPairBins), 0.0);
        const auto& d = d1[k];
        for (std::size_t lag = 1; lag <= 2; ++lag) {
            for (std::size_t i = 0; i + lag < d.size(); ++i) {
                const int x = clipped_bin(d[i], r1[k].lo, r1[k].hi, kPairBins);
                const int y = clipped_bin(d[i + lag], r1[k].lo, r1[k].hi, kPairBins);
                counts[static_cast<std::size_t>(x * kPairBins + y)] += 1.0;
            }
        }
        b.add_counts("h3.q" + std::to_string(k + 1), counts, false, true);
    }
    return std::move(b).finish();
}

HistogramVector fuse_histograms(const HistogramVector& first, const HistogramVector& second) {
    HistogramVector out;
    out.values.resize(first.values.size() + second.values.size());
    out.values << first.values, second.values;
    out.layout = first.layout;
    const auto shift = static_cast<std::size_t>(first.values.size());
    for (auto seg : second.layout) {
        seg.offset += shift;
        out.layout.push_back(std::move(seg));
    }
    return out;
}

double manhattan_distance(const HistogramVector& a, const HistogramVector& b) {
    if (!same_layout(a, b)) {
        throw Error(ErrorCode::layout_mismatch, "histogram layouts differ (" +
                                                    std::to_string(a.values.size()) + " vs " +
                                                    std::to_string(b.values.size()) + " bins)");
    }
    double total = 0.0;
    for (const auto& seg : a.layout) {
        const double eps =
            seg.kind == FrequencyKind::absolute ? kAbsoluteEpsilon : kRelativeEpsilon;
        for (std::size_t i = seg.offset; i < seg.offset + seg.length; ++i) {
            const double diff = std::abs(a.values[static_cast<Eigen::Index>(i)] -
                                         b.values[static_cast<Eigen::Index>(i)]);
            if (diff > eps) total += diff;
        }
    }
    return total;
}

HistogramTemplate build_histogram_template(std::string signer_id,
                                           const std::vector<HistogramVector>& references) {
    if (references.size() < 2) {
        throw Error(ErrorCode::empty_template,
                    "histogram template for '" + signer_id + "' needs at least 2 references, got " +
                        std::to_string(references.size()));
    }
    for (std::size_t i = 1; i < references.size(); ++i) {
        if (!same_layout(references[0], references[i])) {
            throw Error(ErrorCode::layout_mismatch,
                        "reference histograms of '" + signer_id + "' have different layouts");
        }
    }

    const auto r = static_cast<double>(references.size());
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(references[0].values.size());
    for (const auto& h : references) sum += h.values;

    HistogramTemplate t;
    t.signer_id = std::move(signer_id);
    t.mean.layout = references[0].layout;
    t.mean.values = sum / r;

    // Leave-one-out: each reference against the mean of the others.
    std::vector<double> loo;
    loo.reserve(references.size());
    for (const auto& h : references) {
        HistogramVector others{(sum - h.values) / (r - 1.0), t.mean.layout};
        loo.push_back(-manhattan_distance(others, h));
    }
    t.stats = score_stats(loo);
    return t;
}

Score manhattan_score(const HistogramTemplate& t, const HistogramVector& questioned) {
    const double raw = manhattan_distance(t.mean, questioned);
    return {tanh_normalize(-raw, t.stats), raw};
}

}  // namespace vsa::verifiers
