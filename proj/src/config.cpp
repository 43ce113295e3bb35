#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include "vsa/cli.hpp"
#include "vsa/errors.hpp"

namespace vsa::cli {

namespace {

using features::FeatureKind;
using features::PenAngleMode;
using features::PenUpMode;
using features::Scale;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::string normalize_key(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    return key;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
    throw Error(ErrorCode::invalid_argument,
                "invalid value '" + value + "' for " + key + " (expected " + expected + ")");
}

double to_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size() || !std::isfinite(v)) {
        bad_value(key, value, "a number");
    }
    return v;
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
        bad_value(key, value, "a non-negative integer");
    }
    return v;
}

std::string gamma_text(const kinematics::Vec3& g) {
    return io::format_double(g.x()) + "," + io::format_double(g.y()) + "," +
           io::format_double(g.z());
}

}  // namespace

Settings parse_settings(std::istream& in, const std::string& name) {
    Settings out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError(name, lineno, "expected key=value");
        out.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return out;
}

Settings read_settings_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open config file");
    return parse_settings(in, path);
}

void apply_setting(RunConfig& c, const std::string& raw_key, const std::string& value) {
    const std::string key = normalize_key(raw_key);
    auto& x = c.bench.extraction;

    if (key == "dataset") {
        c.dataset = value;
    } else if (key == "format") {
        c.format = io::parse_format(value);
    } else if (key == "features") {
        if (value == "position") c.bench.feature_kind = FeatureKind::position;
        else if (value == "angle") c.bench.feature_kind = FeatureKind::angle;
        else if (value == "fused") c.bench.feature_kind = FeatureKind::fused;
        else bad_value(key, value, "position|angle|fused");
    } else if (key == "verifier") {
        if (value == "dtw") c.bench.verifier = evaluation::VerifierKind::dtw;
        else if (value == "man" || value == "manhattan")
            c.bench.verifier = evaluation::VerifierKind::manhattan;
        else bad_value(key, value, "dtw|man");
    } else if (key == "fusion") {
        if (value == "none") c.bench.fusion = evaluation::FusionMode::none;
        else if (value == "feature") c.bench.fusion = evaluation::FusionMode::feature;
        else if (value == "score") c.bench.fusion = evaluation::FusionMode::score;
        else bad_value(key, value, "none|feature|score");
    } else if (key == "omega") {
        const double w = to_double(key, value);
        if (w < 0.0 || w > 1.0) bad_value(key, value, "a weight in [0, 1]");
        c.bench.omega = w;
        x.fuse_omega = w;
    } else if (key == "pen-angles") {
        if (value == "raw") x.pen_angle_mode = PenAngleMode::raw;
        else if (value == "smoothed") x.pen_angle_mode = PenAngleMode::smoothed;
        else if (value == "fixed") x.pen_angle_mode = PenAngleMode::fixed;
        else bad_value(key, value, "raw|smoothed|fixed");
    } else if (key == "fixed-theta") {
        x.fixed_theta = to_double(key, value);
    } else if (key == "fixed-phi") {
        x.fixed_phi = to_double(key, value);
    } else if (key == "penup") {
        if (value == "lift5mm") x.penup_mode = PenUpMode::lift5mm;
        else if (value == "flat") x.penup_mode = PenUpMode::flat;
        else if (value == "flat-q6" || value == "flat_q6_bump") x.penup_mode = PenUpMode::flat_q6_bump;
        else bad_value(key, value, "lift5mm|flat|flat-q6");
    } else if (key == "scale") {
        if (value == "0.1" || value == "1:10") x.scale = Scale::one_to_ten;
        else if (value == "1" || value == "1:1") x.scale = Scale::one_to_one;
        else if (value == "10" || value == "10:1") x.scale = Scale::ten_to_one;
        else bad_value(key, value, "0.1|1|10");
    } else if (key == "gamma") {
        std::vector<double> parts;
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) parts.push_back(to_double(key, trim(item)));
        if (parts.size() != 3) bad_value(key, value, "rx,ry,rz in radians");
        x.gamma = kinematics::Vec3(parts[0], parts[1], parts[2]);
    } else if (key == "geometry") {
        if (value == "fixed") c.bench.geometry = evaluation::GeometryMode::fixed;
        else if (value == "realistic") c.bench.geometry = evaluation::GeometryMode::realistic;
        else bad_value(key, value, "fixed|realistic");
    } else if (key == "seed") {
        c.bench.seed = to_uint(key, value);
    } else if (key == "out") {
        c.out = value;
    } else if (key == "threads") {
        const auto n = to_uint(key, value);
        c.bench.threads = n == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                 : static_cast<unsigned>(n);
    } else if (key == "signers") {
        const auto n = to_uint(key, value);
        if (n == 0) bad_value(key, value, "a positive count");
        c.signers = static_cast<std::size_t>(n);
    } else {
        throw Error(ErrorCode::invalid_argument, "unknown setting '" + raw_key + "'");
    }
}

RunConfig resolve_config(const Settings& file, const Settings& flags) {
    RunConfig c;
    for (const auto& [k, v] : file) apply_setting(c, k, v);
    for (const auto& [k, v] : flags) apply_setting(c, k, v);
    return c;
}

std::map<std::string, std::string> describe(const RunConfig& c) {
    const auto& x = c.bench.extraction;
    std::map<std::string, std::string> m;
    m["dataset"] = c.dataset;
    m["format"] = io::to_string(c.format);
    m["features"] = evaluation::to_string(c.bench.feature_kind);
    m["verifier"] = evaluation::to_string(c.bench.verifier);
    m["fusion"] = evaluation::to_string(c.bench.fusion);
    m["omega"] = io::format_double(c.bench.omega);
    switch (x.pen_angle_mode) {
        case PenAngleMode::raw: m["pen-angles"] = "raw"; break;
        case PenAngleMode::smoothed: m["pen-angles"] = "smoothed"; break;
        case PenAngleMode::fixed: m["pen-angles"] = "fixed"; break;
    }
    m["fixed-theta"] = io::format_double(x.fixed_theta);
    m["fixed-phi"] = io::format_double(x.fixed_phi);
    switch (x.penup_mode) {
        case PenUpMode::lift5mm: m["penup"] = "lift5mm"; break;
        case PenUpMode::flat: m["penup"] = "flat"; break;
        case PenUpMode::flat_q6_bump: m["penup"] = "flat-q6"; break;
    }
    m["scale"] = io::format_double(features::scale_factor(x.scale));
    m["gamma"] = gamma_text(x.gamma);
    m["geometry"] = evaluation::to_string(c.bench.geometry);
    m["seed"] = std::to_string(c.bench.seed);
    m["out"] = c.out;
    m["signers"] = std::to_string(c.signers);
    return m;
}

}  // namespace vsa::cli
