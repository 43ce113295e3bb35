#include "vsa/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <regex>
#include <sstream>

#include "vsa/errors.hpp"

namespace vsa::io {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

bool parse_number(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

double require_number(std::string_view s, const std::string& file, std::size_t line,
                      const std::string& what) {
    double v = 0.0;
    if (!parse_number(s, v) || !std::isfinite(v)) {
        throw ParseError(file, line, what + ": '" + std::string(s) + "' is not a finite number");
    }
    return v;
}

double require_lines_per_mm(std::string_view s, const std::string& file, std::size_t line) {
    const double v = require_number(s, file, line, "lines_per_mm");
    if (!(v > 0.0)) throw ParseError(file, line, "lines_per_mm must be positive");
    return v;
}

std::ifstream open_input(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw ParseError(file.string(), 0, "cannot open file");
    return in;
}

void check_timestamp(const SignatureTrajectory& traj, double t, const std::string& file,
                     std::size_t line) {
    if (!traj.samples.empty() && !(t > traj.samples.back().t)) {
        throw ParseError(file, line,
                         "timestamp " + format_double(t) + " ms does not increase (previous " +
                             format_double(traj.samples.back().t) + " ms)");
    }
}

void check_pen_down(const SignatureTrajectory& traj, const std::string& file, std::size_t line) {
    if (traj.samples.empty()) throw ParseError(file, line, "no samples");
    const bool any_down = std::any_of(traj.samples.begin(), traj.samples.end(),
                                      [](const PenSample& s) { return s.pen_down; });
    if (!any_down) throw ParseError(file, line, "no pen-down sample");
}

std::string signature_name(const fs::path& file) { return file.stem().string(); }

}  // namespace

DatasetFormat parse_format(const std::string& name) {
    if (name == "canonical_tsv" || name == "canonical" || name == "tsv") {
        return DatasetFormat::canonical_tsv;
    }
    if (name == "svc_style" || name == "svc") return DatasetFormat::svc_style;
    throw Error(ErrorCode::invalid_argument, "unknown dataset format '" + name + "'");
}

std::string to_string(DatasetFormat f) {
    return f == DatasetFormat::canonical_tsv ? "canonical_tsv" : "svc_style";
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

bool natural_less(const std::string& a, const std::string& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
        const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
        if (da && db) {
            std::size_t ie = i, je = j;
            while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
            while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
            // Compare digit runs by value: strip leading zeros, then length, then text.
            std::string_view ra(a.data() + i, ie - i), rb(b.data() + j, je - j);
            ra.remove_prefix(std::min(ra.find_first_not_of('0'), ra.size()));
            rb.remove_prefix(std::min(rb.find_first_not_of('0'), rb.size()));
            if (ra.size() != rb.size()) return ra.size() < rb.size();
            if (ra != rb) return ra < rb;
            i = ie;
            j = je;
        } else {
            if (a[i] != b[j]) return a[i] < b[j];
            ++i;
            ++j;
        }
    }
    if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
    return a < b;
}

// ---------------------------------------------------------------------------
// Canonical files

SignatureTrajectory parse_signature(std::istream& in, const std::string& name,
                                    double default_lines_per_mm) {
    enum Col { t_ms, x, y, pressure, pen_state, azimuth, inclination, ignored };
    std::vector<Col> cols;
    double lpm = default_lines_per_mm;
    SignatureTrajectory traj;
    bool has_pressure = false, has_state = false;

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (fields[0].front() == '#') {
            std::string_view key = fields[0].substr(1);
            std::size_t first = 1;
            if (key.empty() && fields.size() > 1) {  // "# columns ..."
                key = fields[1];
                first = 2;
            }
            if (key == "columns") {
                if (!traj.samples.empty()) {
                    throw ParseError(name, lineno, "#columns after the first sample");
                }
                cols.clear();
                for (std::size_t i = first; i < fields.size(); ++i) {
                    const auto f = fields[i];
                    if (f == "t_ms") cols.push_back(t_ms);
                    else if (f == "x") cols.push_back(x);
                    else if (f == "y") cols.push_back(y);
                    else if (f == "pressure") cols.push_back(pressure);
                    else if (f == "pen_state") cols.push_back(pen_state);
                    else if (f == "azimuth_rad") cols.push_back(azimuth);
                    else if (f == "inclination_rad") cols.push_back(inclination);
                    else cols.push_back(ignored);
                }
                for (Col need : {t_ms, x, y}) {
                    if (std::find(cols.begin(), cols.end(), need) == cols.end()) {
                        throw ParseError(name, lineno, "#columns must declare t_ms, x and y");
                    }
                }
                auto has = [&cols](Col c) {
                    return std::find(cols.begin(), cols.end(), c) != cols.end();
                };
                has_pressure = has(pressure);
                has_state = has(pen_state);
                traj.has_angles = has(azimuth) && has(inclination);
            } else if (key == "lines_per_mm") {
                if (fields.size() != first + 1) {
                    throw ParseError(name, lineno, "#lines_per_mm takes one value");
                }
                lpm = require_lines_per_mm(fields[first], name, lineno);
            }
            continue;  // other comment lines
        }
        if (cols.empty()) throw ParseError(name, lineno, "sample before the #columns header");
        if (fields.size() != cols.size()) {
            throw ParseError(name, lineno,
                             "expected " + std::to_string(cols.size()) + " fields, got " +
                                 std::to_string(fields.size()));
        }

        PenSample s;
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (cols[i] == ignored) continue;
            const double v = require_number(fields[i], name, lineno, "field " + std::to_string(i + 1));
            switch (cols[i]) {
                case t_ms: s.t = v; break;
                case x: s.x = v / lpm; break;
                case y: s.y = v / lpm; break;
                case pressure: s.pressure = v; break;
                case pen_state: s.pen_down = v != 0.0; break;
                case azimuth: s.theta = v; break;
                case inclination: s.phi = v; break;
                case ignored: break;
            }
        }
        if (!has_state) s.pen_down = has_pressure ? s.pressure > 0.0 : true;
        check_timestamp(traj, s.t, name, lineno);
        traj.samples.push_back(s);
    }
    check_pen_down(traj, name, lineno);
    return traj;
}

SignatureTrajectory read_signature(const fs::path& file, double default_lines_per_mm) {
    auto in = open_input(file);
    SignatureTrajectory t = parse_signature(in, file.string(), default_lines_per_mm);
    t.signature_id = signature_name(file);
    return t;
}

void write_signature(std::ostream& out, const SignatureTrajectory& traj) {
    out << "#columns t_ms x y pressure pen_state";
    if (traj.has_angles) out << " azimuth_rad inclination_rad";
    out << "\n#lines_per_mm 1\n";
    for (const auto& s : traj.samples) {
        out << format_double(s.t) << '\t' << format_double(s.x) << '\t' << format_double(s.y)
            << '\t' << format_double(s.pressure) << '\t' << (s.pen_down ? 1 : 0);
        if (traj.has_angles) out << '\t' << format_double(s.theta) << '\t' << format_double(s.phi);
        out << '\n';
    }
}

void write_signature(const fs::path& file, const SignatureTrajectory& traj) {
    std::ostringstream os;
    write_signature(os, traj);
    write_text(file, os.str());
}

void write_text(const fs::path& file, const std::string& content) {
    if (file.has_parent_path()) fs::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary);
    if (!out) throw Error(ErrorCode::invalid_argument, "cannot write " + file.string());
    out << content;
    if (!out) throw Error(ErrorCode::invalid_argument, "failed writing " + file.string());
}

// ---------------------------------------------------------------------------
// Datasets

DatasetMetadata read_metadata(const fs::path& root) {
    DatasetMetadata meta;
    const fs::path file = root / "dataset.meta";
    if (!fs::exists(file)) return meta;
    auto in = open_input(file);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError(file.string(), lineno, "expected key=value");
        const std::string key = trim(std::string_view(t).substr(0, eq));
        const std::string value = trim(std::string_view(t).substr(eq + 1));
        if (key == "device") meta.device = value;
        else if (key == "units") meta.units = value;
        else if (key == "sample_rate_hz")
            meta.sample_rate_hz = require_number(value, file.string(), lineno, key);
        else if (key == "lines_per_mm")
            meta.lines_per_mm = require_lines_per_mm(value, file.string(), lineno);
        else meta.extra[key] = value;
    }
    return meta;
}

namespace {

std::vector<fs::path> sorted_files(const fs::path& dir, const std::string& ext) {
    std::vector<fs::path> out;
    if (!fs::is_directory(dir)) return out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path());
    }
    std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) {
        return natural_less(a.filename().string(), b.filename().string());
    });
    return out;
}

SignerData& signer_slot(Dataset& ds, const std::string& id) {
    for (auto& s : ds.signers) {
        if (s.id == id) return s;
    }
    ds.signers.push_back(SignerData{id, {}, {}});
    return ds.signers.back();
}

void add_signature(SignerData& signer, SignatureTrajectory t, bool forgery) {
    t.signer_id = signer.id;
    t.label = forgery ? SignatureLabel::skilled_forgery : SignatureLabel::genuine;
    (forgery ? signer.skilled_forgeries : signer.genuine).push_back(std::move(t));
}

Dataset load_index(const fs::path& root, const fs::path& index, DatasetMetadata meta) {
    Dataset ds;
    ds.metadata = std::move(meta);
    auto in = open_input(index);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto fields = split_fields(line);
        if (fields.empty() || fields[0].front() == '#') continue;
        if (fields.size() != 3) {
            throw ParseError(index.string(), lineno, "expected: signer label path");
        }
        const std::string label(fields[1]);
        if (label != "genuine" && label != "forgery") {
            throw ParseError(index.string(), lineno,
                             "label must be genuine or forgery, got '" + label + "'");
        }
        auto t = read_signature(root / std::string(fields[2]), ds.metadata.lines_per_mm);
        add_signature(signer_slot(ds, std::string(fields[0])), std::move(t), label == "forgery");
    }
    if (ds.signers.empty()) {
        throw Error(ErrorCode::missing_manifest, index.string() + " lists no signatures");
    }
    return ds;
}

Dataset load_canonical(const fs::path& root, DatasetMetadata meta) {
    const fs::path index = root / "index.tsv";
    if (fs::exists(index)) return load_index(root, index, std::move(meta));

    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(root)) {
        if (e.is_directory() &&
            (fs::is_directory(e.path() / "genuine") || fs::is_directory(e.path() / "forgery"))) {
            dirs.push_back(e.path());
        }
    }
    std::sort(dirs.begin(), dirs.end(), [](const fs::path& a, const fs::path& b) {
        return natural_less(a.filename().string(), b.filename().string());
    });

    Dataset ds;
    ds.metadata = std::move(meta);
    for (const auto& dir : dirs) {
        SignerData& signer = signer_slot(ds, dir.filename().string());
        for (const auto& f : sorted_files(dir / "genuine", ".tsv")) {
            add_signature(signer, read_signature(f, ds.metadata.lines_per_mm), false);
        }
        for (const auto& f : sorted_files(dir / "forgery", ".tsv")) {
            add_signature(signer, read_signature(f, ds.metadata.lines_per_mm), true);
        }
    }
    if (ds.signers.empty()) {
        throw Error(ErrorCode::missing_manifest,
                    root.string() + ": no index.tsv and no <signer>/{genuine,forgery}/ directories");
    }
    return ds;
}

SignatureTrajectory read_svc_file(const fs::path& file, double lpm) {
    constexpr double kDeg = std::numbers::pi / 180.0;
    const std::string name = file.string();
    auto in = open_input(file);
    std::string line;
    std::size_t lineno = 0;
    long declared = -1;
    SignatureTrajectory traj;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (declared < 0) {
            const double n = require_number(fields[0], name, lineno, "sample count");
            if (fields.size() != 1 || n < 0 || n != std::floor(n)) {
                throw ParseError(name, lineno, "first line must hold the sample count");
            }
            declared = static_cast<long>(n);
            continue;
        }
        if (width == 0) {
            width = fields.size();
            if (width != 4 && width != 7) {
                throw ParseError(name, lineno, "expected 4 or 7 fields, got " +
                                                   std::to_string(width));
            }
            traj.has_angles = width == 7;
        } else if (fields.size() != width) {
            throw ParseError(name, lineno, "expected " + std::to_string(width) + " fields, got " +
                                               std::to_string(fields.size()));
        }
        std::array<double, 7> v{};
        for (std::size_t i = 0; i < width; ++i) {
            v[i] = require_number(fields[i], name, lineno, "field " + std::to_string(i + 1));
        }
        PenSample s;
        s.x = v[0] / lpm;
        s.y = v[1] / lpm;
        s.t = v[2];
        s.pen_down = v[3] != 0.0;
        if (width == 7) {
            s.theta = v[4] * kDeg;
            s.phi = v[5] * kDeg;
            s.pressure = v[6];
        } else {
            s.pressure = s.pen_down ? 1.0 : 0.0;
        }
        check_timestamp(traj, s.t, name, lineno);
        traj.samples.push_back(s);
    }
    if (declared < 0) throw ParseError(name, lineno, "empty file");
    if (static_cast<std::size_t>(declared) != traj.samples.size()) {
        throw ParseError(name, lineno,
                         "header declares " + std::to_string(declared) + " samples, found " +
                             std::to_string(traj.samples.size()));
    }
    check_pen_down(traj, name, lineno);
    traj.signature_id = signature_name(file);
    return traj;
}

Dataset load_svc(const fs::path& root, DatasetMetadata meta) {
    static const std::regex pattern(R"(U(\d+)S(\d+)\.TXT)", std::regex::icase);
    struct Entry {
        long user;
        long index;
        fs::path path;
    };
    std::vector<Entry> entries;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file()) continue;
        const std::string fname = e.path().filename().string();
        std::smatch m;
        if (std::regex_match(fname, m, pattern)) {
            entries.push_back({std::stol(m[1].str()), std::stol(m[2].str()), e.path()});
        }
    }
    if (entries.empty()) {
        throw Error(ErrorCode::missing_manifest, root.string() + ": no U<signer>S<n>.TXT files");
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return a.user != b.user ? a.user < b.user : a.index < b.index;
    });

    Dataset ds;
    ds.metadata = std::move(meta);
    for (const auto& e : entries) {
        SignerData& signer = signer_slot(ds, "U" + std::to_string(e.user));
        add_signature(signer, read_svc_file(e.path, ds.metadata.lines_per_mm), e.index > 20);
    }
    return ds;
}

}  // namespace

Dataset load_dataset(const fs::path& root, DatasetFormat format) {
    if (!fs::is_directory(root)) {
        throw Error(ErrorCode::missing_manifest, root.string() + " is not a directory");
    }
    DatasetMetadata meta = read_metadata(root);
    return format == DatasetFormat::canonical_tsv ? load_canonical(root, std::move(meta))
                                                  : load_svc(root, std::move(meta));
}

void write_dataset(const fs::path& root, const Dataset& ds) {
    std::ostringstream meta;
    if (!ds.metadata.device.empty()) meta << "device=" << ds.metadata.device << '\n';
    meta << "units=mm\n";
    if (ds.metadata.sample_rate_hz > 0.0) {
        meta << "sample_rate_hz=" << format_double(ds.metadata.sample_rate_hz) << '\n';
    }
    meta << "lines_per_mm=1\n";
    for (const auto& [k, v] : ds.metadata.extra) meta << k << '=' << v << '\n';
    write_text(root / "dataset.meta", meta.str());

    std::ostringstream index;
    index << "# signer\tlabel\tpath\n";
    for (const auto& signer : ds.signers) {
        for (const auto* list : {&signer.genuine, &signer.skilled_forgeries}) {
            const bool forgery = list == &signer.skilled_forgeries;
            for (const auto& t : *list) {
                const fs::path rel = fs::path(signer.id) / (forgery ? "forgery" : "genuine") /
                                     (t.signature_id + ".tsv");
                write_signature(root / rel, t);
                index << signer.id << '\t' << (forgery ? "forgery" : "genuine") << '\t'
                      << rel.generic_string() << '\n';
            }
        }
    }
    write_text(root / "index.tsv", index.str());
}

// ---------------------------------------------------------------------------
// Reports

nlohmann::json report_to_json(const evaluation::EERReport& r) {
    nlohmann::json j;
    j["feature_kind"] = r.feature_kind;
    j["verifier"] = r.verifier;
    j["fusion_mode"] = r.fusion_mode;
    j["geometry_mode"] = r.geometry_mode;
    j["omega"] = r.omega;
    j["seed"] = r.seed;
    j["eer_rf"] = r.eer_rf;
    j["eer_sf"] = r.eer_sf ? nlohmann::json(*r.eer_sf) : nlohmann::json(nullptr);
    j["score_counts"] = {{"genuine", r.genuine_count}, {"rf", r.rf_count}, {"sf", r.sf_count}};
    return j;
}

void write_roc_csv(std::ostream& out, const std::vector<evaluation::RocPoint>& roc) {
    out << "threshold,far,frr\n";
    for (const auto& p : roc) {
        out << (std::isinf(p.threshold) ? std::string("inf") : format_double(p.threshold)) << ','
            << format_double(p.far) << ',' << format_double(p.frr) << '\n';
    }
}

void write_trials_csv(std::ostream& out, const std::vector<evaluation::TrialScore>& trials) {
    out << "claimed_signer,signer_id,signature_id,kind,score,raw_position,raw_angle\n";
    for (const auto& t : trials) {
        out << t.claimed_signer << ',' << t.signer_id << ',' << t.signature_id << ','
            << evaluation::to_string(t.kind) << ',' << format_double(t.score) << ','
            << format_double(t.raw_position) << ','
            << (std::isnan(t.raw_angle) ? std::string() : format_double(t.raw_angle)) << '\n';
    }
}

void write_snr_csv(std::ostream& out, const std::vector<evaluation::SnrRecord>& records) {
    out << "signer_id,signature_id,samples,snr_db\n";
    for (const auto& r : records) {
        out << r.signer_id << ',' << r.signature_id << ',' << r.samples << ','
            << format_double(r.snr_db) << '\n';
    }
}

}  // namespace vsa::io
