#include <cmath>
#include <ostream>
#include <sstream>

#include "vsa/cli.hpp"
#include "vsa/errors.hpp"
#include "vsa/synthetic.hpp"

namespace vsa::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kSnrTarget = 60.0;

json dataset_summary(const RunConfig& c, const Dataset& ds) {
    return {{"path", c.dataset},
            {"format", io::to_string(c.format)},
            {"signers", ds.signers.size()},
            {"signatures", ds.signature_count()}};
}

void write_manifest(const RunConfig& c, const std::string& command, const json& dataset,
                    const std::vector<std::string>& outputs) {
    json m;
    m["command"] = command;
    m["config"] = describe(c);
    if (!dataset.is_null()) m["dataset"] = dataset;
    m["outputs"] = outputs;
    io::write_text(fs::path(c.out) / "manifest.json", m.dump(2) + "\n");
}

template <class Fn>
std::string render(Fn&& fn) {
    std::ostringstream os;
    fn(os);
    return os.str();
}

std::string anthro_csv(const SignatureTrajectory& traj, const features::AnthroSequence& seq) {
    std::ostringstream os;
    os << "t_ms,pen_down,q1,q2,q3,q4,q5,q6,x_e,y_e,z_e,x_w,y_w,z_w,x_f,y_f,z_f\n";
    for (std::size_t i = 0; i < seq.size(); ++i) {
        os << io::format_double(traj.samples[i].t) << ',' << (traj.samples[i].pen_down ? 1 : 0);
        for (std::size_t k = 0; k < 6; ++k) os << ',' << io::format_double(seq.angles[i][k]);
        for (const auto* p : {&seq.elbow[i], &seq.wrist[i], &seq.finger[i]}) {
            for (int a = 0; a < 3; ++a) os << ',' << io::format_double((*p)(a));
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace

Dataset load_configured_dataset(const RunConfig& c) {
    if (c.dataset == kSyntheticDataset) return synthetic::make_corpus();
    return io::load_dataset(c.dataset, c.format);
}

int cmd_extract(const RunConfig& c, std::ostream& log) {
    const Dataset ds = load_configured_dataset(c);
    std::vector<std::string> outputs;
    for (const auto& signer : ds.signers) {
        const auto g = evaluation::signer_geometry(c.bench.geometry, c.bench.seed, signer.id);
        for (const auto* list : {&signer.genuine, &signer.skilled_forgeries}) {
            for (const auto& t : *list) {
                features::AnthroSequence seq;
                try {
                    seq = features::extract_features(t, g, c.bench.extraction);
                } catch (const Error& e) {
                    throw Error(e.code(), signer.id + "/" + t.signature_id + ": " + e.what());
                }
                const fs::path rel = fs::path("features") / signer.id / (t.signature_id + ".csv");
                io::write_text(fs::path(c.out) / rel, anthro_csv(t, seq));
                outputs.push_back(rel.generic_string());
            }
        }
    }
    write_manifest(c, "extract", dataset_summary(c, ds), outputs);
    log << "extracted " << outputs.size() << " signatures into " << c.out << "/features\n";
    return 0;
}

int cmd_validate(const RunConfig& c, std::ostream& log) {
    const Dataset ds = load_configured_dataset(c);
    const auto records =
        evaluation::roundtrip_validation(ds, c.bench.extraction, c.bench.geometry, c.bench.seed);
    io::write_text(fs::path(c.out) / "snr.csv",
                   render([&](std::ostream& os) { io::write_snr_csv(os, records); }));
    write_manifest(c, "validate", dataset_summary(c, ds), {"snr.csv"});

    double worst = evaluation::kSnrCap;
    std::size_t below = 0;
    for (const auto& r : records) {
        worst = std::min(worst, r.snr_db);
        if (r.snr_db < kSnrTarget) ++below;
    }
    log << records.size() << " signatures, minimum SNR " << io::format_double(worst) << " dB, "
        << below << " below " << kSnrTarget << " dB\n";
    return 0;
}

int cmd_benchmark(const RunConfig& c, std::ostream& log) {
    const Dataset ds = load_configured_dataset(c);
    const auto report = evaluation::run_benchmark(ds, c.bench);
    const fs::path out(c.out);

    std::vector<std::string> outputs{"report.json", "trials.csv", "roc_rf.csv", "timing.json"};
    io::write_text(out / "report.json", io::report_to_json(report).dump(2) + "\n");
    io::write_text(out / "trials.csv",
                   render([&](std::ostream& os) { io::write_trials_csv(os, report.trials); }));
    io::write_text(out / "roc_rf.csv",
                   render([&](std::ostream& os) { io::write_roc_csv(os, report.roc_rf); }));
    if (report.eer_sf) {
        io::write_text(out / "roc_sf.csv",
                       render([&](std::ostream& os) { io::write_roc_csv(os, report.roc_sf); }));
        outputs.push_back("roc_sf.csv");
    }
    const json timing = {{"runtime_ms", report.runtime_ms}, {"threads", c.bench.threads}};
    io::write_text(out / "timing.json", timing.dump(2) + "\n");
    write_manifest(c, "benchmark", dataset_summary(c, ds), outputs);

    log << "EER_RF " << io::format_double(report.eer_rf) << " %";
    if (report.eer_sf) log << ", EER_SF " << io::format_double(*report.eer_sf) << " %";
    log << " (" << report.genuine_count << " genuine, " << report.rf_count << " RF, "
        << report.sf_count << " SF trials, " << std::lround(report.runtime_ms) << " ms)\n";
    return 0;
}

int cmd_sample_geometry(const RunConfig& c, std::ostream& log) {
    std::vector<std::string> ids;
    json dataset = nullptr;
    if (c.dataset != kSyntheticDataset) {
        const Dataset ds = load_configured_dataset(c);
        for (const auto& s : ds.signers) ids.push_back(s.id);
        dataset = dataset_summary(c, ds);
    } else {
        for (std::size_t i = 0; i < c.signers; ++i) ids.push_back(synthetic::signer_name(i));
    }

    std::ostringstream os;
    os << "signer_id,gender,l1,l2,l3,l4,l5\n";
    for (const auto& id : ids) {
        const auto seed = features::signer_seed(c.bench.seed, id);
        const auto g = features::sample_realistic_geometry(seed);
        const bool male = features::sampled_gender(seed) == features::Gender::male;
        os << id << ',' << (male ? "male" : "female");
        for (double l : {g.l1, g.l2, g.l3, g.l4, g.l5}) os << ',' << io::format_double(l);
        os << '\n';
    }
    io::write_text(fs::path(c.out) / "geometry.csv", os.str());
    write_manifest(c, "sample_geometry", dataset, {"geometry.csv"});
    log << "sampled " << ids.size() << " geometries into " << c.out << "/geometry.csv\n";
    return 0;
}

int cmd_synth(const RunConfig& c, std::ostream& log) {
    synthetic::CorpusConfig cc;
    cc.signers = c.signers;
    cc.seed = c.bench.seed;
    const Dataset ds = synthetic::make_corpus(cc);
    io::write_dataset(c.out, ds);
    log << "wrote " << ds.signature_count() << " signatures for " << ds.signers.size()
        << " signers into " << c.out << "\n";
    return 0;
}

int cmd_convert(const RunConfig& c, std::ostream& log) {
    const Dataset ds = load_configured_dataset(c);
    io::write_dataset(c.out, ds);
    log << "converted " << ds.signature_count() << " signatures into " << c.out << "\n";
    return 0;
}

json error_record(const std::exception& e) {
    json j;
    if (const auto* err = dynamic_cast<const Error*>(&e)) {
        j["error"] = std::string(to_string(err->code()));
        if (const auto* pe = dynamic_cast<const ParseError*>(err)) {
            j["file"] = pe->file();
            j["line"] = pe->line();
        }
        if (const auto* ue = dynamic_cast<const UnreachableError*>(err); ue && ue->sample()) {
            j["sample"] = *ue->sample();
        }
    } else {
        j["error"] = "Internal";
    }
    j["message"] = e.what();
    return j;
}

}  // namespace vsa::cli
