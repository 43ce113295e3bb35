#pragma once

#include <map>
#include <string>
#include <vector>

#include "vsa/trajectory.hpp"

namespace vsa {

struct SignerData {
    std::string id;
    std::vector<SignatureTrajectory> genuine;            // acquisition order
    std::vector<SignatureTrajectory> skilled_forgeries;
};

struct DatasetMetadata {
    std::string device;
    std::string units = "mm";
    double sample_rate_hz = 0.0;  // 0 when unknown
    double lines_per_mm = 1.0;
    std::map<std::string, std::string> extra;
};

struct Dataset {
    std::vector<SignerData> signers;
    DatasetMetadata metadata;

    bool has_forgeries() const {
        for (const auto& s : signers) {
            if (!s.skilled_forgeries.empty()) return true;
        }
        return false;
    }

    std::size_t signature_count() const {
        std::size_t n = 0;
        for (const auto& s : signers) n += s.genuine.size() + s.skilled_forgeries.size();
        return n;
    }
};

}  // namespace vsa
