#pragma once

#include "cgl/config.hpp"

namespace cgl {

struct RunResult {
    int exit_code = 0;  // 0 = pass, 1 = negative scenario result, 2 = config error
    std::string output_dir;
    std::string summary;
};

/// Execute a validated config: runs the scenario, writes the data files
/// (CSV series, JSON verdicts/certificates) and finally the run manifest.
/// The manifest is written last, so its absence marks an incomplete run.
RunResult execute(const RunConfig& cfg);

struct VerifyCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Property suite behind the `verify` scenario: operator identities, the
/// pointwise Lipschitz fuzz, Gronwall checks, embedding inequalities with
/// measured constants, coercivity.  `fast` lowers the sample counts.
std::vector<VerifyCheck> run_verify_suite(bool fast, std::uint64_t seed);

/// FNV-1a 64-bit checksum used in the manifest's file table.
std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace cgl
