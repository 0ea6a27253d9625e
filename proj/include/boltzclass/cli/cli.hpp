#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "boltzclass/classify/classify.hpp"

namespace boltzclass {

inline constexpr const char* kVersion = "0.3.0";

struct RunConfig {
    std::string catalog = BC_CATALOG_PATH;
    std::vector<std::string> ids;
    int dim = 0;
    std::string what = "both";
    std::uint64_t seed = 42;
    long n = 100000;
    std::string format = "text";
    int jobs = 1;
    bool timing = false;
};

/// Verdicts for the selected rows, ordered by row id and then source before
/// invariant; rows run in parallel on cfg.jobs threads.
std::vector<Verdict> run_verification(const Catalog& cat, const RunConfig& cfg);

/// Full JSON report (version, catalog hash, summary, rows).
std::string verification_json(const Catalog& cat, const std::vector<Verdict>& verdicts, bool timing);

/// Entry point; returns 0 if nothing failed, 1 on any FAIL, 2 on usage or IO errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace boltzclass
