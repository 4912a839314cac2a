// io.hpp — CSV/JSON serialisation of results and the output-directory policy

#pragma once

#include <string>

#include <json.hpp>

#include "wgqed/config.hpp"
#include "wgqed/oracle.hpp"

namespace wgqed {

// Columns: t, P_e_1..P_e_N, r, l — 12 significant digits.
std::string trajectory_csv(const ScatterRecord& record);
std::string trajectory_csv(const SingleExcitationResult& result);
// Columns: value, R, T, n_R, defect, convergence_defect, status.
std::string sweep_csv(const SweepTable& table);
// Named extra observables, if the scenario recorded any.
std::string observables_csv(const ScatterRecord& record);

nlohmann::json summary_json(const ScatterRecord& record);
nlohmann::json manifest_json(const RunConfig& config, const std::string& command);

// Formats a double the way every CSV column does.
std::string format_number(double v);

// Writes files into one directory under an overwrite policy:
// fail — refuse to replace an existing file; overwrite — replace;
// verify — require the existing bytes to match exactly (IntegrityError if not).
// Metadata files (the manifest) describe the invocation rather than the result;
// verify replaces them instead of comparing.
class OutputWriter {
public:
    OutputWriter(std::string directory, OverwritePolicy policy);
    void write(const std::string& name, const std::string& content, bool metadata = false);
    // Fails early (before any computation) under the fail policy.
    void preflight(const std::vector<std::string>& names) const;
    const std::string& directory() const { return dir_; }

private:
    std::string dir_;
    OverwritePolicy policy_;
};

} // namespace wgqed
