#include "wgqed/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace wgqed {

using nlohmann::json;
namespace fs = std::filesystem;

std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v); // no "-0"
    return buf;
}

namespace {

std::string trajectory(const std::vector<double>& t, const Eigen::MatrixXd& pops,
                       const std::vector<double>& r, const std::vector<double>& l)
{
    std::ostringstream os;
    os << "t";
    for (Eigen::Index j = 0; j < pops.cols(); ++j) os << ",P_e_" << j + 1;
    os << ",r,l\n";
    for (std::size_t s = 0; s < t.size(); ++s) {
        os << format_number(t[s]);
        for (Eigen::Index j = 0; j < pops.cols(); ++j) {
            os << ',' << format_number(pops(static_cast<Eigen::Index>(s), j));
        }
        os << ',' << format_number(r[s]) << ',' << format_number(l[s]) << '\n';
    }
    return os.str();
}

json number_or_null(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json integrator_json(const Scenario& s)
{
    json j;
    j["rtol"] = s.integrator.rtol;
    j["atol"] = s.integrator.atol;
    j["initial_step"] = s.integrator.initial_step;
    j["max_step"] = number_or_null(s.integrator.max_step);
    j["t_final_cap"] = horizon(s);
    j["sample_dt"] = sample_step(s);
    j["adaptive_final"] = s.adaptive_final;
    j["excitation_threshold"] = s.excitation_threshold;
    j["method"] = "dormand-prince 5(4), dense output";
    return j;
}

} // namespace

std::string trajectory_csv(const ScatterRecord& record)
{
    return trajectory(record.t, record.populations, record.r, record.l);
}

std::string trajectory_csv(const SingleExcitationResult& result)
{
    return trajectory(result.t, result.populations, result.r, result.l);
}

std::string observables_csv(const ScatterRecord& record)
{
    std::ostringstream os;
    os << "t";
    for (const auto& n : record.observable_names) os << ',' << n;
    os << '\n';
    for (std::size_t s = 0; s < record.t.size(); ++s) {
        os << format_number(record.t[s]);
        for (Eigen::Index k = 0; k < record.observables.cols(); ++k) {
            os << ',' << format_number(record.observables(static_cast<Eigen::Index>(s), k));
        }
        os << '\n';
    }
    return os.str();
}

std::string sweep_csv(const SweepTable& table)
{
    std::ostringstream os;
    os << "value,R,T,n_R,defect,convergence_defect,status\n";
    for (const auto& r : table.rows) {
        std::string status = r.status;
        for (auto& c : status) {
            if (c == ',' || c == '\n') c = ';';
        }
        os << format_number(r.value) << ',' << format_number(r.R) << ',' << format_number(r.T)
           << ',' << format_number(r.n_reflected) << ',' << format_number(r.balance_defect) << ','
           << format_number(r.convergence_defect) << ',' << status << '\n';
    }
    return os.str();
}

json summary_json(const ScatterRecord& r)
{
    json j;
    j["I_R"] = r.I_R;
    j["I_L"] = r.I_L;
    j["R"] = number_or_null(r.R);
    j["T"] = number_or_null(r.T);
    j["n_in"] = r.n_in;
    j["initial_excitation"] = r.initial_excitation;
    j["residual_excitation"] = r.residual_excitation;
    j["balance_defect"] = r.balance_defect;
    j["quadrature_error"] = r.quadrature_error;
    j["t_final"] = r.t_final;
    j["samples"] = r.t.size();
    j["steps"] = r.steps;
    j["rhs_evaluations"] = r.rhs_evaluations;
    return j;
}

json manifest_json(const RunConfig& config, const std::string& command)
{
    json j;
    j["tool"] = "wgqed";
    j["version"] = WGQED_VERSION;
    j["command"] = command;
    j["config"] = config.source;
    j["integrator"] = integrator_json(config.scenario);
    j["workers"] = config.workers;
    j["overwrite"] = policy_name(config.overwrite);
    j["deterministic"] = true;
    return j;
}

OutputWriter::OutputWriter(std::string directory, OverwritePolicy policy)
    : dir_(std::move(directory)), policy_(policy)
{
}

void OutputWriter::preflight(const std::vector<std::string>& names) const
{
    if (policy_ != OverwritePolicy::fail) return;
    for (const auto& n : names) {
        if (fs::exists(fs::path(dir_) / n)) {
            throw ConfigError("output file " + (fs::path(dir_) / n).string() +
                              " exists; choose another --out or set output.overwrite");
        }
    }
}

void OutputWriter::write(const std::string& name, const std::string& content, bool metadata)
{
    const fs::path path = fs::path(dir_) / name;
    if (fs::exists(path)) {
        if (policy_ == OverwritePolicy::fail) {
            throw ConfigError("output file " + path.string() + " exists (overwrite policy: fail)");
        }
        if (policy_ == OverwritePolicy::verify && !metadata) {
            std::ifstream in(path, std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            if (ss.str() != content) {
                throw IntegrityError("verify: " + path.string() +
                                     " differs from the recomputed result");
            }
            return;
        }
    }
    fs::create_directories(dir_);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
}

} // namespace wgqed
