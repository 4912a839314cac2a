// validate.hpp — the invariant suite behind `wgqed validate`
//
// Each check measures one number, compares it with a fixed tolerance and
// records the scenario it ran on. Exceptions inside a check fail that check
// only. The quick level keeps N_a <= 3 and N <= 2; full adds larger arrays and
// the comparisons against the independent oracles.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wgqed/scatter.hpp"

namespace wgqed {

enum class ValidationLevel { quick, full };

// Deliberate corruption used to prove the suite can fail.
enum class Fault {
    none,
    lambda_sign, // Lambda -> -Lambda everywhere the suite builds a coupling
};

ValidationLevel parse_level(const std::string& name);
Fault parse_fault(const std::string& name);

struct CheckResult {
    std::string name;
    std::string scenario;
    bool passed = false;
    double value = 0.0;
    double tolerance = 0.0;
    std::string relation; // "<=" or ">="
    std::string detail;
    double seconds = 0.0;
};

struct ValidationReport {
    ValidationLevel level = ValidationLevel::quick;
    Fault fault = Fault::none;
    std::vector<CheckResult> checks;
    double seconds = 0.0;
    bool passed() const;
    std::vector<std::string> failures() const;
    nlohmann::json to_json() const;
};

using ProgressCallback = std::function<void(const CheckResult&)>;

ValidationReport run_validation(ValidationLevel level, Fault fault = Fault::none,
                                const ProgressCallback& progress = {});

// Coupling as the suite sees it (with the fault applied).
CouplingMatrix faulted_lambda(const EmitterArray& array, const LambdaOptions& options,
                              Fault fault);

// Interior samples strictly above both neighbours' plateau and above `floor`.
int count_local_maxima(const std::vector<double>& y, double floor = 0.0);
int count_local_maxima(const Eigen::VectorXd& y, double floor = 0.0);
// Sign changes of the forward difference, ignoring samples where |y| is below
// `floor` (flat tails carry only round-off wiggles).
int derivative_sign_changes(const std::vector<double>& y, double floor);

} // namespace wgqed
