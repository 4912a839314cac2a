// integrator.hpp — adaptive Dormand–Prince 5(4) with dense output for flat
// complex states

#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "wgqed/types.hpp"

namespace wgqed {

struct IntegratorConfig {
    double rtol = 1e-8;
    double atol = 1e-10;
    double initial_step = 0.0; // 0: automatic
    double max_step = std::numeric_limits<double>::infinity();
    double t_final = 0.0;
    std::vector<double> samples; // dense-output grid, increasing, within [0, t_final]
    long max_steps = 20'000'000;

    void validate() const;
};

struct IntegrationStats {
    long accepted = 0;
    long rejected = 0;
    long rhs_evaluations = 0;
    double t_end = 0.0;
    double last_step = 0.0;
    bool stopped_early = false;
};

using RhsFunction = std::function<void(double, const VectorXc&, VectorXc&)>;
using SampleObserver = std::function<void(double, const VectorXc&)>;
// Called after every accepted step; return false to stop at that point.
using StepHook = std::function<bool(double, const VectorXc&)>;

// Integrates y' = f(t, y) from t0 to config.t_final, overwriting y with the
// final state. Observer is fed every sample time in [t0, t_end].
IntegrationStats integrate(const RhsFunction& f, VectorXc& y, double t0,
                           const IntegratorConfig& config, const SampleObserver& observer = {},
                           const StepHook& hook = {});

} // namespace wgqed
