// scatter.hpp — one complete scattering run: build the model, integrate the
// master equation, sample the output fields, integrate intensities

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wgqed/coupling.hpp"
#include "wgqed/inout.hpp"
#include "wgqed/integrator.hpp"
#include "wgqed/pulse.hpp"

namespace wgqed {

struct Scenario {
    std::string name = "scenario";
    EmitterArray array;
    LambdaOptions lambda;
    PulseSpec pulse;
    // t_final acts as a cap when adaptive_final is set (0 picks a default);
    // samples are generated from sample_dt.
    IntegratorConfig integrator;
    std::vector<int> initially_excited;
    std::optional<MatrixXc> initial_state;
    double sample_dt = 0.0; // 0: min(0.02, 0.05/delta)
    bool adaptive_final = true;
    double excitation_threshold = 1e-6;
    // Extra observables recorded as Re Tr[O rho_NN]
    std::vector<std::pair<std::string, MatrixXc>> observables;

    void validate() const;
};

// Time by which the pulse centre has cleared the far end of the array plus 8/delta.
double pass_time(const Scenario& s);
double sample_step(const Scenario& s);
// Integration horizon actually used as the cap.
double horizon(const Scenario& s);

ScatterRecord run_scatter(const Scenario& s);

// Mirror image of a scenario: z -> -z, phases reversed, pulse direction flipped.
Scenario mirrored(const Scenario& s);

} // namespace wgqed
