// sweep.hpp — parameter scans over independent scattering runs

#pragma once

#include <string>
#include <vector>

#include "wgqed/scatter.hpp"

namespace wgqed {

enum class SweepAxis { detuning, pulse_width, photon_number, emitter_count };

const char* axis_name(SweepAxis axis);
SweepAxis parse_axis(const std::string& name);

struct SweepSpec {
    SweepAxis axis = SweepAxis::detuning;
    std::vector<double> values;
    Scenario base;
    // Gaussian width used for detuning scans (the plane-wave limit).
    double plane_wave_width = 0.02;
    // |R(delta) - R(delta/2)| per point; required for detuning scans
    bool convergence_check = false;
    // emitter_count axis: spacing in units of lambda_a for the generated chain
    double chain_spacing = 0.5;

    void validate() const;
};

struct SweepRow {
    double value = 0.0;
    double R = 0.0, T = 0.0;
    double n_reflected = 0.0;
    double balance_defect = 0.0;
    double convergence_defect = 0.0; // NaN unless requested
    std::string status = "ok";       // "ok" or "<category>: <message>"

    bool ok() const { return status == "ok"; }
};

struct SweepTable {
    SweepAxis axis = SweepAxis::detuning;
    std::vector<SweepRow> rows;
};

// Scenario for one grid value.
Scenario sweep_point(const SweepSpec& spec, double value);

// Rows come back in grid order regardless of worker count. Per-point failures
// are recorded in the row; SweepError if every point fails.
SweepTable run_sweep(const SweepSpec& spec, int workers = 1);

// |R(delta) - R(delta/2)| for a Gaussian-pulse scenario.
double convergence_check(const Scenario& point, double R_at_point);
double convergence_check(const Scenario& point);

} // namespace wgqed
