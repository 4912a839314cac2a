// emitter_array.hpp — description of the two-level emitters along the waveguide

#pragma once

#include <optional>
#include <vector>

#include "wgqed/types.hpp"

namespace wgqed {

// Internal units: Gamma_ref = 1 and v_g = 1. Envelope coordinates z are in
// v_g/Gamma_ref; optical phases k_a z_j are carried separately because the two
// live on unrelated scales.

enum class ModulationKind { none, sinusoid, tabulated };

// Transition-frequency modulation eps_j(t).
struct ModulationSpec {
    ModulationKind kind = ModulationKind::none;
    double amplitude = 0.0;
    double frequency = 0.0;
    double phase = 0.0;
    std::vector<double> times;   // tabulated only, strictly increasing
    std::vector<double> values;

    static ModulationSpec none() { return {}; }
    static ModulationSpec sinusoid(double amplitude, double frequency, double phase = 0.0);
    static ModulationSpec tabulated(std::vector<double> times, std::vector<double> values);

    // Throws ExtrapolationError outside a tabulated range.
    double operator()(double t) const;
    bool active() const noexcept { return kind != ModulationKind::none; }
};

enum class PositionMode {
    phase_explicit, // phases given independently of z
    physical,       // phases derived from z and lambda_a
};

struct EmitterArray {
    std::vector<double> z;
    std::vector<double> phase;
    std::vector<double> gamma_wg;
    std::vector<double> gamma_ng;
    double dipole_angle = pi / 2;
    std::optional<double> lambda_a;
    std::vector<ModulationSpec> modulation;
    PositionMode mode = PositionMode::phase_explicit;

    int count() const noexcept { return static_cast<int>(z.size()); }

    // Throws ConfigError when an invariant is violated.
    void validate() const;

    bool any_modulation() const;
    double total_rate(int j) const { return gamma_wg[j] + gamma_ng[j]; }

    static EmitterArray phase_explicit(std::vector<double> z, std::vector<double> phase,
                                       std::vector<double> gamma_wg,
                                       std::vector<double> gamma_ng = {});
    static EmitterArray physical(std::vector<double> z, double lambda_a,
                                 std::vector<double> gamma_wg,
                                 std::vector<double> gamma_ng = {});

    // n identical emitters at a common envelope coordinate, consecutive optical
    // phases separated by 2*pi*spacing_over_lambda.
    static EmitterArray chain(int n, double spacing_over_lambda, double gamma_wg = 1.0,
                              double gamma_ng = 0.0);
};

// eps_j(t); t must be non-negative.
double modulation_at(const EmitterArray& array, int j, double t);

// Phase folded into [0, 2pi).
double wrap_phase(double phase);

} // namespace wgqed
