// oracle.hpp — independent reference engines
//
// stationary_rt: plane-wave scattering by composing the 2x2 scattering data of
// the individual emitters (no retardation: fixed optical phases).
// evolve_single_photon: the single-excitation Schroedinger equation solved in
// real space. Right/left-moving photon amplitudes are carried along their
// characteristics x -+ t exactly; each emitter sees the incident amplitude plus
// the (retarded) emission of every emitter upstream of it, and emitters that
// share an envelope coordinate are passed in array order. Only the emitter
// amplitudes need time stepping (classical RK4 on a uniform grid).

#pragma once

#include <optional>
#include <vector>

#include "wgqed/emitter_array.hpp"
#include "wgqed/pulse.hpp"

namespace wgqed {

struct TransferMatrixModel {
    std::vector<double> phase;
    std::vector<double> gamma_wg;
    std::vector<double> gamma_ng;

    static TransferMatrixModel from_array(const EmitterArray& array);
};

struct StationaryRT {
    cplx r, t;
    double R() const { return std::norm(r); }
    double T() const { return std::norm(t); }
};

// Amplitude reflection/transmission of a right-incident plane wave detuned by
// delta from the emitter transition.
StationaryRT stationary_rt(const TransferMatrixModel& model, double delta);

// Single emitter cell.
StationaryRT single_emitter_rt(double gamma_wg, double gamma_ng, double delta);

using Matrix2c = Eigen::Matrix2cd;
Matrix2c transfer_matrix(const TransferMatrixModel& model, double delta);

struct WavefunctionGrid {
    double t_final = 0.0;     // 0: pulse pass time + 15/Gamma
    double sample_dt = 0.02;
    int steps_per_sample = 0; // RK4 substeps; 0: rate * h <= 0.02
    double norm_tolerance = 1e-4;
    std::optional<int> excited_emitter; // start with this emitter excited (vacuum pulse)
};

struct SingleExcitationResult {
    std::vector<double> t;
    Eigen::MatrixXd populations; // samples x N_a
    std::vector<double> r, l;    // output fluxes at the ports z_N / z_1
    double transmitted_norm = 0.0;
    double reflected_norm = 0.0;
    double final_excitation = 0.0;
    double norm_drift = 0.0; // |excitation + emitted flux + flux still to come - initial|
    int steps = 0;
};

// Throws DiscretizationError when the norm drifts beyond grid.norm_tolerance.
SingleExcitationResult evolve_single_photon(const EmitterArray& array, const PulseSpec& pulse,
                                            const WavefunctionGrid& grid = {});

} // namespace wgqed
