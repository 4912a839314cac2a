// inout.hpp — output-field intensities r(t), l(t) and the integrated
// reflection/transmission bookkeeping
//
// With the input field a at the port (z_N for the right output, z_1 for the
// left) and phi_j the optical phases,
//   r(t) = <a^dag a> - 2 sum_j sqrt(G_j/2) Im[e^{i phi_j} <s+_j a>]
//          + sum_jl sqrt(G_j G_l)/2 e^{i(phi_j - phi_l)} <s+_j s-_l>
// and l(t) is the mirror image with phi -> -phi. The cross term <s+_j a> closes
// on rho_S for coherent input and on the ladder block rho_{N-1,N} for Fock
// input (a|N> = sqrt(N) alpha |N-1>).

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wgqed/coupling.hpp"
#include "wgqed/ladder.hpp"
#include "wgqed/operator_algebra.hpp"
#include "wgqed/pulse.hpp"

namespace wgqed {

// Expectation values an output intensity needs at one instant.
struct EmitterMoments {
    VectorXc cross;     // Tr[s+_j rho_S] (coherent) or Tr[s+_j rho_{N-1,N}] (Fock)
    MatrixXc corr;      // <s+_j s-_l> on rho_S / rho_NN
    Eigen::VectorXd populations;
};

EmitterMoments emitter_moments(const DensityLadder& ladder, const OperatorAlgebra& algebra,
                               const PulseSpec& pulse);
// Same on a flat ladder state (integrator vector) without copying blocks.
EmitterMoments emitter_moments(const VectorXc& flat, int photons, const OperatorAlgebra& algebra,
                               const PulseSpec& pulse);

// Intensities from precomputed moments. `port_field` is the incident envelope
// at the output port (DriveEvaluator::port_field).
double right_intensity(const EmitterMoments& m, cplx port_field, const EmitterArray& array,
                       const PulseSpec& pulse);
double left_intensity(const EmitterMoments& m, cplx port_field, const EmitterArray& array,
                      const PulseSpec& pulse);

// Self-contained forms evaluating the ladder at time t.
double right_intensity(const DensityLadder& ladder, double t, const EmitterArray& array,
                       const CouplingMatrix& coupling, const PulseSpec& pulse);
double left_intensity(const DensityLadder& ladder, double t, const EmitterArray& array,
                      const CouplingMatrix& coupling, const PulseSpec& pulse);

// Composite Simpson on a uniform grid (odd or even sample count). `error`
// receives |S(h) - S(2h)| when at least five samples are available.
double simpson(const std::vector<double>& y, double dt, double* error = nullptr);

struct ScatterRecord {
    std::vector<double> t;
    Eigen::MatrixXd populations; // samples x N_a
    std::vector<double> r, l;
    std::vector<std::string> observable_names;
    Eigen::MatrixXd observables; // samples x observables, Re Tr[O rho_NN]

    double n_in = 0.0;
    double initial_excitation = 0.0; // sum_j P_e(0), counts towards the balance
    double I_R = 0.0, I_L = 0.0;
    double R = 0.0, T = 0.0; // NaN when undefined
    double residual_excitation = 0.0;
    double balance_defect = 0.0;
    double quadrature_error = 0.0;
    double t_final = 0.0;
    long steps = 0;
    long rhs_evaluations = 0;
    Direction direction = Direction::right;
};

// (R, T) = (I_L, I_R)/(I_R + I_L) for right-moving input, mirrored for left.
// Throws UndefinedReflectivityError when nothing was scattered.
std::pair<double, double> reflectivity(const ScatterRecord& record);

// Photons sent back towards the source: I_L for right-moving input.
double average_reflected_number(const ScatterRecord& record, const PulseSpec& pulse);

// Fills I_R, I_L, R, T, balance defect and quadrature error from the series.
void finalize_record(ScatterRecord& record);

} // namespace wgqed
