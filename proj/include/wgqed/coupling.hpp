// coupling.hpp — collective emitter-emitter coupling Lambda_jl

#pragma once

#include "wgqed/emitter_array.hpp"

namespace wgqed {

// Radiation kernel used for the non-guided dipole-dipole term.
enum class DipoleKernel {
    verbatim, // 1/(k r)^2 in both the real and imaginary sub-terms
    standard, // 1/(k r)^3 in the imaginary sub-term (textbook near-field form)
};

struct LambdaOptions {
    bool include_nonguided = false;
    DipoleKernel kernel = DipoleKernel::verbatim;
};

// Lambda_jl. Re part drives the collective dissipator, Im part the coherent
// exchange. The diagonal is (Gamma_j + gamma_j)/2 with the Lamb shift absorbed
// into the transition frequency.
struct CouplingMatrix {
    MatrixXc lambda;

    Eigen::MatrixXd re_lambda() const { return lambda.real(); }
    Eigen::MatrixXd im_lambda() const { return lambda.imag(); }
    Eigen::Index size() const noexcept { return lambda.rows(); }
};

CouplingMatrix build_lambda(const EmitterArray& array, const LambdaOptions& options = {});

// Non-guided dipole-dipole amplitude for two emitters at separation k_a r.
cplx nonguided_term(double gamma_j, double gamma_l, double kr, double dipole_angle,
                    DipoleKernel kernel);

} // namespace wgqed
