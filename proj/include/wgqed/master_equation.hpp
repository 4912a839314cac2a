// master_equation.hpp — right-hand sides of the coherent, vacuum and Fock-ladder
// master equations
//
// All three share one Liouvillian
//   L0[rho] = -(i/2) sum_j eps_j [sz_j, rho] - i sum_jl Im(L_jl) [s+_j s-_l, rho]
//             - sum_jl Re(L_jl) (s+_j s-_l rho + rho s+_j s-_l - 2 s-_l rho s+_j)
// and differ only in how the incident field enters. The dissipator is applied
// through the eigen-channels of Re(Lambda), so a rank-deficient coupling (e.g.
// half-wavelength spacing) costs one jump operator instead of N_a^2 terms.

#pragma once

#include <vector>

#include "wgqed/coupling.hpp"
#include "wgqed/ladder.hpp"
#include "wgqed/operator_algebra.hpp"
#include "wgqed/pulse.hpp"

namespace wgqed {

class MasterEquation {
public:
    MasterEquation(const EmitterArray& array, const CouplingMatrix& coupling,
                   const PulseSpec& pulse);

    const OperatorAlgebra& algebra() const noexcept { return algebra_; }
    const EmitterArray& array() const noexcept { return array_; }
    const CouplingMatrix& coupling() const noexcept { return coupling_; }
    const PulseSpec& pulse() const noexcept { return pulse_; }
    const DriveEvaluator& drive() const noexcept { return drive_; }
    Eigen::Index dimension() const noexcept { return algebra_.dimension(); }
    // Photon number of the ladder this equation evolves (0 for coherent/vacuum).
    int ladder_photons() const noexcept;
    int channel_count() const noexcept { return static_cast<int>(channels_.size()); }

    // Flattened RHS on a ladder-shaped state vector; dispatches on statistics.
    // Not reentrant: uses internal workspaces.
    void operator()(double t, const VectorXc& y, VectorXc& dy) const;

    // Coherent drive (vacuum when the pulse carries no photons). rho Hermitian.
    void rhs_coherent(double t, const Eigen::Ref<const MatrixXc>& rho,
                      Eigen::Ref<MatrixXc> out) const;
    // No drive at all.
    void rhs_vacuum(double t, const Eigen::Ref<const MatrixXc>& rho,
                    Eigen::Ref<MatrixXc> out) const;
    // Fock ladder; ladder.photons() must equal the pulse photon number.
    void rhs_ladder(double t, const DensityLadder& ladder, DensityLadder& out) const;

private:
    struct Channel {
        SparseXc op, op_adj;
        double weight; // 2 * eigenvalue of Re(Lambda)
    };

    void update_time(double t) const;
    void apply_free(const Eigen::Ref<const MatrixXc>& rho, Eigen::Ref<MatrixXc> out,
                    bool hermitian, bool with_drive) const;
    void ladder_flat(double t, const VectorXc& y, VectorXc& dy, int photons) const;

    EmitterArray array_;
    CouplingMatrix coupling_;
    PulseSpec pulse_;
    OperatorAlgebra algebra_;
    DriveEvaluator drive_;
    SparseXc h_static_, h_static_adj_;
    std::vector<Channel> channels_;
    Eigen::MatrixXd z_diag_; // D x N_a, +-1 entries of sigma_z_j
    std::vector<double> drive_scale_;
    std::vector<int> plus_owner_, minus_owner_;

    mutable SparseXc s_plus_, s_minus_;
    mutable Eigen::VectorXd energy_;
    mutable VectorXc alpha_;
    mutable double cached_t_;
    mutable MatrixXc work_, work2_;
};

// Convenience forms that assemble a MasterEquation per call.
MatrixXc rhs_coherent(const MatrixXc& state, double t, const EmitterArray& array,
                      const CouplingMatrix& coupling, const PulseSpec& pulse);
MatrixXc rhs_vacuum(const MatrixXc& state, double t, const EmitterArray& array,
                    const CouplingMatrix& coupling);
DensityLadder rhs_ladder(const DensityLadder& ladder, double t, const EmitterArray& array,
                         const CouplingMatrix& coupling, const PulseSpec& pulse);

// Tr[op rho_NN] (Tr[op rho_S] for coherent/vacuum runs).
cplx expectation(const DensityLadder& ladder, const MatrixXc& op);
cplx expectation(const DensityLadder& ladder, const SparseXc& op);

// Observable of a superposition sum_m c_m |m_alpha> of Fock inputs evolved
// on the full ladder: sum_mn c_m c_n^* Tr[op rho_mn].
cplx superposition_expectation(const DensityLadder& ladder, const VectorXc& coefficients,
                               const SparseXc& op);

} // namespace wgqed
