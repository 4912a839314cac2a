#include "wgqed/master_equation.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace wgqed {

namespace {

// Sum_j coeff_j * ops_j with every nonzero owned by exactly one j. Returns the
// pattern and, for each stored value, the index of the owning emitter, so the
// time-dependent drive operator is refreshed in O(nnz) without reassembly.
SparseXc owned_pattern(const OperatorAlgebra& alg, bool plus, std::vector<int>& owner)
{
    std::vector<Eigen::Triplet<cplx>> trip;
    for (int j = 0; j < alg.emitters(); ++j) {
        const auto& op = plus ? alg.sigma_plus(j) : alg.sigma_minus(j);
        for (Eigen::Index c = 0; c < op.outerSize(); ++c) {
            for (SparseXc::InnerIterator it(op, c); it; ++it) {
                trip.emplace_back(it.row(), it.col(), cplx(j + 1));
            }
        }
    }
    SparseXc s(alg.dimension(), alg.dimension());
    s.setFromTriplets(trip.begin(), trip.end());
    s.makeCompressed();
    owner.resize(static_cast<std::size_t>(s.nonZeros()));
    for (Eigen::Index k = 0; k < s.nonZeros(); ++k) {
        owner[static_cast<std::size_t>(k)] = static_cast<int>(s.valuePtr()[k].real()) - 1;
    }
    return s;
}

} // namespace

MasterEquation::MasterEquation(const EmitterArray& array, const CouplingMatrix& coupling,
                               const PulseSpec& pulse)
    : array_(array), coupling_(coupling), pulse_(pulse), algebra_(array.count()),
      drive_(pulse, array), cached_t_(std::numeric_limits<double>::quiet_NaN())
{
    const int n = array.count();
    if (coupling.size() != n) throw ContractError("coupling matrix size does not match array");
    const auto dim = algebra_.dimension();

    // H_eff = sum_jl (Im L_jl - i Re L_jl) s+_j s-_l
    h_static_.resize(dim, dim);
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
            const cplx c = coupling.lambda(j, l);
            const cplx w(c.imag(), -c.real());
            if (w != cplx(0)) h_static_ += w * algebra_.hop(j, l);
        }
    }
    h_static_.makeCompressed();
    h_static_adj_ = h_static_.adjoint();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(coupling.re_lambda());
    const Eigen::VectorXd mu = es.eigenvalues();
    const double cutoff = 1e-14 * std::max(mu.cwiseAbs().maxCoeff(), 1e-300);
    for (Eigen::Index k = 0; k < mu.size(); ++k) {
        if (std::abs(mu(k)) <= cutoff) continue;
        SparseXc op(dim, dim);
        for (int l = 0; l < n; ++l) {
            const double v = es.eigenvectors()(l, k);
            if (v != 0.0) op += cplx(v) * algebra_.sigma_minus(l);
        }
        op.makeCompressed();
        channels_.push_back({op, SparseXc(op.adjoint()), 2.0 * mu(k)});
    }

    z_diag_.resize(dim, n);
    for (int j = 0; j < n; ++j) {
        for (Eigen::Index s = 0; s < dim; ++s) z_diag_(s, j) = algebra_.excited(s, j) ? 1.0 : -1.0;
    }
    energy_ = Eigen::VectorXd::Zero(dim);

    drive_scale_.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) drive_scale_[j] = std::sqrt(array.gamma_wg[j] / 2.0);
    s_plus_ = owned_pattern(algebra_, true, plus_owner_);
    s_minus_ = owned_pattern(algebra_, false, minus_owner_);
    alpha_ = VectorXc::Zero(n);
    work_.resize(dim, dim);
    work2_.resize(dim, dim);
}

int MasterEquation::ladder_photons() const noexcept
{
    return pulse_.statistics == Statistics::fock ? pulse_.photons : 0;
}

void MasterEquation::update_time(double t) const
{
    if (t == cached_t_) return;
    cached_t_ = t;
    drive_.evaluate(t, alpha_);
    cplx* vp = s_plus_.valuePtr();
    for (std::size_t k = 0; k < plus_owner_.size(); ++k) {
        const int j = plus_owner_[k];
        vp[k] = drive_scale_[static_cast<std::size_t>(j)] * alpha_(j);
    }
    cplx* vm = s_minus_.valuePtr();
    for (std::size_t k = 0; k < minus_owner_.size(); ++k) {
        const int j = minus_owner_[k];
        vm[k] = drive_scale_[static_cast<std::size_t>(j)] * std::conj(alpha_(j));
    }
    if (array_.any_modulation()) {
        Eigen::VectorXd eps(array_.count());
        for (int j = 0; j < array_.count(); ++j) eps(j) = 0.5 * modulation_at(array_, j, t);
        energy_.noalias() = z_diag_ * eps;
    }
}

void MasterEquation::apply_free(const Eigen::Ref<const MatrixXc>& rho, Eigen::Ref<MatrixXc> out,
                                bool hermitian, bool with_drive) const
{
    const bool modulated = array_.any_modulation();
    work_.noalias() = h_static_ * rho;
    if (modulated) work_ += energy_.asDiagonal() * rho;
    if (with_drive) {
        work_.noalias() += s_plus_ * rho;
        work_.noalias() += s_minus_ * rho;
    }
    if (hermitian) {
        // rho = rho^dagger, so rho H^dagger = (H rho)^dagger
        out = -I * work_ + I * work_.adjoint();
    } else {
        work2_.noalias() = rho * h_static_adj_;
        if (modulated) work2_ += rho * energy_.asDiagonal();
        out = -I * (work_ - work2_);
    }
    for (const auto& ch : channels_) {
        work2_.noalias() = ch.op * rho;
        work_.noalias() = work2_ * ch.op_adj;
        out += ch.weight * work_;
    }
}

void MasterEquation::rhs_coherent(double t, const Eigen::Ref<const MatrixXc>& rho,
                                  Eigen::Ref<MatrixXc> out) const
{
    update_time(t);
    apply_free(rho, out, true, !drive_.null());
}

void MasterEquation::rhs_vacuum(double t, const Eigen::Ref<const MatrixXc>& rho,
                                Eigen::Ref<MatrixXc> out) const
{
    update_time(t);
    apply_free(rho, out, true, false);
}

void MasterEquation::ladder_flat(double t, const VectorXc& y, VectorXc& dy, int photons) const
{
    update_time(t);
    const auto dim = dimension();
    const bool drive = !drive_.null();
    for (int m = 0; m <= photons; ++m) {
        for (int n = 0; n <= m; ++n) {
            const auto rho = DensityLadder::view(y, dim, m, n);
            auto out = DensityLadder::view(dy, dim, m, n);
            apply_free(rho, out, m == n, false);
            if (!drive) continue;
            if (m == n) {
                if (m == 0) continue;
                // sqrt(m)[S+, rho_{m-1,m}] = -sqrt(m)([S-, rho_{m,m-1}])^dagger
                const auto b = DensityLadder::view(y, dim, m, m - 1);
                work_.noalias() = s_minus_ * b;
                work_.noalias() -= b * s_minus_;
                out += (-I * std::sqrt(double(m))) * (work_ - work_.adjoint());
                continue;
            }
            if (m >= 1) {
                const auto x = DensityLadder::view(y, dim, m - 1, n);
                work_.noalias() = s_plus_ * x;
                work_.noalias() -= x * s_plus_;
                out += (-I * std::sqrt(double(m))) * work_;
            }
            if (n >= 1) {
                const auto x = DensityLadder::view(y, dim, m, n - 1);
                work_.noalias() = s_minus_ * x;
                work_.noalias() -= x * s_minus_;
                out += (-I * std::sqrt(double(n))) * work_;
            }
        }
    }
}

void MasterEquation::rhs_ladder(double t, const DensityLadder& ladder, DensityLadder& out) const
{
    if (pulse_.statistics != Statistics::fock || ladder.photons() != pulse_.photons) {
        throw ContractError("ladder photon number does not match the Fock pulse");
    }
    if (ladder.dim() != dimension()) throw ContractError("ladder dimension mismatch");
    if (out.photons() != ladder.photons() || out.dim() != ladder.dim()) {
        out = DensityLadder(ladder.photons(), ladder.dim());
    }
    ladder_flat(t, ladder.data(), out.data(), ladder.photons());
}

void MasterEquation::operator()(double t, const VectorXc& y, VectorXc& dy) const
{
    const int photons = ladder_photons();
    if (dy.size() != y.size()) dy.resize(y.size());
    if (photons > 0) {
        ladder_flat(t, y, dy, photons);
        return;
    }
    const auto dim = dimension();
    Eigen::Map<const MatrixXc> rho(y.data(), dim, dim);
    Eigen::Map<MatrixXc> out(dy.data(), dim, dim);
    rhs_coherent(t, rho, out);
}

MatrixXc rhs_coherent(const MatrixXc& state, double t, const EmitterArray& array,
                      const CouplingMatrix& coupling, const PulseSpec& pulse)
{
    if (pulse.statistics == Statistics::fock) {
        throw ContractError("rhs_coherent called with a Fock pulse");
    }
    MasterEquation eq(array, coupling, pulse);
    if (state.rows() != eq.dimension() || state.cols() != eq.dimension()) {
        throw ContractError("state dimension mismatch");
    }
    MatrixXc out(state.rows(), state.cols());
    eq.rhs_coherent(t, state, out);
    return out;
}

MatrixXc rhs_vacuum(const MatrixXc& state, double t, const EmitterArray& array,
                    const CouplingMatrix& coupling)
{
    MasterEquation eq(array, coupling, PulseSpec::vacuum());
    if (state.rows() != eq.dimension() || state.cols() != eq.dimension()) {
        throw ContractError("state dimension mismatch");
    }
    MatrixXc out(state.rows(), state.cols());
    eq.rhs_vacuum(t, state, out);
    return out;
}

DensityLadder rhs_ladder(const DensityLadder& ladder, double t, const EmitterArray& array,
                         const CouplingMatrix& coupling, const PulseSpec& pulse)
{
    MasterEquation eq(array, coupling, pulse);
    DensityLadder out(ladder.photons(), ladder.dim());
    eq.rhs_ladder(t, ladder, out);
    return out;
}

cplx expectation(const DensityLadder& ladder, const MatrixXc& op)
{
    if (op.rows() != ladder.dim() || op.cols() != ladder.dim()) {
        throw ContractError("observable dimension does not match the state");
    }
    return (op.cwiseProduct(MatrixXc(ladder.top()).transpose())).sum();
}

cplx expectation(const DensityLadder& ladder, const SparseXc& op)
{
    if (op.rows() != ladder.dim() || op.cols() != ladder.dim()) {
        throw ContractError("observable dimension does not match the state");
    }
    return trace_product(op, ladder.top());
}

cplx superposition_expectation(const DensityLadder& ladder, const VectorXc& coefficients,
                               const SparseXc& op)
{
    if (coefficients.size() != ladder.photons() + 1) {
        throw ContractError("need one superposition coefficient per ladder rung");
    }
    cplx acc = 0.0;
    for (int m = 0; m <= ladder.photons(); ++m) {
        for (int n = 0; n <= ladder.photons(); ++n) {
            const cplx w = coefficients(m) * std::conj(coefficients(n));
            if (w == cplx(0)) continue;
            acc += w * (m >= n ? trace_product(op, ladder.block(m, n))
                               : trace_product(op, MatrixXc(ladder.get(m, n))));
        }
    }
    return acc;
}

} // namespace wgqed
