// ladder.hpp — the family of generalized density operators rho_mn, 0 <= n <= m <= N
//
// Only blocks with m >= n are stored; rho_nm = rho_mn^dagger is reconstructed on
// demand. Blocks live contiguously in one vector so the integrator can treat the
// whole ladder as a flat complex state.

#pragma once

#include "wgqed/types.hpp"

namespace wgqed {

class DensityLadder {
public:
    using BlockMap = Eigen::Map<MatrixXc>;
    using ConstBlockMap = Eigen::Map<const MatrixXc>;

    DensityLadder() = default;
    DensityLadder(int photons, Eigen::Index dim);

    // rho_mm(0) = rho_S(0) for all m, rho_mn(0) = 0 for m != n.
    static DensityLadder initial(int photons, const MatrixXc& rho0);

    static int block_count(int photons) { return (photons + 1) * (photons + 2) / 2; }
    static int block_index(int m, int n) { return m * (m + 1) / 2 + n; }

    int photons() const noexcept { return photons_; }
    Eigen::Index dim() const noexcept { return dim_; }

    // Stored block, requires m >= n.
    BlockMap block(int m, int n);
    ConstBlockMap block(int m, int n) const;
    // Any block; materialises the adjoint when m < n.
    MatrixXc get(int m, int n) const;
    ConstBlockMap top() const { return block(photons_, photons_); }

    VectorXc& data() noexcept { return data_; }
    const VectorXc& data() const noexcept { return data_; }

    static ConstBlockMap view(const VectorXc& flat, Eigen::Index dim, int m, int n);
    static BlockMap view(VectorXc& flat, Eigen::Index dim, int m, int n);

    // Largest violation of Tr rho_mm = 1 and Tr rho_mn = 0.
    double trace_defect() const;
    // Largest |rho_mm - rho_mm^dagger| entry.
    double hermiticity_defect() const;
    // Smallest eigenvalue of the Hermitian part of rho_NN.
    double min_eigenvalue() const;

private:
    int photons_ = 0;
    Eigen::Index dim_ = 0;
    VectorXc data_;
};

// Tr[op * rho] for sparse op without forming the product.
template <typename SparseOp, typename DenseDerived>
cplx trace_product(const SparseOp& op, const Eigen::MatrixBase<DenseDerived>& rho)
{
    cplx acc = 0.0;
    for (Eigen::Index col = 0; col < op.outerSize(); ++col) {
        for (typename SparseOp::InnerIterator it(op, col); it; ++it) {
            acc += it.value() * rho(it.col(), it.row());
        }
    }
    return acc;
}

template <typename DerivedA, typename DerivedB>
auto commutator(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
{
    return (a * b - b * a).eval();
}

} // namespace wgqed
