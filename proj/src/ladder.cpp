#include "wgqed/ladder.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>

namespace wgqed {

DensityLadder::DensityLadder(int photons, Eigen::Index dim)
    : photons_(photons), dim_(dim), data_(VectorXc::Zero(block_count(photons) * dim * dim))
{
    if (photons < 0) throw ContractError("ladder photon number must be >= 0");
}

DensityLadder DensityLadder::initial(int photons, const MatrixXc& rho0)
{
    if (rho0.rows() != rho0.cols()) throw ContractError("initial state must be square");
    DensityLadder ladder(photons, rho0.rows());
    for (int m = 0; m <= photons; ++m) ladder.block(m, m) = rho0;
    return ladder;
}

DensityLadder::BlockMap DensityLadder::view(VectorXc& flat, Eigen::Index dim, int m, int n)
{
    return BlockMap(flat.data() + block_index(m, n) * dim * dim, dim, dim);
}

DensityLadder::ConstBlockMap DensityLadder::view(const VectorXc& flat, Eigen::Index dim, int m,
                                                 int n)
{
    return ConstBlockMap(flat.data() + block_index(m, n) * dim * dim, dim, dim);
}

DensityLadder::BlockMap DensityLadder::block(int m, int n)
{
    if (n > m || m > photons_ || n < 0) throw ContractError("ladder block index out of range");
    return view(data_, dim_, m, n);
}

DensityLadder::ConstBlockMap DensityLadder::block(int m, int n) const
{
    if (n > m || m > photons_ || n < 0) throw ContractError("ladder block index out of range");
    return view(data_, dim_, m, n);
}

MatrixXc DensityLadder::get(int m, int n) const
{
    if (m >= n) return block(m, n);
    return block(n, m).adjoint();
}

double DensityLadder::trace_defect() const
{
    double worst = 0.0;
    for (int m = 0; m <= photons_; ++m) {
        for (int n = 0; n <= m; ++n) {
            const cplx tr = block(m, n).trace();
            worst = std::max(worst, std::abs(tr - (m == n ? 1.0 : 0.0)));
        }
    }
    return worst;
}

double DensityLadder::hermiticity_defect() const
{
    double worst = 0.0;
    for (int m = 0; m <= photons_; ++m) {
        const auto b = block(m, m);
        worst = std::max(worst, (b - b.adjoint()).cwiseAbs().maxCoeff());
    }
    return worst;
}

double DensityLadder::min_eigenvalue() const
{
    const auto b = top();
    const MatrixXc herm = 0.5 * (b + b.adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

} // namespace wgqed
