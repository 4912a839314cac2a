// operator_algebra.hpp — Pauli ladder operators of N_a two-level emitters
//
// Basis ordering: emitter 1 is the most significant tensor factor and each
// factor is ordered (|e>, |g>). Basis index bit (N_a-1-j) is 0 when emitter j
// (0-based) is excited, so index 0 is |e...e> and index D-1 is |g...g>.
// Operators are stored sparse; at N_a = 12 a dense copy of every product
// sigma_j^+ sigma_l^- would not fit in memory.

#pragma once

#include <cstdint>
#include <vector>

#include "wgqed/types.hpp"

namespace wgqed {

inline constexpr int max_emitters = 12;

template <typename Scalar>
class BasicOperatorAlgebra {
public:
    using Sparse = Eigen::SparseMatrix<Scalar>;
    using Dense = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

    explicit BasicOperatorAlgebra(int n_emitters);

    int emitters() const noexcept { return n_; }
    Eigen::Index dimension() const noexcept { return dim_; }

    const Sparse& sigma_plus(int j) const { return plus_[static_cast<std::size_t>(j)]; }
    const Sparse& sigma_minus(int j) const { return minus_[static_cast<std::size_t>(j)]; }
    const Sparse& sigma_z(int j) const { return z_[static_cast<std::size_t>(j)]; }
    // sigma_j^+ sigma_l^-
    const Sparse& hop(int j, int l) const
    {
        return hop_[static_cast<std::size_t>(j * n_ + l)];
    }

    // True when emitter j is excited in basis state `index`.
    bool excited(Eigen::Index index, int j) const noexcept
    {
        return ((index >> (n_ - 1 - j)) & 1) == 0;
    }
    Eigen::Index flip(Eigen::Index index, int j) const noexcept
    {
        return index ^ (Eigen::Index{1} << (n_ - 1 - j));
    }
    Eigen::Index ground_index() const noexcept { return dim_ - 1; }
    Eigen::Index index_with_excited(const std::vector<int>& excited_emitters) const;

    Dense identity() const { return Dense::Identity(dim_, dim_); }
    Dense ground_state() const;
    Dense product_state(const std::vector<int>& excited_emitters) const;

private:
    int n_;
    Eigen::Index dim_;
    std::vector<Sparse> plus_, minus_, z_, hop_;
};

using OperatorAlgebra = BasicOperatorAlgebra<cplx>;

// Checked factory; throws CapacityError beyond max_emitters.
template <typename Scalar = cplx>
BasicOperatorAlgebra<Scalar> build_algebra(int n_emitters)
{
    return BasicOperatorAlgebra<Scalar>(n_emitters);
}

template <typename Scalar>
BasicOperatorAlgebra<Scalar>::BasicOperatorAlgebra(int n_emitters) : n_(n_emitters)
{
    if (n_emitters < 1) throw ConfigError("operator algebra needs at least one emitter");
    if (n_emitters > max_emitters) {
        throw CapacityError("dense representation is capped at " + std::to_string(max_emitters) +
                            " emitters, requested " + std::to_string(n_emitters));
    }
    dim_ = Eigen::Index{1} << n_;
    const auto n = static_cast<std::size_t>(n_);
    plus_.reserve(n);
    minus_.reserve(n);
    z_.reserve(n);
    for (int j = 0; j < n_; ++j) {
        std::vector<Eigen::Triplet<Scalar>> up, zz;
        up.reserve(static_cast<std::size_t>(dim_ / 2));
        zz.reserve(static_cast<std::size_t>(dim_));
        for (Eigen::Index s = 0; s < dim_; ++s) {
            if (!excited(s, j)) up.emplace_back(flip(s, j), s, Scalar(1));
            zz.emplace_back(s, s, Scalar(excited(s, j) ? 1 : -1));
        }
        Sparse p(dim_, dim_), zm(dim_, dim_);
        p.setFromTriplets(up.begin(), up.end());
        zm.setFromTriplets(zz.begin(), zz.end());
        minus_.push_back(Sparse(p.adjoint()));
        plus_.push_back(std::move(p));
        z_.push_back(std::move(zm));
    }
    hop_.reserve(n * n);
    for (int j = 0; j < n_; ++j) {
        for (int l = 0; l < n_; ++l) {
            hop_.push_back(Sparse(plus_[static_cast<std::size_t>(j)] *
                                  minus_[static_cast<std::size_t>(l)]));
        }
    }
}

template <typename Scalar>
Eigen::Index BasicOperatorAlgebra<Scalar>::index_with_excited(
    const std::vector<int>& excited_emitters) const
{
    Eigen::Index s = ground_index();
    for (int j : excited_emitters) {
        if (j < 0 || j >= n_) throw ConfigError("excited emitter index out of range");
        if (excited(s, j)) throw ConfigError("emitter listed twice as excited");
        s = flip(s, j);
    }
    return s;
}

template <typename Scalar>
typename BasicOperatorAlgebra<Scalar>::Dense BasicOperatorAlgebra<Scalar>::ground_state() const
{
    return product_state({});
}

template <typename Scalar>
typename BasicOperatorAlgebra<Scalar>::Dense
BasicOperatorAlgebra<Scalar>::product_state(const std::vector<int>& excited_emitters) const
{
    Dense rho = Dense::Zero(dim_, dim_);
    const auto s = index_with_excited(excited_emitters);
    rho(s, s) = Scalar(1);
    return rho;
}

} // namespace wgqed
