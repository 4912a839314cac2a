#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "wgqed/coupling.hpp"
#include "wgqed/operator_algebra.hpp"

using namespace wgqed;

namespace {

MatrixXc dense(const SparseXc& s) { return MatrixXc(s); }

} // namespace

TEST_CASE("single emitter raising operator")
{
    const auto alg = build_algebra(1);
    MatrixXc expect(2, 2);
    expect << 0, 1, 0, 0; // basis (|e>, |g>)
    CHECK((dense(alg.sigma_plus(0)) - expect).norm() == 0.0);
    CHECK((dense(alg.sigma_minus(0)) - expect.adjoint()).norm() == 0.0);
}

TEST_CASE("projector on emitter 1 has rank 2 for two emitters")
{
    const auto alg = build_algebra(2);
    CHECK(dense(alg.hop(0, 0)).trace().real() == 2.0);
}

TEST_CASE("distinct emitters commute, same-site identities hold")
{
    for (int n = 1; n <= 4; ++n) {
        const auto alg = build_algebra(n);
        const MatrixXc id = MatrixXc::Identity(alg.dimension(), alg.dimension());
        for (int j = 0; j < n; ++j) {
            const MatrixXc p = dense(alg.sigma_plus(j)), m = dense(alg.sigma_minus(j));
            CHECK((p * p).norm() == 0.0);
            CHECK((m - p.adjoint()).norm() == 0.0);
            CHECK((dense(alg.sigma_z(j)) - (2.0 * p * m - id)).norm() == 0.0);
            for (int l = 0; l < n; ++l) {
                if (l == j) continue;
                const MatrixXc q = dense(alg.sigma_plus(l)), r = dense(alg.sigma_minus(l));
                CHECK((p * q - q * p).norm() == 0.0);
                CHECK((p * r - r * p).norm() == 0.0);
                CHECK((dense(alg.hop(j, l)) - p * r).norm() == 0.0);
            }
        }
    }
}

TEST_CASE("emitter 1 is the most significant factor")
{
    const auto alg = build_algebra(3);
    // |g e g>: only emitter 2 excited -> bits (1,0,1) = index 5
    CHECK(alg.index_with_excited({1}) == 5);
    CHECK(alg.index_with_excited({0, 1, 2}) == 0);
    CHECK(alg.ground_index() == 7);
}

TEST_CASE("capacity cap")
{
    CHECK_NOTHROW(build_algebra(12));
    CHECK_THROWS_AS(build_algebra(13), CapacityError);
    CHECK_THROWS_AS(build_algebra(0), ConfigError);
}

TEST_CASE("guided coupling examples")
{
    const auto half = build_lambda(EmitterArray::chain(2, 0.5));
    CHECK(std::abs(half.lambda(0, 1) - cplx(-0.5, 0)) < 1e-15);
    const auto quarter = build_lambda(EmitterArray::chain(2, 0.25));
    CHECK(std::abs(quarter.lambda(0, 1) - cplx(0, 0.5)) < 1e-15);
    CHECK(quarter.lambda(0, 0) == cplx(0.5, 0));

    const auto lossy = build_lambda(EmitterArray::chain(3, 0.3, 1.0, 0.4));
    CHECK(lossy.lambda(2, 2) == cplx(0.7, 0));
    CHECK((lossy.lambda - lossy.lambda.transpose()).norm() == 0.0);
}

TEST_CASE("non-guided term against direct evaluation")
{
    // two emitters a lambda/8 apart, dipoles perpendicular to the axis
    const double gamma = 0.3;
    EmitterArray a = EmitterArray::physical({0.0, 0.125}, 1.0, {1.0, 1.0}, {gamma, gamma});
    a.dipole_angle = pi / 2;
    LambdaOptions opt;
    opt.include_nonguided = true;
    const auto c = build_lambda(a, opt);

    const double kr = 2 * pi * 0.125;
    const double s = std::sin(pi / 2), co = std::cos(pi / 2);
    const cplx guided = 0.5 * std::polar(1.0, kr);
    const cplx bracket = s * s * cplx(0, -1.0 / kr) +
                         (1 - 3 * co * co) * cplx(1.0 / (kr * kr), 1.0 / (kr * kr));
    const cplx expect = guided + 0.75 * gamma * bracket * std::polar(1.0, kr);
    CHECK(std::abs(c.lambda(0, 1) - expect) < 1e-13);
    CHECK(c.lambda(0, 0) == cplx(0.5 * (1 + gamma), 0));

    opt.kernel = DipoleKernel::standard;
    const auto st = build_lambda(a, opt);
    const cplx bracket3 = s * s * cplx(0, -1.0 / kr) +
                          (1 - 3 * co * co) * cplx(1.0 / (kr * kr), 1.0 / (kr * kr * kr));
    CHECK(std::abs(st.lambda(0, 1) - (guided + 0.75 * gamma * bracket3 * std::polar(1.0, kr))) <
          1e-13);
}

TEST_CASE("non-guided term errors")
{
    LambdaOptions opt;
    opt.include_nonguided = true;
    EmitterArray noscale = EmitterArray::chain(2, 0.1, 1.0, 0.2);
    CHECK_THROWS_AS(build_lambda(noscale, opt), ConfigError);
    EmitterArray same = EmitterArray::physical({0.0, 0.0}, 1.0, {1, 1}, {0.2, 0.2});
    CHECK_THROWS_AS(build_lambda(same, opt), SingularityError);
}

TEST_CASE("Re(Lambda) spectrum of identical lossless chains")
{
    for (int n : {2, 3, 5, 8}) {
        for (double d : {0.1, 0.125, 0.25, 0.5, 0.37}) {
            const auto c = build_lambda(EmitterArray::chain(n, d));
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.re_lambda());
            CHECK(es.eigenvalues().minCoeff() >= -1e-12);
            CHECK(es.eigenvalues().maxCoeff() <= 0.5 * n * (1 + 1e-12));
        }
    }
}

TEST_CASE("phase-explicit and physical construction agree")
{
    const std::vector<double> z = {0.0, 0.4, 0.41, 2.3};
    const double lam = 0.9;
    std::vector<double> ph;
    for (double x : z) ph.push_back(2 * pi * x / lam);
    const auto a = build_lambda(EmitterArray::physical(z, lam, {1, 1, 1, 1}));
    const auto b = build_lambda(EmitterArray::phase_explicit(z, ph, {1, 1, 1, 1}));
    CHECK((a.lambda - b.lambda).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("array validation")
{
    CHECK_THROWS_AS(EmitterArray::phase_explicit({1.0, 0.0}, {0, 0}, {1, 1}).validate(),
                    ConfigError);
    CHECK_THROWS_AS(EmitterArray::phase_explicit({0.0}, {0}, {0.0}).validate(), ConfigError);
    CHECK_THROWS_AS(EmitterArray::phase_explicit({0.0}, {0}, {1.0}, {-0.1}).validate(),
                    ConfigError);
    EmitterArray inconsistent = EmitterArray::physical({0.0, 0.3}, 1.0, {1, 1});
    inconsistent.phase[1] += 0.2;
    CHECK_THROWS_AS(inconsistent.validate(), ConfigError);
}

TEST_CASE("modulation")
{
    EmitterArray a = EmitterArray::chain(2, 0.25);
    a.modulation = {ModulationSpec::none(), ModulationSpec::sinusoid(10, 10)};
    CHECK(modulation_at(a, 0, 3.0) == 0.0);
    CHECK(modulation_at(a, 1, 0.0) == 0.0);
    CHECK(modulation_at(a, 1, pi / 20) == doctest::Approx(10.0).epsilon(1e-14));

    const auto tab = ModulationSpec::tabulated({0, 1, 2}, {0, 2, -2});
    CHECK(tab(0.5) == doctest::Approx(1.0));
    CHECK(tab(1.5) == doctest::Approx(0.0));
    CHECK_THROWS_AS(tab(2.5), ExtrapolationError);
    CHECK_THROWS_AS(ModulationSpec::tabulated({0, 1, 1}, {0, 0, 0}), ConfigError);
}
