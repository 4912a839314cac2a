#include <doctest.h>

#include "wgqed/oracle.hpp"
#include "wgqed/validate.hpp"

using namespace wgqed;

namespace {

double lorentzian(double d, double width) { return width * width / (d * d + width * width); }

// int R(k) |alpha(k)|^2 dk for a Gaussian spectrum, by plain midpoint sums
double spectral_average(const TransferMatrixModel& m, double delta, double det)
{
    const double h = delta / 400;
    double acc = 0;
    for (double k = det - 8 * delta; k < det + 8 * delta; k += h) {
        const double w = std::exp(-std::pow((k + 0.5 * h - det) / delta, 2)) /
                         (std::sqrt(pi) * delta);
        acc += stationary_rt(m, k + 0.5 * h).R() * w * h;
    }
    return acc;
}

} // namespace

TEST_CASE("single emitter: full reflection on resonance, transparency far off")
{
    const auto rt = single_emitter_rt(1.0, 0.0, 0.0);
    CHECK(rt.R() == doctest::Approx(1.0));
    CHECK(single_emitter_rt(1.0, 0.0, 1e6).T() == doctest::Approx(1.0));
    for (double d = -3; d <= 3; d += 0.25) {
        CHECK(single_emitter_rt(1.0, 0.0, d).R() == doctest::Approx(lorentzian(d, 0.5)));
    }
}

TEST_CASE("half-wavelength pair acts as one emitter of twice the width")
{
    const auto m = TransferMatrixModel::from_array(EmitterArray::chain(2, 0.5));
    CHECK(stationary_rt(m, 0.0).R() == doctest::Approx(1.0));
    for (double d = -4; d <= 4; d += 0.1) {
        CHECK(std::abs(stationary_rt(m, d).R() - lorentzian(d, 1.0)) < 1e-12);
    }
}

TEST_CASE("lossless transfer matrices have unit determinant and conserve flux")
{
    const auto m = TransferMatrixModel::from_array(EmitterArray::chain(4, 0.31));
    for (double d : {-2.0, -0.3, 0.7, 3.0}) {
        CHECK(std::abs(transfer_matrix(m, d).determinant() - 1.0) < 1e-10);
        const auto rt = stationary_rt(m, d);
        CHECK(std::abs(rt.R() + rt.T() - 1.0) < 1e-12);
    }
    // exactly on resonance the transfer matrix is singular; the composition is not
    const auto rt0 = stationary_rt(m, 0.0);
    CHECK(std::abs(rt0.R() + rt0.T() - 1.0) < 1e-12);
}

TEST_CASE("loss removes flux")
{
    const auto rt = single_emitter_rt(1.0, 0.5, 0.2);
    CHECK(rt.R() + rt.T() < 1.0);
}

TEST_CASE("single photon, narrowband resonant pulse is reflected")
{
    const auto res = evolve_single_photon(EmitterArray::chain(1, 0.0), PulseSpec::fock(1, 0.02));
    CHECK(res.reflected_norm >= 0.99);
    CHECK(res.norm_drift < 1e-6);
}

TEST_CASE("no photon, no excitation: nothing happens")
{
    WavefunctionGrid g;
    g.t_final = 5;
    const auto res = evolve_single_photon(EmitterArray::chain(2, 0.2), PulseSpec::vacuum(), g);
    CHECK(res.populations.cwiseAbs().maxCoeff() == 0.0);
    CHECK(res.reflected_norm == 0.0);
}

TEST_CASE("excited emitter decays into both ports")
{
    WavefunctionGrid g;
    g.t_final = 30;
    g.excited_emitter = 0;
    const auto res = evolve_single_photon(EmitterArray::chain(1, 0.0), PulseSpec::vacuum(), g);
    for (Eigen::Index k = 0; k < res.populations.rows(); k += 100) {
        CHECK(std::abs(res.populations(k, 0) - std::exp(-res.t[k])) < 1e-6);
    }
    // trapezoid flux integral on the 0.02 sample grid
    CHECK(res.reflected_norm == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("two emitters a lambda/8 apart: Rabi-like second emitter")
{
    const auto res = evolve_single_photon(EmitterArray::chain(2, 0.125), PulseSpec::fock(1, 1.0));
    CHECK(count_local_maxima(Eigen::VectorXd(res.populations.col(1)), 1e-3) >= 2);
    CHECK(count_local_maxima(Eigen::VectorXd(res.populations.col(0)), 1e-3) == 1);
}

TEST_CASE("wavepacket output agrees with the stationary spectrum")
{
    for (int n : {1, 2}) {
        const auto a = EmitterArray::chain(n, 0.125);
        const auto res = evolve_single_photon(a, PulseSpec::fock(1, 1.0, 0.3));
        const double expect = spectral_average(TransferMatrixModel::from_array(a), 1.0, 0.3);
        CHECK(std::abs(res.reflected_norm - expect) < 1e-3);
    }
}

TEST_CASE("coincident envelope coordinates are fine; near-coincident ones are refused")
{
    auto a = EmitterArray::phase_explicit({0.0, 1e-6}, {0.0, 0.5}, {1, 1});
    CHECK_THROWS_AS(evolve_single_photon(a, PulseSpec::fock(1, 1.0)), DiscretizationError);
    CHECK_THROWS_AS(evolve_single_photon(EmitterArray::chain(1, 0.0), PulseSpec::fock(2, 1.0)),
                    ContractError);
}
