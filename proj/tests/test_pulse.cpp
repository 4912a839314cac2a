#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "wgqed/inout.hpp"
#include "wgqed/pulse.hpp"

using namespace wgqed;

namespace {

// int |alpha_0(t)|^2 dt by a fine Riemann sum, independent of the library's quadrature
double flux(const PulseSpec& p, double z0)
{
    const double delta = p.width();
    const double h = 0.002 / delta;
    double acc = 0.0;
    for (double t = -z0 - 15 / delta; t < -z0 + 15 / delta; t += h) {
        acc += std::norm(field_at(p, z0, 0.0, t)) * h;
    }
    return acc;
}

} // namespace

TEST_CASE("flux normalisation across widths")
{
    for (double delta : {0.05, 0.1, 0.5, 1.0, 2.0, 5.0}) {
        CHECK(flux(PulseSpec::coherent(7.0, delta, 0.3), -5 / delta) ==
              doctest::Approx(7.0).epsilon(1e-6));
        CHECK(flux(PulseSpec::fock(3, delta), -5 / delta) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("vacuum carries no field")
{
    const auto p = PulseSpec::vacuum();
    CHECK(field_at(p, -3.0, 0.0, 3.0) == cplx(0));
    CHECK(p.incident_photons() == 0.0);
}

TEST_CASE("default launch point and overlap check")
{
    const auto arr = EmitterArray::phase_explicit({1.0, 2.5}, {0, 0}, {1, 1});
    auto p = PulseSpec::fock(1, 0.5);
    CHECK(launch_coordinate(p, arr) == doctest::Approx(1.0 - 10.0));
    p.direction = Direction::left;
    CHECK(launch_coordinate(p, arr) == doctest::Approx(2.5 + 10.0));
    p.z0 = 2.0;
    CHECK_THROWS_AS(validate_launch(p, arr), ConfigError);
}

TEST_CASE("amplitude at an emitter carries its optical phase")
{
    const auto arr = EmitterArray::chain(2, 0.125);
    const auto p = PulseSpec::coherent(2.0, 1.0, 0.2);
    const double z0 = launch_coordinate(p, arr);
    for (double t : {1.0, 4.0, 5.3}) {
        CHECK(std::abs(amplitude_at(p, arr, 1, t) -
                       field_at(p, z0, 0.0, t) * std::polar(1.0, 2 * pi * 0.125)) < 1e-15);
    }
}

TEST_CASE("port field is the origin amplitude shifted by the port coordinate")
{
    const auto arr = EmitterArray::phase_explicit({0.0, 3.0}, {0, 1}, {1, 1});
    const auto p = PulseSpec::fock(1, 0.8, -0.4);
    const DriveEvaluator drive(p, arr);
    for (double t = 3.5; t < 20; t += 1.3) {
        CHECK(std::abs(drive.port_field(t) - amplitude_at_origin(p, drive.z0(), t - 3.0)) <
              1e-12);
    }
}

TEST_CASE("left and right pulses are mirror images")
{
    auto r = PulseSpec::coherent(1.0, 0.6, 0.5);
    auto l = r;
    l.direction = Direction::left;
    for (double x : {-1.0, 0.0, 2.0}) {
        for (double t = 0; t < 15; t += 0.7) {
            CHECK(std::abs(field_at(l, 4.0, -x, t) - field_at(r, -4.0, x, t)) < 1e-12);
        }
    }
}

TEST_CASE("tabulated spectrum reproduces the closed form")
{
    const double delta = 1.3, det = 0.4;
    std::vector<double> k;
    std::vector<cplx> a;
    for (int i = -800; i <= 800; ++i) {
        const double kk = det + i * 7.0 * delta / 800;
        k.push_back(kk);
        a.push_back(3.0 * std::exp(-0.5 * std::pow((kk - det) / delta, 2))); // unnormalised
    }
    auto tab = PulseSpec::fock(1, delta, det);
    tab.shape = TabulatedSpectrum::from_samples(k, a);
    CHECK(std::get<TabulatedSpectrum>(tab.shape).norm_squared() == doctest::Approx(1.0));
    CHECK(tab.width() == doctest::Approx(delta).epsilon(1e-6));
    const auto g = PulseSpec::fock(1, delta, det);
    for (double t = 0; t < 12; t += 0.1) {
        CHECK(std::abs(field_at(tab, -6.0, 0.0, t) - field_at(g, -6.0, 0.0, t)) < 1e-8);
    }
}

TEST_CASE("spectrum files")
{
    const auto dir = std::filesystem::temp_directory_path() / "wgqed_pulse_test";
    std::filesystem::create_directories(dir);
    {
        std::ofstream f(dir / "ok.txt");
        f << "# k re im\n";
        for (int i = -300; i <= 300; ++i) {
            const double k = i * 0.02;
            f << k << ' ' << std::exp(-k * k / 2) << " 0\n";
        }
        std::ofstream bad(dir / "bad.txt");
        bad << "0 1\n1 2\n";
    }
    const auto s = TabulatedSpectrum::load((dir / "ok.txt").string());
    CHECK(s.k.size() == 601);
    CHECK(s.norm_squared() == doctest::Approx(1.0));
    CHECK_THROWS_AS(TabulatedSpectrum::load((dir / "bad.txt").string()), FormatError);
    CHECK_THROWS_AS(TabulatedSpectrum::load((dir / "missing.txt").string()), FormatError);
    std::filesystem::remove_all(dir);
}

TEST_CASE("pulse validation")
{
    CHECK_THROWS_AS(PulseSpec::coherent(-1.0, 1.0).validate(), ConfigError);
    CHECK_THROWS_AS(PulseSpec::fock(0, 1.0).validate(), ConfigError);
    CHECK_THROWS_AS(PulseSpec::fock(1, 0.0).validate(), ConfigError);
    CHECK_NOTHROW(PulseSpec::coherent(0.0, 1.0).validate());
}
