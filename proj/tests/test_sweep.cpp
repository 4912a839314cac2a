#include <doctest.h>

#include "wgqed/io.hpp"
#include "wgqed/oracle.hpp"
#include "wgqed/sweep.hpp"

using namespace wgqed;

namespace {

SweepSpec detuning_spec(std::vector<double> values)
{
    SweepSpec spec;
    spec.axis = SweepAxis::detuning;
    spec.values = std::move(values);
    spec.base.array = EmitterArray::chain(1, 0.0);
    spec.base.pulse = PulseSpec::fock(1, 1.0);
    spec.plane_wave_width = 0.05;
    spec.convergence_check = true;
    return spec;
}

} // namespace

TEST_CASE("axis names round-trip")
{
    for (auto a : {SweepAxis::detuning, SweepAxis::pulse_width, SweepAxis::photon_number,
                   SweepAxis::emitter_count}) {
        CHECK(parse_axis(axis_name(a)) == a);
    }
    CHECK_THROWS_AS(parse_axis("width"), ConfigError);
}

TEST_CASE("grid points")
{
    auto spec = detuning_spec({-1, 0, 1});
    spec.base.pulse.z0 = -3.0;
    const Scenario s = sweep_point(spec, 0.7);
    const auto& g = std::get<GaussianShape>(s.pulse.shape);
    CHECK(g.delta == 0.05);
    CHECK(g.detuning == 0.7);
    CHECK(!s.pulse.z0); // re-derived for the new width

    SweepSpec chain;
    chain.axis = SweepAxis::emitter_count;
    chain.values = {4};
    chain.base.array = EmitterArray::chain(1, 0.0);
    chain.base.pulse = PulseSpec::coherent(1, 1);
    chain.chain_spacing = 0.25;
    const Scenario c = sweep_point(chain, 4);
    CHECK(c.array.count() == 4);
    CHECK(c.array.phase[3] == doctest::Approx(wrap_phase(2 * pi * 0.75)));

    SweepSpec photons = chain;
    photons.axis = SweepAxis::photon_number;
    photons.values = {3.5};
    CHECK(sweep_point(photons, 3.5).pulse.mean_photons == 3.5);
}

TEST_CASE("grid validation")
{
    auto spec = detuning_spec({});
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.values = {0.0, std::nan("")};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.values = {0.0};
    spec.convergence_check = false;
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.values = {1};
    spec.axis = SweepAxis::emitter_count;
    spec.values = {13};
    CHECK_THROWS_AS(spec.validate(), ConfigError);
    spec.axis = SweepAxis::photon_number;
    spec.values = {1.5};
    CHECK_THROWS_AS(spec.validate(), ConfigError); // Fock base
}

TEST_CASE("results follow the grid and do not depend on the worker count")
{
    const auto spec = detuning_spec({-2, -1, -0.5, 0, 0.5, 1, 2});
    const auto serial = run_sweep(spec, 1);
    const auto parallel = run_sweep(spec, 3);
    CHECK(sweep_csv(serial) == sweep_csv(parallel));
    const auto model = TransferMatrixModel::from_array(spec.base.array);
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        CHECK(serial.rows[i].value == spec.values[i]);
        CHECK(serial.rows[i].ok());
        CHECK(std::abs(serial.rows[i].R - stationary_rt(model, spec.values[i]).R()) < 0.03);
    }
}

TEST_CASE("convergence check")
{
    auto spec = detuning_spec({0.0});
    const auto t = run_sweep(spec);
    CHECK(std::isfinite(t.rows[0].convergence_defect));
    CHECK(t.rows[0].convergence_defect < 0.01);
}

TEST_CASE("failures are recorded per point; all failing is an error")
{
    auto spec = detuning_spec({0.0, 1.0});
    spec.base.integrator.max_steps = 3;
    CHECK_THROWS_AS(run_sweep(spec), SweepError);
}
