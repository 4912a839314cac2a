#include "wgqed/sweep.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace wgqed {

namespace {

GaussianShape& gaussian(Scenario& s, const char* what)
{
    auto* g = std::get_if<GaussianShape>(&s.pulse.shape);
    if (!g) throw ConfigError(std::string(what) + " needs a Gaussian pulse shape");
    return *g;
}

} // namespace

const char* axis_name(SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::detuning: return "detuning";
    case SweepAxis::pulse_width: return "pulse_width";
    case SweepAxis::photon_number: return "photon_number";
    case SweepAxis::emitter_count: return "emitter_count";
    }
    return "?";
}

SweepAxis parse_axis(const std::string& name)
{
    for (auto a : {SweepAxis::detuning, SweepAxis::pulse_width, SweepAxis::photon_number,
                   SweepAxis::emitter_count}) {
        if (name == axis_name(a)) return a;
    }
    throw ConfigError("unknown sweep axis '" + name +
                      "' (detuning, pulse_width, photon_number, emitter_count)");
}

void SweepSpec::validate() const
{
    if (values.empty()) throw ConfigError("sweep grid is empty");
    for (double v : values) {
        if (!std::isfinite(v)) throw ConfigError("sweep grid contains a non-finite value");
        if (axis == SweepAxis::pulse_width && !(v > 0)) {
            throw ConfigError("pulse widths must be positive");
        }
        if (axis == SweepAxis::emitter_count &&
            (v < 1 || v > max_emitters || v != std::round(v))) {
            throw ConfigError("emitter counts must be integers in [1, 12]");
        }
        if (axis == SweepAxis::photon_number) {
            if (v < 0) throw ConfigError("photon numbers must be >= 0");
            if (base.pulse.statistics == Statistics::fock && (v < 1 || v != std::round(v))) {
                throw ConfigError("Fock photon numbers must be integers >= 1");
            }
        }
    }
    if (!(plane_wave_width > 0)) throw ConfigError("plane_wave_width must be positive");
    if (axis == SweepAxis::detuning && !convergence_check) {
        // the plane-wave width is a modelling choice; the check makes it self-validating
        throw ConfigError("detuning sweeps always run the convergence check");
    }
    if (base.pulse.statistics == Statistics::vacuum) {
        throw ConfigError("a sweep needs a non-vacuum pulse");
    }
}

Scenario sweep_point(const SweepSpec& spec, double value)
{
    Scenario s = spec.base;
    switch (spec.axis) {
    case SweepAxis::detuning: {
        auto& g = gaussian(s, "detuning sweep");
        g.delta = spec.plane_wave_width;
        g.detuning = value;
        s.pulse.z0.reset();
        break;
    }
    case SweepAxis::pulse_width:
        gaussian(s, "pulse-width sweep").delta = value;
        s.pulse.z0.reset();
        break;
    case SweepAxis::photon_number:
        if (s.pulse.statistics == Statistics::fock) s.pulse.photons = static_cast<int>(value);
        else s.pulse.mean_photons = value;
        break;
    case SweepAxis::emitter_count: {
        const int n = static_cast<int>(value);
        const auto& a = spec.base.array;
        EmitterArray chain = EmitterArray::chain(n, spec.chain_spacing, a.gamma_wg.front(),
                                                 a.gamma_ng.front());
        chain.dipole_angle = a.dipole_angle;
        s.array = chain;
        s.lambda.include_nonguided = false;
        s.initially_excited.clear();
        s.initial_state.reset();
        s.observables.clear();
        break;
    }
    }
    s.name = spec.base.name + "[" + axis_name(spec.axis) + "=" + std::to_string(value) + "]";
    return s;
}

double convergence_check(const Scenario& point, double R_at_point)
{
    Scenario half = point;
    gaussian(half, "convergence check").delta *= 0.5;
    half.pulse.z0.reset();
    if (half.adaptive_final) half.integrator.t_final = 0.0;
    half.sample_dt = 0.0;
    const ScatterRecord rec = run_scatter(half);
    return std::abs(R_at_point - rec.R);
}

double convergence_check(const Scenario& point)
{
    return convergence_check(point, run_scatter(point).R);
}

SweepTable run_sweep(const SweepSpec& spec, int workers)
{
    spec.validate();
    const std::size_t n = spec.values.size();
    SweepTable table;
    table.axis = spec.axis;
    table.rows.resize(n);

    auto work = [&](std::size_t i) {
        SweepRow& row = table.rows[i];
        row.value = spec.values[i];
        row.convergence_defect = std::numeric_limits<double>::quiet_NaN();
        try {
            const Scenario s = sweep_point(spec, row.value);
            const ScatterRecord rec = run_scatter(s);
            row.R = rec.R;
            row.T = rec.T;
            row.n_reflected = average_reflected_number(rec, s.pulse);
            row.balance_defect = rec.balance_defect;
            if (!std::isfinite(rec.R)) {
                throw UndefinedReflectivityError("no scattered intensity at this point");
            }
            if (spec.convergence_check) row.convergence_defect = convergence_check(s, rec.R);
        } catch (const Error& e) {
            row.status = e.category() + ": " + e.what();
        } catch (const std::exception& e) {
            row.status = std::string("internal: ") + e.what();
        }
    };

    const int w = std::max(1, std::min<int>(workers, static_cast<int>(n)));
    if (w == 1) {
        for (std::size_t i = 0; i < n; ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(w));
        for (int k = 0; k < w; ++k) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < n; i = next++) work(i);
            });
        }
        for (auto& t : pool) t.join();
    }

    bool any_ok = false;
    for (const auto& r : table.rows) any_ok = any_ok || r.ok();
    if (!any_ok) {
        throw SweepError("every sweep point failed; first failure: " + table.rows.front().status);
    }
    return table;
}

} // namespace wgqed
