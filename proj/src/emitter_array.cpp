#include "wgqed/emitter_array.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wgqed {

ModulationSpec ModulationSpec::sinusoid(double amplitude, double frequency, double phase)
{
    ModulationSpec m;
    m.kind = ModulationKind::sinusoid;
    m.amplitude = amplitude;
    m.frequency = frequency;
    m.phase = phase;
    return m;
}

ModulationSpec ModulationSpec::tabulated(std::vector<double> times, std::vector<double> values)
{
    if (times.size() != values.size() || times.size() < 2) {
        throw ConfigError("tabulated modulation needs at least two (t, eps) samples of equal length");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw ConfigError("tabulated modulation times must be strictly increasing");
        }
    }
    ModulationSpec m;
    m.kind = ModulationKind::tabulated;
    m.times = std::move(times);
    m.values = std::move(values);
    return m;
}

double ModulationSpec::operator()(double t) const
{
    switch (kind) {
    case ModulationKind::none:
        return 0.0;
    case ModulationKind::sinusoid:
        return amplitude * std::sin(frequency * t + phase);
    case ModulationKind::tabulated: {
        if (t < times.front() || t > times.back()) {
            std::ostringstream os;
            os << "modulation table covers [" << times.front() << ", " << times.back()
               << "] but was evaluated at t = " << t;
            throw ExtrapolationError(os.str());
        }
        auto it = std::upper_bound(times.begin(), times.end(), t);
        if (it == times.end()) return values.back();
        const auto i = static_cast<std::size_t>(it - times.begin());
        const double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
        return (1.0 - w) * values[i - 1] + w * values[i];
    }
    }
    return 0.0;
}

double wrap_phase(double phase)
{
    double p = std::fmod(phase, 2 * pi);
    if (p < 0) p += 2 * pi;
    return p;
}

namespace {

std::vector<double> fill_or_check(std::vector<double> v, std::size_t n, double fill,
                                  const char* name)
{
    if (v.empty()) return std::vector<double>(n, fill);
    if (v.size() == 1 && n > 1) return std::vector<double>(n, v.front());
    if (v.size() != n) {
        std::ostringstream os;
        os << name << " has " << v.size() << " entries for " << n << " emitters";
        throw ConfigError(os.str());
    }
    return v;
}

} // namespace

EmitterArray EmitterArray::phase_explicit(std::vector<double> z, std::vector<double> phase,
                                          std::vector<double> gamma_wg,
                                          std::vector<double> gamma_ng)
{
    EmitterArray a;
    const auto n = z.size();
    a.z = std::move(z);
    a.phase = fill_or_check(std::move(phase), n, 0.0, "phase");
    for (auto& p : a.phase) p = wrap_phase(p);
    a.gamma_wg = fill_or_check(std::move(gamma_wg), n, 1.0, "gamma_wg");
    a.gamma_ng = fill_or_check(std::move(gamma_ng), n, 0.0, "gamma_ng");
    a.modulation.assign(n, ModulationSpec::none());
    a.mode = PositionMode::phase_explicit;
    a.validate();
    return a;
}

EmitterArray EmitterArray::physical(std::vector<double> z, double lambda_a,
                                    std::vector<double> gamma_wg, std::vector<double> gamma_ng)
{
    if (!(lambda_a > 0)) throw ConfigError("lambda_a must be positive");
    EmitterArray a;
    const auto n = z.size();
    a.phase.resize(n);
    for (std::size_t j = 0; j < n; ++j) a.phase[j] = wrap_phase(2 * pi * z[j] / lambda_a);
    a.z = std::move(z);
    a.lambda_a = lambda_a;
    a.gamma_wg = fill_or_check(std::move(gamma_wg), n, 1.0, "gamma_wg");
    a.gamma_ng = fill_or_check(std::move(gamma_ng), n, 0.0, "gamma_ng");
    a.modulation.assign(n, ModulationSpec::none());
    a.mode = PositionMode::physical;
    a.validate();
    return a;
}

EmitterArray EmitterArray::chain(int n, double spacing_over_lambda, double gamma_wg,
                                 double gamma_ng)
{
    std::vector<double> z(static_cast<std::size_t>(std::max(n, 0)), 0.0);
    std::vector<double> phase(z.size());
    for (std::size_t j = 0; j < phase.size(); ++j) {
        phase[j] = 2 * pi * spacing_over_lambda * static_cast<double>(j);
    }
    return phase_explicit(std::move(z), std::move(phase), {gamma_wg}, {gamma_ng});
}

void EmitterArray::validate() const
{
    const auto n = z.size();
    if (n < 1) throw ConfigError("emitter array must contain at least one emitter");
    if (phase.size() != n || gamma_wg.size() != n || gamma_ng.size() != n ||
        modulation.size() != n) {
        throw ConfigError("emitter array fields have inconsistent lengths");
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(z[j]) || !std::isfinite(phase[j])) {
            throw ConfigError("emitter coordinates must be finite");
        }
        if (j > 0 && z[j] < z[j - 1]) {
            throw ConfigError("emitter envelope coordinates z must be sorted non-decreasing");
        }
        if (!(gamma_wg[j] > 0)) {
            std::ostringstream os;
            os << "gamma_wg[" << j << "] must be > 0";
            throw ConfigError(os.str());
        }
        if (!(gamma_ng[j] >= 0)) {
            std::ostringstream os;
            os << "gamma_ng[" << j << "] must be >= 0";
            throw ConfigError(os.str());
        }
    }
    if (lambda_a && !(*lambda_a > 0)) throw ConfigError("lambda_a must be positive");
    if (mode == PositionMode::physical) {
        if (!lambda_a) throw ConfigError("physical position mode requires lambda_a");
        for (std::size_t j = 0; j < n; ++j) {
            const double expected = wrap_phase(2 * pi * z[j] / *lambda_a);
            double diff = std::abs(wrap_phase(phase[j]) - expected);
            diff = std::min(diff, 2 * pi - diff);
            if (diff > 1e-9) {
                std::ostringstream os;
                os << "phase[" << j << "] inconsistent with z/lambda_a (off by " << diff << " rad)";
                throw ConfigError(os.str());
            }
        }
    }
}

bool EmitterArray::any_modulation() const
{
    return std::any_of(modulation.begin(), modulation.end(),
                       [](const ModulationSpec& m) { return m.active(); });
}

double modulation_at(const EmitterArray& array, int j, double t)
{
    if (j < 0 || j >= array.count()) throw ContractError("emitter index out of range");
    if (t < 0) throw ContractError("modulation evaluated at negative time");
    return array.modulation[static_cast<std::size_t>(j)](t);
}

} // namespace wgqed
