#include "wgqed/pulse.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace wgqed {

namespace {

constexpr double launch_clearance = 5.0; // in units of 1/delta

double trapezoid_norm(const std::vector<double>& k, const std::vector<cplx>& a)
{
    double s = 0.0;
    for (std::size_t i = 1; i < k.size(); ++i) {
        s += 0.5 * (std::norm(a[i]) + std::norm(a[i - 1])) * (k[i] - k[i - 1]);
    }
    return s;
}

// (1/sqrt(2pi)) * int alpha(k) exp(i sign k u) dk by the trapezoidal rule.
cplx tabulated_transform(const TabulatedSpectrum& s, double u, double sign)
{
    cplx acc = 0.0;
    cplx prev = s.amplitude[0] * std::exp(I * (sign * s.k[0] * u));
    for (std::size_t i = 1; i < s.k.size(); ++i) {
        const cplx cur = s.amplitude[i] * std::exp(I * (sign * s.k[i] * u));
        acc += 0.5 * (cur + prev) * (s.k[i] - s.k[i - 1]);
        prev = cur;
    }
    return acc / std::sqrt(2 * pi);
}

} // namespace

TabulatedSpectrum TabulatedSpectrum::from_samples(std::vector<double> k,
                                                  std::vector<cplx> amplitude)
{
    if (k.size() != amplitude.size() || k.size() < 3) {
        throw FormatError("tabulated spectrum needs at least three (k, alpha) samples");
    }
    for (std::size_t i = 1; i < k.size(); ++i) {
        if (!(k[i] > k[i - 1])) {
            std::ostringstream os;
            os << "tabulated spectrum k-grid is not strictly increasing at row " << i + 1;
            throw FormatError(os.str());
        }
    }
    const double norm = trapezoid_norm(k, amplitude);
    if (!(norm > 0) || !std::isfinite(norm)) {
        throw FormatError("tabulated spectrum has zero or non-finite norm");
    }
    double peak = 0.0;
    for (const auto& a : amplitude) peak = std::max(peak, std::abs(a));
    const double edge = std::max(std::abs(amplitude.front()), std::abs(amplitude.back()));
    if (edge > 1e-6 * peak) {
        throw FormatError("tabulated spectrum is truncated: edge amplitude exceeds 1e-6 of the "
                          "peak; extend the grid to cover the full support");
    }
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& a : amplitude) a *= scale;
    return {std::move(k), std::move(amplitude)};
}

TabulatedSpectrum TabulatedSpectrum::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open spectrum file " + path);
    std::vector<double> k;
    std::vector<cplx> a;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream is(line);
        double kk = 0, re = 0, im = 0;
        if (!(is >> kk)) continue; // blank line
        if (!(is >> re >> im)) {
            std::ostringstream os;
            os << path << ":" << lineno << ": expected three columns (k, Re alpha, Im alpha)";
            throw FormatError(os.str());
        }
        std::string extra;
        if (is >> extra) {
            std::ostringstream os;
            os << path << ":" << lineno << ": unexpected fourth column";
            throw FormatError(os.str());
        }
        k.push_back(kk);
        a.emplace_back(re, im);
    }
    return from_samples(std::move(k), std::move(a));
}

double TabulatedSpectrum::norm_squared() const { return trapezoid_norm(k, amplitude); }

double TabulatedSpectrum::equivalent_width() const
{
    double m0 = 0, m1 = 0, m2 = 0;
    for (std::size_t i = 1; i < k.size(); ++i) {
        const double dk = k[i] - k[i - 1];
        const double w0 = std::norm(amplitude[i - 1]), w1 = std::norm(amplitude[i]);
        m0 += 0.5 * (w0 + w1) * dk;
        m1 += 0.5 * (w0 * k[i - 1] + w1 * k[i]) * dk;
        m2 += 0.5 * (w0 * k[i - 1] * k[i - 1] + w1 * k[i] * k[i]) * dk;
    }
    const double mean = m1 / m0;
    return std::sqrt(2.0 * std::max(m2 / m0 - mean * mean, 0.0));
}

PulseSpec PulseSpec::vacuum() { return PulseSpec{}; }

PulseSpec PulseSpec::coherent(double mean_photons, double delta, double detuning)
{
    PulseSpec p;
    p.statistics = Statistics::coherent;
    p.mean_photons = mean_photons;
    p.shape = GaussianShape{delta, detuning};
    p.validate();
    return p;
}

PulseSpec PulseSpec::fock(int photons, double delta, double detuning)
{
    PulseSpec p;
    p.statistics = Statistics::fock;
    p.photons = photons;
    p.shape = GaussianShape{delta, detuning};
    p.validate();
    return p;
}

double PulseSpec::width() const
{
    if (const auto* g = std::get_if<GaussianShape>(&shape)) return g->delta;
    return std::get<TabulatedSpectrum>(shape).equivalent_width();
}

double PulseSpec::incident_photons() const
{
    switch (statistics) {
    case Statistics::vacuum: return 0.0;
    case Statistics::coherent: return mean_photons;
    case Statistics::fock: return static_cast<double>(photons);
    }
    return 0.0;
}

double PulseSpec::amplitude_scale() const
{
    switch (statistics) {
    case Statistics::vacuum: return 0.0;
    case Statistics::coherent: return std::sqrt(mean_photons);
    case Statistics::fock: return 1.0;
    }
    return 0.0;
}

void PulseSpec::validate() const
{
    if (statistics == Statistics::coherent && !(mean_photons >= 0)) {
        throw ConfigError("coherent mean photon number must be >= 0");
    }
    if (statistics == Statistics::fock && photons < 1) {
        throw ConfigError("Fock pulses need at least one photon");
    }
    if (const auto* g = std::get_if<GaussianShape>(&shape)) {
        if (!(g->delta > 0) || !std::isfinite(g->delta)) {
            throw ConfigError("pulse spectral width must be positive");
        }
        if (!std::isfinite(g->detuning)) throw ConfigError("pulse detuning must be finite");
    }
    if (z0 && !std::isfinite(*z0)) throw ConfigError("pulse z0 must be finite");
}

double launch_coordinate(const PulseSpec& pulse, const EmitterArray& array)
{
    if (pulse.z0) return *pulse.z0;
    const double clearance = launch_clearance / pulse.width();
    return pulse.direction == Direction::right ? array.z.front() - clearance
                                               : array.z.back() + clearance;
}

void validate_launch(const PulseSpec& pulse, const EmitterArray& array)
{
    if (pulse.statistics == Statistics::vacuum) return;
    const double z0 = launch_coordinate(pulse, array);
    const double gap = pulse.direction == Direction::right ? array.z.front() - z0
                                                           : z0 - array.z.back();
    const double needed = launch_clearance / pulse.width();
    if (gap < needed * (1 - 1e-9)) {
        std::ostringstream os;
        os << "pulse launch point z0 = " << z0 << " overlaps the array; need a gap of at least "
           << needed << " (5/delta) on the incoming side";
        throw ConfigError(os.str());
    }
}

cplx field_at(const PulseSpec& pulse, double z0, double x, double t)
{
    const double scale = pulse.amplitude_scale();
    if (scale == 0.0) return 0.0;
    const bool right = pulse.direction == Direction::right;
    const double u = right ? x - z0 - t : x - z0 + t;
    const double sign = right ? 1.0 : -1.0;
    if (const auto* g = std::get_if<GaussianShape>(&pulse.shape)) {
        const double du = g->delta * u;
        return scale * std::sqrt(g->delta) * std::pow(pi, -0.25) * std::exp(-0.5 * du * du) *
               std::exp(I * (sign * g->detuning * u));
    }
    return scale * tabulated_transform(std::get<TabulatedSpectrum>(pulse.shape), u, sign);
}

cplx amplitude_at(const PulseSpec& pulse, const EmitterArray& array, int j, double t)
{
    if (j < 0 || j >= array.count()) throw ContractError("emitter index out of range");
    if (t < 0) throw ContractError("pulse amplitude evaluated at negative time");
    const double sign = pulse.direction == Direction::right ? 1.0 : -1.0;
    const double z0 = launch_coordinate(pulse, array);
    return field_at(pulse, z0, array.z[static_cast<std::size_t>(j)], t) *
           std::exp(I * (sign * array.phase[static_cast<std::size_t>(j)]));
}

cplx amplitude_at_origin(const PulseSpec& pulse, double z0, double t)
{
    if (t < 0) throw ContractError("pulse amplitude evaluated at negative time");
    return field_at(pulse, z0, 0.0, t);
}

DriveEvaluator::DriveEvaluator(const PulseSpec& pulse, const EmitterArray& array)
    : pulse_(pulse), z_(array.z), carrier_(array.count())
{
    null_ = pulse.amplitude_scale() == 0.0;
    z0_ = launch_coordinate(pulse, array);
    const double sign = pulse.direction == Direction::right ? 1.0 : -1.0;
    for (int j = 0; j < array.count(); ++j) {
        carrier_(j) = std::exp(I * (sign * array.phase[static_cast<std::size_t>(j)]));
    }
    port_x_ = pulse.direction == Direction::right ? array.z.back() : array.z.front();
}

void DriveEvaluator::evaluate(double t, Eigen::Ref<VectorXc> out) const
{
    if (null_) {
        out.setZero();
        return;
    }
    for (Eigen::Index j = 0; j < carrier_.size(); ++j) {
        out(j) = field_at(pulse_, z0_, z_[static_cast<std::size_t>(j)], t) * carrier_(j);
    }
}

cplx DriveEvaluator::port_field(double t) const
{
    if (null_) return 0.0;
    return field_at(pulse_, z0_, port_x_, t);
}

} // namespace wgqed
