#include "wgqed/inout.hpp"

#include <cmath>
#include <limits>

namespace wgqed {

namespace {

double statistics_factor(const PulseSpec& pulse)
{
    // field_at already carries sqrt(nbar) for coherent input
    return pulse.statistics == Statistics::fock ? static_cast<double>(pulse.photons) : 1.0;
}

double cross_factor(const PulseSpec& pulse)
{
    return pulse.statistics == Statistics::fock ? std::sqrt(double(pulse.photons)) : 1.0;
}

// sign = +1 for the right output, -1 for the left one.
double intensity(const EmitterMoments& m, cplx port, const EmitterArray& array,
                 const PulseSpec& pulse, double sign, bool fed)
{
    const int n = array.count();
    double out = 0.0;
    if (fed && pulse.statistics != Statistics::vacuum) {
        out += statistics_factor(pulse) * std::norm(port);
        const double cf = cross_factor(pulse);
        for (int j = 0; j < n; ++j) {
            const cplx e = std::exp(I * (sign * array.phase[j]));
            out -= 2 * std::sqrt(array.gamma_wg[j] / 2) * std::imag(e * cf * port * m.cross(j));
        }
    }
    cplx em = 0.0;
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) {
            em += 0.5 * std::sqrt(array.gamma_wg[j] * array.gamma_wg[l]) *
                  std::exp(I * (sign * (array.phase[j] - array.phase[l]))) * m.corr(j, l);
        }
    }
    return out + em.real();
}

} // namespace

EmitterMoments emitter_moments(const DensityLadder& ladder, const OperatorAlgebra& algebra,
                               const PulseSpec& pulse)
{
    if (ladder.dim() != algebra.dimension()) throw ContractError("ladder dimension mismatch");
    const int photons = pulse.statistics == Statistics::fock ? pulse.photons : 0;
    if (ladder.photons() != photons) {
        throw ContractError("ladder does not carry the blocks required by the pulse statistics");
    }
    return emitter_moments(ladder.data(), photons, algebra, pulse);
}

EmitterMoments emitter_moments(const VectorXc& flat, int photons, const OperatorAlgebra& algebra,
                               const PulseSpec& pulse)
{
    const int n = algebra.emitters();
    const auto dim = algebra.dimension();
    EmitterMoments m;
    m.cross = VectorXc::Zero(n);
    m.corr = MatrixXc::Zero(n, n);
    m.populations.resize(n);
    const auto top = DensityLadder::view(flat, dim, photons, photons);
    for (int j = 0; j < n; ++j) {
        for (int l = 0; l < n; ++l) m.corr(j, l) = trace_product(algebra.hop(j, l), top);
        m.populations(j) = m.corr(j, j).real();
    }
    if (pulse.statistics == Statistics::coherent) {
        for (int j = 0; j < n; ++j) m.cross(j) = trace_product(algebra.sigma_plus(j), top);
    } else if (photons > 0) {
        // Tr[s+ rho_{N-1,N}] = conj Tr[s- rho_{N,N-1}]
        const auto below = DensityLadder::view(flat, dim, photons, photons - 1);
        for (int j = 0; j < n; ++j) {
            m.cross(j) = std::conj(trace_product(algebra.sigma_minus(j), below));
        }
    }
    return m;
}

double right_intensity(const EmitterMoments& m, cplx port_field, const EmitterArray& array,
                       const PulseSpec& pulse)
{
    return intensity(m, port_field, array, pulse, +1.0, pulse.direction == Direction::right);
}

double left_intensity(const EmitterMoments& m, cplx port_field, const EmitterArray& array,
                      const PulseSpec& pulse)
{
    return intensity(m, port_field, array, pulse, -1.0, pulse.direction == Direction::left);
}

double right_intensity(const DensityLadder& ladder, double t, const EmitterArray& array,
                       const CouplingMatrix&, const PulseSpec& pulse)
{
    const auto alg = build_algebra(array.count());
    const DriveEvaluator drive(pulse, array);
    return right_intensity(emitter_moments(ladder, alg, pulse), drive.port_field(t), array, pulse);
}

double left_intensity(const DensityLadder& ladder, double t, const EmitterArray& array,
                      const CouplingMatrix&, const PulseSpec& pulse)
{
    const auto alg = build_algebra(array.count());
    const DriveEvaluator drive(pulse, array);
    return left_intensity(emitter_moments(ladder, alg, pulse), drive.port_field(t), array, pulse);
}

namespace {

double simpson_strided(const std::vector<double>& y, std::size_t stride, double h)
{
    const std::size_t n = (y.size() - 1) / stride + 1; // points on the strided grid
    auto at = [&](std::size_t i) { return y[i * stride]; };
    double s = 0.0;
    std::size_t end = n;
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * h * (at(0) + at(1));
    if (n % 2 == 0) {
        // Simpson 3/8 on the last three intervals
        end = n - 3;
        s += 3.0 * h / 8.0 * (at(n - 4) + 3 * at(n - 3) + 3 * at(n - 2) + at(n - 1));
    }
    for (std::size_t i = 0; i + 2 < end; i += 2) s += h / 3.0 * (at(i) + 4 * at(i + 1) + at(i + 2));
    // trailing piece the strided grid misses
    const std::size_t last = (n - 1) * stride;
    for (std::size_t i = last; i + 1 < y.size(); ++i) s += 0.5 * (h / stride) * (y[i] + y[i + 1]);
    return s;
}

} // namespace

double simpson(const std::vector<double>& y, double dt, double* error)
{
    if (y.size() < 2) {
        if (error) *error = 0.0;
        return 0.0;
    }
    const double fine = simpson_strided(y, 1, dt);
    if (error) *error = y.size() >= 5 ? std::abs(fine - simpson_strided(y, 2, 2 * dt)) : 0.0;
    return fine;
}

std::pair<double, double> reflectivity(const ScatterRecord& record)
{
    const double total = record.I_R + record.I_L;
    if (!(total > 0) || !std::isfinite(total)) {
        throw UndefinedReflectivityError(
            "reflectivity undefined: no scattered intensity (I_R + I_L = 0)");
    }
    const double back = record.direction == Direction::right ? record.I_L : record.I_R;
    const double R = back / total;
    return {R, 1.0 - R};
}

double average_reflected_number(const ScatterRecord& record, const PulseSpec& pulse)
{
    return pulse.direction == Direction::right ? record.I_L : record.I_R;
}

void finalize_record(ScatterRecord& record)
{
    const std::size_t n = record.t.size();
    const double dt = n > 1 ? record.t[1] - record.t[0] : 0.0;
    double er = 0.0, el = 0.0;
    record.I_R = simpson(record.r, dt, &er);
    record.I_L = simpson(record.l, dt, &el);
    record.quadrature_error = std::max(er, el);
    try {
        std::tie(record.R, record.T) = reflectivity(record);
    } catch (const UndefinedReflectivityError&) {
        record.R = record.T = std::numeric_limits<double>::quiet_NaN();
    }
    record.residual_excitation = n > 0 ? record.populations.row(n - 1).sum() : 0.0;
    record.balance_defect = std::abs(record.I_R + record.I_L + record.residual_excitation -
                                     record.n_in - record.initial_excitation);
}

} // namespace wgqed
