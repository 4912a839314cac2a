#include "wgqed/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace wgqed {

TransferMatrixModel TransferMatrixModel::from_array(const EmitterArray& array)
{
    array.validate();
    return {array.phase, array.gamma_wg, array.gamma_ng};
}

StationaryRT single_emitter_rt(double gamma_wg, double gamma_ng, double delta)
{
    // Weisskopf-Wigner emitter driven by a plane wave: the radiated amplitude
    // into either direction is -(G/2) / ((G + g)/2 - i delta).
    const cplx den = 0.5 * (gamma_wg + gamma_ng) - I * delta;
    // t = 1 + r, formed directly so it keeps its relative accuracy at resonance
    return {-0.5 * gamma_wg / den, (0.5 * gamma_ng - I * delta) / den};
}

Matrix2c transfer_matrix(const TransferMatrixModel& model, double delta)
{
    Matrix2c total = Matrix2c::Identity();
    for (std::size_t j = 0; j < model.phase.size(); ++j) {
        const auto [r, t] = single_emitter_rt(model.gamma_wg[j], model.gamma_ng[j], delta);
        Matrix2c cell;
        cell << t * t - r * r, r, -r, 1.0;
        cell /= t;
        const cplx p = std::exp(I * model.phase[j]);
        Matrix2c left = Matrix2c::Zero(), right = Matrix2c::Zero();
        left(0, 0) = std::conj(p);
        left(1, 1) = p;
        right(0, 0) = p;
        right(1, 1) = std::conj(p);
        total = left * cell * right * total;
    }
    return total;
}

// Composed as scattering matrices (Redheffer star product) rather than by
// multiplying transfer matrices: a lossless emitter on resonance has t = 0 and
// the transfer-matrix cell is singular there.
StationaryRT stationary_rt(const TransferMatrixModel& model, double delta)
{
    cplx r_left = 0.0, r_right = 0.0, t = 1.0; // accumulated section, empty so far
    for (std::size_t j = 0; j < model.phase.size(); ++j) {
        const auto [r, tj] = single_emitter_rt(model.gamma_wg[j], model.gamma_ng[j], delta);
        const cplx p2 = std::exp(2.0 * I * model.phase[j]);
        const cplx rl = r * p2;            // seen from the left
        const cplx rr = r * std::conj(p2); // seen from the right
        const cplx den = 1.0 - r_right * rl;
        auto ratio = [&](cplx num) { return num == 0.0 ? cplx(0.0) : num / den; };
        const cplx r_left_new = r_left + ratio(t * t * rl);
        r_right = rr + ratio(tj * tj * r_right);
        t = ratio(t * tj);
        r_left = r_left_new;
    }
    return {r_left, t};
}

namespace {

// Retarded history of the emitter amplitudes on the uniform step grid;
// cubic Hermite between grid points.
class History {
public:
    History(int n, double h) : n_(n), h_(h) {}

    void push(const VectorXc& e, const VectorXc& de)
    {
        e_.push_back(e);
        de_.push_back(de);
    }
    // e_l(s); zero before the run started (nothing had been emitted yet)
    cplx at(int l, double s) const
    {
        if (s < 0) return 0.0;
        const double x = s / h_;
        auto i = static_cast<std::size_t>(x);
        if (i + 1 >= e_.size()) {
            if (i < e_.size() && std::abs(x - double(i)) < 1e-9) return e_[i](l);
            throw ContractError("oracle history queried ahead of the integration front");
        }
        const double th = x - double(i);
        const double h00 = (1 + 2 * th) * (1 - th) * (1 - th), h10 = th * (1 - th) * (1 - th);
        const double h01 = th * th * (3 - 2 * th), h11 = th * th * (th - 1);
        return h00 * e_[i](l) + h10 * h_ * de_[i](l) + h01 * e_[i + 1](l) +
               h11 * h_ * de_[i + 1](l);
    }
    int emitters() const { return n_; }

private:
    int n_;
    double h_;
    std::vector<VectorXc> e_, de_;
};

} // namespace

SingleExcitationResult evolve_single_photon(const EmitterArray& array, const PulseSpec& pulse,
                                            const WavefunctionGrid& grid)
{
    array.validate();
    if (pulse.statistics == Statistics::coherent ||
        (pulse.statistics == Statistics::fock && pulse.photons != 1)) {
        throw ContractError("the wavefunction oracle handles exactly one excitation");
    }
    const bool has_photon = pulse.statistics == Statistics::fock;
    if (has_photon && grid.excited_emitter) {
        throw ContractError("single-excitation oracle takes a Fock-1 pulse or one initially "
                            "excited emitter, not both");
    }
    // neither: the zero-excitation sector, where nothing moves
    const double initial_norm = has_photon || grid.excited_emitter ? 1.0 : 0.0;
    const int n = array.count();
    if (grid.excited_emitter && (*grid.excited_emitter < 0 || *grid.excited_emitter >= n)) {
        throw ContractError("excited emitter index out of range");
    }
    if (!(grid.sample_dt > 0)) throw ConfigError("oracle sample_dt must be positive");
    double z0 = 0.0;
    if (has_photon) {
        pulse.validate();
        validate_launch(pulse, array);
        z0 = launch_coordinate(pulse, array);
    }
    const bool right = pulse.direction == Direction::right;

    double t_final = grid.t_final;
    if (t_final <= 0) {
        t_final = 15.0;
        if (has_photon) {
            const double far = right ? array.z.back() : array.z.front();
            t_final += std::abs(far - z0) + 8.0 / pulse.width();
        }
    }
    const int samples = static_cast<int>(std::ceil(t_final / grid.sample_dt - 1e-9)) + 1;

    // step size: resolve the fastest rate, and never exceed the shortest delay
    double rate = has_photon ? pulse.width() : 0.0;
    double eps_max = 0.0;
    for (int j = 0; j < n; ++j) {
        rate += array.total_rate(j);
        const auto& mod = array.modulation.empty() ? ModulationSpec{} : array.modulation[j];
        if (mod.kind == ModulationKind::sinusoid) {
            eps_max = std::max(eps_max, std::abs(mod.amplitude) + std::abs(mod.frequency));
        } else if (mod.kind == ModulationKind::tabulated) {
            for (double v : mod.values) eps_max = std::max(eps_max, std::abs(v));
        }
    }
    rate += eps_max;
    int substeps = grid.steps_per_sample > 0
                       ? grid.steps_per_sample
                       : std::max(1, static_cast<int>(std::ceil(grid.sample_dt * rate / 0.02)));
    double min_delay = std::numeric_limits<double>::infinity();
    for (int j = 1; j < n; ++j) {
        const double d = array.z[j] - array.z[j - 1];
        if (d > 0) min_delay = std::min(min_delay, d);
    }
    if (min_delay < 1e-4) {
        throw DiscretizationError("emitter envelope separations below 1e-4 cannot be resolved; "
                                  "place such emitters at a common envelope coordinate");
    }
    if (std::isfinite(min_delay)) {
        substeps = std::max(substeps, static_cast<int>(std::ceil(grid.sample_dt / min_delay)));
    }
    const double h = grid.sample_dt / substeps;

    std::vector<double> sq(n);
    std::vector<cplx> out_r(n), out_l(n), in_r(n), in_l(n);
    for (int j = 0; j < n; ++j) {
        sq[j] = std::sqrt(array.gamma_wg[j] / 2);
        out_r[j] = -I * sq[j] * std::exp(-I * array.phase[j]); // emission into right movers
        out_l[j] = -I * sq[j] * std::exp(I * array.phase[j]);  // into left movers
        in_r[j] = std::exp(I * array.phase[j]);
        in_l[j] = std::exp(-I * array.phase[j]);
    }
    auto incident = [&](double x, double t, bool want_right) -> cplx {
        if (!has_photon || want_right != right) return 0.0;
        return field_at(pulse, z0, x, t);
    };

    History hist(n, h);
    auto rhs = [&](double t, const VectorXc& e, VectorXc& de) {
        for (int j = 0; j < n; ++j) {
            cplx ar = incident(array.z[j], t, true);
            for (int l = 0; l < j; ++l) {
                const double d = array.z[j] - array.z[l];
                ar += out_r[l] * (d == 0.0 ? e(l) : hist.at(l, t - d));
            }
            cplx al = incident(array.z[j], t, false);
            for (int l = j + 1; l < n; ++l) {
                const double d = array.z[l] - array.z[j];
                al += out_l[l] * (d == 0.0 ? e(l) : hist.at(l, t - d));
            }
            const double eps = modulation_at(array, j, std::max(t, 0.0));
            de(j) = (-I * eps - 0.5 * array.total_rate(j)) * e(j) -
                    I * sq[j] * (in_r[j] * ar + in_l[j] * al);
        }
    };

    VectorXc e = VectorXc::Zero(n);
    if (grid.excited_emitter) e(*grid.excited_emitter) = 1.0;
    VectorXc k1(n), k2(n), k3(n), k4(n);
    rhs(0.0, e, k1);
    hist.push(e, k1);

    SingleExcitationResult res;
    res.t.resize(static_cast<std::size_t>(samples));
    res.populations.resize(samples, n);
    res.populations.row(0) = e.cwiseAbs2().transpose();
    res.t[0] = 0.0;
    int step = 0;
    for (int s = 1; s < samples; ++s) {
        for (int sub = 0; sub < substeps; ++sub) {
            const double t = step * h;
            rhs(t + h / 2, e + (h / 2) * k1, k2);
            rhs(t + h / 2, e + (h / 2) * k2, k3);
            rhs(t + h, e + h * k3, k4);
            e += (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
            ++step;
            rhs(step * h, e, k1);
            hist.push(e, k1);
        }
        res.t[s] = s * grid.sample_dt;
        res.populations.row(s) = e.cwiseAbs2().transpose();
    }
    res.steps = step;
    res.final_excitation = e.squaredNorm();

    // Output amplitudes at the ports, retarded emission included.
    const double zr = array.z.back(), zl = array.z.front();
    res.r.resize(static_cast<std::size_t>(samples));
    res.l.resize(static_cast<std::size_t>(samples));
    for (int s = 0; s < samples; ++s) {
        const double t = res.t[s];
        cplx ar = incident(zr, t, true), al = incident(zl, t, false);
        for (int l = 0; l < n; ++l) {
            ar += out_r[l] * hist.at(l, t - (zr - array.z[l]));
            al += out_l[l] * hist.at(l, t - (array.z[l] - zl));
        }
        res.r[s] = std::norm(ar);
        res.l[s] = std::norm(al);
    }

    // Photon bookkeeping: flux through the ports during the run, plus the part
    // of the incident pulse crossing its exit port before t=0 or after t_final.
    auto integrate_flux = [&](const std::vector<double>& f) {
        double acc = 0.0;
        for (std::size_t i = 1; i < f.size(); ++i) acc += 0.5 * (f[i] + f[i - 1]);
        return acc * grid.sample_dt;
    };
    double outside = 0.0;
    if (has_photon) {
        const double port = right ? zr : zl;
        const double span = 20.0 / pulse.width();
        const int m = 4000;
        for (double a : {-span, t_final}) {
            const double dt = span / m;
            for (int i = 0; i < m; ++i) {
                const double t = a + (i + 0.5) * dt;
                outside += std::norm(field_at(pulse, z0, port, t)) * dt;
            }
        }
    }
    res.transmitted_norm = integrate_flux(right ? res.r : res.l);
    res.reflected_norm = integrate_flux(right ? res.l : res.r);
    res.norm_drift = std::abs(res.final_excitation + res.transmitted_norm + res.reflected_norm +
                              outside - initial_norm);
    double loss = 0.0;
    for (int j = 0; j < n; ++j) loss += array.gamma_ng[j];
    if (loss == 0.0 && res.norm_drift > grid.norm_tolerance) {
        std::ostringstream os;
        os << "single-photon oracle lost " << res.norm_drift
           << " of the excitation; refine sample_dt/steps_per_sample or extend t_final";
        throw DiscretizationError(os.str());
    }
    return res;
}

} // namespace wgqed
