#include "wgqed/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wgqed {

namespace {

// Dormand–Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                 a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// Error weights (5th minus 4th order).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Continuous extension (Hairer & Wanner, DOPRI5 dense output).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

double error_norm(const VectorXc& err, const VectorXc& y0, const VectorXc& y1, double atol,
                  double rtol)
{
    double acc = 0.0;
    const Eigen::Index n = err.size();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double sc = atol + rtol * std::max(std::abs(y0(i)), std::abs(y1(i)));
        acc += std::norm(err(i)) / (sc * sc);
    }
    return std::sqrt(acc / static_cast<double>(std::max<Eigen::Index>(n, 1)));
}

} // namespace

void IntegratorConfig::validate() const
{
    if (!(rtol > 0) || !(atol > 0)) throw ConfigError("integrator tolerances must be positive");
    if (!(max_step > 0)) throw ConfigError("integrator max_step must be positive");
    if (initial_step < 0) throw ConfigError("integrator initial_step must be >= 0");
    if (!(t_final >= 0) || !std::isfinite(t_final)) {
        throw ConfigError("integrator t_final must be finite and >= 0");
    }
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i] < 0 || samples[i] > t_final * (1 + 1e-12)) {
            throw ConfigError("sample grid must lie within [0, t_final]");
        }
        if (i > 0 && !(samples[i] > samples[i - 1])) {
            throw ConfigError("sample grid must be strictly increasing");
        }
    }
}

IntegrationStats integrate(const RhsFunction& f, VectorXc& y, double t0,
                           const IntegratorConfig& config, const SampleObserver& observer,
                           const StepHook& hook)
{
    config.validate();
    IntegrationStats stats;
    const double tf = config.t_final;
    const Eigen::Index n = y.size();
    const double atol = config.atol, rtol = config.rtol;

    std::size_t next = 0;
    while (next < config.samples.size() && config.samples[next] < t0) ++next;
    auto emit_exact = [&](double t, const VectorXc& state) {
        while (next < config.samples.size() && config.samples[next] == t) {
            if (observer) observer(t, state);
            ++next;
        }
    };

    double t = t0;
    emit_exact(t, y);
    stats.t_end = t;
    if (tf <= t0) return stats;

    VectorXc k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), ytmp(n), ynew(n), err(n);
    auto eval = [&](double tt, const VectorXc& yy, VectorXc& out) {
        f(tt, yy, out);
        ++stats.rhs_evaluations;
    };
    eval(t, y, k1);

    double h = config.initial_step;
    if (h <= 0) {
        // Hairer's starting-step heuristic.
        const double d0 = error_norm(y, y, y, atol, rtol);
        const double dd1 = error_norm(k1, y, y, atol, rtol);
        double h0 = (d0 < 1e-5 || dd1 < 1e-5) ? 1e-6 : 0.01 * d0 / dd1;
        h0 = std::min(h0, config.max_step);
        ytmp = y + h0 * k1;
        eval(t + h0, ytmp, k2);
        const double dd2 = error_norm(VectorXc((k2 - k1) / h0), y, y, atol, rtol);
        const double h1 = std::max(dd1, dd2) <= 1e-15
                              ? std::max(1e-6, h0 * 1e-3)
                              : std::pow(0.01 / std::max(dd1, dd2), 1.0 / 5);
        h = std::min({100 * h0, h1, config.max_step});
    }

    constexpr double safety = 0.9, fac_min = 0.2, fac_max = 10.0;
    double err_prev = 1e-4;
    bool last_rejected = false;
    VectorXc r1, r2, r3, r4, r5;

    while (t < tf) {
        if (stats.accepted + stats.rejected >= config.max_steps) {
            std::ostringstream os;
            os << "integrator exceeded " << config.max_steps << " steps at t = " << t;
            throw StiffnessError(os.str());
        }
        h = std::min(h, config.max_step);
        bool final_step = false;
        if (t + h >= tf * (1 - 1e-14) || t + h > tf) {
            h = tf - t;
            final_step = true;
        }
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
            std::ostringstream os;
            os << "step size underflow (h = " << h << ") at t = " << t;
            throw StiffnessError(os.str());
        }

        ytmp = y + h * (a21 * k1);
        eval(t + c2 * h, ytmp, k2);
        ytmp = y + h * (a31 * k1 + a32 * k2);
        eval(t + c3 * h, ytmp, k3);
        ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        eval(t + c4 * h, ytmp, k4);
        ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        eval(t + c5 * h, ytmp, k5);
        ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        eval(t + h, ytmp, k6);
        ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        const double t_new = final_step ? tf : t + h;
        eval(t_new, ynew, k7);
        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double en = error_norm(err, y, ynew, atol, rtol);

        if (!std::isfinite(en)) {
            h *= 0.25;
            ++stats.rejected;
            last_rejected = true;
            continue;
        }
        if (en > 1.0) {
            h *= std::max(fac_min, safety * std::pow(en, -0.2));
            ++stats.rejected;
            last_rejected = true;
            continue;
        }

        // Accepted. Dense output for samples inside (t, t_new].
        if (next < config.samples.size() && config.samples[next] <= t_new) {
            r1 = y;
            r2 = ynew - y;
            r3 = h * k1 - r2;
            r4 = r2 - h * k7 - r3;
            r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
            while (next < config.samples.size() && config.samples[next] <= t_new) {
                const double ts = config.samples[next];
                if (ts == t_new) {
                    if (observer) observer(ts, ynew);
                } else {
                    const double th = (ts - t) / h, th1 = 1.0 - th;
                    ytmp = r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
                    if (observer) observer(ts, ytmp);
                }
                ++next;
            }
        }

        y.swap(ynew);
        k1.swap(k7); // FSAL
        t = t_new;
        ++stats.accepted;
        stats.last_step = h;
        stats.t_end = t;

        // PI step-size control (Gustafsson), conservative after a rejection.
        const double e = std::max(en, 1e-10);
        double fac = safety * std::pow(e, -0.7 / 5) * std::pow(err_prev, 0.4 / 5);
        fac = std::clamp(fac, fac_min, last_rejected ? 1.0 : fac_max);
        err_prev = std::max(en, 1e-4);
        last_rejected = false;
        h *= fac;

        if (hook && !hook(t, y)) {
            stats.stopped_early = true;
            break;
        }
    }
    return stats;
}

} // namespace wgqed
