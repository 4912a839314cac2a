// pulse.hpp — incident photon pulses and their drive amplitudes alpha_j(t)

#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "wgqed/emitter_array.hpp"

namespace wgqed {

enum class Statistics { vacuum, coherent, fock };
enum class Direction { right, left };

// Gaussian spectrum of width `delta` (Gamma/v_g) centred at carrier detuning
// `detuning` (Gamma) from the emitter transition.
struct GaussianShape {
    double delta = 1.0;
    double detuning = 0.0;
};

// Sampled spectrum alpha(dk) on an increasing grid of wavenumber offsets from
// the carrier k_a. Normalised to unit norm on construction.
struct TabulatedSpectrum {
    std::vector<double> k;
    std::vector<cplx> amplitude;

    static TabulatedSpectrum from_samples(std::vector<double> k, std::vector<cplx> amplitude);
    // Three whitespace-separated columns: k, Re alpha, Im alpha. '#' starts a comment.
    static TabulatedSpectrum load(const std::string& path);

    double norm_squared() const;
    double equivalent_width() const; // sqrt(2) * rms width, equals delta for a Gaussian
};

struct PulseSpec {
    Statistics statistics = Statistics::vacuum;
    double mean_photons = 0.0; // coherent
    int photons = 0;           // fock
    Direction direction = Direction::right;
    std::variant<GaussianShape, TabulatedSpectrum> shape = GaussianShape{};
    std::optional<double> z0; // launch coordinate; defaults 5/delta outside the array

    static PulseSpec vacuum();
    static PulseSpec coherent(double mean_photons, double delta, double detuning = 0.0);
    static PulseSpec fock(int photons, double delta, double detuning = 0.0);

    double width() const;            // Gaussian delta or tabulated equivalent
    double incident_photons() const; // nbar, N, or 0
    // Amplitude scale folded into alpha: sqrt(nbar) for coherent, 1 otherwise.
    double amplitude_scale() const;

    void validate() const;
};

// Launch coordinate actually used for `array` (explicit z0 or the default).
double launch_coordinate(const PulseSpec& pulse, const EmitterArray& array);

// Checks that the pulse starts clear of the array (overlap below 1e-5 of peak).
void validate_launch(const PulseSpec& pulse, const EmitterArray& array);

// Envelope amplitude at coordinate x and time t without the carrier phase.
// Includes sqrt(nbar) for coherent pulses; normalised single-photon amplitude
// for Fock pulses; zero for vacuum.
cplx field_at(const PulseSpec& pulse, double z0, double x, double t);

// alpha_j(t): field at emitter j including its optical phase.
cplx amplitude_at(const PulseSpec& pulse, const EmitterArray& array, int j, double t);

// alpha_0(t): field at the origin. The right-moving field at x is
// alpha_0(t - x); the left-moving one alpha_0(t + x).
cplx amplitude_at_origin(const PulseSpec& pulse, double z0, double t);

// Precomputed evaluator for the integrator hot loop.
class DriveEvaluator {
public:
    DriveEvaluator(const PulseSpec& pulse, const EmitterArray& array);

    // Fills alpha_j(t) for all emitters.
    void evaluate(double t, Eigen::Ref<VectorXc> out) const;
    // Field entering the output-port terms: right port at z_N, left at z_1.
    cplx port_field(double t) const;
    bool null() const noexcept { return null_; }
    double z0() const noexcept { return z0_; }

private:
    PulseSpec pulse_;
    std::vector<double> z_;
    VectorXc carrier_;
    double z0_ = 0.0;
    double port_x_ = 0.0;
    bool null_ = true;
};

} // namespace wgqed
