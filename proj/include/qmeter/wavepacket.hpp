#pragma once

#include <span>
#include <variant>
#include <vector>

#include "qmeter/types.hpp"

namespace qmeter {

// Natural units throughout: hbar = 1, group velocity v0 = 1, so the meter
// wavefunction lives on the time axis t and frequencies are inverse times.

struct Gaussian {
    double sigma_t; // time dispersion equals sigma_t
};

struct SmoothedSquare {
    double s;   // half temporal length of the ideal pulse
    double eta; // smoothing parameter in (0, 1)
};

struct SmoothedExponential {
    double gamma; // decay rate of |psi|^2 on t >~ 0
    double eta;   // smoothing parameter in (0, 1)
};

struct Sampled {
    std::vector<double> times;     // strictly increasing, uniform preferred
    std::vector<cplx> amplitudes;  // normalized on construction
};

using Shape = std::variant<Gaussian, SmoothedSquare, SmoothedExponential, Sampled>;

enum class ShapeFamily { Gaussian, SmoothedSquare, SmoothedExponential };

/// Parametric meter wavepacket plus the launch offset tau.
/// tau enters the shift overlap through cos(omega_q (t + tau)); the packet
/// the meter actually flies is psi(t - tau).
struct WavepacketSpec {
    Shape shape;
    double tau = 0.0;
};

struct WavepacketMoments {
    double delta_t;
    double delta_omega;
};

/// Factories validate the shape invariants (positive parameters, eta in (0,1));
/// the sampled factory also normalizes the profile to unit norm.
WavepacketSpec gaussian(double sigma_t, double tau = 0.0);
WavepacketSpec smoothed_square(double s, double eta, double tau = 0.0);
WavepacketSpec smoothed_exponential(double gamma, double eta, double tau = 0.0);
WavepacketSpec sampled(std::vector<double> times, std::vector<cplx> amplitudes,
                       double tau = 0.0);

/// psi(t) of the bare profile (no tau offset). Real for the parametric
/// families; linear interpolation (zero outside the grid) for Sampled.
cplx amplitude(const WavepacketSpec& spec, double t);

/// psi(t - tau): the packet as launched.
cplx launch_amplitude(const WavepacketSpec& spec, double t);

/// Closed forms for the parametric families; quadrature moments for Sampled.
double time_dispersion(const WavepacketSpec& spec);

/// Closed forms for the parametric families; for Sampled the derivative
/// second moment, throwing DivergentMoment if refinement disagrees.
double frequency_dispersion(const WavepacketSpec& spec);

WavepacketMoments moments(const WavepacketSpec& spec);

/// Mean of t under |psi(t)|^2 (bare profile).
double mean_time(const WavepacketSpec& spec);

/// P = integral |psi(t)|^2 cos(omega_q (t + tau)) dt, adaptive quadrature
/// at absolute tolerance 1e-10. omega_q = 0 short-circuits to 1.
double overlap_p(const WavepacketSpec& spec, double omega_q);

/// Complex shift overlap <1_omega | 1_{omega+omega_q}> of the launched packet
/// = integral |psi(t-tau)|^2 e^{-i omega_q t} dt. Its real part is overlap_p.
/// Exposed for the grid-oracle comparison.
cplx shift_overlap(const WavepacketSpec& spec, double omega_q);

/// tau* in [0, 2pi/omega_q) maximizing P. Analytic for the even profiles
/// (0, or pi/omega_q when the shift overlap is negative); grid scan plus
/// golden-section (tolerance 1e-10 in omega_q*tau) for the exponential
/// and sampled families.
double optimal_tau(const WavepacketSpec& spec, double omega_q);

/// Invert the time-dispersion closed form: the sigma_t, s or gamma giving
/// time_dispersion == target_dt (exact, the formulas are linear).
double solve_param_for_dt(ShapeFamily family, double eta, double target_dt);

/// Spec with the given family, eta and time dispersion, tau = 0.
WavepacketSpec spec_for_dt(ShapeFamily family, double eta, double target_dt);

/// [lo, hi] containing all but ~eps of the bare profile's norm.
std::pair<double, double> support_interval(const WavepacketSpec& spec,
                                           double eps = 1e-12);

} // namespace qmeter
