#include "qmeter/scattering.hpp"

#include <cmath>

namespace qmeter {

MeasurementConfig::MeasurementConfig(double theta_, double phi_, double omega_q_)
    : theta(theta_), phi(phi_), omega_q(omega_q_) {
    if (!(theta >= 0.0 && theta <= pi / 2.0 + 1e-12))
        throw std::invalid_argument("MeasurementConfig: theta must lie in [0, pi/2]");
    if (!(phi >= 0.0 && phi <= 2.0 * pi + 1e-12))
        throw std::invalid_argument("MeasurementConfig: phi must lie in [0, 2pi]");
    if (!(omega_q > 0.0))
        throw std::invalid_argument("MeasurementConfig: omega_q must be positive");
}

QubitState::QubitState(cplx b_g_, cplx b_e_) : b_g(b_g_), b_e(b_e_) {
    const double n = std::norm(b_g) + std::norm(b_e);
    if (std::abs(n - 1.0) > 1e-12)
        throw std::invalid_argument("QubitState: amplitudes must be normalized");
}

QubitState QubitState::normalized(cplx b_g, cplx b_e) {
    const double n = std::sqrt(std::norm(b_g) + std::norm(b_e));
    if (!(n > 0.0)) throw std::invalid_argument("QubitState: zero state");
    return QubitState(b_g / n, b_e / n);
}

QubitState QubitState::from_z_basis(cplx c_g, cplx c_e, double theta) {
    // |g_z> = cos(t/2)|g_T> + sin(t/2)|e_T>, |e_z> = -sin(t/2)|g_T> + cos(t/2)|e_T>
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    return QubitState::normalized(c_g * c - c_e * s, c_g * s + c_e * c);
}

std::array<cplx, 2> QubitState::to_z_basis(double theta) const {
    const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
    // |g_T> = cos(t/2)|g_z> - sin(t/2)|e_z>, |e_T> = sin(t/2)|g_z> + cos(t/2)|e_z>
    return {b_g * c + b_e * s, -b_g * s + b_e * c};
}

double QubitState::expect_sigma_y(double theta) const {
    const auto z = to_z_basis(theta);
    // sigma_y |g_z> = -i |e_z>, sigma_y |e_z> = +i |g_z>
    const cplx v = std::conj(z[0]) * (cplx(0, 1) * z[1]) +
                   std::conj(z[1]) * (cplx(0, -1) * z[0]);
    return v.real();
}

double QubitState::expect_sigma_theta() const {
    return std::norm(b_e) - std::norm(b_g);
}

ScatteringAmplitudes amplitudes(const MeasurementConfig& config) {
    const double c = std::cos(config.phi / 2.0), s = std::sin(config.phi / 2.0);
    const cplx i_gg(c, std::cos(config.theta) * s);
    const cplx i_ge(0.0, std::sin(config.theta) * s);
    return {i_gg, std::conj(i_gg), i_ge, i_ge};
}

std::array<ScatterBranch, 4> scatter(const QubitState& state,
                                     const MeasurementConfig& config) {
    const auto a = amplitudes(config);
    return {ScatterBranch{QubitLevel::gTheta, 0, state.b_g * a.i_gg},
            ScatterBranch{QubitLevel::eTheta, 0, state.b_e * a.i_ee},
            ScatterBranch{QubitLevel::eTheta, -1, state.b_g * a.i_ge},
            ScatterBranch{QubitLevel::gTheta, +1, state.b_e * a.i_eg}};
}

} // namespace qmeter
