#pragma once

#include <array>

#include "qmeter/types.hpp"

namespace qmeter {

/// Qubit and interaction parameters. theta tilts H_S away from sigma_z,
/// phi is the kick strength, omega_q the qubit frequency (inverse time).
struct MeasurementConfig {
    double theta;   // [0, pi/2]
    double phi;     // [0, 2pi]
    double omega_q; // > 0

    MeasurementConfig(double theta, double phi, double omega_q);
};

/// Qubit state in the H_S eigenbasis {|g_theta>, |e_theta>}.
struct QubitState {
    cplx b_g;
    cplx b_e;

    QubitState(cplx b_g, cplx b_e); // validates normalization to 1e-12

    static QubitState normalized(cplx b_g, cplx b_e);

    /// From z-basis amplitudes (c_g |g_z> + c_e |e_z>) at tilt theta.
    static QubitState from_z_basis(cplx c_g, cplx c_e, double theta);

    /// Back to z-basis amplitudes {c_g, c_e}.
    std::array<cplx, 2> to_z_basis(double theta) const;

    /// Pauli expectations in the z-basis representation.
    double expect_sigma_y(double theta) const;
    double expect_sigma_theta() const;
};

/// The four transition amplitudes of the scattering map.
struct ScatteringAmplitudes {
    cplx i_gg; // = conj(i_ee)
    cplx i_ee;
    cplx i_ge; // = i_eg, purely imaginary
    cplx i_eg;
};

enum class QubitLevel { gTheta, eTheta };

/// One branch of the post-interaction joint state: the qubit level, the
/// meter frequency shift in units of omega_q (-1, 0, +1), and the amplitude.
struct ScatterBranch {
    QubitLevel qubit_level;
    int frequency_shift;
    cplx amplitude;
};

/// Closed-form amplitudes of the kick e^{-i(phi/2) sigma_z} in the theta basis.
ScatteringAmplitudes amplitudes(const MeasurementConfig& config);

/// The four branches of the scattering map, zero-amplitude ones retained:
/// (g,0,b_g i_gg), (e,0,b_e i_ee), (e,-1,b_g i_ge), (g,+1,b_e i_eg).
std::array<ScatterBranch, 4> scatter(const QubitState& state,
                                     const MeasurementConfig& config);

} // namespace qmeter
