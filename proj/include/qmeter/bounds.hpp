#pragma once

#include "qmeter/scattering.hpp"
#include "qmeter/types.hpp"
#include "qmeter/wavepacket.hpp"

namespace qmeter {

/// Inputs of the conservation-law bound: the tilt angle and the meter's
/// relative frequency dispersion.
struct BoundInput {
    double theta;
    double domega_over_wq; // >= 0, finite

    BoundInput(double theta, double domega_over_wq);
};

/// State-dependent lower bound on the readout error,
/// eps_B(psi)^2 = sin^2(theta) <sigma_y>^2 / (1 + 4(dw/wq)^2 - <sigma_theta>^2).
/// Returns 0 in the degenerate eigenstate limit where both numerator and
/// denominator vanish.
double ozawa_bound_state(const QubitState& state, const BoundInput& input);

/// Bound maximized over qubit states: sin(theta) / sqrt(1 + 4(dw/wq)^2),
/// attained at <sigma_y> = +-1.
double ozawa_bound_max(const BoundInput& input);

/// Ratio optimal_error / ozawa_bound_max = sqrt(2(1 + 4 dw^2/wq^2)(1 - P)).
/// theta cancels; at theta = 0 the ratio is defined as this limit value.
double error_bound_ratio(double theta, const WavepacketMoments& moments, double p_overlap,
                         double omega_q);

/// dw * dt, the time-frequency uncertainty product of the meter packet.
double uncertainty_product(const WavepacketMoments& moments);

} // namespace qmeter
