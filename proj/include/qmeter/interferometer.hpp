#pragma once

#include <array>
#include <functional>

#include "qmeter/scattering.hpp"
#include "qmeter/types.hpp"

namespace qmeter {

// Two-arm single-particle algebra. Amplitude slots are labeled by
// (qubit level, frequency shift in {-1, 0, +1}); slot index = level*3 + shift+1.
// The pointer observable is O_M = n_A - n_B, outcome +1 <-> |e_z>, and the
// detector on arm B fires with certainty for |g_z> in the projective case.

struct ArmState {
    std::array<cplx, 6> arm_a{};
    std::array<cplx, 6> arm_b{};

    static std::size_t slot(QubitLevel level, int shift);
};

/// Balanced beamsplitter: |1,0> -> (|1,0>+|0,1>)/sqrt2, |0,1> -> (|1,0>-|0,1>)/sqrt2,
/// applied slot-wise.
ArmState beamsplitter(const ArmState& state);

/// pi/2 phase shifter in arm B: arm_b multiplied by e^{i pi/2}.
ArmState phase_shifter_b(const ArmState& state);

/// Full pre-measurement for a qubit state entering with the meter in the
/// second port: BS -> (scattering in A, phase in B) -> BS.
ArmState assemble_final_state(const QubitState& state, const MeasurementConfig& config);

/// Arm-A occupation probability of an ArmState given the shift overlap
/// o(d) = <1_{omega} | 1_{omega + d*omega_q}> (o(0)=1, o(-d)=conj(o(d))).
double arm_a_occupation(const ArmState& state, const std::function<cplx(int)>& overlap);

/// (<n_A> for input |g_z>, <n_B> for input |e_z>); equal by the Appendix-B
/// closed form (1/2){1 - sin(phi/2)[cos^2 theta + P sin^2 theta]}.
std::pair<double, double> pointer_expectations(const MeasurementConfig& config, double p_overlap);

/// General-state arm-A occupation with the cross term evaluated at real
/// overlap P (exact at the P-maximizing launch offset, where the shift
/// overlap is real).
double expectation_na_general(const QubitState& state, const MeasurementConfig& config,
                              double p_overlap);

/// Readout error from the noise-operator decomposition,
/// eps^2 = 4|c_g|^2 <n_A>_{g_z} + 4|c_e|^2 <n_B>_{e_z}. Equals
/// sqrt(2{1 - sin(phi/2)[cos^2 theta + P sin^2 theta]}) for every state.
double readout_error(const QubitState& state, const MeasurementConfig& config,
                     double p_overlap);

/// Same value without a state (the decomposition weights drop out).
double readout_error(const MeasurementConfig& config, double p_overlap);

/// eps at the optimal kick phi = pi: sin(theta) sqrt(2(1-P)).
double optimal_error(double theta, double p_overlap);

} // namespace qmeter
