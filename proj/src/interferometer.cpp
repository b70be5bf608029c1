#include "qmeter/interferometer.hpp"

#include <cmath>

namespace qmeter {

std::size_t ArmState::slot(QubitLevel level, int shift) {
    return static_cast<std::size_t>(level == QubitLevel::eTheta ? 3 : 0) +
           static_cast<std::size_t>(shift + 1);
}

ArmState beamsplitter(const ArmState& state) {
    constexpr double inv_sqrt2 = 0.7071067811865475244;
    ArmState out;
    for (std::size_t i = 0; i < 6; ++i) {
        out.arm_a[i] = (state.arm_a[i] + state.arm_b[i]) * inv_sqrt2;
        out.arm_b[i] = (state.arm_a[i] - state.arm_b[i]) * inv_sqrt2;
    }
    return out;
}

ArmState phase_shifter_b(const ArmState& state) {
    ArmState out = state;
    for (auto& a : out.arm_b) a *= cplx(0.0, 1.0);
    return out;
}

ArmState assemble_final_state(const QubitState& state, const MeasurementConfig& config) {
    // Meter enters the port mapped with the minus sign by the beamsplitter
    // convention; that choice reproduces the Appendix-B final state with the
    // main-text +pi/2 phase in arm B.
    ArmState in;
    in.arm_b[ArmState::slot(QubitLevel::gTheta, 0)] = state.b_g;
    in.arm_b[ArmState::slot(QubitLevel::eTheta, 0)] = state.b_e;

    ArmState mid = beamsplitter(in);

    // Scattering acts on the arm-A content only. Each unshifted slot feeds
    // the four branches of the map; shifted slots cannot occur before the
    // interaction.
    ArmState scattered = mid;
    const auto amp = amplitudes(config);
    const cplx ag = mid.arm_a[ArmState::slot(QubitLevel::gTheta, 0)];
    const cplx ae = mid.arm_a[ArmState::slot(QubitLevel::eTheta, 0)];
    scattered.arm_a[ArmState::slot(QubitLevel::gTheta, 0)] = ag * amp.i_gg;
    scattered.arm_a[ArmState::slot(QubitLevel::eTheta, 0)] = ae * amp.i_ee;
    scattered.arm_a[ArmState::slot(QubitLevel::eTheta, -1)] = ag * amp.i_ge;
    scattered.arm_a[ArmState::slot(QubitLevel::gTheta, +1)] = ae * amp.i_eg;

    return beamsplitter(phase_shifter_b(scattered));
}

double arm_a_occupation(const ArmState& state, const std::function<cplx(int)>& overlap) {
    // <n_A> = sum over levels of a^dagger G a with the shift Gram matrix G.
    double total = 0.0;
    for (int lvl = 0; lvl < 2; ++lvl) {
        const auto level = lvl == 0 ? QubitLevel::gTheta : QubitLevel::eTheta;
        for (int s1 = -1; s1 <= 1; ++s1) {
            for (int s2 = -1; s2 <= 1; ++s2) {
                const cplx a1 = state.arm_a[ArmState::slot(level, s1)];
                const cplx a2 = state.arm_a[ArmState::slot(level, s2)];
                if (a1 == cplx(0.0) || a2 == cplx(0.0)) continue;
                total += std::real(std::conj(a1) * overlap(s2 - s1) * a2);
            }
        }
    }
    return total;
}

std::pair<double, double> pointer_expectations(const MeasurementConfig& config,
                                               double p_overlap) {
    if (!(p_overlap >= -1.0 && p_overlap <= 1.0))
        throw std::invalid_argument("pointer_expectations: P must lie in [-1, 1]");
    const double s = std::sin(config.phi / 2.0);
    const double c2 = std::cos(config.theta) * std::cos(config.theta);
    const double v = 0.5 * (1.0 - s * (c2 + p_overlap * (1.0 - c2)));
    return {v, v};
}

double expectation_na_general(const QubitState& state, const MeasurementConfig& config,
                              double p_overlap) {
    if (!(p_overlap >= -1.0 && p_overlap <= 1.0))
        throw std::invalid_argument("expectation_na_general: P must lie in [-1, 1]");
    const double s = std::sin(config.phi / 2.0);
    const double pop = std::norm(state.b_e) - std::norm(state.b_g);
    const double cross = std::real(std::conj(state.b_g) * state.b_e);
    return 0.5 * (1.0 + std::cos(config.theta) * s * pop -
                  2.0 * std::sin(config.theta) * s * cross * p_overlap);
}

double readout_error(const QubitState& state, const MeasurementConfig& config,
                     double p_overlap) {
    const auto cz = state.to_z_basis(config.theta);
    const double na_g = expectation_na_general(
        QubitState::from_z_basis(1.0, 0.0, config.theta), config, p_overlap);
    const double nb_e = 1.0 - expectation_na_general(
        QubitState::from_z_basis(0.0, 1.0, config.theta), config, p_overlap);
    const double e2 = 4.0 * std::norm(cz[0]) * na_g + 4.0 * std::norm(cz[1]) * nb_e;
    return std::sqrt(std::max(e2, 0.0));
}

double readout_error(const MeasurementConfig& config, double p_overlap) {
    const auto [na_g, nb_e] = pointer_expectations(config, p_overlap);
    const double e2 = 2.0 * (na_g + nb_e);
    return std::sqrt(std::max(e2, 0.0));
}

double optimal_error(double theta, double p_overlap) {
    if (!(p_overlap >= -1.0 && p_overlap <= 1.0))
        throw std::invalid_argument("optimal_error: P must lie in [-1, 1]");
    return std::sin(theta) * std::sqrt(2.0 * (1.0 - p_overlap));
}

} // namespace qmeter
