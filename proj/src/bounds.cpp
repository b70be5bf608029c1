#include "qmeter/bounds.hpp"

#include <cmath>

#include "qmeter/interferometer.hpp"

namespace qmeter {

BoundInput::BoundInput(double theta_, double domega_over_wq_)
    : theta(theta_), domega_over_wq(domega_over_wq_) {
    if (!(domega_over_wq >= 0.0) || !std::isfinite(domega_over_wq))
        throw std::invalid_argument("BoundInput: domega_over_wq must be finite and >= 0");
}

double ozawa_bound_state(const QubitState& state, const BoundInput& input) {
    // [sigma_z, H_S] = i hbar omega_q sin(theta) sigma_y turns the commutator
    // bound into the quoted sigma_y / sigma_theta expression.
    const double sy = state.expect_sigma_y(input.theta);
    const double st = state.expect_sigma_theta();
    const double r = input.domega_over_wq;
    const double denom = 1.0 + 4.0 * r * r - st * st;
    if (denom <= 1e-15) return 0.0; // eigenstate limit: numerator vanishes too
    const double num = std::sin(input.theta) * std::sin(input.theta) * sy * sy;
    return std::sqrt(num / denom);
}

double ozawa_bound_max(const BoundInput& input) {
    const double r = input.domega_over_wq;
    return std::sin(input.theta) / std::sqrt(1.0 + 4.0 * r * r);
}

double error_bound_ratio(double theta, const WavepacketMoments& moments, double p_overlap,
                         double omega_q) {
    const double r = moments.delta_omega / omega_q;
    if (std::sin(theta) > 1e-9) {
        return optimal_error(theta, p_overlap) / ozawa_bound_max(BoundInput(theta, r));
    }
    return std::sqrt(2.0 * (1.0 + 4.0 * r * r) * (1.0 - p_overlap));
}

double uncertainty_product(const WavepacketMoments& moments) {
    if (!(moments.delta_t > 0.0) || !(moments.delta_omega > 0.0))
        throw std::invalid_argument("uncertainty_product: dispersions must be positive");
    return moments.delta_t * moments.delta_omega;
}

} // namespace qmeter
