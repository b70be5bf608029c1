#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qmeter/quadrature.hpp"
#include "qmeter/verify.hpp"
#include "qmeter/wavepacket.hpp"

using namespace qmeter;

namespace {

// Norm of |psi|^2 by quadrature over the analytic support window.
double quadrature_norm(const WavepacketSpec& spec) {
    auto [lo, hi] = support_interval(spec, 1e-14);
    return integrate([&](double t) { return std::norm(amplitude(spec, t)); }, lo, hi, 1e-12);
}

// Densely sampled copy of a parametric profile, for the numeric-moment oracle.
WavepacketSpec sampled_copy(const WavepacketSpec& spec, int n = (1 << 15) + 1) {
    auto [lo, hi] = support_interval(spec, 1e-15);
    std::vector<double> ts(n);
    std::vector<cplx> amps(n);
    for (int i = 0; i < n; ++i) {
        ts[i] = lo + (hi - lo) * i / (n - 1);
        amps[i] = amplitude(spec, ts[i]);
    }
    return sampled(std::move(ts), std::move(amps));
}

// Independent closed forms for the tau-rotated shift overlap, derived by
// Fourier-transforming the densities directly. Used only as cross-checks.
double p_gauss_closed(double sigma, double omega, double tau) {
    return std::cos(omega * tau) * std::exp(-0.5 * omega * omega * sigma * sigma);
}

double p_square_closed(double s, double eta, double omega, double tau) {
    const double c = (pi * eta / 2.0) * std::sin(omega * s) / std::sinh(pi * eta * omega * s / 2.0);
    return std::cos(omega * tau) * c;
}

double p_exp_closed(double gamma, double eta, double omega, double tau) {
    const std::complex<double> z(pi * eta / 2.0, -pi * eta * omega / (2.0 * gamma));
    const std::complex<double> c = std::sin(pi * eta / 2.0) / std::sin(z);
    return std::real(std::polar(1.0, omega * tau) * c);
}

} // namespace

TEST_CASE("gaussian amplitude closed form") {
    const auto g = gaussian(1.0);
    CHECK(amplitude(g, 0.0).real() == doctest::Approx(0.6316187777460647).epsilon(1e-12));
    CHECK(amplitude(g, 0.0).imag() == 0.0);
    CHECK(std::abs(amplitude(g, 50.0)) < 1e-250);
    CHECK(std::abs(amplitude(g, -50.0)) < 1e-250);
}

TEST_CASE("smoothed square approaches the ideal pulse as eta -> 0") {
    const auto sq = smoothed_square(1.0, 1e-4);
    for (const double t : {-0.9, -0.5, 0.0, 0.5, 0.9})
        CHECK(amplitude(sq, t).real() ==
              doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
    CHECK(std::abs(amplitude(sq, 1.5)) < 1e-6);
}

TEST_CASE("normalization across families and parameters") {
    std::uint64_t rng = 7;
    for (int i = 0; i < 8; ++i) {
        const double eta = 0.02 + 0.93 * verify::uniform01(rng);
        const double scale = std::exp(4.0 * (verify::uniform01(rng) - 0.5));
        CHECK(quadrature_norm(gaussian(scale)) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(quadrature_norm(smoothed_square(scale, eta)) ==
              doctest::Approx(1.0).epsilon(1e-9));
        CHECK(quadrature_norm(smoothed_exponential(scale, eta)) ==
              doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("shape invariants are validated") {
    CHECK_THROWS_AS(gaussian(0.0), std::invalid_argument);
    CHECK_THROWS_AS(smoothed_square(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(smoothed_square(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(smoothed_exponential(-1.0, 0.3), std::invalid_argument);
}

TEST_CASE("time dispersion closed forms") {
    CHECK(time_dispersion(gaussian(2.0)) == 2.0);
    CHECK(time_dispersion(smoothed_square(1.0, 1.0 / pi)) ==
          doctest::Approx(0.6454972243679028).epsilon(1e-14));
    CHECK(time_dispersion(smoothed_exponential(1.0, 1.0 / pi)) ==
          doctest::Approx(1.0429148214667441).epsilon(1e-14));
}

TEST_CASE("frequency dispersion closed forms") {
    CHECK(frequency_dispersion(gaussian(1.0)) == 0.5);
    CHECK(frequency_dispersion(smoothed_exponential(1.0, 1.0 / pi)) ==
          doctest::Approx(0.8126488561472589).epsilon(1e-14));
    CHECK(frequency_dispersion(smoothed_square(1.0, 1.0 / pi)) ==
          doctest::Approx(0.8861911777162193).epsilon(1e-14));
    // Minimum-uncertainty: gaussian product is exactly 1/2.
    const auto m = moments(gaussian(0.37));
    CHECK(m.delta_t * m.delta_omega == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("closed forms match numeric moments of sampled copies") {
    for (const auto family : {ShapeFamily::Gaussian, ShapeFamily::SmoothedSquare,
                              ShapeFamily::SmoothedExponential}) {
        const auto spec = spec_for_dt(family, 1.0 / pi, 1.0);
        const auto num = sampled_copy(spec);
        CHECK(time_dispersion(num) ==
              doctest::Approx(time_dispersion(spec)).epsilon(1e-6));
        CHECK(frequency_dispersion(num) ==
              doctest::Approx(frequency_dispersion(spec)).epsilon(1e-6));
    }
}

TEST_CASE("uncertainty floor holds everywhere, equality only for gaussian") {
    std::uint64_t rng = 21;
    for (int i = 0; i < 12; ++i) {
        const double eta = 0.05 + 0.9 * verify::uniform01(rng);
        const double dt = std::exp(5.0 * (verify::uniform01(rng) - 0.5));
        for (const auto family : {ShapeFamily::Gaussian, ShapeFamily::SmoothedSquare,
                                  ShapeFamily::SmoothedExponential}) {
            const auto m = moments(spec_for_dt(family, eta, dt));
            const double prod = m.delta_t * m.delta_omega;
            CHECK(prod >= 0.5 - 1e-9);
            if (family == ShapeFamily::Gaussian)
                CHECK(prod == doctest::Approx(0.5).epsilon(1e-9));
            else
                CHECK(prod > 0.5 + 1e-4);
        }
    }
}

TEST_CASE("overlap P basics") {
    CHECK(overlap_p(gaussian(3.3), 0.0) == 1.0);
    CHECK(overlap_p(gaussian(1.0), 1.0) ==
          doctest::Approx(0.6065306597126334).epsilon(1e-9));
    CHECK(overlap_p(gaussian(1.0), 40.0) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(overlap_p(gaussian(1.0), -1.0), std::invalid_argument);
}

TEST_CASE("quadrature P matches the closed forms across regimes") {
    for (const double w : {0.01, 0.1, 1.0, 10.0}) {
        for (const double tau : {0.0, 0.3}) {
            auto g = gaussian(1.0, tau);
            CHECK(overlap_p(g, w) == doctest::Approx(p_gauss_closed(1.0, w, tau)).epsilon(1e-9));
        }
    }
    for (const double w : {0.3, 2.0, 4.5}) {
        auto sq = smoothed_square(1.3, 1.0 / pi, 0.1);
        CHECK(overlap_p(sq, w) ==
              doctest::Approx(p_square_closed(1.3, 1.0 / pi, w, 0.1)).epsilon(1e-9));
        auto ex = smoothed_exponential(0.8, 1.0 / pi, 0.2);
        CHECK(overlap_p(ex, w) ==
              doctest::Approx(p_exp_closed(0.8, 1.0 / pi, w, 0.2)).epsilon(1e-9));
    }
}

TEST_CASE("P is bounded") {
    std::uint64_t rng = 5;
    for (int i = 0; i < 20; ++i) {
        const double w = std::exp(6.0 * (verify::uniform01(rng) - 0.5));
        const double tau = verify::uniform01(rng) * 3.0;
        CHECK(std::abs(overlap_p(smoothed_exponential(1.0, 0.25, tau), w)) <= 1.0 + 1e-12);
        CHECK(std::abs(overlap_p(smoothed_square(1.0, 0.25, tau), w)) <= 1.0 + 1e-12);
    }
}

TEST_CASE("optimal tau: symmetric shapes") {
    CHECK(optimal_tau(gaussian(1.0), 0.7) == 0.0);
    CHECK(optimal_tau(gaussian(1.0), 30.0) == 0.0);
    // Positive-overlap regime: the even profile is already optimal.
    CHECK(optimal_tau(smoothed_square(1.0, 1.0 / pi), 1.0) == 0.0);
    // Between the sinc zeros the shift overlap is negative and the maximizer
    // flips by half a period.
    const double w = 4.5; // sin(4.5) < 0
    REQUIRE(p_square_closed(1.0, 1.0 / pi, w, 0.0) < 0.0);
    CHECK(optimal_tau(smoothed_square(1.0, 1.0 / pi), w) == doctest::Approx(pi / w));
}

TEST_CASE("optimal tau beats a 512-point grid scan for the exponential") {
    const double w = 1.0;
    const auto base = smoothed_exponential(1.0, 1.0 / pi);
    const double tau_star = optimal_tau(base, w);
    WavepacketSpec best = base;
    best.tau = tau_star;
    const double p_star = overlap_p(best, w);
    for (int i = 0; i < 512; ++i) {
        WavepacketSpec probe = base;
        probe.tau = 2.0 * pi / w * i / 512.0;
        CHECK(p_star >= overlap_p(probe, w) - 1e-9);
    }
}

TEST_CASE("optimal tau cancels the mean arrival time for short packets") {
    // First-order statement, so probe it at small omega_q * dt.
    const double w = 0.1;
    const auto base = smoothed_exponential(1.0, 1.0 / pi);
    const double tau_star = optimal_tau(base, w);
    const double period = 2.0 * pi / w;
    const double expected = std::fmod(period - mean_time(base), period);
    CHECK(tau_star == doctest::Approx(expected).epsilon(1e-3));
}

TEST_CASE("parameter inversion for a target time dispersion") {
    CHECK(solve_param_for_dt(ShapeFamily::Gaussian, 0.3, 0.3) == 0.3);
    CHECK(solve_param_for_dt(ShapeFamily::SmoothedSquare, 1.0 / pi, 1.0) ==
          doctest::Approx(1.5491933384829668).epsilon(1e-14));
    CHECK(solve_param_for_dt(ShapeFamily::SmoothedExponential, 1.0 / pi, 1.0) ==
          doctest::Approx(1.0429148214667441).epsilon(1e-14));
    for (const auto family : {ShapeFamily::Gaussian, ShapeFamily::SmoothedSquare,
                              ShapeFamily::SmoothedExponential}) {
        for (const double dt : {0.01, 0.5, 7.0}) {
            const auto spec = spec_for_dt(family, 0.4, dt);
            CHECK(time_dispersion(spec) == doctest::Approx(dt).epsilon(1e-12));
        }
    }
}

TEST_CASE("sampled profiles: normalization, moments, interpolation") {
    const auto g = gaussian(0.8);
    auto copy = sampled_copy(g, 4097);
    CHECK(time_dispersion(copy) == doctest::Approx(0.8).epsilon(1e-7));
    CHECK(frequency_dispersion(copy) == doctest::Approx(1.0 / 1.6).epsilon(1e-6));
    CHECK(std::abs(amplitude(copy, 0.123)) ==
          doctest::Approx(std::abs(amplitude(g, 0.123))).epsilon(1e-6));
    CHECK(amplitude(copy, 1e9) == cplx(0.0));
    // Construction re-normalizes arbitrary scaling.
    std::vector<double> ts;
    std::vector<cplx> amps;
    for (int i = 0; i < 2001; ++i) {
        const double t = -8.0 + 16.0 * i / 2000.0;
        ts.push_back(t);
        amps.push_back(5.0 * amplitude(g, t));
    }
    const auto renorm = sampled(std::move(ts), std::move(amps));
    CHECK(overlap_p(renorm, 0.0) == 1.0);
    CHECK(time_dispersion(renorm) == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("discontinuous sampled profile diverges under refinement") {
    // An ideal square has no finite second spectral moment; the derivative
    // route must detect it rather than return a grid artifact.
    const int n = 1 << 13;
    std::vector<double> ts(n);
    std::vector<cplx> amps(n);
    for (int i = 0; i < n; ++i) {
        ts[i] = -2.0 + 4.0 * i / (n - 1);
        amps[i] = std::abs(ts[i]) < 1.0 ? 1.0 / std::sqrt(2.0) : 0.0;
    }
    const auto hard_square = sampled(std::move(ts), std::move(amps));
    CHECK_THROWS_AS(frequency_dispersion(hard_square), DivergentMoment);
}

TEST_CASE("support interval captures the stated tail mass") {
    for (const auto& spec :
         {gaussian(2.0), smoothed_square(1.5, 0.2), smoothed_exponential(0.6, 0.4)}) {
        auto [lo, hi] = support_interval(spec, 1e-12);
        const double inside = integrate(
            [&](double t) { return std::norm(amplitude(spec, t)); }, lo, hi, 1e-13);
        CHECK(1.0 - inside < 1e-11);
    }
}
