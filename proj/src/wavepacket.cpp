#include "qmeter/wavepacket.hpp"

#include <algorithm>
#include <cmath>

#include "qmeter/quadrature.hpp"

namespace qmeter {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

double sq(double x) { return x * x; }

// |psi|^2 of the bare profile at t.
double density(const WavepacketSpec& spec, double t) {
    const cplx a = amplitude(spec, t);
    return std::norm(a);
}

const Sampled* as_sampled(const WavepacketSpec& spec) {
    return std::get_if<Sampled>(&spec.shape);
}

// Quadrature window for overlap integrals: the profile support padded so the
// clipped tail is far below the 1e-10 tolerance.
std::pair<double, double> overlap_window(const WavepacketSpec& spec) {
    auto [lo, hi] = support_interval(spec, 1e-14);
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

struct SampledMoments {
    double norm2;
    double mean;
    double var;
};

SampledMoments sampled_time_moments(std::span<const double> t, std::span<const cplx> a) {
    std::vector<double> d0(t.size()), d1(t.size()), d2(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        d0[i] = std::norm(a[i]);
        d1[i] = t[i] * d0[i];
        d2[i] = t[i] * t[i] * d0[i];
    }
    const double n = simpson_sampled(t, d0);
    const double m = simpson_sampled(t, d1) / n;
    const double v = simpson_sampled(t, d2) / n - m * m;
    return {n, m, v};
}

// Frequency variance of a uniformly sampled profile via the derivative route.
double sampled_freq_variance(std::span<const double> t, std::span<const cplx> a) {
    const double h = t[1] - t[0];
    const auto d = derivative_uniform(a, h);
    std::vector<double> dens(t.size()), cross(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        dens[i] = std::norm(d[i]);
        cross[i] = std::imag(std::conj(a[i]) * d[i]); // <omega> up to sign
    }
    const double second = simpson_sampled(t, dens);
    const double first = simpson_sampled(t, cross);
    return second - first * first;
}

} // namespace

WavepacketSpec gaussian(double sigma_t, double tau) {
    require(sigma_t > 0.0, "gaussian: sigma_t must be positive");
    return {Gaussian{sigma_t}, tau};
}

WavepacketSpec smoothed_square(double s, double eta, double tau) {
    require(s > 0.0, "smoothed_square: s must be positive");
    require(eta > 0.0 && eta < 1.0, "smoothed_square: eta must lie in (0, 1)");
    return {SmoothedSquare{s, eta}, tau};
}

WavepacketSpec smoothed_exponential(double gamma, double eta, double tau) {
    require(gamma > 0.0, "smoothed_exponential: gamma must be positive");
    require(eta > 0.0 && eta < 1.0, "smoothed_exponential: eta must lie in (0, 1)");
    return {SmoothedExponential{gamma, eta}, tau};
}

WavepacketSpec sampled(std::vector<double> times, std::vector<cplx> amplitudes,
                       double tau) {
    require(times.size() == amplitudes.size(), "sampled: size mismatch");
    require(times.size() >= 8, "sampled: too few samples");
    for (std::size_t i = 0; i + 1 < times.size(); ++i)
        require(times[i + 1] > times[i], "sampled: times must be strictly increasing");
    std::vector<double> dens(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) dens[i] = std::norm(amplitudes[i]);
    const double n = simpson_sampled(times, dens);
    require(n > 0.0, "sampled: zero norm");
    const double scale = 1.0 / std::sqrt(n);
    for (auto& a : amplitudes) a *= scale;
    return {Sampled{std::move(times), std::move(amplitudes)}, tau};
}

cplx amplitude(const WavepacketSpec& spec, double t) {
    return std::visit(
        [&](const auto& sh) -> cplx {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, Gaussian>) {
                return std::exp(-t * t / (4.0 * sq(sh.sigma_t))) /
                       (std::pow(2.0 * pi, 0.25) * std::sqrt(sh.sigma_t));
            } else if constexpr (std::is_same_v<T, SmoothedSquare>) {
                const double a = sh.eta * sh.s;
                const double v =
                    (std::tanh((t + sh.s) / a) - std::tanh((t - sh.s) / a)) / (4.0 * sh.s);
                return std::sqrt(std::max(v, 0.0));
            } else if constexpr (std::is_same_v<T, SmoothedExponential>) {
                // (1 + tanh(x))/2 = 1/(1 + e^{-2x}); evaluated in logistic
                // form with the exponents merged, otherwise the cancellation
                // noise for t < 0 is amplified by the growing e^{-gamma t}.
                const double root_n = std::sqrt((2.0 * sh.gamma / (pi * sh.eta)) *
                                                std::sin(pi * sh.eta / 2.0));
                const double x = sh.gamma * t / sh.eta;
                if (x >= 0.0)
                    return root_n * std::exp(-0.5 * sh.gamma * t) /
                           std::sqrt(1.0 + std::exp(-2.0 * x));
                return root_n * std::exp(x - 0.5 * sh.gamma * t) /
                       std::sqrt(1.0 + std::exp(2.0 * x));
            } else {
                const auto& ts = sh.times;
                if (t <= ts.front() || t >= ts.back()) return 0.0;
                const auto it = std::upper_bound(ts.begin(), ts.end(), t);
                const std::size_t i = static_cast<std::size_t>(it - ts.begin()) - 1;
                const double w = (t - ts[i]) / (ts[i + 1] - ts[i]);
                return sh.amplitudes[i] * (1.0 - w) + sh.amplitudes[i + 1] * w;
            }
        },
        spec.shape);
}

cplx launch_amplitude(const WavepacketSpec& spec, double t) {
    return amplitude(spec, t - spec.tau);
}

double time_dispersion(const WavepacketSpec& spec) {
    return std::visit(
        [&](const auto& sh) -> double {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, Gaussian>) {
                return sh.sigma_t;
            } else if constexpr (std::is_same_v<T, SmoothedSquare>) {
                return sh.s * std::sqrt(4.0 + sq(pi * sh.eta)) / (2.0 * std::sqrt(3.0));
            } else if constexpr (std::is_same_v<T, SmoothedExponential>) {
                return pi * sh.eta / (2.0 * sh.gamma * std::sin(pi * sh.eta / 2.0));
            } else {
                const auto m = sampled_time_moments(sh.times, sh.amplitudes);
                return std::sqrt(std::max(m.var, 0.0));
            }
        },
        spec.shape);
}

double frequency_dispersion(const WavepacketSpec& spec) {
    return std::visit(
        [&](const auto& sh) -> double {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, Gaussian>) {
                return 1.0 / (2.0 * sh.sigma_t);
            } else if constexpr (std::is_same_v<T, SmoothedSquare>) {
                const double e = sh.eta;
                // sinh(4/e) = 2 sinh(2/e) cosh(2/e); switch to the e->0
                // asymptote before sinh overflows.
                if (2.0 / e > 300.0) return 1.0 / (2.0 * sh.s * std::sqrt(e));
                const double num = std::sqrt(e * std::sinh(4.0 / e) - 4.0);
                return num / (2.0 * std::sqrt(2.0) * std::sinh(2.0 / e) * e * sh.s);
            } else if constexpr (std::is_same_v<T, SmoothedExponential>) {
                return sh.gamma * std::sqrt((2.0 - sh.eta) / (8.0 * sh.eta));
            } else {
                // Uniform grid required for the finite-difference derivative.
                const auto& ts = sh.times;
                const double h = ts[1] - ts[0];
                for (std::size_t i = 1; i + 1 < ts.size(); ++i)
                    if (std::abs((ts[i + 1] - ts[i]) - h) > 1e-9 * h)
                        throw std::invalid_argument(
                            "frequency_dispersion: sampled profile must be uniform");
                const double full = sampled_freq_variance(ts, sh.amplitudes);
                // Refinement check on the decimated profile.
                std::vector<double> t2;
                std::vector<cplx> a2;
                for (std::size_t i = 0; i < ts.size(); i += 2) {
                    t2.push_back(ts[i]);
                    a2.push_back(sh.amplitudes[i]);
                }
                if (t2.size() >= 8) {
                    const double coarse = sampled_freq_variance(t2, a2);
                    const double tol = 1e-3 * std::max(std::abs(full), 1.0);
                    if (std::abs(full - coarse) > tol)
                        throw DivergentMoment(
                            "frequency_dispersion: spectral moment not converged "
                            "(refinement changed it by " +
                            std::to_string(std::abs(full - coarse)) + ")");
                }
                if (!(full > 0.0) || !std::isfinite(full))
                    throw DivergentMoment("frequency_dispersion: non-finite spectral moment");
                return std::sqrt(full);
            }
        },
        spec.shape);
}

WavepacketMoments moments(const WavepacketSpec& spec) {
    return {time_dispersion(spec), frequency_dispersion(spec)};
}

double mean_time(const WavepacketSpec& spec) {
    if (const auto* g = std::get_if<Gaussian>(&spec.shape)) {
        (void)g;
        return 0.0;
    }
    if (std::holds_alternative<SmoothedSquare>(spec.shape)) return 0.0;
    if (const auto* e = std::get_if<SmoothedExponential>(&spec.shape)) {
        const double z = pi * e->eta / 2.0;
        return (z / e->gamma) * (std::cos(z) / std::sin(z));
    }
    const auto* s = as_sampled(spec);
    return sampled_time_moments(s->times, s->amplitudes).mean;
}

double overlap_p(const WavepacketSpec& spec, double omega_q) {
    if (omega_q < 0.0) throw std::invalid_argument("overlap_p: omega_q must be >= 0");
    if (omega_q == 0.0) return 1.0;
    if (const auto* s = as_sampled(spec)) {
        std::vector<double> vals(s->times.size());
        for (std::size_t i = 0; i < s->times.size(); ++i)
            vals[i] = std::norm(s->amplitudes[i]) *
                      std::cos(omega_q * (s->times[i] + spec.tau));
        return simpson_sampled(s->times, vals);
    }
    auto [lo, hi] = overlap_window(spec);
    return integrate_with_frequency(
        [&](double t) { return density(spec, t) * std::cos(omega_q * (t + spec.tau)); },
        lo, hi, omega_q, 1e-10);
}

cplx shift_overlap(const WavepacketSpec& spec, double omega_q) {
    if (omega_q == 0.0) return 1.0;
    const double re = overlap_p(spec, omega_q);
    double im;
    if (const auto* s = as_sampled(spec)) {
        std::vector<double> vals(s->times.size());
        for (std::size_t i = 0; i < s->times.size(); ++i)
            vals[i] = -std::norm(s->amplitudes[i]) *
                      std::sin(omega_q * (s->times[i] + spec.tau));
        im = simpson_sampled(s->times, vals);
    } else {
        auto [lo, hi] = overlap_window(spec);
        im = integrate_with_frequency(
            [&](double t) {
                return -density(spec, t) * std::sin(omega_q * (t + spec.tau));
            },
            lo, hi, omega_q, 1e-10);
    }
    return {re, im};
}

namespace {

double golden_max(const std::function<double(double)>& f, double a, double b,
                  double tol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

double optimal_tau(const WavepacketSpec& spec, double omega_q) {
    if (!(omega_q > 0.0)) throw std::invalid_argument("optimal_tau: omega_q must be > 0");
    if (std::holds_alternative<Gaussian>(spec.shape)) return 0.0;
    if (std::holds_alternative<SmoothedSquare>(spec.shape)) {
        // Even profile: P(tau) = C cos(omega_q tau); flip by half a period
        // when the shift overlap is negative.
        WavepacketSpec centered = spec;
        centered.tau = 0.0;
        const double c = overlap_p(centered, omega_q);
        return c >= 0.0 ? 0.0 : pi / omega_q;
    }
    // The tau rotation factors out of the overlap integral exactly:
    // P(tau) = Re{ e^{i omega_q tau} C } with C the tau-free shift overlap.
    // One quadrature for C, then a coarse scan over one period and a
    // golden-section bracket around the best cell.
    WavepacketSpec centered = spec;
    centered.tau = 0.0;
    const cplx c = std::conj(shift_overlap(centered, omega_q));
    const auto p_of_tau = [&](double tau) {
        return std::real(std::polar(1.0, omega_q * tau) * c);
    };
    const double period = 2.0 * pi / omega_q;
    constexpr int n_scan = 32;
    int best = 0;
    double best_p = -2.0;
    for (int i = 0; i < n_scan; ++i) {
        const double p = p_of_tau(period * i / n_scan);
        if (p > best_p) {
            best_p = p;
            best = i;
        }
    }
    const double lo = period * (best - 1) / n_scan;
    const double hi = period * (best + 1) / n_scan;
    const double tol = 1e-10 / omega_q; // 1e-10 in omega_q * tau
    double tau_star = golden_max(p_of_tau, lo, hi, tol);
    if (tau_star < 0.0) tau_star += period;
    if (tau_star >= period) tau_star -= period;
    return tau_star;
}

double solve_param_for_dt(ShapeFamily family, double eta, double target_dt) {
    require(target_dt > 0.0, "solve_param_for_dt: target_dt must be positive");
    switch (family) {
        case ShapeFamily::Gaussian:
            return target_dt;
        case ShapeFamily::SmoothedSquare:
            require(eta > 0.0 && eta < 1.0, "solve_param_for_dt: eta must lie in (0, 1)");
            return 2.0 * std::sqrt(3.0) * target_dt / std::sqrt(4.0 + sq(pi * eta));
        case ShapeFamily::SmoothedExponential:
            require(eta > 0.0 && eta < 1.0, "solve_param_for_dt: eta must lie in (0, 1)");
            return pi * eta / (2.0 * target_dt * std::sin(pi * eta / 2.0));
    }
    throw std::invalid_argument("solve_param_for_dt: unknown family");
}

WavepacketSpec spec_for_dt(ShapeFamily family, double eta, double target_dt) {
    const double p = solve_param_for_dt(family, eta, target_dt);
    switch (family) {
        case ShapeFamily::Gaussian:
            return gaussian(p);
        case ShapeFamily::SmoothedSquare:
            return smoothed_square(p, eta);
        case ShapeFamily::SmoothedExponential:
            return smoothed_exponential(p, eta);
    }
    throw std::invalid_argument("spec_for_dt: unknown family");
}

std::pair<double, double> support_interval(const WavepacketSpec& spec, double eps) {
    const double l = std::log(1.0 / eps);
    return std::visit(
        [&](const auto& sh) -> std::pair<double, double> {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, Gaussian>) {
                // |psi|^2 tail ~ exp(-t^2 / 2 sigma^2)
                const double w = sh.sigma_t * std::sqrt(2.0 * l) + 2.0 * sh.sigma_t;
                return {-w, w};
            } else if constexpr (std::is_same_v<T, SmoothedSquare>) {
                // tanh shoulders decay like exp(-2|t -+ s| / (eta s))
                const double w = sh.s * (1.0 + 0.5 * sh.eta * l) + sh.eta * sh.s;
                return {-w, w};
            } else if constexpr (std::is_same_v<T, SmoothedExponential>) {
                // right tail exp(-gamma t); left tail exp(-(2/eta - 1) gamma |t|)
                const double hi = (l + 2.0) / sh.gamma;
                const double lo = -(sh.eta * (l + 2.0)) / ((2.0 - sh.eta) * sh.gamma);
                return {lo, hi};
            } else {
                return {sh.times.front(), sh.times.back()};
            }
        },
        spec.shape);
}

} // namespace qmeter
