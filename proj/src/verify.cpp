#include "qmeter/verify.hpp"
#include <chrono>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "qmeter/bounds.hpp"
#include "qmeter/interferometer.hpp"
#include "qmeter/oracle.hpp"
#include "qmeter/sweep.hpp"

namespace qmeter::verify {

namespace {

constexpr std::array<ShapeFamily, 3> all_families = {
    ShapeFamily::Gaussian, ShapeFamily::SmoothedSquare, ShapeFamily::SmoothedExponential};
constexpr double default_eta = 1.0 / pi;
const double sqrt2 = std::sqrt(2.0);

std::string fmt(double v) { return format_double(v); }

// splitmix64; the audit streams must be bit-stable across platforms.
std::uint64_t next_u64(std::uint64_t& state) {
    state += 0x9E3779B97f4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

QubitState random_state(std::uint64_t& state) {
    // Haar on the Bloch sphere via two Box-Muller pairs.
    auto gauss = [&](double& a, double& b) {
        const double u1 = std::max(uniform01(state), 1e-300);
        const double u2 = uniform01(state);
        const double r = std::sqrt(-2.0 * std::log(u1));
        a = r * std::cos(2.0 * pi * u2);
        b = r * std::sin(2.0 * pi * u2);
    };
    double x1, y1, x2, y2;
    gauss(x1, y1);
    gauss(x2, y2);
    return QubitState::normalized({x1, y1}, {x2, y2});
}

CheckResult check_sqrt2_asymptote() {
    double worst = 0.0;
    std::ostringstream detail;
    for (const auto family : all_families) {
        const auto p = evaluate_point(family, 50.0, default_eta, pi / 2.0);
        const double dev = std::abs(p.ratio / sqrt2 - 1.0);
        worst = std::max(worst, dev);
        detail << p.shape << "=" << fmt(p.ratio) << " ";
    }
    return {1, "sqrt2 asymptote at wq_dt=50", worst <= 0.02, worst, 0.02, detail.str()};
}

CheckResult check_gaussian_saturation() {
    const auto g = evaluate_point(ShapeFamily::Gaussian, 0.01, default_eta, pi / 2.0);
    const auto s = evaluate_point(ShapeFamily::SmoothedSquare, 0.01, default_eta, pi / 2.0);
    const auto e = evaluate_point(ShapeFamily::SmoothedExponential, 0.01, default_eta, pi / 2.0);
    const double gdev = std::abs(g.ratio - 1.0);
    const bool pass = gdev <= 0.01 && s.ratio > 1.05 && e.ratio > 1.05;
    std::ostringstream detail;
    detail << "gaussian=" << fmt(g.ratio) << " square=" << fmt(s.ratio)
           << " exponential=" << fmt(e.ratio);
    return {2, "gaussian saturation at wq_dt=0.01", pass, gdev, 0.01, detail.str()};
}

CheckResult check_exponential_penalty() {
    const auto e = evaluate_point(ShapeFamily::SmoothedExponential, 0.01, default_eta, pi / 2.0);
    const bool pass = e.ratio >= 1.66 && e.ratio <= 1.73;
    return {3, "exponential ratio in [1.66, 1.73] at wq_dt=0.01", pass, e.ratio, 1.73,
            "ratio=" + fmt(e.ratio)};
}

CheckResult check_uncertainty_mapping() {
    double worst = 0.0;
    for (const auto family : all_families) {
        for (const double x : {0.01, 0.025, 0.05}) {
            const auto p = evaluate_point(family, x, default_eta, pi / 2.0);
            const double rel = std::abs(2.0 * p.dw_dt_product - p.ratio) / p.ratio;
            worst = std::max(worst, rel);
        }
    }
    return {4, "2*dw*dt tracks ratio for wq_dt<=0.05", worst <= 0.02, worst, 0.02, ""};
}

CheckResult check_oracle_equivalence(const VerifyOptions& options) {
    const MeasurementConfig config(pi / 3.0, pi, 1.0);
    struct Point {
        ShapeFamily family;
        double x;
    };
    std::vector<Point> pts;
    for (const auto family : all_families)
        for (const double x : {0.05, 0.3, 1.0, 5.0}) pts.push_back({family, x});
    std::vector<double> devs(pts.size());
    parallel_for(pts.size(), options.jobs, [&](std::size_t i) {
        WavepacketSpec spec = spec_for_dt(pts[i].family, default_eta, pts[i].x);
        spec.tau = optimal_tau(spec, config.omega_q);
        const double p = overlap_p(spec, config.omega_q);
        const double analytic = readout_error(config, p);
        const auto grid = oracle::make_grid(spec, options.grid_points);
        const double numeric = std::sqrt(oracle::measure_error_squared(config, spec, grid));
        devs[i] = std::abs(numeric - analytic) / analytic;
    });
    const double worst = *std::max_element(devs.begin(), devs.end());
    return {5, "grid oracle matches analytic error (12-point matrix)", worst <= 1e-6, worst,
            1e-6, ""};
}

CheckResult check_bound_audit(const VerifyOptions& options) {
    const int n = 10000;
    std::uint64_t rng = options.seed * 0x9E3779B97F4A7C15ull + 0x853C49E6748FEA9Bull;
    int violations = 0;
    double min_margin = 1e300;
    // Pre-draw the tuples so the stream is independent of evaluation order.
    struct Tuple {
        QubitState state;
        double theta, x;
        ShapeFamily family;
    };
    std::vector<Tuple> tuples;
    tuples.reserve(n);
    for (int i = 0; i < n; ++i) {
        const QubitState st = random_state(rng);
        const double theta = uniform01(rng) * pi / 2.0;
        const double x = std::exp(std::log(0.01) + uniform01(rng) * std::log(100.0 / 0.01));
        const auto family = all_families[next_u64(rng) % 3];
        tuples.push_back({st, theta, x, family});
    }
    std::vector<double> margins(tuples.size());
    parallel_for(tuples.size(), options.jobs, [&](std::size_t i) {
        const auto& tp = tuples[i];
        WavepacketSpec spec = spec_for_dt(tp.family, default_eta, tp.x);
        spec.tau = optimal_tau(spec, 1.0);
        const double p = overlap_p(spec, 1.0);
        const MeasurementConfig config(tp.theta, pi, 1.0);
        const double eps = readout_error(tp.state, config, p);
        const double bound =
            ozawa_bound_state(tp.state, BoundInput(tp.theta, frequency_dispersion(spec)));
        margins[i] = eps - bound;
    });
    for (const double m : margins) {
        min_margin = std::min(min_margin, m);
        if (m < -1e-12) ++violations;
    }
    return {6, "bound inequality audit (10^4 random tuples)", violations == 0,
            static_cast<double>(violations), 0.0, "min margin " + fmt(min_margin)};
}

CheckResult check_state_independence(const VerifyOptions& options) {
    const MeasurementConfig config(1.1, 2.3, 1.0);
    WavepacketSpec spec = gaussian(0.7);
    const auto grid = oracle::make_grid(spec, options.grid_points);
    std::uint64_t rng = options.seed * 0xD1342543DE82EF95ull + 0x2545F4914F6CDD1Dull;
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < 20; ++i) {
        const QubitState st = random_state(rng);
        const auto cz = st.to_z_basis(config.theta);
        const double e2 =
            oracle::measure_error_squared(config, spec, grid, cz[0], cz[1]);
        lo = std::min(lo, e2);
        hi = std::max(hi, e2);
    }
    const double spread = hi - lo;
    return {7, "oracle eps^2 state-independence (20 random states)", spread <= 1e-8, spread,
            1e-8, "eps^2=" + fmt(0.5 * (lo + hi))};
}

CheckResult check_delta_limit(const VerifyOptions& options) {
    const MeasurementConfig config(pi / 3.0, pi / 2.0, 1.0);
    WavepacketSpec spec = gaussian(1.0);
    const auto grid = oracle::make_grid(spec, options.grid_points);
    const QubitState st = QubitState::from_z_basis(1.0, 0.0, config.theta);
    const auto reference = oracle::evolve_delta(st, spec, config, grid);
    const double l1 = 1e-3; // L * omega_q
    const auto d1 = oracle::distance_l2(
        grid, reference,
        oracle::evolve_finite_width(st, spec, config, grid, oracle::InteractionProfile::box(l1)));
    const auto d2 = oracle::distance_l2(
        grid, reference,
        oracle::evolve_finite_width(st, spec, config, grid,
                                    oracle::InteractionProfile::box(0.5 * l1)));
    const double ratio = d2 / d1;
    const bool pass = d1 <= 1e-3 && ratio >= 0.4 && ratio <= 0.6;
    return {8, "delta-limit convergence of the finite-width oracle", pass, d1, 1e-3,
            "distance=" + fmt(d1) + " halving ratio=" + fmt(ratio)};
}

CheckResult check_phi_optimality() {
    double worst = 0.0;
    for (const double theta : {0.1, 0.7, pi / 2.0}) {
        for (const double p : {0.0, 0.5, 0.99}) {
            const double best = readout_error(MeasurementConfig(theta, pi, 1.0), p);
            for (int i = 0; i < 721; ++i) {
                const double phi = 2.0 * pi * i / 720.0;
                const double e = readout_error(MeasurementConfig(theta, phi, 1.0), p);
                worst = std::max(worst, best - e);
            }
        }
    }
    return {9, "phi = pi minimizes readout error (721-point grid)", worst <= 1e-12, worst,
            1e-12, ""};
}

CheckResult check_moment_closed_forms() {
    // Closed forms vs numeric moments of densely sampled profiles.
    double worst = 0.0;
    const int n = (1 << 16) + 1;
    for (const auto family : all_families) {
        const WavepacketSpec spec = spec_for_dt(family, default_eta, 1.0);
        auto [lo, hi] = support_interval(spec, 1e-15);
        std::vector<double> ts(n);
        std::vector<cplx> amps(n);
        for (int i = 0; i < n; ++i) {
            ts[i] = lo + (hi - lo) * i / (n - 1);
            amps[i] = amplitude(spec, ts[i]);
        }
        const WavepacketSpec num = sampled(std::move(ts), std::move(amps));
        worst = std::max(worst, std::abs(time_dispersion(num) / time_dispersion(spec) - 1.0));
        worst = std::max(worst,
                         std::abs(frequency_dispersion(num) / frequency_dispersion(spec) - 1.0));
    }
    // Uncertainty floor across shapes and parameters; Gaussian sits on it.
    double floor_margin = 1e300;
    double gauss_dev = 0.0;
    for (const auto family : all_families) {
        for (const double eta : {0.05, default_eta, 0.5, 0.9}) {
            for (const double dt : {0.03, 1.0, 40.0}) {
                const auto m = moments(spec_for_dt(family, eta, dt));
                const double prod = uncertainty_product(m);
                floor_margin = std::min(floor_margin, prod - 0.5);
                if (family == ShapeFamily::Gaussian)
                    gauss_dev = std::max(gauss_dev, std::abs(prod - 0.5));
            }
        }
    }
    const bool pass = worst <= 1e-6 && floor_margin >= -1e-9 && gauss_dev <= 1e-9;
    return {10, "dispersion closed forms and uncertainty floor", pass, worst, 1e-6,
            "floor margin " + fmt(floor_margin)};
}

} // namespace

double uniform01(std::uint64_t& state) {
    return static_cast<double>(next_u64(state) >> 11) * 0x1.0p-53;
}

std::vector<CheckResult> run_acceptance(const VerifyOptions& options) {
    // A check that throws is reported as failed, with the message, and the
    // remaining criteria still run.
    auto guarded = [](int id, const std::string& name, auto&& fn) -> CheckResult {
        const auto t0 = std::chrono::steady_clock::now();
        CheckResult r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r = {id, name, false, std::nan(""), 0.0, std::string("exception: ") + e.what(), 0.0};
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return r;
    };
    std::vector<CheckResult> results;
    results.push_back(guarded(1, "sqrt2 asymptote", [] { return check_sqrt2_asymptote(); }));
    results.push_back(
        guarded(2, "gaussian saturation", [] { return check_gaussian_saturation(); }));
    results.push_back(
        guarded(3, "exponential penalty", [] { return check_exponential_penalty(); }));
    results.push_back(
        guarded(4, "uncertainty mapping", [] { return check_uncertainty_mapping(); }));
    results.push_back(guarded(5, "oracle equivalence",
                              [&] { return check_oracle_equivalence(options); }));
    results.push_back(guarded(6, "bound audit", [&] { return check_bound_audit(options); }));
    results.push_back(guarded(7, "state independence",
                              [&] { return check_state_independence(options); }));
    results.push_back(guarded(8, "delta limit", [&] { return check_delta_limit(options); }));
    results.push_back(guarded(9, "phi optimality", [] { return check_phi_optimality(); }));
    results.push_back(
        guarded(10, "moment closed forms", [] { return check_moment_closed_forms(); }));
    return results;
}

} // namespace qmeter::verify
