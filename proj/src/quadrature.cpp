#include "qmeter/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cstdio>
#include <algorithm>
#include <cmath>

namespace qmeter {

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
    if (!(b > a)) return 0.0;
    using rule = boost::math::quadrature::gauss_kronrod<double, 31>;
    double error = 0.0;
    // The boost tolerance is relative to the L1 norm; terminate tight and
    // check the absolute estimate ourselves.
    const double value = rule::integrate(f, a, b, 15, 1e-13, &error);
    if (!(error <= abs_tol) && !(std::abs(error) <= abs_tol * std::max(1.0, std::abs(value)))) {
        char msg[128];
        std::snprintf(msg, sizeof msg,
                      "quadrature did not reach requested tolerance (estimate %.3e, tol %.3e)",
                      error, abs_tol);
        throw NumericError(msg);
    }
    return value;
}

double integrate_with_frequency(const std::function<double(double)>& f, double a, double b,
                                double omega, double abs_tol) {
    if (!(b > a)) return 0.0;
    const double span = b - a;
    const double by_period = omega > 0.0 ? span * omega / pi : 0.0;
    const auto n = static_cast<std::size_t>(
        std::clamp(std::max(64.0, std::ceil(by_period)), 64.0, 2.0e5));
    using panel = boost::math::quadrature::gauss_kronrod<double, 15>;
    double total = 0.0, err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = a + span * static_cast<double>(i) / static_cast<double>(n);
        const double hi = a + span * static_cast<double>(i + 1) / static_cast<double>(n);
        double e = 0.0;
        total += panel::integrate(f, lo, hi, 0, 0.0, &e);
        err += e;
    }
    if (err <= abs_tol) return total;
    return integrate(f, a, b, abs_tol);
}

double simpson_uniform(std::span<const double> values, double spacing) {
    const std::size_t n = values.size();
    if (n < 2) return 0.0;
    if (n == 2) return 0.5 * spacing * (values[0] + values[1]);
    double sum = 0.0;
    std::size_t last = (n % 2 == 1) ? n - 1 : n - 2; // last even-panel endpoint
    for (std::size_t i = 0; i + 2 <= last; i += 2)
        sum += spacing / 3.0 * (values[i] + 4.0 * values[i + 1] + values[i + 2]);
    if (n % 2 == 0) sum += 0.5 * spacing * (values[n - 2] + values[n - 1]);
    return sum;
}

double simpson_sampled(std::span<const double> t, std::span<const double> values) {
    const std::size_t n = t.size();
    if (n != values.size()) throw std::invalid_argument("simpson_sampled: size mismatch");
    if (n < 2) return 0.0;
    double sum = 0.0;
    std::size_t i = 0;
    // Quadratic panels over consecutive point triples, trapezoid for a leftover pair.
    while (i + 2 < n) {
        const double h0 = t[i + 1] - t[i];
        const double h1 = t[i + 2] - t[i + 1];
        const double h = h0 + h1;
        sum += (h / 6.0) * ((2.0 - h1 / h0) * values[i] +
                            (h * h / (h0 * h1)) * values[i + 1] +
                            (2.0 - h0 / h1) * values[i + 2]);
        i += 2;
    }
    if (i + 1 < n) sum += 0.5 * (t[i + 1] - t[i]) * (values[i] + values[i + 1]);
    return sum;
}

double trapezoid_sampled(std::span<const double> t, std::span<const double> values) {
    const std::size_t n = t.size();
    if (n != values.size()) throw std::invalid_argument("trapezoid_sampled: size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i)
        sum += 0.5 * (t[i + 1] - t[i]) * (values[i] + values[i + 1]);
    return sum;
}

std::vector<cplx> derivative_uniform(std::span<const cplx> values, double spacing) {
    const std::size_t n = values.size();
    std::vector<cplx> d(n);
    if (n < 5) throw std::invalid_argument("derivative_uniform: need at least 5 samples");
    const double inv12h = 1.0 / (12.0 * spacing);
    for (std::size_t i = 2; i + 2 < n; ++i)
        d[i] = (values[i - 2] - 8.0 * values[i - 1] + 8.0 * values[i + 1] - values[i + 2]) * inv12h;
    const double inv2h = 1.0 / (2.0 * spacing);
    d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) * inv2h;
    d[1] = (values[2] - values[0]) * inv2h;
    d[n - 2] = (values[n - 1] - values[n - 3]) * inv2h;
    d[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) * inv2h;
    return d;
}

} // namespace qmeter
