#include <doctest.h>

#include <atomic>
#include <cmath>
#include <sstream>

#include "qmeter/sweep.hpp"

using namespace qmeter;

TEST_CASE("log grid endpoints and spacing") {
    const auto g = log_grid(0.01, 100.0, 61);
    CHECK(g.size() == 61);
    CHECK(g.front() == 0.01);
    CHECK(g.back() == 100.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double expected =
            std::exp(std::log(0.01) + (std::log(100.0) - std::log(0.01)) * i / 60.0);
        CHECK(g[i] == doctest::Approx(expected).epsilon(1e-15));
    }
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(log_grid(1.0, 0.5, 10), std::invalid_argument);
    CHECK_THROWS_AS(log_grid(0.1, 1.0, 1), std::invalid_argument);
}

TEST_CASE("shape names round-trip") {
    for (const auto family : {ShapeFamily::Gaussian, ShapeFamily::SmoothedSquare,
                              ShapeFamily::SmoothedExponential})
        CHECK(parse_family(family_name(family)) == family);
    CHECK(!parse_family("triangle"));
}

TEST_CASE("sweep point landmarks") {
    const auto g = evaluate_point(ShapeFamily::Gaussian, 0.01, 1.0 / pi, pi / 2.0);
    CHECK(g.ratio > 0.99);
    CHECK(g.ratio < 1.01);
    CHECK(g.tau_star == 0.0);
    CHECK(g.dw_dt_product == doctest::Approx(0.5).epsilon(1e-12));

    const auto e = evaluate_point(ShapeFamily::SmoothedExponential, 0.01, 1.0 / pi, pi / 2.0);
    CHECK(e.ratio > 1.66);
    CHECK(e.ratio < 1.73);

    for (const auto family : {ShapeFamily::Gaussian, ShapeFamily::SmoothedSquare,
                              ShapeFamily::SmoothedExponential}) {
        const auto p = evaluate_point(family, 50.0, 1.0 / pi, pi / 2.0);
        CHECK(p.ratio > 1.386);
        CHECK(p.ratio < 1.443);
        CHECK(p.ratio == doctest::Approx(p.epsilon / p.epsilon_b).epsilon(1e-12));
    }
}

TEST_CASE("float formatting is shortest round-trip") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-2.5e-300) == "-2.5e-300");
    for (const double v : {0.6065306597126334, 3.141592653589793, 1e200}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("sweep writers are deterministic and ordered") {
    std::vector<SweepPoint> points;
    const auto xs = log_grid(0.1, 10.0, 5);
    for (const auto family : {ShapeFamily::Gaussian, ShapeFamily::SmoothedExponential})
        for (const double x : xs)
            points.push_back(evaluate_point(family, x, 1.0 / pi, pi / 2.0));

    std::ostringstream a, b;
    write_sweep_csv(a, points);
    write_sweep_csv(b, points);
    CHECK(a.str() == b.str());
    CHECK(a.str().substr(0, a.str().find('\n')) ==
          "shape,wq_dt,epsilon,epsilon_b,ratio,dw_dt_product,p_overlap,tau_star");

    std::ostringstream j;
    write_sweep_jsonl(j, points);
    std::string first_line = j.str().substr(0, j.str().find('\n'));
    CHECK(first_line.find("\"shape\":\"gaussian\"") != std::string::npos);
    CHECK(first_line.find("\"wq_dt\":0.1") != std::string::npos);
}

TEST_CASE("parallel evaluation is order-independent") {
    const auto xs = log_grid(0.05, 5.0, 9);
    std::vector<SweepPoint> serial(xs.size()), threaded(xs.size());
    parallel_for(xs.size(), 1, [&](std::size_t i) {
        serial[i] = evaluate_point(ShapeFamily::SmoothedExponential, xs[i], 1.0 / pi, 1.0);
    });
    parallel_for(xs.size(), 4, [&](std::size_t i) {
        threaded[i] = evaluate_point(ShapeFamily::SmoothedExponential, xs[i], 1.0 / pi, 1.0);
    });
    std::ostringstream a, b;
    write_sweep_csv(a, serial);
    write_sweep_csv(b, threaded);
    CHECK(a.str() == b.str());
}

TEST_CASE("parallel_for propagates exceptions and covers the range") {
    std::atomic<int> hits{0};
    parallel_for(100, 3, [&](std::size_t) { ++hits; });
    CHECK(hits == 100);
    CHECK_THROWS_AS(parallel_for(10, 2,
                                 [&](std::size_t i) {
                                     if (i == 7) throw std::runtime_error("boom");
                                 }),
                    std::runtime_error);
}

TEST_CASE("density samples: normalization, centering, peak") {
    const auto g = sample_density(ShapeFamily::Gaussian, 1.0 / pi, 1.0);
    // Peak of the unit-dispersion gaussian density.
    double peak = 0.0;
    for (const double d : g.density) peak = std::max(peak, d);
    CHECK(peak == doctest::Approx(0.3989422804014327).epsilon(1e-6));

    for (const auto family : {ShapeFamily::Gaussian, ShapeFamily::SmoothedSquare,
                              ShapeFamily::SmoothedExponential}) {
        const auto s = sample_density(family, 1.0 / pi, 1.0);
        CHECK(s.t.size() == 2048);
        double total = 0.0, mean = 0.0;
        for (std::size_t i = 0; i + 1 < s.t.size(); ++i) {
            const double h = s.t[i + 1] - s.t[i];
            total += 0.5 * h * (s.density[i] + s.density[i + 1]);
            mean += 0.5 * h * (s.t[i] * s.density[i] + s.t[i + 1] * s.density[i + 1]);
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
        // Recentering pins the mean to zero; exactly so for the even profiles.
        if (family == ShapeFamily::SmoothedSquare)
            CHECK(std::abs(mean) < 1e-9);
        else
            CHECK(std::abs(mean) < 1e-4);
    }
}
