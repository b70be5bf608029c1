#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "qmeter/interferometer.hpp"
#include "qmeter/oracle.hpp"
#include "qmeter/verify.hpp"

using namespace qmeter;
using namespace qmeter::oracle;

namespace {

QubitState random_state(std::uint64_t& rng) {
    const double a = verify::uniform01(rng) * 2.0 * pi;
    const double b = verify::uniform01(rng) * 2.0 * pi;
    const double w = verify::uniform01(rng);
    return QubitState::normalized(std::polar(std::sqrt(w), a),
                                  std::polar(std::sqrt(1.0 - w), b));
}

constexpr int test_points = 1 << 13;

} // namespace

TEST_CASE("delta evolution: commuting case is a pure phase") {
    const auto spec = gaussian(1.0);
    const auto grid = make_grid(spec, test_points);
    const auto gz = QubitState::from_z_basis(1.0, 0.0, 0.0);
    // phi = 0 leaves the input untouched, giving the sampled packet itself.
    const auto input = evolve_delta(gz, spec, MeasurementConfig(0.0, 0.0, 1.0), grid);
    const auto kicked = evolve_delta(gz, spec, MeasurementConfig(0.0, pi, 1.0), grid);
    for (int i = 0; i < grid.n_points; i += 97) {
        CHECK(std::abs(kicked.at(i, QubitLevel::gTheta, 0) -
                       cplx(0.0, 1.0) * input.at(i, QubitLevel::gTheta, 0)) < 1e-14);
        CHECK(std::abs(kicked.at(i, QubitLevel::eTheta, 0)) < 1e-14);
    }
    CHECK(norm(grid, kicked) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("delta evolution projects onto the scattering branches") {
    const MeasurementConfig config(pi / 4.0, pi / 2.0, 1.0);
    const auto spec = gaussian(1.0); // omega_q sigma_t = 1
    const auto grid = make_grid(spec, 1 << 14);
    std::uint64_t rng = 13;
    for (int trial = 0; trial < 5; ++trial) {
        const auto st = trial == 0 ? QubitState::normalized(1.0, 1.0) : random_state(rng);
        const auto out = evolve_delta(st, spec, config, grid);
        const auto projected = project_onto_branches(out, spec, config, grid);
        const auto branches = scatter(st, config);
        for (int k = 0; k < 4; ++k)
            CHECK(std::abs(projected[k] - branches[k].amplitude) < 1e-8);
    }
}

TEST_CASE("grid window validation") {
    const auto spec = gaussian(1.0);
    const Grid clipped(-2.0, 2.0, 1024); // clips far more than 1e-8 of the norm
    CHECK_THROWS_AS(
        evolve_delta(QubitState(1.0, 0.0), spec, MeasurementConfig(0.3, pi, 1.0), clipped),
        WindowTooSmall);
    CHECK_THROWS_AS(Grid(1.0, 1.0, 128), std::invalid_argument);
    CHECK_THROWS_AS(Grid(-1.0, 1.0, 1), std::invalid_argument);
    // The automatic window covers the launched packet even at large tau.
    const auto offset = smoothed_exponential(0.5, 1.0 / pi, 5.0);
    const auto grid = make_grid(offset, test_points);
    CHECK_NOTHROW(evolve_delta(QubitState(1.0, 0.0), offset, MeasurementConfig(0.3, pi, 1.0),
                               grid));
}

TEST_CASE("finite-width evolution: identity and delta limit") {
    const auto spec = gaussian(1.0);
    const auto grid = make_grid(spec, test_points);
    const auto st = QubitState::from_z_basis(1.0, 0.0, pi / 3.0);

    // phi = 0: no interaction regardless of the profile.
    {
        const MeasurementConfig config(pi / 3.0, 0.0, 1.0);
        const auto finite =
            evolve_finite_width(st, spec, config, grid, InteractionProfile::box(0.1));
        const auto reference = evolve_delta(st, spec, config, grid);
        CHECK(distance_l2(grid, finite, reference) < 1e-12);
    }

    const MeasurementConfig config(pi / 3.0, pi / 2.0, 1.0);
    const auto reference = evolve_delta(st, spec, config, grid);

    // Narrow box: first-order convergence in L * omega_q.
    const double l1 = 1e-3;
    const auto d1 = distance_l2(
        grid, reference,
        evolve_finite_width(st, spec, config, grid, InteractionProfile::box(l1)));
    const auto d2 = distance_l2(
        grid, reference,
        evolve_finite_width(st, spec, config, grid, InteractionProfile::box(0.5 * l1)));
    CHECK(d1 < 1e-3);
    CHECK(d2 / d1 == doctest::Approx(0.5).epsilon(0.2));

    // The smoothed box converges the same way.
    const auto ds = distance_l2(
        grid, reference,
        evolve_finite_width(st, spec, config, grid,
                            InteractionProfile::smoothed_box(l1, 0.25)));
    CHECK(ds < 5e-3);
    CHECK(norm(grid, reference) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("finite-width evolution rejects unresolved steps") {
    const auto spec = gaussian(1.0);
    const auto grid = make_grid(spec, 1 << 10);
    const auto st = QubitState::from_z_basis(1.0, 0.0, 0.4);
    const MeasurementConfig config(0.4, pi, 1.0);
    CHECK_THROWS_AS(evolve_finite_width(st, spec, config, grid,
                                        InteractionProfile::box(0.2), 4),
                    std::invalid_argument);
    CHECK_THROWS_AS(InteractionProfile::box(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(evolve_finite_width(st, spec, config, grid, InteractionProfile::delta()),
                    std::invalid_argument);
}

TEST_CASE("interferometer pipeline probabilities") {
    const auto spec = gaussian(1.0);
    const auto grid = make_grid(spec, 1 << 14);

    // Projective case: g_z is announced by the arm-B detector with certainty.
    {
        const auto p = run_interferometer(QubitState::from_z_basis(1.0, 0.0, 0.0), spec,
                                          MeasurementConfig(0.0, pi, 1.0), grid);
        CHECK(p.p_a == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(p.p_b == doctest::Approx(1.0).epsilon(1e-9));
    }
    // No interaction: balanced interferometer.
    {
        std::uint64_t rng = 19;
        const auto p = run_interferometer(random_state(rng), spec,
                                          MeasurementConfig(0.9, 0.0, 1.0), grid);
        CHECK(p.p_a == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(p.p_b == doctest::Approx(0.5).epsilon(1e-9));
    }
    // Tilted case matches the analytic pointer expectation at P = e^{-1/2}.
    {
        const MeasurementConfig config(pi / 2.0, pi, 1.0);
        const auto p = run_interferometer(QubitState::from_z_basis(1.0, 0.0, pi / 2.0), spec,
                                          config, grid);
        const double expected = pointer_expectations(config, 0.6065306597126334).first;
        CHECK(p.p_a == doctest::Approx(expected).epsilon(1e-8));
        CHECK(p.p_a + p.p_b == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("oracle error squared matches the closed form") {
    {
        const auto spec = gaussian(1.0);
        const auto grid = make_grid(spec, 1 << 14);
        CHECK(measure_error_squared(MeasurementConfig(0.0, pi, 1.0), spec, grid) ==
              doctest::Approx(0.0).epsilon(1e-9));
        CHECK(measure_error_squared(MeasurementConfig(pi / 2.0, pi, 1.0), spec, grid) ==
              doctest::Approx(0.7869386805747332).epsilon(1e-6));
    }
    // 25-point (theta, phi) matrix at omega_q sigma_t = 0.3.
    const auto spec = gaussian(0.3);
    const auto grid = make_grid(spec, 1 << 14);
    const double p = overlap_p(spec, 1.0);
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const double theta = (pi / 2.0) * (i + 1) / 5.0;
            const double phi = 2.0 * pi * (j + 0.5) / 5.0;
            const MeasurementConfig config(theta, phi, 1.0);
            const double analytic = readout_error(config, p);
            const double numeric = std::sqrt(measure_error_squared(config, spec, grid));
            CHECK(numeric == doctest::Approx(analytic).epsilon(1e-6));
        }
    }
}

TEST_CASE("oracle error for explicit input states is state-independent") {
    const auto spec = smoothed_square(1.0, 1.0 / pi);
    const auto grid = make_grid(spec, 1 << 13);
    const MeasurementConfig config(1.2, 2.0, 1.0);
    std::uint64_t rng = 29;
    const double reference = measure_error_squared(config, spec, grid);
    for (int i = 0; i < 10; ++i) {
        const auto st = random_state(rng);
        const auto z = st.to_z_basis(config.theta);
        CHECK(measure_error_squared(config, spec, grid, z[0], z[1]) ==
              doctest::Approx(reference).epsilon(1e-10));
    }
}

TEST_CASE("tau-shifted exponential packet agrees with the analytic error") {
    // Exercises the launch-offset convention through the full pipeline.
    WavepacketSpec spec = spec_for_dt(ShapeFamily::SmoothedExponential, 1.0 / pi, 0.7);
    spec.tau = optimal_tau(spec, 1.0);
    const auto grid = make_grid(spec, 1 << 14);
    const MeasurementConfig config(1.0, pi, 1.0);
    const double analytic = readout_error(config, overlap_p(spec, 1.0));
    const double numeric = std::sqrt(measure_error_squared(config, spec, grid));
    CHECK(numeric == doctest::Approx(analytic).epsilon(1e-8));
}

TEST_CASE("density dump emits normalized columns") {
    const auto spec = gaussian(1.0);
    const auto grid = make_grid(spec, 1 << 10);
    const auto st = pipeline_final_state(QubitState::from_z_basis(1.0, 0.0, 0.7), spec,
                                         MeasurementConfig(0.7, pi, 1.0), grid);
    const std::string path = "oracle_density_test.csv";
    write_density_csv(st, grid, path);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,density_g_a,density_e_a,density_g_b,density_e_b,density_total");
    int rows = 0;
    double total = 0.0, prev_t = 0.0, prev_d = 0.0;
    std::string line;
    while (std::getline(in, line)) {
        double t, ga, ea, gb, eb, d;
        REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &t, &ga, &ea, &gb, &eb,
                            &d) == 6);
        if (rows > 0) total += 0.5 * (t - prev_t) * (d + prev_d);
        prev_t = t;
        prev_d = d;
        ++rows;
    }
    CHECK(rows == grid.n_points);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
    std::remove(path.c_str());
}
