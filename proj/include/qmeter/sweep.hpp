#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qmeter/types.hpp"
#include "qmeter/wavepacket.hpp"

namespace qmeter {

/// One record of the error-vs-bound curve at a given shape and omega_q*dt.
struct SweepPoint {
    std::string shape;
    double wq_dt;
    double epsilon;       // readout error at phi = pi
    double epsilon_b;     // maximized conservation-law bound
    double ratio;         // epsilon / epsilon_b
    double dw_dt_product; // delta_omega * delta_t
    double p_overlap;     // P at the maximizing launch offset
    double tau_star;
};

std::string family_name(ShapeFamily family);
std::optional<ShapeFamily> parse_family(const std::string& name);

/// Logarithmically spaced grid over [lo, hi] with count >= 2 points.
std::vector<double> log_grid(double lo, double hi, int count);

/// Evaluate one sweep point at phi = pi: invert dt to the shape parameter,
/// maximize P over the launch offset, evaluate error, bound and ratio.
SweepPoint evaluate_point(ShapeFamily family, double wq_dt, double eta, double theta);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points);
void write_sweep_jsonl(std::ostream& out, const std::vector<SweepPoint>& points);

/// |psi|^2 samples of a shape at omega_q*dt, recentered to zero mean time.
struct ShapeSamples {
    std::string shape;
    std::vector<double> t;
    std::vector<double> density;
};

ShapeSamples sample_density(ShapeFamily family, double eta, double wq_dt,
                            int n_samples = 2048);

/// Run fn(0..n-1) on up to jobs threads (jobs <= 0: hardware concurrency).
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

} // namespace qmeter
