#include "qmeter/sweep.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <functional>
#include <mutex>
#include <thread>

#include "qmeter/bounds.hpp"
#include "qmeter/interferometer.hpp"

namespace qmeter {

std::string family_name(ShapeFamily family) {
    switch (family) {
        case ShapeFamily::Gaussian: return "gaussian";
        case ShapeFamily::SmoothedSquare: return "square";
        case ShapeFamily::SmoothedExponential: return "exponential";
    }
    return "unknown";
}

std::optional<ShapeFamily> parse_family(const std::string& name) {
    if (name == "gaussian" || name == "gauss") return ShapeFamily::Gaussian;
    if (name == "square" || name == "sq") return ShapeFamily::SmoothedSquare;
    if (name == "exponential" || name == "exp") return ShapeFamily::SmoothedExponential;
    return std::nullopt;
}

std::vector<double> log_grid(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("log_grid: need 0 < lo < hi");
    if (count < 2) throw std::invalid_argument("log_grid: need at least 2 points");
    std::vector<double> g(count);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < count; ++i)
        g[i] = std::exp(llo + (lhi - llo) * i / (count - 1));
    g.front() = lo;
    g.back() = hi;
    return g;
}

SweepPoint evaluate_point(ShapeFamily family, double wq_dt, double eta, double theta) {
    // omega_q = 1 in natural units; wq_dt fixes the time dispersion.
    const double omega_q = 1.0;
    WavepacketSpec spec = spec_for_dt(family, eta, wq_dt);
    spec.tau = optimal_tau(spec, omega_q);
    const double p = overlap_p(spec, omega_q);
    const auto m = moments(spec);
    const double eps = optimal_error(theta, p);
    const double eps_b = ozawa_bound_max(BoundInput(theta, m.delta_omega / omega_q));
    const double ratio = error_bound_ratio(theta, m, p, omega_q);
    return {family_name(family), wq_dt, eps, eps_b, ratio,
            uncertainty_product(m), p, spec.tau};
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points) {
    out << "shape,wq_dt,epsilon,epsilon_b,ratio,dw_dt_product,p_overlap,tau_star\n";
    for (const auto& p : points) {
        out << p.shape << ',' << format_double(p.wq_dt) << ',' << format_double(p.epsilon)
            << ',' << format_double(p.epsilon_b) << ',' << format_double(p.ratio) << ','
            << format_double(p.dw_dt_product) << ',' << format_double(p.p_overlap) << ','
            << format_double(p.tau_star) << '\n';
    }
}

void write_sweep_jsonl(std::ostream& out, const std::vector<SweepPoint>& points) {
    for (const auto& p : points) {
        out << "{\"shape\":\"" << p.shape << "\",\"wq_dt\":" << format_double(p.wq_dt)
            << ",\"epsilon\":" << format_double(p.epsilon)
            << ",\"epsilon_b\":" << format_double(p.epsilon_b)
            << ",\"ratio\":" << format_double(p.ratio)
            << ",\"dw_dt_product\":" << format_double(p.dw_dt_product)
            << ",\"p_overlap\":" << format_double(p.p_overlap)
            << ",\"tau_star\":" << format_double(p.tau_star) << "}\n";
    }
}

ShapeSamples sample_density(ShapeFamily family, double eta, double wq_dt, int n_samples) {
    if (n_samples < 2) throw std::invalid_argument("sample_density: need >= 2 samples");
    const WavepacketSpec spec = spec_for_dt(family, eta, wq_dt);
    const double mean = mean_time(spec);
    auto [lo, hi] = support_interval(spec, 1e-12);
    lo -= mean;
    hi -= mean;
    ShapeSamples s;
    s.shape = family_name(family);
    s.t.resize(n_samples);
    s.density.resize(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double t = lo + (hi - lo) * i / (n_samples - 1);
        s.t[i] = t;
        s.density[i] = std::norm(amplitude(spec, t + mean));
    }
    return s;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    unsigned workers = jobs > 0 ? static_cast<unsigned>(jobs)
                                : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<std::size_t>(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace qmeter
