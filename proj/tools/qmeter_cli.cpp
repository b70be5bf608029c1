#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "qmeter/bounds.hpp"
#include "qmeter/interferometer.hpp"
#include "qmeter/oracle.hpp"
#include "qmeter/sweep.hpp"
#include "qmeter/verify.hpp"

namespace {

using namespace qmeter;

constexpr int exit_ok = 0;
constexpr int exit_verify_failed = 1;
constexpr int exit_usage = 2;
constexpr int exit_numeric = 3;

std::vector<ShapeFamily> parse_shapes(const std::string& list) {
    std::vector<ShapeFamily> families;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto f = parse_family(item);
        if (!f) throw std::invalid_argument("unknown shape '" + item + "'");
        families.push_back(*f);
    }
    if (families.empty()) throw std::invalid_argument("no shapes given");
    return families;
}

struct GridSpec {
    double lo = 0.01;
    double hi = 100.0;
    int count = 61;
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    std::stringstream ss(text);
    std::string lo, hi, count;
    if (!std::getline(ss, lo, ':') || !std::getline(ss, hi, ':') || !std::getline(ss, count))
        throw std::invalid_argument("--grid expects MIN:MAX:COUNT");
    try {
        g.lo = std::stod(lo);
        g.hi = std::stod(hi);
        g.count = std::stoi(count);
    } catch (const std::exception&) {
        throw std::invalid_argument("--grid expects numeric MIN:MAX:COUNT");
    }
    if (!(g.lo > 0.0) || !(g.hi > g.lo) || g.count < 2)
        throw std::invalid_argument("--grid needs 0 < MIN < MAX and COUNT >= 2");
    return g;
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path);
    if (!file) throw std::invalid_argument("cannot open '" + path + "'");
    return file;
}

int cmd_sweep(const std::string& shapes, const std::string& grid_text, double eta,
              double theta, const std::string& out_path, const std::string& format,
              int jobs) {
    const auto families = parse_shapes(shapes);
    const auto grid = parse_grid(grid_text);
    const auto xs = log_grid(grid.lo, grid.hi, grid.count);

    std::vector<SweepPoint> points(families.size() * xs.size());
    try {
        parallel_for(points.size(), jobs, [&](std::size_t i) {
            const auto family = families[i / xs.size()];
            const double x = xs[i % xs.size()];
            try {
                points[i] = evaluate_point(family, x, eta, theta);
            } catch (const NumericError& e) {
                throw NumericError("sweep point shape=" + family_name(family) +
                                   " wq_dt=" + format_double(x) + ": " + e.what());
            }
        });
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numeric;
    }

    std::ofstream file;
    auto& out = open_output(file, out_path);
    if (format == "csv")
        write_sweep_csv(out, points);
    else
        write_sweep_jsonl(out, points);
    return exit_ok;
}

int cmd_shapes(const std::string& shapes, double eta, const std::string& out_path,
               const std::string& format) {
    const auto families = parse_shapes(shapes);
    std::ofstream file;
    auto& out = open_output(file, out_path);
    if (format == "csv") out << "shape,t,density\n";
    for (const auto family : families) {
        const auto s = sample_density(family, eta, 1.0);
        for (std::size_t i = 0; i < s.t.size(); ++i) {
            if (format == "csv")
                out << s.shape << ',' << format_double(s.t[i]) << ','
                    << format_double(s.density[i]) << '\n';
            else
                out << "{\"shape\":\"" << s.shape << "\",\"t\":" << format_double(s.t[i])
                    << ",\"density\":" << format_double(s.density[i]) << "}\n";
        }
    }
    return exit_ok;
}

int cmd_error(const std::string& shape, double wq_dt, double eta, double theta, double phi,
              bool with_oracle, int grid_points, const std::string& dump_path,
              const std::string& format) {
    const auto family = parse_family(shape);
    if (!family) {
        std::cerr << "error: unknown shape '" << shape << "'\n";
        return exit_usage;
    }
    try {
        WavepacketSpec spec = spec_for_dt(*family, eta, wq_dt);
        spec.tau = optimal_tau(spec, 1.0);
        const double p = overlap_p(spec, 1.0);
        const auto m = moments(spec);
        const MeasurementConfig config(theta, phi, 1.0);
        const double eps = readout_error(config, p);
        const double eps_b = ozawa_bound_max(BoundInput(theta, m.delta_omega));
        const double ratio = error_bound_ratio(theta, m, p, 1.0);

        double oracle_eps = 0.0, deviation = 0.0;
        if (with_oracle) {
            const auto grid = oracle::make_grid(spec, grid_points);
            oracle_eps = std::sqrt(oracle::measure_error_squared(config, spec, grid));
            deviation = std::abs(oracle_eps - eps);
            if (!dump_path.empty()) {
                const auto st = oracle::pipeline_final_state(
                    QubitState::from_z_basis(1.0, 0.0, theta), spec, config, grid);
                oracle::write_density_csv(st, grid, dump_path);
            }
        }

        if (format == "jsonl") {
            std::cout << "{\"shape\":\"" << family_name(*family)
                      << "\",\"wq_dt\":" << format_double(wq_dt)
                      << ",\"epsilon\":" << format_double(eps)
                      << ",\"epsilon_b\":" << format_double(eps_b)
                      << ",\"ratio\":" << format_double(ratio)
                      << ",\"p_overlap\":" << format_double(p)
                      << ",\"tau_star\":" << format_double(spec.tau)
                      << ",\"dw_dt_product\":" << format_double(uncertainty_product(m));
            if (with_oracle)
                std::cout << ",\"oracle_epsilon\":" << format_double(oracle_eps)
                          << ",\"oracle_deviation\":" << format_double(deviation);
            std::cout << "}\n";
        } else {
            std::cout << "shape = " << family_name(*family) << "\n"
                      << "wq_dt = " << format_double(wq_dt) << "\n"
                      << "epsilon = " << format_double(eps) << "\n"
                      << "epsilon_b = " << format_double(eps_b) << "\n"
                      << "ratio = " << format_double(ratio) << "\n"
                      << "p_overlap = " << format_double(p) << "\n"
                      << "tau_star = " << format_double(spec.tau) << "\n"
                      << "dw_dt_product = " << format_double(uncertainty_product(m)) << "\n";
            if (with_oracle)
                std::cout << "oracle_epsilon = " << format_double(oracle_eps) << "\n"
                          << "oracle_deviation = " << format_double(deviation) << "\n";
        }
        return exit_ok;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numeric;
    }
}

int cmd_verify(int grid_points, std::uint64_t seed, int jobs, const std::string& out_path) {
    verify::VerifyOptions options;
    options.grid_points = grid_points;
    options.seed = seed;
    options.jobs = jobs;
    const auto results = verify::run_acceptance(options);

    bool all_pass = true;
    for (const auto& r : results) {
        all_pass = all_pass && r.pass;
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.id << " " << r.name
                  << "  measured=" << format_double(r.measured)
                  << " limit=" << format_double(r.limit);
        if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
        std::cout << "\n";
    }
    std::cout << (all_pass ? "all checks passed" : "some checks FAILED") << "\n";

    if (!out_path.empty()) {
        std::ofstream file(out_path);
        if (!file) {
            std::cerr << "error: cannot open '" << out_path << "'\n";
            return exit_usage;
        }
        for (const auto& r : results) {
            file << "{\"id\":" << r.id << ",\"name\":\"" << r.name
                 << "\",\"pass\":" << (r.pass ? "true" : "false")
                 << ",\"measured\":" << format_double(r.measured)
                 << ",\"limit\":" << format_double(r.limit) << ",\"detail\":\"" << r.detail
                 << "\"}\n";
        }
    }
    return all_pass ? exit_ok : exit_verify_failed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flying-particle qubit readout: error, conservation-law bound, grid oracle"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value configuration file; flags override");
    app.fallthrough(true); // lets `qmeter <cmd> --config FILE` reach the parent option

    std::string shapes = "gaussian,square,exponential";
    std::string grid_text = "0.01:100:61";
    std::string out_path;
    std::string format = "csv";
    double eta = 1.0 / pi;
    double theta = pi / 2.0;
    double phi = pi;
    int jobs = 0;
    int grid_points = 1 << 14;
    std::uint64_t seed = 0;

    auto* sweep = app.add_subcommand("sweep", "emit the error/bound curve over wq*dt");
    sweep->add_option("--shapes", shapes, "comma-separated shape list");
    sweep->add_option("--grid", grid_text, "log grid MIN:MAX:COUNT for wq*dt");
    sweep->add_option("--eta", eta, "smoothing parameter");
    sweep->add_option("--theta", theta, "qubit tilt angle");
    sweep->add_option("--out", out_path, "output path (default stdout)");
    sweep->add_option("--format", format)->check(CLI::IsMember({"csv", "jsonl"}));
    sweep->add_option("--jobs", jobs, "worker threads (0 = all cores)");

    auto* shapes_cmd = app.add_subcommand("shapes", "emit |psi|^2 samples at wq*dt = 1");
    shapes_cmd->add_option("--shapes", shapes, "comma-separated shape list");
    shapes_cmd->add_option("--eta", eta, "smoothing parameter");
    shapes_cmd->add_option("--out", out_path, "output path (default stdout)");
    shapes_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "jsonl"}));

    std::string shape_one = "gaussian";
    double wq_dt = 1.0;
    bool with_oracle = false;
    std::string dump_path;
    auto* error_cmd = app.add_subcommand("error", "single-point error/bound/ratio");
    error_cmd->add_option("--shape", shape_one, "wavepacket shape");
    error_cmd->add_option("--wq-dt", wq_dt, "omega_q * delta_t")->check(CLI::PositiveNumber);
    error_cmd->add_option("--eta", eta, "smoothing parameter");
    error_cmd->add_option("--theta", theta, "qubit tilt angle");
    error_cmd->add_option("--phi", phi, "kick phase");
    error_cmd->add_flag("--oracle", with_oracle, "cross-check against the grid oracle");
    error_cmd->add_option("--grid-points", grid_points, "oracle grid resolution");
    error_cmd->add_option("--dump-state", dump_path, "CSV dump of the oracle densities");
    error_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "jsonl"}));

    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance matrix");
    verify_cmd->add_option("--grid-points", grid_points, "oracle grid resolution");
    verify_cmd->add_option("--seed", seed, "random audit seed");
    verify_cmd->add_option("--jobs", jobs, "worker threads (0 = all cores)");
    verify_cmd->add_option("--out", out_path, "machine-readable JSONL summary path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (sweep->parsed())
            return cmd_sweep(shapes, grid_text, eta, theta, out_path, format, jobs);
        if (shapes_cmd->parsed()) return cmd_shapes(shapes, eta, out_path, format);
        if (error_cmd->parsed())
            return cmd_error(shape_one, wq_dt, eta, theta, phi, with_oracle, grid_points,
                             dump_path, format);
        if (verify_cmd->parsed()) return cmd_verify(grid_points, seed, jobs, out_path);
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_numeric;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
