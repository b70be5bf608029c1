#include "qmeter/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "qmeter/quadrature.hpp"

namespace qmeter::oracle {

namespace {

// 2x2 complex matrix in the theta basis, rows/columns ordered (g_theta, e_theta).
struct Mat2 {
    cplx gg, ge, eg, ee;

    Mat2 operator*(const Mat2& o) const {
        return {gg * o.gg + ge * o.eg, gg * o.ge + ge * o.ee,
                eg * o.gg + ee * o.eg, eg * o.ge + ee * o.ee};
    }
    std::array<cplx, 2> apply(cplx g, cplx e) const {
        return {gg * g + ge * e, eg * g + ee * e};
    }
};

// e^{i beta H_S} is diagonal in the theta basis (g at energy -omega_q/2).
Mat2 free_phase(double beta, double omega_q) {
    const double h = 0.5 * beta * omega_q;
    return {std::polar(1.0, -h), 0.0, 0.0, std::polar(1.0, +h)};
}

// e^{-i alpha sigma_z}: sigma_z is a unit Pauli vector in the theta basis,
// so the exponential closes as cos - i sin via the Rodrigues form.
Mat2 kick_exp(double alpha, double theta) {
    const double c = std::cos(alpha), s = std::sin(alpha);
    const double ct = std::cos(theta), st = std::sin(theta);
    // sigma_z = [[-ct, -st], [-st, ct]] in the theta basis
    return {c + cplx(0, 1) * s * ct, cplx(0, 1) * s * st,
            cplx(0, 1) * s * st, c - cplx(0, 1) * s * ct};
}

struct Core {
    Mat2 c;          // time-ordered core across the interaction region
    double u_lo = 0; // region extent entering the phase sandwich
    double u_hi = 0;
};

Core delta_core(const MeasurementConfig& config) {
    return {kick_exp(config.phi / 2.0, config.theta), 0.0, 0.0};
}

double interp_profile(const InteractionProfile& p, double u) {
    if (u <= p.u.front() || u >= p.u.back()) return 0.0;
    const auto it = std::upper_bound(p.u.begin(), p.u.end(), u);
    const std::size_t i = static_cast<std::size_t>(it - p.u.begin()) - 1;
    const double w = (u - p.u[i]) / (p.u[i + 1] - p.u[i]);
    return p.f[i] * (1.0 - w) + p.f[i + 1] * w;
}

// Strang product across the sampled profile. The core is t-independent:
// per grid point it is sandwiched between free phases below.
Core strang_core(const MeasurementConfig& config, const InteractionProfile& profile,
                 int n_steps) {
    const double u_lo = profile.u.front(), u_hi = profile.u.back();
    const double span = u_hi - u_lo;
    const double ds = span / n_steps;
    const Mat2 half = free_phase(-0.5 * ds, config.omega_q); // e^{-i ds/2 H_S}
    Mat2 c{1.0, 0.0, 0.0, 1.0};
    for (int k = 0; k < n_steps; ++k) {
        const double mid = u_lo + (k + 0.5) * ds;
        const double alpha = 0.5 * config.phi * interp_profile(profile, mid) * ds;
        const Mat2 step = half * kick_exp(alpha, config.theta) * half;
        c = step * c; // later steps act on the left
    }
    return {c, u_lo, u_hi};
}

// Interaction-picture operator at grid point t.
Mat2 interaction_at(const Core& core, double t, double omega_q) {
    return free_phase(core.u_hi + t, omega_q) * core.c *
           free_phase(-(core.u_lo + t), omega_q);
}

// Launched packet sampled on the grid, normalized to unit grid norm.
std::vector<cplx> sampled_packet(const WavepacketSpec& spec, const Grid& grid) {
    std::vector<cplx> psi(grid.n_points);
    double n2 = 0.0;
    for (int i = 0; i < grid.n_points; ++i) {
        psi[i] = launch_amplitude(spec, grid.point(i));
        n2 += grid.weight(i) * std::norm(psi[i]);
    }
    if (1.0 - n2 > 1e-8)
        throw WindowTooSmall("grid window clips " + std::to_string(1.0 - n2) +
                             " of the wavepacket norm");
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& a : psi) a *= scale;
    return psi;
}

GridState bare_scattered(const QubitState& state, const WavepacketSpec& spec,
                         const MeasurementConfig& config, const Grid& grid,
                         const Core& core) {
    const auto psi = sampled_packet(spec, grid);
    GridState out(grid.n_points);
    for (int i = 0; i < grid.n_points; ++i) {
        const Mat2 v = interaction_at(core, grid.point(i), config.omega_q);
        const auto [g, e] = v.apply(state.b_g, state.b_e);
        out.at(i, QubitLevel::gTheta, 0) = psi[i] * g;
        out.at(i, QubitLevel::eTheta, 0) = psi[i] * e;
    }
    return out;
}

GridState pipeline(const QubitState& state, const WavepacketSpec& spec,
                   const MeasurementConfig& config, const Grid& grid, const Core& core) {
    const auto psi = sampled_packet(spec, grid);
    GridState st(grid.n_points);
    constexpr double inv_sqrt2 = 0.7071067811865475244;
    const cplx phase_b(0.0, 1.0);
    for (int i = 0; i < grid.n_points; ++i) {
        const Mat2 v = interaction_at(core, grid.point(i), config.omega_q);
        // Meter enters the second port: BS1 gives (+psi/sqrt2, -psi/sqrt2).
        const cplx a0 = psi[i] * inv_sqrt2;
        const cplx b0 = -psi[i] * inv_sqrt2;
        // Interaction in arm A, pi/2 phase in arm B.
        const auto [ag, ae] = v.apply(state.b_g * a0, state.b_e * a0);
        const cplx bg = phase_b * state.b_g * b0;
        const cplx be = phase_b * state.b_e * b0;
        // BS2 recombines arm-wise per qubit level.
        st.at(i, QubitLevel::gTheta, 0) = (ag + bg) * inv_sqrt2;
        st.at(i, QubitLevel::gTheta, 1) = (ag - bg) * inv_sqrt2;
        st.at(i, QubitLevel::eTheta, 0) = (ae + be) * inv_sqrt2;
        st.at(i, QubitLevel::eTheta, 1) = (ae - be) * inv_sqrt2;
    }
    return st;
}

int auto_steps(const MeasurementConfig& config, const InteractionProfile& profile) {
    const double span = profile.u.back() - profile.u.front();
    const double resolved = std::min(profile.length_l, 1.0 / config.omega_q);
    const int n = static_cast<int>(std::ceil(50.0 * span / resolved));
    return std::max(n, 64);
}

Core finite_core_checked(const MeasurementConfig& config, const InteractionProfile& profile,
                         int n_steps) {
    if (profile.kind != InteractionProfile::Kind::FiniteWidth)
        throw std::invalid_argument("finite-width evolution requires a FiniteWidth profile");
    if (n_steps <= 0) n_steps = auto_steps(config, profile);
    const double span = profile.u.back() - profile.u.front();
    const double resolved = std::min(profile.length_l, 1.0 / config.omega_q);
    if (span / n_steps > resolved / 50.0)
        throw std::invalid_argument("evolve_finite_width: step too coarse for L and 1/omega_q");
    const Core coarse = strang_core(config, profile, n_steps);
    const Core fine = strang_core(config, profile, 2 * n_steps);
    // Operator-norm proxy: max entry distance (states are unit norm).
    const double d = std::max(
        std::max(std::abs(coarse.c.gg - fine.c.gg), std::abs(coarse.c.ge - fine.c.ge)),
        std::max(std::abs(coarse.c.eg - fine.c.eg), std::abs(coarse.c.ee - fine.c.ee)));
    if (d > 1e-6)
        throw ResolutionTooCoarse("evolve_finite_width: halving the step moved the core by " +
                                  std::to_string(d));
    return fine;
}

Core make_core(const MeasurementConfig& config, const InteractionProfile& profile,
               int n_steps) {
    return profile.kind == InteractionProfile::Kind::Delta
               ? delta_core(config)
               : finite_core_checked(config, profile, n_steps);
}

} // namespace

Grid::Grid(double t_min_, double t_max_, int n_points_)
    : t_min(t_min_), t_max(t_max_), n_points(n_points_) {
    if (!(t_max > t_min)) throw std::invalid_argument("Grid: empty window");
    if (n_points < 2) throw std::invalid_argument("Grid: need at least 2 points");
}

Grid make_grid(const WavepacketSpec& spec, int n_points) {
    const double dt = time_dispersion(spec);
    auto [lo, hi] = support_interval(spec, 1e-12);
    // The launched packet is psi(t - tau): shift its support, keep at least
    // +-8 dt around the origin region.
    const double lo_w = std::min(lo + spec.tau, -8.0 * dt + std::min(0.0, spec.tau));
    const double hi_w = std::max(hi + spec.tau, 8.0 * dt + std::max(0.0, spec.tau));
    const double pad = 0.02 * (hi_w - lo_w);
    return Grid(lo_w - pad, hi_w + pad, n_points);
}

InteractionProfile InteractionProfile::delta() { return {}; }

InteractionProfile InteractionProfile::box(double length_l, int n_samples) {
    if (!(length_l > 0.0)) throw std::invalid_argument("box: length must be positive");
    InteractionProfile p;
    p.kind = Kind::FiniteWidth;
    p.length_l = length_l;
    p.u.resize(n_samples);
    p.f.assign(n_samples, 1.0 / length_l);
    for (int i = 0; i < n_samples; ++i)
        p.u[i] = -0.5 * length_l + length_l * i / (n_samples - 1);
    return p;
}

InteractionProfile InteractionProfile::smoothed_box(double length_l, double eta, int n_samples) {
    if (!(length_l > 0.0)) throw std::invalid_argument("smoothed_box: length must be positive");
    if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("smoothed_box: eta in (0,1)");
    InteractionProfile p;
    p.kind = Kind::FiniteWidth;
    p.length_l = length_l;
    const double a = eta * length_l;
    const double half = 0.5 * length_l + 8.0 * a;
    p.u.resize(n_samples);
    p.f.resize(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double x = -half + 2.0 * half * i / (n_samples - 1);
        p.u[i] = x;
        p.f[i] = (std::tanh((x + 0.5 * length_l) / a) - std::tanh((x - 0.5 * length_l) / a)) /
                 (2.0 * length_l);
    }
    // Kill the truncation residue so the sampled profile integrates to 1.
    const double total = trapezoid_sampled(p.u, p.f);
    for (auto& v : p.f) v /= total;
    return p;
}

double norm(const Grid& grid, const GridState& state) {
    double n2 = 0.0;
    for (int i = 0; i < grid.n_points; ++i) {
        double local = 0.0;
        for (int l = 0; l < 2; ++l)
            for (int arm = 0; arm < 2; ++arm)
                local += std::norm(state.at(i, l ? QubitLevel::eTheta : QubitLevel::gTheta, arm));
        n2 += grid.weight(i) * local;
    }
    return std::sqrt(n2);
}

double distance_l2(const Grid& grid, const GridState& a, const GridState& b) {
    if (a.n_points != b.n_points) throw std::invalid_argument("distance_l2: size mismatch");
    double d2 = 0.0;
    for (int i = 0; i < grid.n_points; ++i) {
        double local = 0.0;
        for (int l = 0; l < 2; ++l)
            for (int arm = 0; arm < 2; ++arm) {
                const auto lvl = l ? QubitLevel::eTheta : QubitLevel::gTheta;
                local += std::norm(a.at(i, lvl, arm) - b.at(i, lvl, arm));
            }
        d2 += grid.weight(i) * local;
    }
    return std::sqrt(d2);
}

GridState evolve_delta(const QubitState& state, const WavepacketSpec& spec,
                       const MeasurementConfig& config, const Grid& grid) {
    return bare_scattered(state, spec, config, grid, delta_core(config));
}

GridState evolve_finite_width(const QubitState& state, const WavepacketSpec& spec,
                              const MeasurementConfig& config, const Grid& grid,
                              const InteractionProfile& profile, int n_steps) {
    return bare_scattered(state, spec, config, grid,
                          finite_core_checked(config, profile, n_steps));
}

GridState pipeline_final_state(const QubitState& state, const WavepacketSpec& spec,
                               const MeasurementConfig& config, const Grid& grid,
                               const InteractionProfile& profile, int n_steps) {
    return pipeline(state, spec, config, grid, make_core(config, profile, n_steps));
}

ArmProbabilities run_interferometer(const QubitState& state, const WavepacketSpec& spec,
                                    const MeasurementConfig& config, const Grid& grid,
                                    const InteractionProfile& profile, int n_steps) {
    const GridState st = pipeline_final_state(state, spec, config, grid, profile, n_steps);
    double pa = 0.0, pb = 0.0;
    for (int i = 0; i < grid.n_points; ++i) {
        const double w = grid.weight(i);
        pa += w * (std::norm(st.at(i, QubitLevel::gTheta, 0)) +
                   std::norm(st.at(i, QubitLevel::eTheta, 0)));
        pb += w * (std::norm(st.at(i, QubitLevel::gTheta, 1)) +
                   std::norm(st.at(i, QubitLevel::eTheta, 1)));
    }
    return {pa, pb};
}

namespace {

// <a | O_M | b> on the grid, O_M = n_A - n_B.
cplx pointer_matrix_element(const Grid& grid, const GridState& a, const GridState& b) {
    cplx v = 0.0;
    for (int i = 0; i < grid.n_points; ++i) {
        const double w = grid.weight(i);
        for (int l = 0; l < 2; ++l) {
            const auto lvl = l ? QubitLevel::eTheta : QubitLevel::gTheta;
            v += w * (std::conj(a.at(i, lvl, 0)) * b.at(i, lvl, 0) -
                      std::conj(a.at(i, lvl, 1)) * b.at(i, lvl, 1));
        }
    }
    return v;
}

} // namespace

double measure_error_squared(const MeasurementConfig& config, const WavepacketSpec& spec,
                             const Grid& grid, cplx c_g, cplx c_e,
                             const InteractionProfile& profile, int n_steps) {
    const double cn = std::sqrt(std::norm(c_g) + std::norm(c_e));
    if (!(cn > 0.0)) throw std::invalid_argument("measure_error_squared: zero state");
    c_g /= cn;
    c_e /= cn;
    const Core core = make_core(config, profile, n_steps);
    const auto gz = QubitState::from_z_basis(1.0, 0.0, config.theta);
    const auto ez = QubitState::from_z_basis(0.0, 1.0, config.theta);
    const GridState phi_g = pipeline(gz, spec, config, grid, core);
    const GridState phi_e = pipeline(ez, spec, config, grid, core);

    // Route 1: detector probabilities for the z-basis inputs.
    double pa_g = 0.0, pb_e = 0.0;
    for (int i = 0; i < grid.n_points; ++i) {
        const double w = grid.weight(i);
        pa_g += w * (std::norm(phi_g.at(i, QubitLevel::gTheta, 0)) +
                     std::norm(phi_g.at(i, QubitLevel::eTheta, 0)));
        pb_e += w * (std::norm(phi_e.at(i, QubitLevel::gTheta, 1)) +
                     std::norm(phi_e.at(i, QubitLevel::eTheta, 1)));
    }
    const double e2_detectors = 4.0 * std::norm(c_g) * pa_g + 4.0 * std::norm(c_e) * pb_e;

    // Route 2: eps^2 = 2 - 2 Re <U psi | O_M | U sigma_z psi>, assembled by
    // linearity from the same two pipeline runs (sigma_z flips the g_z sign).
    const cplx m_gg = pointer_matrix_element(grid, phi_g, phi_g);
    const cplx m_ee = pointer_matrix_element(grid, phi_e, phi_e);
    const cplx m_ge = pointer_matrix_element(grid, phi_g, phi_e);
    const cplx m_eg = pointer_matrix_element(grid, phi_e, phi_g);
    const cplx expect = -std::norm(c_g) * m_gg + std::norm(c_e) * m_ee +
                        std::conj(c_g) * c_e * m_ge - std::conj(c_e) * c_g * m_eg;
    const double e2_noise = 2.0 - 2.0 * expect.real();

    if (std::abs(e2_detectors - e2_noise) > 1e-8)
        throw NumericError("oracle error routes disagree: " + std::to_string(e2_detectors) +
                           " vs " + std::to_string(e2_noise));
    return e2_noise;
}

double measure_error_squared(const MeasurementConfig& config, const WavepacketSpec& spec,
                             const Grid& grid, const InteractionProfile& profile,
                             int n_steps) {
    constexpr double inv_sqrt2 = 0.7071067811865475244;
    return measure_error_squared(config, spec, grid, inv_sqrt2, inv_sqrt2, profile, n_steps);
}

std::array<cplx, 4> project_onto_branches(const GridState& scattered,
                                          const WavepacketSpec& spec,
                                          const MeasurementConfig& config, const Grid& grid) {
    const auto psi = sampled_packet(spec, grid);
    // Shift overlap O(1) = <1_w|1_{w+wq}> on the same grid for consistency.
    cplx o1 = 0.0;
    for (int i = 0; i < grid.n_points; ++i)
        o1 += grid.weight(i) * std::norm(psi[i]) *
              std::polar(1.0, -config.omega_q * grid.point(i));

    // Projections of each level onto the two basis functions present there.
    // basis_s(t) = e^{-i s omega_q t} psi(t): level g holds shifts {0,+1},
    // level e holds {0,-1}.
    auto project = [&](QubitLevel lvl, int shift) {
        cplx p = 0.0;
        for (int i = 0; i < grid.n_points; ++i) {
            const cplx basis = psi[i] * std::polar(1.0, -shift * config.omega_q * grid.point(i));
            p += grid.weight(i) * std::conj(basis) * scattered.at(i, lvl, 0);
        }
        return p;
    };

    // Solve the 2x2 Gram system [[1, o],[conj(o), 1]] beta = p per level,
    // where o = <basis_a | basis_b> for the level's (a, b) shift pair.
    auto solve = [&](cplx p0, cplx p1, cplx o) -> std::array<cplx, 2> {
        const double det = 1.0 - std::norm(o);
        return {(p0 - o * p1) / det, (p1 - std::conj(o) * p0) / det};
    };

    // Level g: shifts (0, +1); <basis_0|basis_{+1}> = O(1).
    const auto bg = solve(project(QubitLevel::gTheta, 0), project(QubitLevel::gTheta, +1), o1);
    // Level e: shifts (0, -1); <basis_0|basis_{-1}> = conj(O(1)).
    const auto be = solve(project(QubitLevel::eTheta, 0), project(QubitLevel::eTheta, -1),
                          std::conj(o1));

    // scatter() order: (g,0), (e,0), (e,-1), (g,+1).
    return {bg[0], be[0], be[1], bg[1]};
}

void write_density_csv(const GridState& state, const Grid& grid, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "t,density_g_a,density_e_a,density_g_b,density_e_b,density_total\n";
    out.precision(17);
    for (int i = 0; i < grid.n_points; ++i) {
        const double ga = std::norm(state.at(i, QubitLevel::gTheta, 0));
        const double ea = std::norm(state.at(i, QubitLevel::eTheta, 0));
        const double gb = std::norm(state.at(i, QubitLevel::gTheta, 1));
        const double eb = std::norm(state.at(i, QubitLevel::eTheta, 1));
        out << grid.point(i) << ',' << ga << ',' << ea << ',' << gb << ',' << eb << ','
            << ga + ea + gb + eb << '\n';
    }
}

} // namespace qmeter::oracle
