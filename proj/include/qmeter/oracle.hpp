#pragma once

#include <array>
#include <string>
#include <vector>

#include "qmeter/scattering.hpp"
#include "qmeter/types.hpp"
#include "qmeter/wavepacket.hpp"

namespace qmeter::oracle {

/// Uniform time grid carrying the sampled joint wavefunction.
struct Grid {
    double t_min;
    double t_max;
    int n_points;

    Grid(double t_min, double t_max, int n_points);

    double spacing() const { return (t_max - t_min) / (n_points - 1); }
    double point(int i) const { return t_min + spacing() * i; }
    /// Trapezoid weight of grid point i.
    double weight(int i) const {
        return (i == 0 || i == n_points - 1) ? 0.5 * spacing() : spacing();
    }
};

/// Window sized to the launched packet (support to 1e-12 tail norm, at least
/// +-8 dt around it, shifted by tau).
Grid make_grid(const WavepacketSpec& spec, int n_points = 1 << 14);

/// Sampled joint state: (grid point, qubit level in the theta basis, arm).
struct GridState {
    int n_points = 0;
    std::vector<cplx> amp; // layout [point][level][arm]

    explicit GridState(int n) : n_points(n), amp(static_cast<std::size_t>(n) * 4) {}

    cplx& at(int i, QubitLevel level, int arm) {
        return amp[(static_cast<std::size_t>(i) * 2 +
                    (level == QubitLevel::eTheta ? 1 : 0)) * 2 + static_cast<std::size_t>(arm)];
    }
    const cplx& at(int i, QubitLevel level, int arm) const {
        return amp[(static_cast<std::size_t>(i) * 2 +
                    (level == QubitLevel::eTheta ? 1 : 0)) * 2 + static_cast<std::size_t>(arm)];
    }
};

/// Interaction region profile: a Dirac kick or a sampled finite-width f(x)
/// normalized to unit integral with characteristic length L.
struct InteractionProfile {
    enum class Kind { Delta, FiniteWidth };
    Kind kind = Kind::Delta;
    std::vector<double> u; // sample positions
    std::vector<double> f; // sampled profile
    double length_l = 0.0;

    static InteractionProfile delta();
    static InteractionProfile box(double length_l, int n_samples = 257);
    static InteractionProfile smoothed_box(double length_l, double eta, int n_samples = 1025);
};

double norm(const Grid& grid, const GridState& state);
double distance_l2(const Grid& grid, const GridState& a, const GridState& b);

/// Joint state after the delta-kick interaction in the interaction picture:
/// arm A carries psi(t - tau) * V(t) |psi_S> pointwise, arm B is empty.
/// Throws WindowTooSmall if the grid clips more than 1e-8 of the packet norm.
GridState evolve_delta(const QubitState& state, const WavepacketSpec& spec,
                       const MeasurementConfig& config, const Grid& grid);

/// Same with a finite-width interaction region, the time-ordered exponential
/// approximated by n_steps Strang splittings (0 = choose automatically).
/// Throws ResolutionTooCoarse if halving the step moves the result by > 1e-6.
GridState evolve_finite_width(const QubitState& state, const WavepacketSpec& spec,
                              const MeasurementConfig& config, const Grid& grid,
                              const InteractionProfile& profile, int n_steps = 0);

struct ArmProbabilities {
    double p_a;
    double p_b;
};

/// Full pre-measurement pipeline: beamsplitter, interaction in arm A and
/// pi/2 phase in arm B, beamsplitter; integrated arm probabilities.
ArmProbabilities run_interferometer(const QubitState& state, const WavepacketSpec& spec,
                                    const MeasurementConfig& config, const Grid& grid,
                                    const InteractionProfile& profile = InteractionProfile::delta(),
                                    int n_steps = 0);

/// The final pipeline state itself (for overlap-based routes and dumps).
GridState pipeline_final_state(const QubitState& state, const WavepacketSpec& spec,
                               const MeasurementConfig& config, const Grid& grid,
                               const InteractionProfile& profile = InteractionProfile::delta(),
                               int n_steps = 0);

/// eps^2 recomputed from detector probabilities for z-basis inputs, combined
/// with the given state's weights; cross-checked within 1e-8 against the
/// noise-operator route eps^2 = 2 - 2 Re<U psi| O_M |U sigma_z psi>.
/// Throws NumericError if the two routes disagree.
double measure_error_squared(const MeasurementConfig& config, const WavepacketSpec& spec,
                             const Grid& grid,
                             const InteractionProfile& profile = InteractionProfile::delta(),
                             int n_steps = 0);

/// Same, for an explicit input qubit state given in z-basis amplitudes.
double measure_error_squared(const MeasurementConfig& config, const WavepacketSpec& spec,
                             const Grid& grid, cplx c_g, cplx c_e,
                             const InteractionProfile& profile = InteractionProfile::delta(),
                             int n_steps = 0);

/// Branch amplitudes of a bare scattered state recovered by projecting onto
/// the frequency-shifted copies of the launched packet (Gram-corrected),
/// ordered as scatter(): (g,0), (e,0), (e,-1), (g,+1).
std::array<cplx, 4> project_onto_branches(const GridState& scattered,
                                          const WavepacketSpec& spec,
                                          const MeasurementConfig& config, const Grid& grid);

/// CSV dump of the probability densities per (level, arm) column.
void write_density_csv(const GridState& state, const Grid& grid, const std::string& path);

} // namespace qmeter::oracle
