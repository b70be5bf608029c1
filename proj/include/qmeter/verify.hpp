#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qmeter::verify {

struct CheckResult {
    int id;
    std::string name;
    bool pass;
    double measured;      // worst observed deviation / figure of merit
    double limit;         // the pinned tolerance it is compared against
    std::string detail;
    double seconds = 0.0; // wall-clock time the check took
};

struct VerifyOptions {
    int grid_points = 1 << 14;
    std::uint64_t seed = 0;
    int jobs = 0; // <= 0: hardware concurrency
};

/// Run the full acceptance matrix; one result per criterion.
std::vector<CheckResult> run_acceptance(const VerifyOptions& options);

/// Deterministic uniform double in [0, 1) from a 64-bit generator state.
double uniform01(std::uint64_t& state);

} // namespace qmeter::verify
