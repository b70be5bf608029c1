#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace qmeter {

using cplx = std::complex<double>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

/// Base class for runtime numeric failures (quadrature, grid resolution, ...).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// A numeric second spectral moment failed to converge under refinement.
class DivergentMoment : public NumericError {
public:
    explicit DivergentMoment(const std::string& what) : NumericError(what) {}
};

/// A fixed grid window clips more wavepacket norm than allowed.
class WindowTooSmall : public NumericError {
public:
    explicit WindowTooSmall(const std::string& what) : NumericError(what) {}
};

/// Halving the evolution step changed the result more than allowed.
class ResolutionTooCoarse : public NumericError {
public:
    explicit ResolutionTooCoarse(const std::string& what) : NumericError(what) {}
};

} // namespace qmeter
