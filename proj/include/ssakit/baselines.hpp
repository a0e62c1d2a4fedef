#pragma once

#include "ssakit/forecast.hpp"

#include <cstdint>
#include <span>
#include <string>

namespace ssakit {

enum class BaselineKind { kRandom, kConstant, kPolyreg };

std::string to_string(BaselineKind kind);

inline constexpr int kDefaultPolyregDegree = 4;

/// Repeats the last observation.
ForecastResult constant_forecast(std::span<const double> observed, int horizon);

/// Independent draws, with replacement, from the observed values.
ForecastResult random_forecast(std::span<const double> observed, int horizon, std::uint64_t seed);

/// Least-squares polynomial in the time index t = 1..N, extrapolated to
/// N+1..N+h. The index is mapped to [-1, 1] before fitting. Throws
/// InsufficientData when N <= degree.
ForecastResult polyreg_forecast(std::span<const double> observed, int horizon,
                                int degree = kDefaultPolyregDegree);

}  // namespace ssakit
