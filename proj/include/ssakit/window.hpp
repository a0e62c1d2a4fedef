#pragma once

#include "ssakit/series.hpp"

#include <string>
#include <vector>

namespace ssakit {

/// Lag-indexed autocorrelation of a series. For every lag tau the mean and
/// variance are taken over the first N - tau samples, and the sum is divided
/// by that variance only, so R(tau) grows like (N - tau) times the usual
/// correlation coefficient.
class AutocorrelationSequence {
public:
    AutocorrelationSequence(std::size_t length, std::vector<double> values,
                            std::vector<double> means, std::vector<double> variances);

    int max_lag() const noexcept { return static_cast<int>(values_.size()); }
    /// R(tau), 1 <= tau <= max_lag().
    double at(int tau) const;
    /// R(tau) / (N - tau), comparable to a correlation coefficient.
    double normalized(int tau) const;
    double mean(int tau) const;
    double variance(int tau) const;

private:
    std::size_t length_;
    std::vector<double> values_;
    std::vector<double> means_;
    std::vector<double> variances_;
};

/// Single lag of the autocorrelation above. Throws DegenerateSeries when the
/// first N - tau samples have zero variance.
double autocorrelation_at(std::span<const double> x, int tau);

AutocorrelationSequence autocorrelation(const TimeSeries& series, int max_lag);

enum class WindowMethod { kMa, kConfBand, kLogLo, kLogHi, kBig, kFixed };

std::string to_string(WindowMethod method);

struct WindowChoice {
    int window;
    WindowMethod method;
    /// Set when the requested method failed and the log-lower bound was used.
    bool fallback = false;
};

/// Smallest tau >= 2 with R(tau) R(tau + 1) < 0, searched up to N/2. Exact
/// zeros do not count as a sign change. Throws NoSignChange.
WindowChoice select_window_ma(const TimeSeries& series);

/// Smallest tau >= 2 at which the normalized autocorrelation enters the
/// white-noise band |r| <= z / sqrt(N - tau), or jumps across it (opposite
/// signs at tau - 1 and tau). Throws NoCrossing.
WindowChoice select_window_confband(const TimeSeries& series, double level = 0.95);

struct LogBounds {
    int lo;
    int hi;
};

/// ceil(ln(N)^1.5) and floor(ln(N)^2.5), clamped to [2, N/2]. Requires N >= 8.
LogBounds log_bounds(std::size_t length);

inline constexpr double kMeanYearDays = 365.25;

/// floor(m * 365.25) for the largest integer m with m * 365.25 < N/2.
/// Throws TooShort when N/2 <= 365.25.
WindowChoice big_multiple_window(std::size_t length);

struct WindowSpec {
    WindowMethod method = WindowMethod::kMa;
    int fixed = 0;
    double level = 0.95;
    /// Replace NoSignChange / NoCrossing by the log-lower bound.
    bool fallback_to_log_lo = false;
};

WindowChoice select_window(const TimeSeries& series, const WindowSpec& spec);

}  // namespace ssakit
