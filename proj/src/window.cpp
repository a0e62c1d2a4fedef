#include "ssakit/window.hpp"

#include "ssakit/error.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>

namespace ssakit {

namespace {

constexpr std::string_view kModule = "window-select";

struct LagMoments {
    double r;
    double mean;
    double variance;
};

LagMoments lag_moments(std::span<const double> x, int tau) {
    const std::size_t n = x.size();
    if (tau < 0 || static_cast<std::size_t>(tau) + 2 > n) {
        throw Error(ErrorCode::kInvalidArgument, kModule,
                    "lag " + std::to_string(tau) + " requires tau <= N - 2");
    }
    const std::size_t m = n - static_cast<std::size_t>(tau);
    double mean = 0.0;
    for (std::size_t i = 0; i < m; ++i) mean += x[i];
    mean /= static_cast<double>(m);
    double var = 0.0;
    double cross = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double d = x[i] - mean;
        var += d * d;
        cross += (x[i + static_cast<std::size_t>(tau)] - mean) * d;
    }
    var /= static_cast<double>(m);
    if (!(var > 0.0)) {
        throw Error(ErrorCode::kDegenerateSeries, kModule,
                    "zero variance over the first " + std::to_string(m) + " samples");
    }
    return {cross / var, mean, var};
}

std::size_t half(std::size_t n) { return n / 2; }

}  // namespace

AutocorrelationSequence::AutocorrelationSequence(std::size_t length, std::vector<double> values,
                                                 std::vector<double> means,
                                                 std::vector<double> variances)
    : length_(length),
      values_(std::move(values)),
      means_(std::move(means)),
      variances_(std::move(variances)) {}

double AutocorrelationSequence::at(int tau) const { return values_.at(static_cast<std::size_t>(tau - 1)); }

double AutocorrelationSequence::normalized(int tau) const {
    return at(tau) / static_cast<double>(length_ - static_cast<std::size_t>(tau));
}

double AutocorrelationSequence::mean(int tau) const { return means_.at(static_cast<std::size_t>(tau - 1)); }

double AutocorrelationSequence::variance(int tau) const {
    return variances_.at(static_cast<std::size_t>(tau - 1));
}

double autocorrelation_at(std::span<const double> x, int tau) { return lag_moments(x, tau).r; }

AutocorrelationSequence autocorrelation(const TimeSeries& series, int max_lag) {
    if (max_lag < 1 || static_cast<std::size_t>(max_lag) + 2 > series.size()) {
        throw Error(ErrorCode::kInvalidArgument, kModule, "max lag must lie in [1, N - 2]");
    }
    std::vector<double> r, means, vars;
    for (int tau = 1; tau <= max_lag; ++tau) {
        const LagMoments m = lag_moments(series.values(), tau);
        r.push_back(m.r);
        means.push_back(m.mean);
        vars.push_back(m.variance);
    }
    return {series.size(), std::move(r), std::move(means), std::move(vars)};
}

std::string to_string(WindowMethod method) {
    switch (method) {
        case WindowMethod::kMa: return "auto-ma";
        case WindowMethod::kConfBand: return "confband";
        case WindowMethod::kLogLo: return "log-lo";
        case WindowMethod::kLogHi: return "log-hi";
        case WindowMethod::kBig: return "big";
        case WindowMethod::kFixed: return "fixed";
    }
    return "unknown";
}

WindowChoice select_window_ma(const TimeSeries& series) {
    const auto x = series.values();
    // R(tau + 1) needs tau + 1 <= N - 2.
    const int limit = std::min(static_cast<int>(half(series.size())), static_cast<int>(series.size()) - 3);
    if (limit < 2) {
        throw Error(ErrorCode::kWindowOutOfRange, kModule, "series too short for any window");
    }
    double current = autocorrelation_at(x, 2);
    for (int tau = 2; tau <= limit; ++tau) {
        const double next = autocorrelation_at(x, tau + 1);
        if (current * next < 0.0) {
            return {tau, WindowMethod::kMa};
        }
        current = next;
    }
    throw Error(ErrorCode::kNoSignChange, kModule,
                "autocorrelation keeps its sign up to lag " + std::to_string(limit));
}

WindowChoice select_window_confband(const TimeSeries& series, double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw Error(ErrorCode::kInvalidArgument, kModule, "confidence level must lie in (0, 1)");
    }
    const auto x = series.values();
    const std::size_t n = series.size();
    const int limit = static_cast<int>(half(n));
    if (limit < 2) {
        throw Error(ErrorCode::kWindowOutOfRange, kModule, "series too short for any window");
    }
    const double z = boost::math::quantile(boost::math::normal(), 0.5 + level / 2.0);
    auto normalized = [&](int tau) {
        return autocorrelation_at(x, tau) / static_cast<double>(n - static_cast<std::size_t>(tau));
    };
    double previous = normalized(1);
    for (int tau = 2; tau <= limit; ++tau) {
        const double r = normalized(tau);
        const double band = z / std::sqrt(static_cast<double>(n - static_cast<std::size_t>(tau)));
        if (std::abs(r) <= band || previous * r < 0.0) {
            return {tau, WindowMethod::kConfBand};
        }
        previous = r;
    }
    throw Error(ErrorCode::kNoCrossing, kModule,
                "autocorrelation stays outside the white-noise band up to lag " +
                    std::to_string(limit));
}

LogBounds log_bounds(std::size_t length) {
    if (length < 8) {
        throw Error(ErrorCode::kTooShort, kModule, "log bounds need N >= 8");
    }
    const double ln = std::log(static_cast<double>(length));
    const int upper = static_cast<int>(half(length));
    const int lo = static_cast<int>(std::ceil(std::pow(ln, 1.5)));
    const int hi = static_cast<int>(std::floor(std::pow(ln, 2.5)));
    return {std::clamp(lo, 2, upper), std::clamp(hi, 2, upper)};
}

WindowChoice big_multiple_window(std::size_t length) {
    const double limit = static_cast<double>(length) / 2.0;
    if (limit <= kMeanYearDays) {
        throw Error(ErrorCode::kTooShort, kModule,
                    "N/2 = " + std::to_string(limit) + " does not exceed one mean year");
    }
    int m = 1;
    while (static_cast<double>(m + 1) * kMeanYearDays < limit) ++m;
    return {static_cast<int>(std::floor(m * kMeanYearDays)), WindowMethod::kBig};
}

WindowChoice select_window(const TimeSeries& series, const WindowSpec& spec) {
    switch (spec.method) {
        case WindowMethod::kMa:
        case WindowMethod::kConfBand:
            try {
                return spec.method == WindowMethod::kMa ? select_window_ma(series)
                                                        : select_window_confband(series, spec.level);
            } catch (const Error& e) {
                const bool recoverable = e.code() == ErrorCode::kNoSignChange ||
                                         e.code() == ErrorCode::kNoCrossing;
                if (!spec.fallback_to_log_lo || !recoverable) throw;
                return {log_bounds(series.size()).lo, WindowMethod::kLogLo, true};
            }
        case WindowMethod::kLogLo: return {log_bounds(series.size()).lo, WindowMethod::kLogLo};
        case WindowMethod::kLogHi: return {log_bounds(series.size()).hi, WindowMethod::kLogHi};
        case WindowMethod::kBig: return big_multiple_window(series.size());
        case WindowMethod::kFixed:
            check_window(series.size(), spec.fixed);
            return {spec.fixed, WindowMethod::kFixed};
    }
    throw Error(ErrorCode::kInvalidArgument, kModule, "unknown window method");
}

}  // namespace ssakit
