#include "ssakit/series.hpp"

#include "ssakit/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ssakit {

namespace {
constexpr std::string_view kModule = "series-core";
}

TimeSeries::TimeSeries(std::vector<double> values, std::optional<Date> start_date, std::string name)
    : values_(std::move(values)), start_date_(start_date), name_(std::move(name)) {
    if (values_.empty()) {
        throw Error(ErrorCode::kEmptyInput, kModule, "time series has no samples");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw Error(ErrorCode::kInvalidArgument, kModule,
                        "non-finite sample at index " + std::to_string(i));
        }
    }
    if (start_date_ && !start_date_->ok()) {
        throw Error(ErrorCode::kInvalidArgument, kModule, "invalid start date");
    }
}

Date TimeSeries::date_at(std::size_t i) const {
    if (!start_date_) {
        throw Error(ErrorCode::kInvalidArgument, kModule, "series has no calendar anchoring");
    }
    return Date{std::chrono::sys_days{*start_date_} + std::chrono::days{static_cast<long>(i)}};
}

TimeSeries TimeSeries::prefix(std::size_t n) const {
    if (n == 0 || n > values_.size()) {
        throw Error(ErrorCode::kIndexOutOfRange, kModule,
                    "prefix length " + std::to_string(n) + " outside [1, " +
                        std::to_string(values_.size()) + "]");
    }
    return TimeSeries({values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(n)},
                      start_date_, name_);
}

TimeSeries TimeSeries::affine(double a, double b) const {
    std::vector<double> out(values_.size());
    std::transform(values_.begin(), values_.end(), out.begin(),
                   [a, b](double x) { return a * x + b; });
    return TimeSeries(std::move(out), start_date_, name_);
}

double TimeSeries::min() const { return *std::min_element(values_.begin(), values_.end()); }
double TimeSeries::max() const { return *std::max_element(values_.begin(), values_.end()); }

AntiDiagonalWeights::AntiDiagonalWeights(int rows, int cols) {
    if (rows < 1 || cols < 1) {
        throw Error(ErrorCode::kInvalidArgument, kModule, "matrix dimensions must be positive");
    }
    const std::int64_t n = rows + cols - 1;
    weights_.resize(static_cast<std::size_t>(n));
    for (std::int64_t i = 1; i <= n; ++i) {
        weights_[static_cast<std::size_t>(i - 1)] =
            std::min({i, std::int64_t{rows}, std::int64_t{cols}, n - i + 1});
    }
}

std::int64_t AntiDiagonalWeights::sum() const {
    return std::accumulate(weights_.begin(), weights_.end(), std::int64_t{0});
}

AntiDiagonalWeights antidiagonal_weights(int rows, int cols) { return {rows, cols}; }

void check_window(std::size_t series_length, int window) {
    const std::size_t upper = (series_length + 1) / 2;
    if (window < 2 || static_cast<std::size_t>(window) > upper) {
        throw Error(ErrorCode::kWindowOutOfRange, kModule,
                    "window length " + std::to_string(window) + " outside [2, " + std::to_string(upper) +
                        "] for N = " + std::to_string(series_length));
    }
}

TrajectoryMatrix embed(const TimeSeries& series, int window) {
    check_window(series.size(), window);
    const Eigen::Index rows = window;
    const Eigen::Index cols = static_cast<Eigen::Index>(series.size()) - window + 1;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            m(i, j) = series[static_cast<std::size_t>(i + j)];
        }
    }
    return TrajectoryMatrix(std::move(m));
}

TimeSeries inverse_embed(const Eigen::MatrixXd& matrix) {
    const Eigen::Index rows = matrix.rows();
    const Eigen::Index cols = matrix.cols();
    if (rows == 0 || cols == 0) {
        throw Error(ErrorCode::kEmptyInput, kModule, "empty matrix");
    }
    const double tol = kHankelTolerance * matrix.cwiseAbs().maxCoeff();
    std::vector<double> out(static_cast<std::size_t>(rows + cols - 1));
    for (Eigen::Index k = 0; k < rows + cols - 1; ++k) {
        // Walk A_k from its top-right end: row i, column k - i.
        const Eigen::Index i0 = std::max<Eigen::Index>(0, k - cols + 1);
        const Eigen::Index i1 = std::min(k, rows - 1);
        const double ref = matrix(i0, k - i0);
        for (Eigen::Index i = i0 + 1; i <= i1; ++i) {
            if (std::abs(matrix(i, k - i) - ref) > tol) {
                throw Error(ErrorCode::kNotHankel, kModule,
                            "anti-diagonal " + std::to_string(k + 1) + " is not constant");
            }
        }
        out[static_cast<std::size_t>(k)] = ref;
    }
    return TimeSeries(std::move(out));
}

}  // namespace ssakit
