#pragma once

#include <Eigen/Dense>

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ssakit {

using Date = std::chrono::year_month_day;

/// Real-valued, regularly sampled (daily) series. Values are immutable once
/// constructed; all samples are finite.
class TimeSeries {
public:
    explicit TimeSeries(std::vector<double> values, std::optional<Date> start_date = std::nullopt,
                        std::string name = {});

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }
    const std::optional<Date>& start_date() const noexcept { return start_date_; }
    const std::string& name() const noexcept { return name_; }

    /// Calendar date of sample i (0-based). Requires a start date.
    Date date_at(std::size_t i) const;

    /// The first n samples, keeping the calendar anchoring.
    TimeSeries prefix(std::size_t n) const;

    /// a * x + b, elementwise.
    TimeSeries affine(double a, double b = 0.0) const;

    double min() const;
    double max() const;

private:
    std::vector<double> values_;
    std::optional<Date> start_date_;
    std::string name_;
};

/// L x K Hankel matrix of lagged vectors, K = N - L + 1 >= L. Only produced by embed().
class TrajectoryMatrix {
public:
    const Eigen::MatrixXd& entries() const noexcept { return entries_; }
    Eigen::Index window() const noexcept { return entries_.rows(); }
    Eigen::Index columns() const noexcept { return entries_.cols(); }

private:
    friend TrajectoryMatrix embed(const TimeSeries& series, int window);
    explicit TrajectoryMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {}

    Eigen::MatrixXd entries_;
};

/// Anti-diagonal sizes |A_i| of an L x K matrix, i = 1..L+K-1.
class AntiDiagonalWeights {
public:
    AntiDiagonalWeights(int rows, int cols);

    std::size_t size() const noexcept { return weights_.size(); }
    std::int64_t operator[](std::size_t i) const { return weights_[i]; }
    std::span<const std::int64_t> values() const noexcept { return weights_; }
    std::int64_t sum() const;

private:
    std::vector<std::int64_t> weights_;
};

/// Throws WindowOutOfRange unless 2 <= window <= K = N - window + 1.
void check_window(std::size_t series_length, int window);

TrajectoryMatrix embed(const TimeSeries& series, int window);

/// Relative tolerance for the Hankel check in inverse_embed.
inline constexpr double kHankelTolerance = 1e-9;

/// Series of length rows + cols - 1 read off the anti-diagonals. Throws
/// NotHankel if an anti-diagonal varies by more than kHankelTolerance * max|entry|.
TimeSeries inverse_embed(const Eigen::MatrixXd& matrix);

AntiDiagonalWeights antidiagonal_weights(int rows, int cols);

}  // namespace ssakit
