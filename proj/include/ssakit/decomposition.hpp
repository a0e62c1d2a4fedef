#pragma once

#include "ssakit/component_set.hpp"
#include "ssakit/series.hpp"

#include <Eigen/Dense>

#include <vector>

namespace ssakit {

enum class SvdBackend {
    /// SVD of the trajectory matrix itself (BDCSVD). Full accuracy, stores V.
    kDirect,
    /// Symmetric eigendecomposition of the L x L lag-covariance X X^T via LAPACK.
    /// Much cheaper for long windows; singular values below ~sqrt(eps) * sigma_1
    /// lose relative accuracy and V is not stored.
    kLagCovariance,
    /// kDirect up to kAutoBackendWindow, kLagCovariance beyond.
    kAuto,
};

inline constexpr int kAutoBackendWindow = 64;

/// Eigentriples (sigma_k, U_k, V_k) of a trajectory matrix, sigma non-increasing.
/// Each (U_k, V_k) pair is signed so that the largest-magnitude entry of U_k is
/// positive. Components with equal singular values keep the backend order, so
/// their identity is not unique.
class Decomposition {
public:
    Decomposition(std::vector<double> series, Eigen::VectorXd singular_values,
                  Eigen::MatrixXd left_vectors, Eigen::MatrixXd right_vectors);

    int window() const noexcept { return static_cast<int>(left_.rows()); }
    Eigen::Index columns() const noexcept {
        return static_cast<Eigen::Index>(series_.size()) - left_.rows() + 1;
    }
    std::size_t length() const noexcept { return series_.size(); }
    std::span<const double> series() const noexcept { return series_; }

    const Eigen::VectorXd& singular_values() const noexcept { return sigma_; }
    const Eigen::MatrixXd& left_vectors() const noexcept { return left_; }
    bool has_right_vectors() const noexcept { return right_.size() > 0; }
    /// K x L; throws InvalidArgument for decompositions built without V.
    const Eigen::MatrixXd& right_vectors() const;

    /// sigma_k V_k for 1-based k. Uses X^T U_k when V was not stored.
    Eigen::VectorXd scaled_right_vector(int k) const;

    /// Lagged vector X_j (0-based column j).
    Eigen::Map<const Eigen::VectorXd> lagged_vector(Eigen::Index j) const;

    void check_component(int k) const;
    void check_grouping(const Grouping& group) const;

private:
    std::vector<double> series_;
    Eigen::VectorXd sigma_;
    Eigen::MatrixXd left_;
    Eigen::MatrixXd right_;
};

Decomposition decompose(const TrajectoryMatrix& matrix);
Decomposition decompose(const TimeSeries& series, int window,
                        SvdBackend backend = SvdBackend::kDirect);

/// sigma_k U_k V_k^T for 1-based k.
Eigen::MatrixXd elementary_matrix(const Decomposition& d, int k);

/// Replaces every anti-diagonal with its arithmetic mean.
Eigen::MatrixXd hankelize(const Eigen::MatrixXd& matrix);

/// Anti-diagonal means of a matrix as a sequence of length rows + cols - 1.
std::vector<double> diagonal_average(const Eigen::MatrixXd& matrix);

/// Diagonal average of the rank-1 matrix u v^T without materializing it.
std::vector<double> diagonal_average(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

struct ElementarySeries {
    int index;
    TimeSeries series;
};

ElementarySeries elementary_series(const Decomposition& d, int k);

/// All L elementary series, in component order.
std::vector<ElementarySeries> elementary_series(const Decomposition& d);

/// Sum of the elementary series with indices in the grouping.
TimeSeries reconstruct(const Decomposition& d, const Grouping& group);

}  // namespace ssakit
