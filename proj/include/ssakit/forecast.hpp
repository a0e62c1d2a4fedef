#pragma once

#include "ssakit/component_set.hpp"
#include "ssakit/decomposition.hpp"
#include "ssakit/series.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace ssakit {

/// upsilon^2 >= 1 - kVerticalityTolerance means e_L lies (numerically) in the
/// signal subspace and no recurrence can be extracted.
inline constexpr double kVerticalityTolerance = 1e-9;

/// Linear recurrence fitted to the signal subspace span{U_i : i in I}.
///
/// With pi the last row of U_I and U_I' the remaining L-1 rows:
///   upsilon^2 = |pi|^2,  R = U_I' pi / (1 - upsilon^2),
///   Pi = U_I' U_I'^T + (1 - upsilon^2) R R^T  (orthogonal projector onto span U_I').
/// R is the minimum-norm least-squares solution of the recurrence system, so
/// the coefficient a_k of x_{t-k} is R[L-1-k].
///
/// Internally the model keeps whichever of U_I or its complement is smaller;
/// rows of U are orthonormal, so U_I' U_I'^T = Id - U_C' U_C'^T.
class ForecastModel {
public:
    ForecastModel(const Decomposition& d, const Grouping& group);

    int window() const noexcept { return window_; }
    std::size_t length() const noexcept { return length_; }
    const Grouping& group() const noexcept { return group_; }

    /// R, ordered like the coefficient vector (a_{L-1}, ..., a_1).
    const Eigen::VectorXd& recurrence() const noexcept { return recurrence_; }
    /// a_k for 1 <= k <= L-1.
    double coefficient(int k) const;
    /// upsilon^2, the squared cosine between e_L and the signal subspace.
    double verticality() const noexcept { return verticality_; }

    /// Pi applied to a vector of length L-1, without forming Pi.
    Eigen::VectorXd project(const Eigen::VectorXd& v) const;
    /// Pi as a dense (L-1) x (L-1) matrix.
    Eigen::MatrixXd projector() const;

    /// One step of the vector recurrence: (Pi z', R^T z') with z' = z without
    /// its first coordinate.
    Eigen::VectorXd advance(const Eigen::VectorXd& z) const;

    /// Last column of the grouped trajectory matrix X_I, the starting point of
    /// the recurrence.
    const Eigen::VectorXd& last_lagged_vector() const noexcept { return last_column_; }

private:
    int window_;
    std::size_t length_;
    Grouping group_;
    bool complement_;
    Eigen::MatrixXd basis_;  // U_I, or U_C when complement_
    double verticality_;
    Eigen::VectorXd recurrence_;
    Eigen::VectorXd last_column_;
};

/// Throws VerticalSubspace when upsilon^2 >= 1 - kVerticalityTolerance.
ForecastModel fit_lre(const Decomposition& d, const Grouping& group);

struct ForecastResult {
    int horizon;
    std::vector<double> values;
    /// Hankelized and inverse-embedded extension Y, length N + h + L - 1.
    std::optional<TimeSeries> full_extension;
};

/// Forecast (y_{N+1}, ..., y_{N+h}) from an already fitted model.
ForecastResult vector_forecast(const ForecastModel& model, int horizon);

ForecastResult vector_forecast(const Decomposition& d, const Grouping& group, int horizon,
                               bool with_extension = false);

}  // namespace ssakit
