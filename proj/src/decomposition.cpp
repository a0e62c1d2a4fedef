#include "ssakit/decomposition.hpp"

#include "ssakit/error.hpp"

#include "blas_guard.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>

namespace ssakit {

namespace {

constexpr std::string_view kModule = "decomposition";

// Flip each (U_k, V_k) pair so that the largest-magnitude entry of U_k is positive.
void apply_sign_convention(Eigen::MatrixXd& left, Eigen::MatrixXd& right) {
    for (Eigen::Index k = 0; k < left.cols(); ++k) {
        Eigen::Index arg = 0;
        left.col(k).cwiseAbs().maxCoeff(&arg);
        if (left(arg, k) < 0.0) {
            left.col(k) = -left.col(k);
            if (right.size() > 0) {
                right.col(k) = -right.col(k);
            }
        }
    }
}

Decomposition decompose_direct(std::vector<double> series, const Eigen::MatrixXd& x) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
        throw Error(ErrorCode::kNumericalFailure, kModule, "SVD did not converge");
    }
    Eigen::MatrixXd left = svd.matrixU();
    Eigen::MatrixXd right = svd.matrixV();
    apply_sign_convention(left, right);
    return Decomposition(std::move(series), svd.singularValues(), std::move(left), std::move(right));
}

// C(i, j) = sum_k x[i + k] x[j + k] over the K lagged vectors, built from the
// first row by the sliding update C(i+1, j+1) = C(i, j) - x_i x_j + x_{i+K} x_{j+K}.
Eigen::MatrixXd lag_covariance(std::span<const double> x, int window) {
    const Eigen::Index rows = window;
    const Eigen::Index cols = static_cast<Eigen::Index>(x.size()) - window + 1;
    Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
    Eigen::MatrixXd c(rows, rows);
    for (Eigen::Index j = 0; j < rows; ++j) {
        c(0, j) = v.segment(0, cols).dot(v.segment(j, cols));
    }
    for (Eigen::Index i = 0; i + 1 < rows; ++i) {
        for (Eigen::Index j = i; j + 1 < rows; ++j) {
            c(i + 1, j + 1) = c(i, j) - v(i) * v(j) + v(i + cols) * v(j + cols);
        }
    }
    c.triangularView<Eigen::StrictlyLower>() = c.transpose();
    return c;
}

Decomposition decompose_lag_covariance(std::vector<double> series, int window) {
    Eigen::MatrixXd c = lag_covariance(series, window);
    Eigen::VectorXd eigenvalues(window);
    if (detail::blas_ready()) {
        const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', window, c.data(), window,
                                               eigenvalues.data());
        if (info != 0) {
            throw Error(ErrorCode::kNumericalFailure, kModule,
                        "symmetric eigensolver failed (info " + std::to_string(info) + ")");
        }
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(c);
        if (solver.info() != Eigen::Success) {
            throw Error(ErrorCode::kNumericalFailure, kModule, "symmetric eigensolver failed");
        }
        eigenvalues = solver.eigenvalues();
        c = solver.eigenvectors();
    }
    // Both solvers return ascending eigenvalues.
    Eigen::VectorXd sigma = eigenvalues.reverse().cwiseMax(0.0).cwiseSqrt();
    Eigen::MatrixXd left = c.rowwise().reverse();
    Eigen::MatrixXd none;
    apply_sign_convention(left, none);
    return Decomposition(std::move(series), std::move(sigma), std::move(left), Eigen::MatrixXd{});
}

}  // namespace

Decomposition::Decomposition(std::vector<double> series, Eigen::VectorXd singular_values,
                             Eigen::MatrixXd left_vectors, Eigen::MatrixXd right_vectors)
    : series_(std::move(series)),
      sigma_(std::move(singular_values)),
      left_(std::move(left_vectors)),
      right_(std::move(right_vectors)) {
    const Eigen::Index l = left_.rows();
    if (l < 1 || left_.cols() != l || sigma_.size() != l ||
        static_cast<Eigen::Index>(series_.size()) < 2 * l - 1) {
        throw Error(ErrorCode::kInvalidArgument, kModule, "inconsistent decomposition dimensions");
    }
    if (right_.size() > 0 && (right_.rows() != columns() || right_.cols() != l)) {
        throw Error(ErrorCode::kInvalidArgument, kModule, "right singular vectors have wrong shape");
    }
}

const Eigen::MatrixXd& Decomposition::right_vectors() const {
    if (!has_right_vectors()) {
        throw Error(ErrorCode::kInvalidArgument, kModule,
                    "right singular vectors were not computed by this backend");
    }
    return right_;
}

void Decomposition::check_component(int k) const {
    if (k < 1 || k > window()) {
        throw Error(ErrorCode::kIndexOutOfRange, kModule,
                    "component " + std::to_string(k) + " outside [1, " + std::to_string(window()) +
                        "]");
    }
}

void Decomposition::check_grouping(const Grouping& group) const { check_component(group.largest()); }

Eigen::Map<const Eigen::VectorXd> Decomposition::lagged_vector(Eigen::Index j) const {
    return {series_.data() + j, window()};
}

Eigen::VectorXd Decomposition::scaled_right_vector(int k) const {
    check_component(k);
    if (has_right_vectors()) {
        return sigma_(k - 1) * right_.col(k - 1);
    }
    // sigma_k V_k = X^T U_k
    const Eigen::VectorXd u = left_.col(k - 1);
    Eigen::VectorXd out(columns());
    for (Eigen::Index j = 0; j < out.size(); ++j) {
        out(j) = lagged_vector(j).dot(u);
    }
    return out;
}

Decomposition decompose(const TrajectoryMatrix& matrix) {
    const Eigen::MatrixXd& x = matrix.entries();
    std::vector<double> series(static_cast<std::size_t>(x.rows() + x.cols() - 1));
    for (Eigen::Index j = 0; j < x.cols(); ++j) series[static_cast<std::size_t>(j)] = x(0, j);
    for (Eigen::Index i = 1; i < x.rows(); ++i) {
        series[static_cast<std::size_t>(x.cols() - 1 + i)] = x(i, x.cols() - 1);
    }
    return decompose_direct(std::move(series), x);
}

Decomposition decompose(const TimeSeries& series, int window, SvdBackend backend) {
    check_window(series.size(), window);
    if (backend == SvdBackend::kAuto) {
        backend = window <= kAutoBackendWindow ? SvdBackend::kDirect : SvdBackend::kLagCovariance;
    }
    std::vector<double> values(series.values().begin(), series.values().end());
    if (backend == SvdBackend::kLagCovariance) {
        return decompose_lag_covariance(std::move(values), window);
    }
    return decompose_direct(std::move(values), embed(series, window).entries());
}

Eigen::MatrixXd elementary_matrix(const Decomposition& d, int k) {
    d.check_component(k);
    return d.left_vectors().col(k - 1) * d.scaled_right_vector(k).transpose();
}

std::vector<double> diagonal_average(const Eigen::MatrixXd& matrix) {
    const Eigen::Index rows = matrix.rows();
    const Eigen::Index cols = matrix.cols();
    std::vector<double> sums(static_cast<std::size_t>(rows + cols - 1), 0.0);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            sums[static_cast<std::size_t>(i + j)] += matrix(i, j);
        }
    }
    const AntiDiagonalWeights w(static_cast<int>(rows), static_cast<int>(cols));
    for (std::size_t n = 0; n < sums.size(); ++n) sums[n] /= static_cast<double>(w[n]);
    return sums;
}

std::vector<double> diagonal_average(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
    const Eigen::Index rows = u.size();
    const Eigen::Index cols = v.size();
    std::vector<double> sums(static_cast<std::size_t>(rows + cols - 1), 0.0);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double ui = u(i);
        double* out = sums.data() + i;
        for (Eigen::Index j = 0; j < cols; ++j) out[j] += ui * v(j);
    }
    const AntiDiagonalWeights w(static_cast<int>(rows), static_cast<int>(cols));
    for (std::size_t n = 0; n < sums.size(); ++n) sums[n] /= static_cast<double>(w[n]);
    return sums;
}

Eigen::MatrixXd hankelize(const Eigen::MatrixXd& matrix) {
    const std::vector<double> avg = diagonal_average(matrix);
    Eigen::MatrixXd out(matrix.rows(), matrix.cols());
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
        for (Eigen::Index i = 0; i < out.rows(); ++i) {
            out(i, j) = avg[static_cast<std::size_t>(i + j)];
        }
    }
    return out;
}

ElementarySeries elementary_series(const Decomposition& d, int k) {
    d.check_component(k);
    return {k, TimeSeries(diagonal_average(Eigen::VectorXd(d.left_vectors().col(k - 1)),
                                           d.scaled_right_vector(k)))};
}

std::vector<ElementarySeries> elementary_series(const Decomposition& d) {
    std::vector<ElementarySeries> out;
    out.reserve(static_cast<std::size_t>(d.window()));
    for (int k = 1; k <= d.window(); ++k) out.push_back(elementary_series(d, k));
    return out;
}

TimeSeries reconstruct(const Decomposition& d, const Grouping& group) {
    d.check_grouping(group);
    std::vector<double> sum(d.length(), 0.0);
    for (int k : group.indices()) {
        const ElementarySeries e = elementary_series(d, k);
        for (std::size_t n = 0; n < sum.size(); ++n) sum[n] += e.series[n];
    }
    return TimeSeries(std::move(sum));
}

}  // namespace ssakit
