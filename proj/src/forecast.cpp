#include "ssakit/forecast.hpp"

#include "ssakit/error.hpp"

#include <cmath>

namespace ssakit {

namespace {

constexpr std::string_view kModule = "forecast";

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& u, const std::vector<int>& cols) {
    Eigen::MatrixXd out(u.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        out.col(static_cast<Eigen::Index>(c)) = u.col(cols[c]);
    }
    return out;
}

}  // namespace

ForecastModel::ForecastModel(const Decomposition& d, const Grouping& group)
    : window_(d.window()), length_(d.length()), group_(group) {
    d.check_grouping(group);
    const int l = window_;
    std::vector<int> inside, outside;
    for (int k = 1; k <= l; ++k) (group.contains(k) ? inside : outside).push_back(k - 1);
    complement_ = outside.size() < inside.size();
    basis_ = select_columns(d.left_vectors(), complement_ ? outside : inside);

    const Eigen::VectorXd pi = basis_.row(l - 1).transpose();
    const auto upper = basis_.topRows(l - 1);
    verticality_ = complement_ ? 1.0 - pi.squaredNorm() : pi.squaredNorm();
    if (verticality_ >= 1.0 - kVerticalityTolerance) {
        throw Error(ErrorCode::kVerticalSubspace, kModule,
                    "e_L lies in the signal subspace (upsilon^2 = " + std::to_string(verticality_) +
                        ") for grouping " + group.label());
    }
    // sum over all columns of U of u_{L,i} U_i' vanishes, hence the sign flip.
    recurrence_ = (complement_ ? -1.0 : 1.0) * (upper * pi) / (1.0 - verticality_);

    const Eigen::VectorXd x_last = d.lagged_vector(d.columns() - 1);
    const Eigen::VectorXd proj = basis_ * (basis_.transpose() * x_last);
    last_column_ = complement_ ? Eigen::VectorXd(x_last - proj) : proj;
}

double ForecastModel::coefficient(int k) const {
    if (k < 1 || k > window_ - 1) {
        throw Error(ErrorCode::kIndexOutOfRange, kModule, "coefficient index outside [1, L-1]");
    }
    return recurrence_(window_ - 1 - k);
}

Eigen::VectorXd ForecastModel::project(const Eigen::VectorXd& v) const {
    const auto upper = basis_.topRows(window_ - 1);
    const Eigen::VectorXd coords = upper.transpose() * v;
    Eigen::VectorXd out = upper * coords;
    if (complement_) out = v - out;
    out += (1.0 - verticality_) * recurrence_.dot(v) * recurrence_;
    return out;
}

Eigen::MatrixXd ForecastModel::projector() const {
    const Eigen::Index n = window_ - 1;
    const auto upper = basis_.topRows(n);
    Eigen::MatrixXd p = upper * upper.transpose();
    if (complement_) p = Eigen::MatrixXd::Identity(n, n) - p;
    p += (1.0 - verticality_) * recurrence_ * recurrence_.transpose();
    return p;
}

Eigen::VectorXd ForecastModel::advance(const Eigen::VectorXd& z) const {
    const Eigen::VectorXd tail = z.tail(window_ - 1);
    Eigen::VectorXd next(window_);
    next.head(window_ - 1) = project(tail);
    next(window_ - 1) = recurrence_.dot(tail);
    return next;
}

ForecastModel fit_lre(const Decomposition& d, const Grouping& group) { return {d, group}; }

namespace {

// Runs the recurrence for L - 1 + h steps from X_{I,K}. Column K + s holds
// series indices K + s .. K + s + L - 1; every forecast index N + k is covered
// by exactly L of these columns. When `sums` is given, all iterated entries are
// accumulated into it (indexed from series position 0).
std::vector<double> iterate(const ForecastModel& model, int horizon, std::vector<double>* sums) {
    const int l = model.window();
    const auto n = static_cast<Eigen::Index>(model.length());
    const Eigen::Index k_cols = n - l + 1;
    std::vector<double> forecast(static_cast<std::size_t>(horizon), 0.0);
    Eigen::VectorXd z = model.last_lagged_vector();
    for (int s = 1; s <= l - 1 + horizon; ++s) {
        z = model.advance(z);
        for (int i = 1; i <= l; ++i) {
            const int k = i + s - l;  // forecast step of this entry
            if (k >= 1 && k <= horizon) forecast[static_cast<std::size_t>(k - 1)] += z(i - 1);
            if (sums) (*sums)[static_cast<std::size_t>(k_cols + s - 1 + i - 1)] += z(i - 1);
        }
    }
    for (double& v : forecast) {
        v /= static_cast<double>(l);
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::kNumericalFailure, kModule,
                        "recurrence diverged for grouping " + model.group().label());
        }
    }
    return forecast;
}

void check_horizon(int horizon) {
    if (horizon < 1) {
        throw Error(ErrorCode::kInvalidArgument, kModule, "horizon must be at least 1");
    }
}

}  // namespace

ForecastResult vector_forecast(const ForecastModel& model, int horizon) {
    check_horizon(horizon);
    return {horizon, iterate(model, horizon, nullptr), std::nullopt};
}

ForecastResult vector_forecast(const Decomposition& d, const Grouping& group, int horizon,
                               bool with_extension) {
    check_horizon(horizon);
    const ForecastModel model = fit_lre(d, group);
    if (!with_extension) return vector_forecast(model, horizon);

    const int l = d.window();
    const Eigen::Index k_cols = d.columns();
    const Eigen::Index total_cols = static_cast<Eigen::Index>(d.length()) + horizon;
    std::vector<double> sums(static_cast<std::size_t>(total_cols + l - 1), 0.0);
    // Columns 1..K: the grouped (un-Hankelized) trajectory matrix X_I.
    Eigen::MatrixXd u_group(l, static_cast<Eigen::Index>(group.size()));
    for (std::size_t c = 0; c < group.size(); ++c) {
        u_group.col(static_cast<Eigen::Index>(c)) = d.left_vectors().col(group.indices()[c] - 1);
    }
    for (Eigen::Index j = 0; j < k_cols; ++j) {
        const Eigen::VectorXd col = u_group * (u_group.transpose() * d.lagged_vector(j));
        for (int i = 0; i < l; ++i) sums[static_cast<std::size_t>(j + i)] += col(i);
    }
    ForecastResult result{horizon, iterate(model, horizon, &sums), std::nullopt};
    const AntiDiagonalWeights w(l, static_cast<int>(total_cols));
    for (std::size_t n = 0; n < sums.size(); ++n) sums[n] /= static_cast<double>(w[n]);
    result.full_extension = TimeSeries(std::move(sums));
    return result;
}

}  // namespace ssakit
