#include "ssakit/baselines.hpp"

#include "ssakit/error.hpp"

#include <Eigen/Dense>

#include <random>

namespace ssakit {

namespace {

constexpr std::string_view kModule = "baselines";

void check_inputs(std::span<const double> observed, int horizon) {
    if (observed.empty()) {
        throw Error(ErrorCode::kEmptyInput, kModule, "no observations");
    }
    if (horizon < 1) {
        throw Error(ErrorCode::kInvalidArgument, kModule, "horizon must be at least 1");
    }
}

}  // namespace

std::string to_string(BaselineKind kind) {
    switch (kind) {
        case BaselineKind::kRandom: return "random";
        case BaselineKind::kConstant: return "constant";
        case BaselineKind::kPolyreg: return "polyreg";
    }
    return "unknown";
}

ForecastResult constant_forecast(std::span<const double> observed, int horizon) {
    check_inputs(observed, horizon);
    return {horizon, std::vector<double>(static_cast<std::size_t>(horizon), observed.back()),
            std::nullopt};
}

ForecastResult random_forecast(std::span<const double> observed, int horizon, std::uint64_t seed) {
    check_inputs(observed, horizon);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, observed.size() - 1);
    std::vector<double> values(static_cast<std::size_t>(horizon));
    for (double& v : values) v = observed[pick(rng)];
    return {horizon, std::move(values), std::nullopt};
}

ForecastResult polyreg_forecast(std::span<const double> observed, int horizon, int degree) {
    check_inputs(observed, horizon);
    if (degree < 0) {
        throw Error(ErrorCode::kInvalidArgument, kModule, "polynomial degree must be non-negative");
    }
    const auto n = static_cast<Eigen::Index>(observed.size());
    if (n <= degree) {
        throw Error(ErrorCode::kInsufficientData, kModule,
                    std::to_string(n) + " observations cannot determine a degree-" +
                        std::to_string(degree) + " polynomial");
    }
    const double center = (static_cast<double>(n) + 1.0) / 2.0;
    const double scale = n > 1 ? (static_cast<double>(n) - 1.0) / 2.0 : 1.0;
    auto design_row = [&](double t) {
        Eigen::RowVectorXd row(degree + 1);
        const double u = (t - center) / scale;
        double p = 1.0;
        for (int k = 0; k <= degree; ++k, p *= u) row(k) = p;
        return row;
    };
    Eigen::MatrixXd a(n, degree + 1);
    for (Eigen::Index i = 0; i < n; ++i) a.row(i) = design_row(static_cast<double>(i + 1));
    const Eigen::Map<const Eigen::VectorXd> y(observed.data(), n);
    const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(y);

    std::vector<double> values(static_cast<std::size_t>(horizon));
    for (int k = 1; k <= horizon; ++k) {
        values[static_cast<std::size_t>(k - 1)] = design_row(static_cast<double>(n + k)).dot(coef);
    }
    return {horizon, std::move(values), std::nullopt};
}

}  // namespace ssakit
