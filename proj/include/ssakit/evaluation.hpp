#pragma once

#include "ssakit/baselines.hpp"
#include "ssakit/component_set.hpp"
#include "ssakit/decomposition.hpp"
#include "ssakit/forecast.hpp"
#include "ssakit/series.hpp"
#include "ssakit/window.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ssakit {

/// Forecasting days D_h and forecasted days F_h (1-based sample positions).
/// The evaluation year is the last calendar year of the data (the last 365
/// samples for series without dates); D_h holds its days j with j + h <= N.
struct ForecastingDays {
    int horizon;
    std::vector<std::size_t> days;
    std::vector<std::size_t> targets;
    /// Position of the first day of the evaluation year.
    std::size_t year_start;
    bool leap_year;
};

/// Throws TooShort if the series covers fewer than two calendar years (730
/// samples without dates) or D_h is empty.
ForecastingDays forecasting_days(const TimeSeries& series, int horizon);

/// How the SSA grouping is obtained on each forecasting day.
struct GroupingSpec {
    enum class Kind {
        kFixed,      ///< the same index set every day
        kAutoWcor,   ///< w-correlation clustering, recomputed daily
        kAllButLast  ///< [L_j - 1]
    };

    Kind kind = Kind::kFixed;
    std::optional<Grouping> fixed;
    int clusters = 2;

    static GroupingSpec set(Grouping g) { return {Kind::kFixed, std::move(g), 2}; }
    static GroupingSpec auto_wcor(int clusters = 2) { return {Kind::kAutoWcor, std::nullopt, clusters}; }
    static GroupingSpec all_but_last() { return {Kind::kAllButLast, std::nullopt, 2}; }

    std::string label() const;
};

struct EvalPlan {
    int h_max = 30;
    WindowSpec window;
    std::vector<GroupingSpec> groupings;
    bool baselines = true;
    int polyreg_degree = kDefaultPolyregDegree;
    std::uint64_t seed = 0;
    /// Evaluate every n-th forecasting day only (1 = the full protocol).
    int day_stride = 1;
    /// Worker threads; 0 means one.
    unsigned jobs = 1;
    SvdBackend backend = SvdBackend::kAuto;
    /// Keep cells where every day failed (statistics become NaN) instead of
    /// throwing AllFailed.
    bool allow_empty_cells = false;
};

/// Error statistics for one (method, grouping, horizon) cell over D_h.
struct ErrorCell {
    std::string method;    ///< "ssa", "random", "constant" or "polyreg"
    std::string grouping;  ///< GroupingSpec label, "-" for baselines
    int horizon;
    double mean_abs;
    double max_abs;
    double mean_rel;
    double max_rel;
    std::size_t count;
    std::size_t failures;
};

/// What happened on one forecasting day.
struct DayRecord {
    std::size_t day;
    int window;  ///< 0 when window selection failed
    std::string window_method;
    /// Grouping actually used per SSA grouping spec (empty when it failed).
    std::vector<std::string> groupings;
    std::vector<std::string> failures;
};

struct ErrorReport {
    double span;
    int h_max;
    std::vector<ErrorCell> cells;
    std::vector<DayRecord> days;
    std::size_t decompositions = 0;

    /// Throws InvalidArgument if absent.
    const ErrorCell& cell(const std::string& method, const std::string& grouping, int horizon) const;

    /// Mean over h of mean_rel (or max_rel) for one method/grouping; NaN if any
    /// horizon has no successful forecast.
    double horizon_average(const std::string& method, const std::string& grouping,
                           bool use_max = false) const;
};

/// mean(|xi|), max(|xi|) and both divided by span. Throws SpanDegenerate for
/// span <= 0 and InvalidArgument for an empty error vector.
ErrorCell summarize_errors(std::span<const double> errors, double span);

/// Window choice on every forecasting day of D_1 (after striding). Failed days
/// get window 0.
std::vector<DayRecord> day_windows(const TimeSeries& series, const EvalPlan& plan);

/// Rolling-origin evaluation: on every day j of D_1 the window is chosen and the
/// prefix x_1..x_j decomposed once; every grouping and horizon reuses that
/// decomposition. Per-day failures are recorded and excluded from the means.
ErrorReport rolling_eval(const TimeSeries& series, const EvalPlan& plan);

/// Same, reusing windows from day_windows().
ErrorReport rolling_eval(const TimeSeries& series, const EvalPlan& plan,
                         const std::vector<DayRecord>& windows);

/// Error surface of the prefix groupings [1]..[L_min], L_min = min_j L_j.
struct SweepSurface {
    int max_prefix;
    int h_max;
    /// Rows are prefix sizes M = 1..max_prefix, columns horizons 1..h_max.
    Eigen::MatrixXd mean_abs;
    Eigen::MatrixXd max_abs;
    Eigen::MatrixXd mean_rel;
    Eigen::MatrixXd max_rel;
    ErrorReport report;
};

SweepSurface sweep_prefix(const TimeSeries& series, const EvalPlan& plan);

/// Smallest window length over the successful days.
int min_window(const std::vector<DayRecord>& windows);

struct OptimalPrefix {
    int m_mean;
    int m_max;
};

/// Argmin over M of the horizon-averaged mean_rel / max_rel; ties go to the
/// smaller M, rows containing NaN are skipped.
OptimalPrefix optimal_prefix(const SweepSurface& surface);
OptimalPrefix optimal_prefix(const Eigen::MatrixXd& mean_rel, const Eigen::MatrixXd& max_rel);

struct NeighborError {
    Grouping group;
    double error;
};

struct LocalMinReport {
    bool is_local_min;
    double center_error;
    std::vector<NeighborError> neighbor_errors;
    int l_min;
};

/// Evaluates [m_star] and every grouping of neighborhood(m_star, L_min) with the
/// rolling protocol. Local minimum iff every neighbor's horizon-averaged error
/// is strictly larger.
LocalMinReport local_min_check(const TimeSeries& series, const EvalPlan& plan, int m_star,
                               bool use_max = false);
LocalMinReport local_min_check(const TimeSeries& series, const EvalPlan& plan, int m_star,
                               const std::vector<DayRecord>& windows, bool use_max = false);

struct GroupingMove {
    enum class Kind { kAdd, kRemove };
    Kind kind;
    int component;

    friend bool operator==(const GroupingMove&, const GroupingMove&) = default;
};

struct LocalSearchResult {
    Grouping best;
    double error;
    std::vector<GroupingMove> moves;
    int iterations;
};

inline constexpr int kLocalSearchIterations = 20;

/// Steepest descent over the one-element neighborhood (additions drawn from
/// [upper]) until no neighbor improves or max_iterations is reached.
LocalSearchResult local_search(const Grouping& start, int upper,
                               const std::function<double(const Grouping&)>& error,
                               int max_iterations = kLocalSearchIterations);

/// Replays moves on another grouping, dropping those that do not apply
/// (removing an absent component, adding a present one or one beyond upper, or
/// emptying the set).
Grouping apply_moves(const Grouping& start, std::span<const GroupingMove> moves, int upper);

/// The final rule of the practitioner strategy: keep the search result grown
/// from {1,2} when its error is not larger, otherwise replay the moves that led
/// from G to M_G on the full-data automatic grouping G'.
Grouping strategy_choice(double pair_error, double auto_error, const Grouping& pair_best,
                         const Grouping& auto_full, std::span<const GroupingMove> auto_moves,
                         int upper);

struct StrategyAudit {
    Grouping auto_group;
    Grouping auto_best;
    double auto_error;
    std::vector<GroupingMove> auto_moves;
    Grouping pair_best;
    double pair_error;
    std::vector<GroupingMove> pair_moves;
    std::optional<Grouping> auto_group_full;
    bool used_pair;
    int window;
    int upper;
};

struct StrategyResult {
    Grouping chosen;
    ForecastResult forecast;
    StrategyAudit audit;
};

/// Holds out the last test_suffix_len samples, searches groupings around the
/// automatic grouping and around {1,2} by their error on the held-out suffix
/// (origins N-T..N-1, horizons up to h_max), then forecasts h_max steps from the
/// full series with the preferred grouping.
StrategyResult practitioner_strategy(const TimeSeries& series, const EvalPlan& plan,
                                     std::size_t test_suffix_len);

}  // namespace ssakit
