#pragma once

#include "ssakit/error.hpp"
#include "ssakit/evaluation.hpp"
#include "ssakit/io.hpp"
#include "ssakit/report.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ssakit {

/// Exit statuses of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitUnexpected = 1,
    kExitUsage = 2,
    kExitInput = 3,
    kExitDomain = 4,
    kExitIo = 5,
};

struct RunConfig {
    /// decompose | select-window | forecast | evaluate | sweep | strategy
    std::string command;
    std::filesystem::path input;
    ColumnMap columns;
    /// auto-ma | ma | confband | log-lo | log-hi | big | fixed:<L>
    std::string window = "auto-ma";
    /// auto-wcor[:k] | prefix:<M> | set:<i,j,...> | all-but-last | sweep | strategy
    std::vector<std::string> groupings;
    int horizon = 30;
    std::uint64_t seed = 0;
    /// 0: SSAKIT_JOBS, else the hardware concurrency.
    unsigned jobs = 0;
    int day_stride = 1;
    std::optional<std::filesystem::path> output;
    ReportFormat format = ReportFormat::kCsv;
    std::size_t test_suffix = 365;
    /// Components listed by `decompose` (0 = all).
    int components = 0;
};

WindowSpec parse_window_spec(const std::string& text);
GroupingSpec parse_grouping_spec(const std::string& text);

/// Throws InvalidArgument for inconsistent settings.
void validate(const RunConfig& config);

/// Executes one subcommand. Diagnostics go to err, tabular results to out when
/// no output path is set.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses arguments and runs.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int exit_code_for(ErrorCode code);

}  // namespace ssakit
