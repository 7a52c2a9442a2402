#pragma once

// The l0reg command line, callable in-process for testing.

#include "l0reg/problem_io.hpp"

#include <array>
#include <ostream>
#include <string>
#include <vector>

namespace l0reg::cli {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kOk = 0, kUsage = 2, kBudget = 3, kSolver = 4 };

struct Grid {
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
    std::size_t steps = 0;
};

/// "xmin,xmax,ymin,ymax,steps"; steps >= 2 and min < max.
Grid parse_grid(const std::string& text);

/// Grid nodes plus the axis lines x1 = 0, x2 = 0 and the point (0, 1),
/// sorted and deduplicated.
std::vector<std::array<double, 2>> landscape_points(const Grid& grid);

/// CSV rows "x1,x2,g,f,level" for a two-dimensional single-variable problem.
void write_landscape(const ProblemFile& problem, double lambda, const Grid& grid, std::ostream& out);

/// args excludes the program name. Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace l0reg::cli
