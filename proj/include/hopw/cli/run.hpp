#pragma once

#include <iosfwd>
#include <map>
#include <string>

#include "hopw/cli/manifest.hpp"

namespace hopw::cli {

enum ExitCode { exit_ok = 0, exit_usage = 2, exit_validation = 3, exit_numerical = 4 };

/// Runs the fig1..fig6 pipeline and writes its manifest.
void run_figure(const std::string& fig, const RunConfig& config);

/// Ad-hoc evaluation: packet, partialwave, coeffs, density, spin or norm.
/// flags holds --name value pairs without the dashes.
void run_eval(const std::string& subcommand, const RunConfig& config, const std::map<std::string, std::string>& flags,
              std::ostream& out);

/// Offset along `axis` of the plane perpendicular to it that carries the most
/// probability, located on a sampled plane containing the axis.
double locate_cut_offset(const SpinorSystem& system, int axis, double t, double extent, int points, unsigned threads);

/// Maps the exception in flight to an exit code and prints it to err.
int report_error(std::ostream& err);

/// Whole command line, as used by the simulate tool.
int run_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace hopw::cli
