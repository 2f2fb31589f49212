#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geointerp/analysis.hpp"

namespace geointerp::cli {

enum ExitCode : int { exit_ok = 0, exit_domain_failure = 1, exit_usage = 2 };

enum class Command { check, solve, curve, order, sample, compare };

struct JobConfig {
    Command command = Command::check;
    std::string input;
    std::string curve_spec;
    int n = 0;  ///< 0: taken from the input
    double tolerance = 1e-12;
    int max_iterations = 100;
    std::uint64_t seed = 0x5eed;
    bool closed_form = false;
    bool trace = false;
    std::string csv_out;
    std::string svg_out;
    std::size_t samples = 101;
    std::size_t scales = 10;
    double shrink = 0.8;
    std::size_t grid = 512;
    std::optional<analysis::ParamScheme> scheme;  ///< compare: all three when unset
    int width = 640;
    int height = 480;

    /// Throws InvalidArgument on non-positive tolerances, n < 2 where n is
    /// required, or a missing input.
    void validate() const;
};

/// Built-in data curve from "kind[:param=value,...]", e.g.
/// "circle:radius=2,start=0,end=1.2". Kinds and parameters:
///   circle    radius=1 start=0 end=pi/2
///   ellipse   a=2 b=1 start=0 end=pi/2
///   parabola  c=1 start=0 end=3
///   spiral    k=0.2 start=0 end=pi/2
/// Throws InvalidArgument.
analysis::DataCurve parse_curve_spec(std::string_view spec);

/// Runs one subcommand; `args` excludes the program name. Results go to
/// `out`, diagnostics (GEOINTERP_LOG=off|info|trace) and errors to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int dispatch(int argc, char** argv);

}  // namespace geointerp::cli
