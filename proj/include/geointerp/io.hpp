#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "geointerp/admissibility.hpp"
#include "geointerp/curve.hpp"
#include "geointerp/geometry.hpp"
#include "geointerp/solver.hpp"

namespace geointerp::io {

/// printf "%.17g"; round-trips every finite double exactly, signed zero
/// included.
std::string format_number(double value);

/// Reads one "x,y" pair per line. '#' starts a comment, blank lines are
/// skipped. Throws ParseError (with 1-based line number), OddCount or TooFew.
PointSequence parse_points(std::istream& in);
PointSequence parse_points(std::string_view text);

/// "x,y" lines readable by parse_points.
std::string emit_points(const PointSequence& pts);

struct SolutionCsvOptions {
    bool include_trace = false;
};

/// Header "t,a,b,residual", one row per data point (residual is
/// |curve(t_l) - T_l|_inf), then residual_norm, iterations and converged
/// trailer lines, then the iteration trace when requested and non-empty.
std::string emit_solution(const solver::SolveResult& result, const curve::PolynomialCurve& curve,
                          const PointSequence& pts, const SolutionCsvOptions& options = {});

struct LabeledCurve {
    curve::PolynomialCurve curve;
    std::string label;
};

struct SvgOptions {
    int width = 640;
    int height = 480;
};

/// Self-contained SVG: one polyline per curve (uniform t samples), a circle
/// per data point and a legend. The view box is the data bounding box plus a
/// 5% margin; coordinates are printed with 6 decimals in data units.
std::string emit_svg(const PointSequence& pts, const std::vector<LabeledCurve>& curves,
                     std::size_t samples_per_curve, const SvgOptions& options = {});

/// {"theorem1":{"pass":..,"signs":{"differences":..,"determinants":..}},
///  "theorem2":{"pass":..,"sign":..},"transform":[[..],[..]] | null}
std::string admissibility_json(const admissibility::AdmissibilityReport& report);

}  // namespace geointerp::io
