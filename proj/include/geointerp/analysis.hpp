#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geointerp/curve.hpp"
#include "geointerp/errors.hpp"
#include "geointerp/geometry.hpp"
#include "geointerp/solver.hpp"

namespace geointerp::analysis {

enum class CurveKind { circle_arc, ellipse_arc, parabola, log_spiral, custom_samples };

std::string_view to_string(CurveKind kind) noexcept;

/// Smooth parametric data curve g over [lo, hi].
///
///   circle_arc    r (cos xi, sin xi)
///   ellipse_arc   (a cos xi, b sin xi)
///   parabola      (xi, c xi^2)
///   log_spiral    exp(k xi) (cos xi, sin xi)
///   custom_samples  C1 cubic Hermite through samples, Catmull-Rom slopes
///
/// The first four are strictly convex (circle, ellipse and spiral while the
/// interval spans less than pi of turning).
class DataCurve {
public:
    static DataCurve circle_arc(double radius, double lo, double hi);
    static DataCurve ellipse_arc(double semi_a, double semi_b, double lo, double hi);
    static DataCurve parabola(double curvature, double lo, double hi);
    static DataCurve log_spiral(double growth, double lo, double hi);
    static DataCurve custom_samples(std::vector<double> params, std::vector<Point> samples);

    CurveKind kind() const noexcept { return kind_; }
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }

    Point operator()(double xi) const noexcept;
    Point derivative(double xi) const noexcept;

    /// Same curve on a sub-interval of its domain.
    DataCurve restricted(double lo, double hi) const;

private:
    DataCurve(CurveKind kind, double p0, double p1, double lo, double hi);

    CurveKind kind_;
    double p0_ = 0.0;
    double p1_ = 0.0;
    double lo_ = 0.0;
    double hi_ = 1.0;
    std::vector<double> knots_;
    std::vector<Point> samples_;
    std::vector<Point> slopes_;
};

/// g at each xi. Throws OutOfInterval if xi is not strictly increasing inside
/// the curve's interval.
PointSequence sample_points(const DataCurve& g, std::span<const double> xi);

/// 2n equally spaced parameters covering [lo, hi].
std::vector<double> equal_spacing(double lo, double hi, int count);

enum class ParamScheme { uniform, chordal, centripetal };

std::string_view to_string(ParamScheme scheme) noexcept;

/// Parameters in [0, 1] assigned in advance: uniform l / (2n-1), or cumulative
/// |ΔT| (chordal) or |ΔT|^(1/2) (centripetal), normalised to end at 1.
std::vector<double> fixed_parameters(const PointSequence& pts, ParamScheme scheme);

struct FixedParamCurve {
    std::vector<double> params;
    curve::PolynomialCurve curve;
};

/// Degree 2n-1 component-wise interpolant through all 2n points with
/// parameters assigned by `scheme`.
FixedParamCurve fixed_param_interpolant(const PointSequence& pts, ParamScheme scheme);

/// (g(xi) - p(t)) . p'(t); zero at the normal reparametrization.
double orthogonality_residual(const DataCurve& g, const curve::PolynomialCurve& p, double t,
                              double xi) noexcept;

/// Normal reparametrization phi(t): the xi in [lo, hi] at which g(xi) - p(t)
/// is orthogonal to the interpolant's tangent p'(t). Bisection down to
/// machine resolution. Throws NoSignChange.
double normal_reparametrization(const DataCurve& g, const curve::PolynomialCurve& p, double t,
                                double lo, double hi);

struct ErrorSample {
    double t = 0.0;
    double xi = 0.0;
    Point difference;  ///< g(phi(t)) - p(t)
};

struct ErrorProfile {
    std::vector<ErrorSample> samples;
    /// max over samples of |difference|_inf
    double max_error = 0.0;
};

/// Parametric difference g o phi - p on a uniform grid of `grid_size`
/// parameters in [0, 1]. `t` and `xi` are the matched interpolation
/// parameters; each bisection is bracketed by neighbouring xi values.
ErrorProfile error_profile(const DataCurve& g, const curve::PolynomialCurve& p,
                           const solver::ParameterVector& t, std::span<const double> xi,
                           std::size_t grid_size = 512);

struct OrderOptions {
    std::size_t grid_size = 512;
    /// Number of trailing scales in the least-squares fit; 0 picks
    /// max(3, num_scales / 3).
    std::size_t fit_scales = 0;
    bool parallel = true;
    solver::SolverOptions solver;
};

struct OrderEstimate {
    /// Interval length relative to the initial one, shrink^k.
    std::vector<double> scales;
    std::vector<double> errors;
    /// log(e_k / e_{k-1}) / log(h_k / h_{k-1}), one fewer than scales.
    std::vector<double> slopes;
    double final_order = 0.0;
    /// False when the fitted errors sit at rounding level (e.g. data already
    /// reproduced exactly), making the slope meaningless.
    bool reliable = true;
};

/// A scale whose solve failed; carries the scales completed before it.
class OrderSolveFailed : public SolveFailed {
public:
    OrderSolveFailed(const std::string& what, OrderEstimate partial)
        : SolveFailed(what, partial.scales.size()), partial_(std::move(partial)) {}

    const OrderEstimate& partial() const noexcept { return partial_; }

private:
    OrderEstimate partial_;
};

/// Least-squares slope of log(errors) against log(scales).
double fit_log_slope(std::span<const double> scales, std::span<const double> errors);

/// Shrinks g's interval about its left end by shrink^k, k = 0..num_scales-1,
/// samples 2n equally spaced points, solves, and records the maximal normal
/// error. Throws OrderSolveFailed.
OrderEstimate estimate_order(const DataCurve& g, int n, std::size_t num_scales, double shrink,
                             const OrderOptions& options = {});

}  // namespace geointerp::analysis
