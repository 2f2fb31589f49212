#pragma once

#include "geointerp/geometry.hpp"
#include "geointerp/polyalg.hpp"
#include "geointerp/solver.hpp"

namespace geointerp::curve {

/// Planar parametric polynomial curve t -> (x(t), y(t)) over [0, 1].
struct PolynomialCurve {
    polyalg::Polynomial1D x;
    polyalg::Polynomial1D y;
    int degree_bound = 0;
};

Point eval_curve(const PolynomialCurve& curve, double t) noexcept;
Point eval_tangent(const PolynomialCurve& curve, double t) noexcept;

enum class Window { first, last };

/// Component-wise Newton interpolant through n + 1 consecutive
/// (parameter, point) pairs: the first n + 1 by default, or the last n + 1.
/// Throws RepeatedNodes.
PolynomialCurve construct_curve(const PointSequence& pts, const solver::ParameterVector& t,
                                Window window = Window::first);

/// max_l |curve(t_l) - T_l|_inf over all 2n interpolation conditions.
double verify_interpolation(const PolynomialCurve& curve, const PointSequence& pts,
                            const solver::ParameterVector& t);

/// Default acceptance threshold for verify_interpolation, relative to the
/// data scale.
inline constexpr double kVerifyTolerance = 1e-9;

}  // namespace geointerp::curve
