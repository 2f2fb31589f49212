#include "geointerp/curve.hpp"

#include <algorithm>

#include "geointerp/errors.hpp"

namespace geointerp::curve {

Point eval_curve(const PolynomialCurve& curve, double t) noexcept {
    return {polyalg::eval_poly(curve.x, t), polyalg::eval_poly(curve.y, t)};
}

Point eval_tangent(const PolynomialCurve& curve, double t) noexcept {
    return {curve.x.derivative(t), curve.y.derivative(t)};
}

PolynomialCurve construct_curve(const PointSequence& pts, const solver::ParameterVector& t,
                                Window window) {
    if (t.size() + 2 != pts.size()) {
        throw InvalidArgument("parameter count does not match the point count");
    }
    const int n = pts.degree();
    const std::vector<double> params = t.full();
    const std::size_t first = window == Window::first ? 0 : pts.size() - (n + 1);

    std::vector<double> nodes(params.begin() + first, params.begin() + first + n + 1);
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t l = first; l < first + n + 1; ++l) {
        xs.push_back(pts[l].x);
        ys.push_back(pts[l].y);
    }
    return {polyalg::newton_interpolant(nodes, xs), polyalg::newton_interpolant(nodes, ys), n};
}

double verify_interpolation(const PolynomialCurve& curve, const PointSequence& pts,
                            const solver::ParameterVector& t) {
    const std::vector<double> params = t.full();
    double worst = 0.0;
    for (std::size_t l = 0; l < pts.size() && l < params.size(); ++l) {
        worst = std::max(worst, max_norm(eval_curve(curve, params[l]) - pts[l]));
    }
    return worst;
}

}  // namespace geointerp::curve
