#include "geointerp/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <string>

namespace geointerp::analysis {

std::string_view to_string(CurveKind kind) noexcept {
    switch (kind) {
        case CurveKind::circle_arc:
            return "circle";
        case CurveKind::ellipse_arc:
            return "ellipse";
        case CurveKind::parabola:
            return "parabola";
        case CurveKind::log_spiral:
            return "spiral";
        case CurveKind::custom_samples:
            return "custom";
    }
    return "unknown";
}

std::string_view to_string(ParamScheme scheme) noexcept {
    switch (scheme) {
        case ParamScheme::uniform:
            return "uniform";
        case ParamScheme::chordal:
            return "chordal";
        case ParamScheme::centripetal:
            return "centripetal";
    }
    return "unknown";
}

DataCurve::DataCurve(CurveKind kind, double p0, double p1, double lo, double hi)
    : kind_(kind), p0_(p0), p1_(p1), lo_(lo), hi_(hi) {
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw InvalidArgument("curve interval must satisfy lo < hi");
    }
}

DataCurve DataCurve::circle_arc(double radius, double lo, double hi) {
    if (!(radius > 0.0)) throw InvalidArgument("radius must be positive");
    return DataCurve(CurveKind::circle_arc, radius, 0.0, lo, hi);
}

DataCurve DataCurve::ellipse_arc(double semi_a, double semi_b, double lo, double hi) {
    if (!(semi_a > 0.0) || !(semi_b > 0.0)) throw InvalidArgument("semi-axes must be positive");
    return DataCurve(CurveKind::ellipse_arc, semi_a, semi_b, lo, hi);
}

DataCurve DataCurve::parabola(double curvature, double lo, double hi) {
    if (curvature == 0.0) throw InvalidArgument("parabola curvature must be nonzero");
    return DataCurve(CurveKind::parabola, curvature, 0.0, lo, hi);
}

DataCurve DataCurve::log_spiral(double growth, double lo, double hi) {
    return DataCurve(CurveKind::log_spiral, growth, 0.0, lo, hi);
}

DataCurve DataCurve::custom_samples(std::vector<double> params, std::vector<Point> samples) {
    if (params.size() != samples.size() || params.size() < 2) {
        throw InvalidArgument("custom curve needs at least two (parameter, point) samples");
    }
    for (std::size_t i = 1; i < params.size(); ++i) {
        if (!(params[i] > params[i - 1])) {
            throw InvalidArgument("custom curve parameters must be strictly increasing");
        }
    }
    DataCurve g(CurveKind::custom_samples, 0.0, 0.0, params.front(), params.back());
    const std::size_t m = params.size();
    g.slopes_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t a = i == 0 ? 0 : i - 1;
        const std::size_t b = i + 1 == m ? m - 1 : i + 1;
        g.slopes_[i] = (1.0 / (params[b] - params[a])) * (samples[b] - samples[a]);
    }
    g.knots_ = std::move(params);
    g.samples_ = std::move(samples);
    return g;
}

Point DataCurve::operator()(double xi) const noexcept {
    switch (kind_) {
        case CurveKind::circle_arc:
            return {p0_ * std::cos(xi), p0_ * std::sin(xi)};
        case CurveKind::ellipse_arc:
            return {p0_ * std::cos(xi), p1_ * std::sin(xi)};
        case CurveKind::parabola:
            return {xi, p0_ * xi * xi};
        case CurveKind::log_spiral: {
            const double r = std::exp(p0_ * xi);
            return {r * std::cos(xi), r * std::sin(xi)};
        }
        case CurveKind::custom_samples: {
            const auto it = std::upper_bound(knots_.begin(), knots_.end(), xi);
            std::size_t i = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
            i = std::min(i, knots_.size() - 2);
            const double h = knots_[i + 1] - knots_[i];
            const double u = (xi - knots_[i]) / h;
            const double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
            const double h10 = u * (1 - u) * (1 - u);
            const double h01 = u * u * (3 - 2 * u);
            const double h11 = u * u * (u - 1);
            return h00 * samples_[i] + (h10 * h) * slopes_[i] + h01 * samples_[i + 1] +
                   (h11 * h) * slopes_[i + 1];
        }
    }
    return {};
}

Point DataCurve::derivative(double xi) const noexcept {
    switch (kind_) {
        case CurveKind::circle_arc:
            return {-p0_ * std::sin(xi), p0_ * std::cos(xi)};
        case CurveKind::ellipse_arc:
            return {-p0_ * std::sin(xi), p1_ * std::cos(xi)};
        case CurveKind::parabola:
            return {1.0, 2.0 * p0_ * xi};
        case CurveKind::log_spiral: {
            const double r = std::exp(p0_ * xi);
            return {r * (p0_ * std::cos(xi) - std::sin(xi)), r * (p0_ * std::sin(xi) + std::cos(xi))};
        }
        case CurveKind::custom_samples: {
            const auto it = std::upper_bound(knots_.begin(), knots_.end(), xi);
            std::size_t i = it == knots_.begin() ? 0 : static_cast<std::size_t>(it - knots_.begin()) - 1;
            i = std::min(i, knots_.size() - 2);
            const double h = knots_[i + 1] - knots_[i];
            const double u = (xi - knots_[i]) / h;
            const double d00 = 6 * u * (u - 1) / h;
            const double d10 = (1 - u) * (1 - 3 * u);
            const double d01 = -d00;
            const double d11 = u * (3 * u - 2);
            return d00 * samples_[i] + d10 * slopes_[i] + d01 * samples_[i + 1] + d11 * slopes_[i + 1];
        }
    }
    return {};
}

DataCurve DataCurve::restricted(double lo, double hi) const {
    const double slack = 1e-12 * (hi_ - lo_);
    if (!(lo < hi) || lo < lo_ - slack || hi > hi_ + slack) {
        throw OutOfInterval("sub-interval outside the curve's domain");
    }
    DataCurve g = *this;
    g.lo_ = lo;
    g.hi_ = hi;
    return g;
}

PointSequence sample_points(const DataCurve& g, std::span<const double> xi) {
    const double slack = 1e-12 * (g.hi() - g.lo());
    std::vector<Point> pts;
    pts.reserve(xi.size());
    for (std::size_t l = 0; l < xi.size(); ++l) {
        if (!std::isfinite(xi[l]) || xi[l] < g.lo() - slack || xi[l] > g.hi() + slack) {
            throw OutOfInterval("sample parameter " + std::to_string(l) + " outside [" +
                                std::to_string(g.lo()) + ", " + std::to_string(g.hi()) + "]");
        }
        if (l > 0 && !(xi[l] > xi[l - 1])) {
            throw OutOfInterval("sample parameters must be strictly increasing");
        }
        pts.push_back(g(xi[l]));
    }
    return PointSequence(std::move(pts));
}

std::vector<double> equal_spacing(double lo, double hi, int count) {
    std::vector<double> xi(count);
    for (int l = 0; l < count; ++l) {
        xi[l] = lo + (hi - lo) * static_cast<double>(l) / (count - 1);
    }
    xi.back() = hi;
    return xi;
}

std::vector<double> fixed_parameters(const PointSequence& pts, ParamScheme scheme) {
    const std::size_t m = pts.size();
    std::vector<double> params(m, 0.0);
    for (std::size_t l = 1; l < m; ++l) {
        const Point d = pts.difference(l - 1);
        const double chord = std::hypot(d.x, d.y);
        double step = 1.0;
        if (scheme == ParamScheme::chordal) step = chord;
        if (scheme == ParamScheme::centripetal) step = std::sqrt(chord);
        params[l] = params[l - 1] + step;
    }
    const double total = params.back();
    for (auto& p : params) p /= total;
    params.back() = 1.0;
    return params;
}

FixedParamCurve fixed_param_interpolant(const PointSequence& pts, ParamScheme scheme) {
    std::vector<double> params = fixed_parameters(pts, scheme);
    curve::PolynomialCurve c{polyalg::newton_interpolant(params, pts.xs()),
                             polyalg::newton_interpolant(params, pts.ys()),
                             static_cast<int>(pts.size()) - 1};
    return {std::move(params), std::move(c)};
}

double orthogonality_residual(const DataCurve& g, const curve::PolynomialCurve& p, double t,
                              double xi) noexcept {
    return dot(g(xi) - curve::eval_curve(p, t), curve::eval_tangent(p, t));
}

double normal_reparametrization(const DataCurve& g, const curve::PolynomialCurve& p, double t,
                                double lo, double hi) {
    const Point target = curve::eval_curve(p, t);
    const Point tangent = curve::eval_tangent(p, t);
    auto h = [&](double xi) { return dot(g(xi) - target, tangent); };
    // Values this small are indistinguishable from zero in floating point.
    auto negligible = [&](double xi, double value) {
        const double mag = (max_norm(g(xi)) + max_norm(target)) * max_norm(tangent);
        return std::abs(value) <= 8.0 * std::numeric_limits<double>::epsilon() * mag;
    };

    double h_lo = h(lo);
    double h_hi = h(hi);
    if (h_lo == 0.0 || negligible(lo, h_lo)) return lo;
    if (h_hi == 0.0 || negligible(hi, h_hi)) return hi;
    if ((h_lo > 0.0) == (h_hi > 0.0)) {
        throw NoSignChange("no sign change of the orthogonality residual in [" +
                           std::to_string(lo) + ", " + std::to_string(hi) + "] at t = " +
                           std::to_string(t));
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double h_mid = h(mid);
        if (h_mid == 0.0) return mid;
        if ((h_mid > 0.0) == (h_lo > 0.0)) {
            lo = mid;
            h_lo = h_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

ErrorProfile error_profile(const DataCurve& g, const curve::PolynomialCurve& p,
                           const solver::ParameterVector& t, std::span<const double> xi,
                           std::size_t grid_size) {
    const std::vector<double> params = t.full();
    if (xi.size() != params.size()) {
        throw InvalidArgument("need one data-curve parameter per interpolation parameter");
    }
    if (grid_size < 2) throw InvalidArgument("grid needs at least two points");

    const std::size_t last = params.size() - 1;
    ErrorProfile profile;
    profile.samples.reserve(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double tau = i + 1 == grid_size ? 1.0 : static_cast<double>(i) / (grid_size - 1);
        const auto it = std::upper_bound(params.begin(), params.end(), tau);
        std::size_t seg = it == params.begin() ? 0 : static_cast<std::size_t>(it - params.begin()) - 1;
        seg = std::min(seg, last - 1);

        // Near the ends the foot point may fall just outside [xi_0, xi_last]
        // because p reproduces the far points only to solver accuracy.
        const std::size_t a = seg == 0 ? 0 : seg - 1;
        const std::size_t b = std::min(seg + 2, last);
        const double lo_ext = a == 0 ? xi[0] - (xi[1] - xi[0]) : xi[a];
        const double hi_ext = b == last ? xi[last] + (xi[last] - xi[last - 1]) : xi[b];
        const std::array<std::pair<double, double>, 3> brackets{
            {{xi[seg], xi[seg + 1]}, {xi[a], xi[b]}, {lo_ext, hi_ext}}};
        double phi = 0.0;
        for (std::size_t k = 0; k < brackets.size(); ++k) {
            try {
                phi = normal_reparametrization(g, p, tau, brackets[k].first, brackets[k].second);
                break;
            } catch (const NoSignChange&) {
                if (k + 1 == brackets.size()) throw;
            }
        }
        const Point diff = g(phi) - curve::eval_curve(p, tau);
        profile.max_error = std::max(profile.max_error, max_norm(diff));
        profile.samples.push_back({tau, phi, diff});
    }
    return profile;
}

double fit_log_slope(std::span<const double> scales, std::span<const double> errors) {
    const std::size_t m = std::min(scales.size(), errors.size());
    if (m < 2) throw InvalidArgument("slope fit needs at least two scales");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double x = std::log(scales[k]);
        const double y = std::log(errors[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    return (m * sxy - sx * sy) / denom;
}

namespace {

struct ScaleOutcome {
    double error = 0.0;
    double extent = 0.0;
    bool solved = false;
    std::string failure;
};

ScaleOutcome run_scale(const DataCurve& g, int n, double length, const OrderOptions& options) {
    ScaleOutcome out;
    try {
        const std::vector<double> xi = equal_spacing(g.lo(), g.lo() + length, 2 * n);
        const PointSequence pts = sample_points(g, xi);
        out.extent = pts.coordinate_scale();
        const solver::SolveResult sol = solver::newton_solve(pts, std::nullopt, options.solver);
        if (!sol.converged) {
            out.failure = "solver did not converge (" + std::string(solver::to_string(sol.status)) + ")";
            return out;
        }
        const curve::PolynomialCurve p = curve::construct_curve(pts, sol.t);
        out.error = error_profile(g, p, sol.t, xi, options.grid_size).max_error;
        out.solved = true;
    } catch (const Error& e) {
        out.failure = e.what();
    }
    return out;
}

}  // namespace

OrderEstimate estimate_order(const DataCurve& g, int n, std::size_t num_scales, double shrink,
                             const OrderOptions& options) {
    if (n < 2) throw InvalidArgument("degree bound must be at least 2");
    if (!(shrink > 0.0 && shrink < 1.0)) throw InvalidArgument("shrink must lie in (0, 1)");
    if (num_scales < 2) throw InvalidArgument("need at least two scales");

    const double length = g.hi() - g.lo();
    std::vector<double> scales(num_scales);
    for (std::size_t k = 0; k < num_scales; ++k) scales[k] = std::pow(shrink, static_cast<double>(k));

    std::vector<ScaleOutcome> outcomes(num_scales);
    if (options.parallel) {
        std::vector<std::future<ScaleOutcome>> jobs;
        jobs.reserve(num_scales);
        for (std::size_t k = 0; k < num_scales; ++k) {
            jobs.push_back(std::async(std::launch::async, run_scale, std::cref(g), n,
                                      length * scales[k], std::cref(options)));
        }
        for (std::size_t k = 0; k < num_scales; ++k) outcomes[k] = jobs[k].get();
    } else {
        for (std::size_t k = 0; k < num_scales; ++k) outcomes[k] = run_scale(g, n, length * scales[k], options);
    }

    OrderEstimate est;
    for (std::size_t k = 0; k < num_scales; ++k) {
        if (!outcomes[k].solved) {
            throw OrderSolveFailed("scale " + std::to_string(k) + ": " + outcomes[k].failure, est);
        }
        est.scales.push_back(scales[k]);
        est.errors.push_back(outcomes[k].error);
        if (k > 0) {
            est.slopes.push_back(std::log(est.errors[k] / est.errors[k - 1]) /
                                 std::log(est.scales[k] / est.scales[k - 1]));
        }
    }

    std::size_t fit = options.fit_scales != 0 ? options.fit_scales
                                              : std::max<std::size_t>(3, num_scales / 3);
    fit = std::min(fit, num_scales);
    const std::size_t from = num_scales - fit;
    const double floor = 1e-13 * std::max(1.0, outcomes.front().extent);
    for (std::size_t k = from; k < num_scales; ++k) {
        if (!(est.errors[k] > floor)) est.reliable = false;
    }
    if (est.reliable) {
        est.final_order = fit_log_slope(std::span(est.scales).subspan(from),
                                        std::span(est.errors).subspan(from));
    } else {
        // Log of a zero error is undefined; fit whatever is positive.
        std::vector<double> s, e;
        for (std::size_t k = from; k < num_scales; ++k) {
            if (est.errors[k] > 0.0) {
                s.push_back(est.scales[k]);
                e.push_back(est.errors[k]);
            }
        }
        est.final_order = s.size() >= 2 ? fit_log_slope(s, e) : std::numeric_limits<double>::quiet_NaN();
    }
    return est;
}

}  // namespace geointerp::analysis
