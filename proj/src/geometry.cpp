#include "geointerp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geointerp/errors.hpp"

namespace geointerp {

double max_norm(Point p) noexcept { return std::max(std::abs(p.x), std::abs(p.y)); }

Matrix2 Matrix2::rotation(double angle) noexcept {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return Matrix2{{c, -s, s, c}};
}

Matrix2 operator*(const Matrix2& a, const Matrix2& b) noexcept {
    return Matrix2{{a.m[0] * b.m[0] + a.m[1] * b.m[2], a.m[0] * b.m[1] + a.m[1] * b.m[3],
                    a.m[2] * b.m[0] + a.m[3] * b.m[2], a.m[2] * b.m[1] + a.m[3] * b.m[3]}};
}

PointSequence::PointSequence(std::vector<Point> points) : points_(std::move(points)) {
    if (points_.size() < 4) {
        throw TooFew("need at least 4 points, got " + std::to_string(points_.size()));
    }
    if (points_.size() % 2 != 0) {
        throw OddCount("point count must be even, got " + std::to_string(points_.size()));
    }
    for (std::size_t l = 0; l < points_.size(); ++l) {
        if (!std::isfinite(points_[l].x) || !std::isfinite(points_[l].y)) {
            throw InvalidArgument("point " + std::to_string(l) + " is not finite");
        }
        if (l > 0 && points_[l] == points_[l - 1]) {
            throw InvalidArgument("points " + std::to_string(l - 1) + " and " +
                                  std::to_string(l) + " coincide");
        }
    }
}

std::vector<double> PointSequence::xs() const {
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.x);
    return out;
}

std::vector<double> PointSequence::ys() const {
    std::vector<double> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p.y);
    return out;
}

double PointSequence::data_scale() const noexcept {
    double s = 0.0;
    for (std::size_t l = 0; l + 1 < points_.size(); ++l) s = std::max(s, max_norm(difference(l)));
    return s;
}

double PointSequence::coordinate_scale() const noexcept {
    double s = 0.0;
    for (const auto& p : points_) s = std::max(s, max_norm(p));
    return s;
}

PointSequence PointSequence::transformed(const Matrix2& map) const {
    std::vector<Point> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(map.apply(p));
    return PointSequence(std::move(out));
}

PointSequence PointSequence::translated(Point offset) const {
    std::vector<Point> out;
    out.reserve(points_.size());
    for (const auto& p : points_) out.push_back(p + offset);
    return PointSequence(std::move(out));
}

}  // namespace geointerp
