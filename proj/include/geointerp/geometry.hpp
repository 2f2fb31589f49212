#pragma once

#include <array>
#include <span>
#include <vector>

namespace geointerp {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline Point operator+(Point p, Point q) noexcept { return {p.x + q.x, p.y + q.y}; }
inline Point operator-(Point p, Point q) noexcept { return {p.x - q.x, p.y - q.y}; }
inline Point operator*(double s, Point p) noexcept { return {s * p.x, s * p.y}; }

/// det(u, v) = u.x v.y - v.x u.y
inline double cross(Point u, Point v) noexcept { return u.x * v.y - v.x * u.y; }
inline double dot(Point u, Point v) noexcept { return u.x * v.x + u.y * v.y; }

double max_norm(Point p) noexcept;

/// Row-major 2x2 real matrix acting on column vectors.
struct Matrix2 {
    std::array<double, 4> m{1.0, 0.0, 0.0, 1.0};

    static Matrix2 identity() noexcept { return {}; }
    static Matrix2 rotation(double angle) noexcept;

    double operator()(int row, int col) const noexcept { return m[row * 2 + col]; }
    double det() const noexcept { return m[0] * m[3] - m[1] * m[2]; }

    Point apply(Point p) const noexcept {
        return {m[0] * p.x + m[1] * p.y, m[2] * p.x + m[3] * p.y};
    }

    friend Matrix2 operator*(const Matrix2& a, const Matrix2& b) noexcept;
    friend bool operator==(const Matrix2&, const Matrix2&) = default;
};

/// Forward differences of the data, one entry per consecutive point pair.
struct DifferenceTable {
    std::vector<double> da;
    std::vector<double> db;

    std::size_t size() const noexcept { return da.size(); }
    Point operator[](std::size_t l) const noexcept { return {da[l], db[l]}; }
};

/// 2n planar data points with n >= 2 and no two consecutive points equal.
class PointSequence {
public:
    explicit PointSequence(std::vector<Point> points);

    std::size_t size() const noexcept { return points_.size(); }
    /// Degree bound n = size() / 2.
    int degree() const noexcept { return static_cast<int>(points_.size() / 2); }

    const Point& operator[](std::size_t l) const noexcept { return points_[l]; }
    std::span<const Point> points() const noexcept { return points_; }

    std::vector<double> xs() const;
    std::vector<double> ys() const;

    /// Difference vector T_{l+1} - T_l.
    Point difference(std::size_t l) const noexcept { return points_[l + 1] - points_[l]; }

    /// max over l of |da_l|, |db_l|; the natural length unit of the data.
    double data_scale() const noexcept;
    /// Largest absolute coordinate.
    double coordinate_scale() const noexcept;

    PointSequence transformed(const Matrix2& map) const;
    PointSequence translated(Point offset) const;

private:
    std::vector<Point> points_;
};

}  // namespace geointerp
