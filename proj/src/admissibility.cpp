#include "geointerp/admissibility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "geointerp/errors.hpp"

namespace geointerp::admissibility {

namespace {

// Common strict sign of `values`, or 0 if any is near zero or signs are mixed.
int common_sign(const std::vector<double>& values, double threshold) {
    int sign = 0;
    for (double v : values) {
        const int s = strict_sign(v, threshold);
        if (s == 0) return 0;
        if (sign == 0) {
            sign = s;
        } else if (s != sign) {
            return 0;
        }
    }
    return sign;
}

double table_scale(const DifferenceTable& t) {
    double s = 0.0;
    for (std::size_t l = 0; l < t.size(); ++l) s = std::max(s, max_norm(t[l]));
    return s;
}

// Monotone convexity test on an arbitrary difference table.
Theorem1Verdict check_monotone(const DifferenceTable& t) {
    const double scale = table_scale(t);
    Theorem1Verdict v;
    std::vector<double> diffs(t.da);
    diffs.insert(diffs.end(), t.db.begin(), t.db.end());
    v.difference_sign = common_sign(diffs, kStrictTolerance * scale);
    for (std::size_t l = 1; l < t.size(); ++l) v.determinants.push_back(cross(t[l - 1], t[l]));
    v.determinant_sign = common_sign(v.determinants, kStrictTolerance * scale * scale);
    v.pass = v.difference_sign != 0 && v.determinant_sign != 0;
    return v;
}

void require_window(const PointSequence& pts, int j) {
    const int n = pts.degree();
    if (j < 1 || j > n - 1) {
        throw InvalidArgument("window index " + std::to_string(j) + " outside 1.." +
                              std::to_string(n - 1));
    }
}

}  // namespace

int strict_sign(double value, double threshold) noexcept {
    if (value > threshold) return 1;
    if (value < -threshold) return -1;
    return 0;
}

DifferenceTable differences(const PointSequence& pts) {
    DifferenceTable t;
    t.da.reserve(pts.size() - 1);
    t.db.reserve(pts.size() - 1);
    for (std::size_t l = 0; l + 1 < pts.size(); ++l) {
        const Point d = pts.difference(l);
        t.da.push_back(d.x);
        t.db.push_back(d.y);
    }
    return t;
}

Theorem1Verdict check_theorem1(const PointSequence& pts) { return check_monotone(differences(pts)); }

Theorem2Verdict check_theorem2(const PointSequence& pts) {
    const int n = pts.degree();
    const double scale = pts.data_scale();
    Theorem2Verdict v;
    for (int j = 1; j <= n - 1; ++j) {
        for (int k = 0; k <= n; ++k) {
            for (int l = k + 1; l <= n; ++l) {
                v.determinants.push_back(cross(pts.difference(j - 1 + k), pts.difference(j - 1 + l)));
            }
        }
    }
    v.sign = common_sign(v.determinants, kStrictTolerance * scale * scale);
    v.pass = v.sign != 0;
    return v;
}

std::optional<TransformMatch> search_admissible_transform(const PointSequence& pts) {
    const Matrix2 swap{{0.0, 1.0, 1.0, 0.0}};
    const Matrix2 flip_x{{-1.0, 0.0, 0.0, 1.0}};
    const Matrix2 flip_y{{1.0, 0.0, 0.0, -1.0}};
    const Matrix2 flip_xy{{-1.0, 0.0, 0.0, -1.0}};

    std::vector<Matrix2> candidates{Matrix2::identity(), swap, flip_y, flip_x, flip_xy};
    for (int k = 1; k < 16; ++k) candidates.push_back(Matrix2::rotation(k * std::numbers::pi / 8));
    for (int k = 0; k < 16; ++k) {
        candidates.push_back(Matrix2::rotation(k * std::numbers::pi / 8) * flip_y);
    }

    const DifferenceTable base = differences(pts);
    for (const auto& map : candidates) {
        DifferenceTable t;
        for (std::size_t l = 0; l < base.size(); ++l) {
            const Point d = map.apply(base[l]);
            t.da.push_back(d.x);
            t.db.push_back(d.y);
        }
        Theorem1Verdict verdict = check_monotone(t);
        if (verdict.pass) return TransformMatch{map, std::move(verdict)};
    }
    return std::nullopt;
}

AdmissibilityReport assess(const PointSequence& pts) {
    AdmissibilityReport report;
    report.theorem1 = check_theorem1(pts);
    report.theorem2 = check_theorem2(pts);
    if (report.theorem1.pass) {
        report.transform = Matrix2::identity();
    } else {
        report.transform_searched = true;
        if (auto match = search_admissible_transform(pts)) report.transform = match->map;
    }
    return report;
}

Matrix2 precondition_matrix(const PointSequence& pts, int j, double eps) {
    require_window(pts, j);
    const int n = pts.degree();
    const Point first = pts.difference(j - 1);
    const Point last = pts.difference(n + j - 1);
    const Matrix2 mix{{1.0, eps, eps, 1.0}};
    const Matrix2 base{{last.y, -last.x, -first.y, first.x}};
    return mix * base;
}

DifferenceTable theorem2_precondition(const PointSequence& pts, int j, double eps) {
    require_window(pts, j);
    if (!(eps > 0.0)) throw InvalidArgument("eps must be positive");
    if (!(eps < 1.0)) throw EpsilonTooLarge("eps must be below 1");
    if (check_theorem2(pts).sign != 1) {
        throw InvalidArgument("windowed determinants must all be positive");
    }

    const int n = pts.degree();
    const Matrix2 map = precondition_matrix(pts, j, eps);
    DifferenceTable t;
    for (int l = j - 1; l <= n + j - 1; ++l) {
        const Point d = map.apply(pts.difference(l));
        t.da.push_back(d.x);
        t.db.push_back(d.y);
    }

    const Theorem1Verdict v = check_monotone(t);
    if (v.difference_sign != 1 || v.determinant_sign != 1) {
        throw EpsilonTooLarge("eps = " + std::to_string(eps) +
                              " leaves a transformed difference or determinant non-positive");
    }
    return t;
}

double supremal_precondition_epsilon(const PointSequence& pts) {
    const int n = pts.degree();
    auto feasible = [&](double eps) {
        try {
            for (int j = 1; j <= n - 1; ++j) theorem2_precondition(pts, j, eps);
            return true;
        } catch (const EpsilonTooLarge&) {
            return false;
        }
    };

    double lo = 0.5;
    while (!feasible(lo)) {
        lo *= 0.5;
        if (lo < 1e-10) throw EpsilonTooLarge("no feasible preconditioning parameter found");
    }
    double hi = 1.0;
    for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return lo;
}

double default_precondition_epsilon(const PointSequence& pts) {
    return 0.5 * supremal_precondition_epsilon(pts);
}

}  // namespace geointerp::admissibility
