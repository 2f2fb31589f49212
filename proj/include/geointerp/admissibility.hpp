#pragma once

#include <optional>
#include <vector>

#include "geointerp/geometry.hpp"

namespace geointerp::admissibility {

/// Relative threshold below which a difference or determinant counts as zero.
/// Differences are compared against kStrictTolerance * scale, determinants
/// against kStrictTolerance * scale^2, scale being the largest difference
/// component.
inline constexpr double kStrictTolerance = 1e-12;

/// Sign of `value` with near-zero values (|value| <= threshold) mapped to 0.
int strict_sign(double value, double threshold) noexcept;

DifferenceTable differences(const PointSequence& pts);

/// Monotone convexity condition: every Δa, Δb shares one strict sign and every
/// consecutive determinant det(ΔT_{l-1}, ΔT_l) shares one strict sign.
struct Theorem1Verdict {
    bool pass = false;
    /// +1 / -1 when all differences share that sign, 0 otherwise.
    int difference_sign = 0;
    /// +1 / -1 when all consecutive determinants share that sign, 0 otherwise.
    int determinant_sign = 0;
    std::vector<double> determinants;
};

/// Windowed convexity condition: det(ΔT_{j-1+k}, ΔT_{j-1+l}) for
/// j = 1..n-1, 0 <= k < l <= n, all of one strict sign. Affinely invariant.
struct Theorem2Verdict {
    bool pass = false;
    int sign = 0;
    std::vector<double> determinants;
};

struct AdmissibilityReport {
    Theorem1Verdict theorem1;
    Theorem2Verdict theorem2;
    /// Linear map under which the monotone condition holds, when one was found.
    std::optional<Matrix2> transform;
    bool transform_searched = false;

    bool admissible() const noexcept { return theorem1.pass || theorem2.pass || transform; }
};

Theorem1Verdict check_theorem1(const PointSequence& pts);
Theorem2Verdict check_theorem2(const PointSequence& pts);

struct TransformMatch {
    Matrix2 map;
    Theorem1Verdict verdict;
};

/// Finite search over component swap, axis reflections and rotations by
/// multiples of pi/8 (alone and composed with a reflection). The identity is
/// tried first.
std::optional<TransformMatch> search_admissible_transform(const PointSequence& pts);

/// Runs both checks and, when the monotone condition fails, the transform search.
AdmissibilityReport assess(const PointSequence& pts);

/// The matrix M(eps) * N_j that rewrites the window j differences, with
///   N_j = [[ Δb_{n+j-1}, -Δa_{n+j-1}], [-Δb_{j-1}, Δa_{j-1}]],  M = [[1, eps], [eps, 1]].
/// Its determinant is (1 - eps^2) det(ΔT_{j-1}, ΔT_{n+j-1}).
Matrix2 precondition_matrix(const PointSequence& pts, int j, double eps);

/// Transformed differences for l = j-1..n+j-1 under precondition_matrix.
/// Requires the windowed condition with positive sign, 1 <= j <= n-1 and
/// 0 < eps < 1. Throws EpsilonTooLarge if any transformed difference or
/// consecutive determinant is not strictly positive.
DifferenceTable theorem2_precondition(const PointSequence& pts, int j, double eps);

/// Largest eps (by bisection) for which theorem2_precondition succeeds for
/// every window j simultaneously.
double supremal_precondition_epsilon(const PointSequence& pts);

/// Half of supremal_precondition_epsilon.
double default_precondition_epsilon(const PointSequence& pts);

}  // namespace geointerp::admissibility
