#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "geointerp/geometry.hpp"

namespace geointerp::solver {

/// Interior parameters 0 < t_1 < ... < t_{2n-2} < 1; the endpoints t_0 = 0 and
/// t_{2n-1} = 1 are implicit.
class ParameterVector {
public:
    explicit ParameterVector(std::vector<double> interior);

    /// t_l = l / (2n - 1).
    static ParameterVector equidistant(int n);

    std::span<const double> interior() const noexcept { return interior_; }
    std::size_t size() const noexcept { return interior_.size(); }
    double operator[](std::size_t i) const noexcept { return interior_[i]; }

    /// All 2n parameters including the endpoints.
    std::vector<double> full() const;

    /// Smallest gap between consecutive parameters, endpoints included.
    double min_gap() const noexcept;

private:
    std::vector<double> interior_;
};

enum class ResidualForm { closed, polynomial };

/// Ordered (f^a_1, f^b_1, ..., f^a_{n-1}, f^b_{n-1}).
struct ResidualVector {
    std::vector<double> values;
    ResidualForm form = ResidualForm::closed;

    double max_norm() const noexcept;
};

/// Divided differences [t_{j-1},...,t_{n+j}] of both data components,
/// j = 1..n-1. Throws RepeatedNodes.
ResidualVector residual_closed(const PointSequence& pts, const ParameterVector& t);

/// Modified Vandermonde (polynomial) form. `params` holds all 2n parameters
/// and may contain coincident values (simplex faces).
ResidualVector residual_polynomial(const PointSequence& pts, std::span<const double> params);
ResidualVector residual_polynomial(const PointSequence& pts, const ParameterVector& t);

/// Per-window normalisation max_l |w_l| of the closed-form weights
/// w_l = 1 / prod_{m != l} (t_l - t_m), one entry per j.
std::vector<double> window_scales(const ParameterVector& t);

/// residual_closed with both equations of window j divided by window_scales()[j-1].
/// Same zero set as residual_closed, expressed in data units.
ResidualVector scaled_residual(const PointSequence& pts, const ParameterVector& t);

/// Analytic Jacobian of residual_closed with respect to t_1..t_{2n-2}.
/// Banded: row (c, j) only depends on columns inside the window j-1..n+j.
Eigen::MatrixXd jacobian(const PointSequence& pts, const ParameterVector& t);

struct SolverOptions {
    /// Converged when the scaled residual max-norm is below
    /// tolerance * data_scale.
    double tolerance = 1e-12;
    int max_iterations = 100;
    /// Extra steps taken after convergence while each halves the residual.
    int polish_steps = 3;
    int max_halvings = 30;
    double gap_floor = 1e-9;
    /// Random restarts after the deterministic starts are exhausted.
    int max_restarts = 5;
    /// Relative pivot threshold of the rank-revealing step solve.
    double rank_threshold = 1e-10;
    /// A root is accepted only if the interpolants through the first and the
    /// last n+1 points reproduce the rest within verify_tolerance * data_scale.
    double verify_tolerance = 1e-9;
    std::uint64_t seed = 0x5eed;
    bool record_trace = true;
};

enum class SolveStatus {
    converged,
    max_iterations_exceeded,
    singular_jacobian,
    line_search_failed,
    /// Residual below tolerance but a window interpolant misses the other points.
    unverified
};

std::string_view to_string(SolveStatus status) noexcept;

struct IterationRecord {
    std::vector<double> t;
    double residual_norm = 0.0;
};

struct SolveResult {
    ParameterVector t;
    /// Scaled residual max-norm at t.
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    SolveStatus status = SolveStatus::max_iterations_exceeded;
    int restarts = 0;
    std::vector<IterationRecord> trace;
};

/// Closed-form solution for n = 2 from the determinants
/// D_ik = det(ΔT_i, ΔT_k). All three must share a strict sign; a common
/// negative sign is handled as the reflected problem, which has the same
/// parameters. Throws NotQuadratic or InadmissibleDeterminants.
SolveResult solve_quadratic(const PointSequence& pts, const SolverOptions& options = {});

/// Damped Newton iteration on the row-scaled closed-form system. Starts from
/// `start` (default: equidistant), then chord-length and centripetal
/// parameters, then up to max_restarts random ordered points. Each step is the
/// minimum-norm solution of a rank-revealing decomposition, shortened so no
/// gap drops below gap_floor, then halved until the scaled residual (window
/// scales frozen at the current iterate) decreases. Returns the best iterate
/// seen; never throws for numerical failure: inspect `converged` and `status`.
SolveResult newton_solve(const PointSequence& pts,
                         const std::optional<ParameterVector>& start = std::nullopt,
                         const SolverOptions& options = {});

}  // namespace geointerp::solver
