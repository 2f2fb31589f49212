#include "geointerp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>

#include "geointerp/admissibility.hpp"
#include "geointerp/errors.hpp"
#include "geointerp/polyalg.hpp"

namespace geointerp::solver {

namespace {

// Closed-form weights 1 / prod_{m != l} (t_l - t_m) over one window.
std::vector<double> window_weights(std::span<const double> nodes) {
    std::vector<double> w(nodes.size());
    for (std::size_t l = 0; l < nodes.size(); ++l) {
        double prod = 1.0;
        for (std::size_t m = 0; m < nodes.size(); ++m) {
            if (m != l) prod *= nodes[l] - nodes[m];
        }
        w[l] = 1.0 / prod;
    }
    return w;
}

void require_parameter_count(const PointSequence& pts, std::size_t count) {
    if (count != pts.size() - 2) {
        throw InvalidArgument("expected " + std::to_string(pts.size() - 2) +
                              " interior parameters, got " + std::to_string(count));
    }
}

// Largest step fraction in (0, 1] keeping every gap of t + alpha * step above
// `floor`.
double feasible_step(const std::vector<double>& full, const Eigen::VectorXd& step, double floor) {
    double alpha = 1.0;
    const std::size_t m = full.size();
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double d_lo = (i == 0) ? 0.0 : step(static_cast<Eigen::Index>(i - 1));
        const double d_hi = (i + 1 == m - 1) ? 0.0 : step(static_cast<Eigen::Index>(i));
        const double shrink = d_hi - d_lo;
        if (shrink < 0.0) {
            const double gap = full[i + 1] - full[i];
            alpha = std::min(alpha, 0.99 * (gap - floor) / -shrink);
        }
    }
    return std::max(alpha, 0.0);
}

std::vector<double> random_ordered(std::size_t count, double floor, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> t(count);
    for (;;) {
        for (auto& v : t) v = unit(rng);
        std::sort(t.begin(), t.end());
        double gap = t.empty() ? 1.0 : std::min(t.front(), 1.0 - t.back());
        for (std::size_t i = 1; i < t.size(); ++i) gap = std::min(gap, t[i] - t[i - 1]);
        if (gap > 10.0 * floor) return t;
    }
}

}  // namespace

ParameterVector::ParameterVector(std::vector<double> interior) : interior_(std::move(interior)) {
    double prev = 0.0;
    for (std::size_t i = 0; i < interior_.size(); ++i) {
        if (!std::isfinite(interior_[i]) || !(interior_[i] > prev)) {
            throw InvalidArgument("parameters must be finite and strictly increasing in (0, 1)");
        }
        prev = interior_[i];
    }
    if (!(prev < 1.0) && !interior_.empty()) {
        throw InvalidArgument("parameters must be finite and strictly increasing in (0, 1)");
    }
}

ParameterVector ParameterVector::equidistant(int n) {
    if (n < 2) throw InvalidArgument("degree bound must be at least 2");
    std::vector<double> t;
    for (int l = 1; l <= 2 * n - 2; ++l) t.push_back(static_cast<double>(l) / (2 * n - 1));
    return ParameterVector(std::move(t));
}

std::vector<double> ParameterVector::full() const {
    std::vector<double> out;
    out.reserve(interior_.size() + 2);
    out.push_back(0.0);
    out.insert(out.end(), interior_.begin(), interior_.end());
    out.push_back(1.0);
    return out;
}

double ParameterVector::min_gap() const noexcept {
    double prev = 0.0;
    double gap = 1.0;
    for (double v : interior_) {
        gap = std::min(gap, v - prev);
        prev = v;
    }
    return std::min(gap, 1.0 - prev);
}

double ResidualVector::max_norm() const noexcept {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

ResidualVector residual_closed(const PointSequence& pts, const ParameterVector& t) {
    require_parameter_count(pts, t.size());
    const int n = pts.degree();
    const std::vector<double> full = t.full();
    ResidualVector r{{}, ResidualForm::closed};
    r.values.reserve(2 * n - 2);
    for (int j = 1; j <= n - 1; ++j) {
        const std::span<const double> nodes(full.data() + (j - 1), n + 2);
        polyalg::require_distinct(nodes);
        const std::vector<double> w = window_weights(nodes);
        const Point base = pts[j - 1];
        double fa = 0.0;
        double fb = 0.0;
        for (int l = 1; l < n + 2; ++l) {
            const Point d = pts[j - 1 + l] - base;
            fa += w[l] * d.x;
            fb += w[l] * d.y;
        }
        r.values.push_back(fa);
        r.values.push_back(fb);
    }
    return r;
}

ResidualVector residual_polynomial(const PointSequence& pts, std::span<const double> params) {
    if (params.size() != pts.size()) {
        throw InvalidArgument("expected " + std::to_string(pts.size()) + " parameters, got " +
                              std::to_string(params.size()));
    }
    const int n = pts.degree();
    const std::vector<double> a = pts.xs();
    const std::vector<double> b = pts.ys();
    ResidualVector r{{}, ResidualForm::polynomial};
    r.values.reserve(2 * n - 2);
    std::vector<double> da(n + 2);
    std::vector<double> db(n + 2);
    for (int j = 1; j <= n - 1; ++j) {
        const std::span<const double> nodes = params.subspan(j - 1, n + 2);
        // Values relative to the window's first point; the determinant
        // annihilates constants.
        for (int l = 0; l < n + 2; ++l) {
            da[l] = a[j - 1 + l] - a[j - 1];
            db[l] = b[j - 1 + l] - b[j - 1];
        }
        r.values.push_back(polyalg::modified_vandermonde(nodes, da));
        r.values.push_back(polyalg::modified_vandermonde(nodes, db));
    }
    return r;
}

ResidualVector residual_polynomial(const PointSequence& pts, const ParameterVector& t) {
    require_parameter_count(pts, t.size());
    const std::vector<double> full = t.full();
    return residual_polynomial(pts, std::span<const double>(full));
}

std::vector<double> window_scales(const ParameterVector& t) {
    const int n = static_cast<int>(t.size() + 2) / 2;
    const std::vector<double> full = t.full();
    std::vector<double> scales;
    for (int j = 1; j <= n - 1; ++j) {
        const std::vector<double> w = window_weights(std::span<const double>(full.data() + (j - 1), n + 2));
        double s = 0.0;
        for (double v : w) s = std::max(s, std::abs(v));
        scales.push_back(s);
    }
    return scales;
}

ResidualVector scaled_residual(const PointSequence& pts, const ParameterVector& t) {
    ResidualVector r = residual_closed(pts, t);
    const std::vector<double> scales = window_scales(t);
    for (std::size_t j = 0; j < scales.size(); ++j) {
        r.values[2 * j] /= scales[j];
        r.values[2 * j + 1] /= scales[j];
    }
    return r;
}

Eigen::MatrixXd jacobian(const PointSequence& pts, const ParameterVector& t) {
    require_parameter_count(pts, t.size());
    const int n = pts.degree();
    const int dim = 2 * n - 2;
    const std::vector<double> full = t.full();
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(dim, dim);

    for (int j = 1; j <= n - 1; ++j) {
        const int first = j - 1;
        const int count = n + 2;
        const std::span<const double> nodes(full.data() + first, count);
        polyalg::require_distinct(nodes);
        const std::vector<double> w = window_weights(nodes);
        const Point base = pts[first];

        for (int p = 0; p < count; ++p) {
            const int global = first + p;
            if (global < 1 || global > dim) continue;  // endpoints are fixed
            double ga = 0.0;
            double gb = 0.0;
            for (int l = 0; l < count; ++l) {
                double dw;
                if (l == p) {
                    double s = 0.0;
                    for (int m = 0; m < count; ++m) {
                        if (m != p) s += 1.0 / (nodes[p] - nodes[m]);
                    }
                    dw = -w[p] * s;
                } else {
                    dw = w[l] / (nodes[l] - nodes[p]);
                }
                const Point d = pts[first + l] - base;
                ga += dw * d.x;
                gb += dw * d.y;
            }
            jac(2 * (j - 1), global - 1) = ga;
            jac(2 * (j - 1) + 1, global - 1) = gb;
        }
    }
    return jac;
}

std::string_view to_string(SolveStatus status) noexcept {
    switch (status) {
        case SolveStatus::converged:
            return "converged";
        case SolveStatus::max_iterations_exceeded:
            return "max_iterations_exceeded";
        case SolveStatus::singular_jacobian:
            return "singular_jacobian";
        case SolveStatus::line_search_failed:
            return "line_search_failed";
        case SolveStatus::unverified:
            return "unverified";
    }
    return "unknown";
}

SolveResult solve_quadratic(const PointSequence& pts, const SolverOptions& options) {
    if (pts.degree() != 2) {
        throw NotQuadratic("closed form needs exactly 4 points, got " + std::to_string(pts.size()));
    }
    double d01 = cross(pts.difference(0), pts.difference(1));
    double d02 = cross(pts.difference(0), pts.difference(2));
    double d12 = cross(pts.difference(1), pts.difference(2));

    const double scale = pts.data_scale();
    const double threshold = admissibility::kStrictTolerance * scale * scale;
    const int s01 = admissibility::strict_sign(d01, threshold);
    const int s02 = admissibility::strict_sign(d02, threshold);
    const int s12 = admissibility::strict_sign(d12, threshold);
    if (s01 == 0 || s01 != s02 || s01 != s12) {
        throw InadmissibleDeterminants("determinants D01, D02, D12 do not share a strict sign");
    }
    if (s01 < 0) {
        d01 = -d01;
        d02 = -d02;
        d12 = -d12;
    }

    const double root = std::sqrt(d01 * d12 * (d01 + d02) * (d12 + d02));
    const double t1 = d01 * d02 / (d01 * (d12 + d02) + root);
    const double t2 = (d01 * d12 + root) / (d12 * (d01 + d02) + root);

    ParameterVector t({t1, t2});
    const double norm = scaled_residual(pts, t).max_norm();
    const bool ok = norm <= options.tolerance * scale;
    SolveResult result{t, norm, 0, ok,
                       ok ? SolveStatus::converged : SolveStatus::max_iterations_exceeded, 0, {}};
    if (options.record_trace) result.trace.push_back({{t1, t2}, norm});
    return result;
}

namespace {

// Cumulative |ΔT|^power normalised to [0, 1]; empty when a gap is below floor.
std::optional<ParameterVector> chord_start(const PointSequence& pts, double power, double floor) {
    std::vector<double> acc(pts.size(), 0.0);
    for (std::size_t l = 1; l < pts.size(); ++l) {
        const Point d = pts.difference(l - 1);
        acc[l] = acc[l - 1] + std::pow(std::sqrt(dot(d, d)), power);
    }
    std::vector<double> interior;
    for (std::size_t l = 1; l + 1 < pts.size(); ++l) interior.push_back(acc[l] / acc.back());
    double prev = 0.0;
    for (double v : interior) {
        if (!(v - prev > floor)) return std::nullopt;
        prev = v;
    }
    if (!(1.0 - prev > floor)) return std::nullopt;
    return ParameterVector(std::move(interior));
}

struct Attempt {
    SolveStatus status = SolveStatus::max_iterations_exceeded;
    int iterations = 0;
    std::optional<ParameterVector> t;
};

// Max deviation of the interpolants through the first and the last n+1
// points from the points outside their window.
double window_defect(const PointSequence& pts, const ParameterVector& t) {
    const std::size_t n = static_cast<std::size_t>(pts.degree());
    const std::vector<double> full = t.full();
    double worst = 0.0;
    for (const std::size_t first : {std::size_t{0}, full.size() - n - 1}) {
        std::vector<double> xs, ys;
        for (std::size_t l = first; l <= first + n; ++l) {
            xs.push_back(pts[l].x);
            ys.push_back(pts[l].y);
        }
        const std::span<const double> nodes(full.data() + first, n + 1);
        const auto px = polyalg::newton_interpolant(nodes, xs);
        const auto py = polyalg::newton_interpolant(nodes, ys);
        for (std::size_t l = 0; l < full.size(); ++l) {
            if (l >= first && l <= first + n) continue;
            const Point p{polyalg::eval_poly(px, full[l]), polyalg::eval_poly(py, full[l])};
            worst = std::max(worst, max_norm(p - pts[l]));
        }
    }
    return worst;
}

}  // namespace

SolveResult newton_solve(const PointSequence& pts, const std::optional<ParameterVector>& start,
                         const SolverOptions& options) {
    const int n = pts.degree();
    const int dim = 2 * n - 2;
    if (start) require_parameter_count(pts, start->size());

    const double tol = options.tolerance * pts.data_scale();
    std::mt19937_64 rng(options.seed);

    std::vector<ParameterVector> starts{start.value_or(ParameterVector::equidistant(n))};
    for (double power : {1.0, 0.5}) {
        if (auto c = chord_start(pts, power, options.gap_floor)) starts.push_back(std::move(*c));
    }

    ParameterVector best = starts.front();
    double best_norm = std::numeric_limits<double>::infinity();
    std::vector<IterationRecord> trace;

    auto record = [&](const ParameterVector& t, double norm) {
        if (options.record_trace) {
            trace.push_back({std::vector<double>(t.interior().begin(), t.interior().end()), norm});
        }
        if (norm < best_norm) {
            best_norm = norm;
            best = t;
        }
    };

    // Residual divided by window scales frozen at the current iterate.
    auto frozen = [&](const ParameterVector& t, const std::vector<double>& scales) {
        const ResidualVector f = residual_closed(pts, t);
        Eigen::VectorXd v(dim);
        for (int k = 0; k < dim; ++k) v(k) = f.values[k] / scales[k / 2];
        return v;
    };

    // Backtracks along `step` under the Armijo rule on 0.5 |F|^2.
    auto line_search = [&](const ParameterVector& t, const Eigen::VectorXd& step, const Eigen::VectorXd& f,
                           const Eigen::VectorXd& slope_dir, const std::vector<double>& scales)
        -> std::optional<std::pair<ParameterVector, double>> {
        const double phi0 = 0.5 * f.squaredNorm();
        const double slope = f.dot(slope_dir);
        if (!(slope < 0.0)) return std::nullopt;
        double alpha = feasible_step(t.full(), step, options.gap_floor);
        for (int h = 0; h <= options.max_halvings && alpha > 0.0; ++h, alpha *= 0.5) {
            std::vector<double> trial(t.interior().begin(), t.interior().end());
            for (int k = 0; k < dim; ++k) trial[k] += alpha * step(k);
            if (!std::is_sorted(trial.begin(), trial.end())) continue;
            ParameterVector candidate(std::move(trial));
            if (candidate.min_gap() <= options.gap_floor) continue;
            const double phi = 0.5 * frozen(candidate, scales).squaredNorm();
            if (phi <= phi0 + 1e-4 * alpha * slope) return std::make_pair(std::move(candidate), phi);
        }
        return std::nullopt;
    };

    enum class StepFailure { none, singular, line_search };

    auto advance = [&](const ParameterVector& t, StepFailure& failure) -> std::optional<ParameterVector> {
        const std::vector<double> scales = window_scales(t);
        const Eigen::VectorXd f = frozen(t, scales);
        Eigen::MatrixXd jac = jacobian(pts, t);
        for (int k = 0; k < dim; ++k) jac.row(k) /= scales[k / 2];

        std::vector<Eigen::VectorXd> steps;
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
        cod.setThreshold(options.rank_threshold);
        cod.compute(jac);
        if (cod.rank() > 0) steps.push_back(cod.solve(-f));

        // Levenberg-Marquardt with mu = |F|^2, as an augmented least-squares problem.
        const double root_mu = f.norm();
        Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(2 * dim, dim);
        aug.topRows(dim) = jac;
        aug.bottomRows(dim).diagonal().setConstant(root_mu);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * dim);
        rhs.head(dim) = -f;
        steps.push_back(aug.colPivHouseholderQr().solve(rhs));

        std::optional<std::pair<ParameterVector, double>> chosen;
        for (const auto& step : steps) {
            if (!step.allFinite()) continue;
            auto found = line_search(t, step, f, jac * step, scales);
            if (found && (!chosen || found->second < chosen->second)) chosen = std::move(found);
        }
        if (!chosen) {
            failure = steps.empty() ? StepFailure::singular : StepFailure::line_search;
            return std::nullopt;
        }
        return std::move(chosen->first);
    };

    const double verify_tol = options.verify_tolerance * pts.data_scale();
    auto accepted = [&](const ParameterVector& t, double norm) {
        return norm < tol && window_defect(pts, t) <= verify_tol;
    };

    auto run = [&](ParameterVector t) {
        Attempt a;
        double norm = scaled_residual(pts, t).max_norm();
        record(t, norm);
        StepFailure failure = StepFailure::none;
        bool done = accepted(t, norm);
        for (int iter = 0; iter < options.max_iterations && !done; ++iter) {
            auto next = advance(t, failure);
            ++a.iterations;
            if (!next) {
                a.status = norm < tol                          ? SolveStatus::unverified
                           : failure == StepFailure::singular ? SolveStatus::singular_jacobian
                                                              : SolveStatus::line_search_failed;
                a.t = std::move(t);
                return a;
            }
            t = std::move(*next);
            norm = scaled_residual(pts, t).max_norm();
            record(t, norm);
            done = accepted(t, norm);
        }
        if (!done) {
            a.status = norm < tol ? SolveStatus::unverified : SolveStatus::max_iterations_exceeded;
            a.t = std::move(t);
            return a;
        }
        // Polish while each step at least halves the residual.
        for (int k = 0; k < options.polish_steps && norm > 0.0; ++k) {
            auto next = advance(t, failure);
            if (!next) break;
            const double polished = scaled_residual(pts, *next).max_norm();
            if (!(polished <= 0.5 * norm) || !accepted(*next, polished)) break;
            ++a.iterations;
            t = std::move(*next);
            norm = polished;
            record(t, norm);
        }
        a.status = SolveStatus::converged;
        a.t = std::move(t);
        return a;
    };

    int total_iterations = 0;
    int attempts = 0;
    SolveStatus last_status = SolveStatus::max_iterations_exceeded;
    std::optional<ParameterVector> root;
    const int max_attempts = static_cast<int>(starts.size()) + options.max_restarts;
    while (attempts < max_attempts && !root) {
        ParameterVector t0 = attempts < static_cast<int>(starts.size())
                                 ? starts[attempts]
                                 : ParameterVector(random_ordered(dim, options.gap_floor, rng));
        ++attempts;
        Attempt a = run(std::move(t0));
        total_iterations += a.iterations;
        last_status = a.status;
        if (a.status == SolveStatus::converged) root = std::move(*a.t);
    }

    const bool converged = root.has_value();
    ParameterVector t = converged ? std::move(*root) : std::move(best);
    const double norm = scaled_residual(pts, t).max_norm();
    return SolveResult{std::move(t),
                       norm,
                       total_iterations,
                       converged,
                       converged ? SolveStatus::converged : last_status,
                       attempts - 1,
                       std::move(trace)};
}

}  // namespace geointerp::solver
