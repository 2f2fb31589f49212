#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "geointerp/analysis.hpp"
#include "geointerp/curve.hpp"
#include "geointerp/errors.hpp"
#include "geointerp/polyalg.hpp"
#include "geointerp/solver.hpp"
#include "test_support.hpp"

namespace sv = geointerp::solver;
using geointerp::Matrix2;
using geointerp::Point;
using geointerp::PointSequence;
using geointerp::testing::Rng;

namespace {

PointSequence parabola(int n) {
    std::vector<Point> pts;
    for (int k = 0; k < 2 * n; ++k) pts.push_back({double(k), double(k * k)});
    return PointSequence(std::move(pts));
}

int sign(double v) { return (v > 0) - (v < 0); }

}  // namespace

TEST(ParameterVector, Invariants) {
    EXPECT_THROW(sv::ParameterVector({0.5, 0.4}), geointerp::InvalidArgument);
    EXPECT_THROW(sv::ParameterVector({0.0, 0.4}), geointerp::InvalidArgument);
    EXPECT_THROW(sv::ParameterVector({0.4, 1.0}), geointerp::InvalidArgument);
    const auto eq = sv::ParameterVector::equidistant(3);
    ASSERT_EQ(eq.size(), 4u);
    EXPECT_DOUBLE_EQ(eq[0], 0.2);
    EXPECT_DOUBLE_EQ(eq.min_gap(), 0.2);
    EXPECT_EQ(eq.full().front(), 0.0);
    EXPECT_EQ(eq.full().back(), 1.0);
}

TEST(ResidualClosed, Examples) {
    const auto r = sv::residual_closed(parabola(2), sv::ParameterVector({1.0 / 3, 2.0 / 3}));
    ASSERT_EQ(r.values.size(), 2u);
    EXPECT_NEAR(r.values[0], 0.0, 1e-12);
    EXPECT_NEAR(r.values[1], 0.0, 1e-12);

    const auto r3 = sv::residual_closed(parabola(3), sv::ParameterVector::equidistant(3));
    ASSERT_EQ(r3.values.size(), 4u);
    for (double v : r3.values) EXPECT_NEAR(v, 0.0, 1e-11);

    Rng rng(31);
    std::vector<Point> pts;
    for (int k = 0; k < 8; ++k) {
        const double b = geointerp::testing::uniform(rng, -1, 1) + k;
        pts.push_back({b + 3.0, b});
    }
    const auto rs = sv::residual_closed(PointSequence(pts), sv::ParameterVector::equidistant(4));
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(rs.values[2 * j], rs.values[2 * j + 1], 1e-9);
}

TEST(ResidualPolynomial, Examples) {
    const auto face = sv::residual_polynomial(parabola(2), std::vector<double>{0, 0.4, 0.4, 1});
    ASSERT_EQ(face.values.size(), 2u);
    EXPECT_NEAR(face.values[0], -0.24, 1e-15);

    Rng rng(32);
    const PointSequence constant_a({{2, 0}, {2, 1}, {2, 4}, {2, 9}});
    const auto ra = sv::residual_polynomial(constant_a, geointerp::testing::random_parameters(rng, 2));
    EXPECT_NEAR(ra.values[0], 0.0, 1e-15);
}

TEST(ResidualForms, MultiplyByVandermonde) {
    Rng rng(33);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 5;
        const auto pts = geointerp::testing::random_convex_data(rng, n);
        const auto t = geointerp::testing::random_parameters(rng, n);
        const auto full = t.full();
        const auto closed = sv::residual_closed(pts, t);
        const auto poly = sv::residual_polynomial(pts, t);
        for (int j = 1; j <= n - 1; ++j) {
            const std::vector<double> window(full.begin() + (j - 1), full.begin() + (n + j + 1));
            const double v = geointerp::polyalg::vandermonde(window);
            for (int c = 0; c < 2; ++c) {
                const double expected = closed.values[2 * (j - 1) + c] * v;
                const double got = poly.values[2 * (j - 1) + c];
                EXPECT_NEAR(got, expected, 1e-9 * std::max(std::abs(expected), 1e-12));
            }
        }
    }
}

TEST(ResidualProperties, TranslationInvariance) {
    Rng rng(34);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 5;
        const auto pts = geointerp::testing::random_convex_data(rng, n);
        const auto moved = pts.translated(geointerp::testing::random_offset(rng, 10.0));
        const auto t = geointerp::testing::random_parameters(rng, n);
        const auto a = sv::scaled_residual(pts, t).values;
        const auto b = sv::scaled_residual(moved, t).values;
        for (std::size_t k = 0; k < a.size(); ++k) {
            EXPECT_NEAR(a[k], b[k], 1e-12 * (pts.coordinate_scale() + moved.coordinate_scale()) * (1 << n));
        }
    }
}

TEST(ResidualProperties, LinearMapMixesPairs) {
    Rng rng(35);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 5;
        const auto pts = geointerp::testing::random_convex_data(rng, n);
        const Matrix2 m = geointerp::testing::random_linear_map(rng);
        const auto t = geointerp::testing::random_parameters(rng, n);
        const auto f = sv::scaled_residual(pts, t).values;
        const auto g = sv::scaled_residual(pts.transformed(m), t).values;
        for (int j = 0; j < n - 1; ++j) {
            const Point expected = m.apply({f[2 * j], f[2 * j + 1]});
            const double tol = 1e-11 * (1 + std::abs(f[2 * j]) + std::abs(f[2 * j + 1])) * 4;
            EXPECT_NEAR(g[2 * j], expected.x, tol);
            EXPECT_NEAR(g[2 * j + 1], expected.y, tol);
        }
    }
}

TEST(ResidualProperties, FaceSignLaw) {
    Rng rng(36);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 2 + trial % 4;
        auto pts = geointerp::testing::monotone_convex_data(rng, n);
        pts = pts.transformed(Matrix2{{trial % 2 ? 1.0 : -1.0, 0, 0, trial % 3 ? 1.0 : -1.0}});
        const int j = 1 + static_cast<int>(rng() % (n - 1));
        const int l = j - 1 + static_cast<int>(rng() % (n + 1));
        auto base = geointerp::testing::random_increasing(rng, 0.0, 1.0, 2 * n - 1);
        base.insert(base.begin() + l, base[l]);
        const auto r = sv::residual_polynomial(pts, base);
        const auto d = pts.difference(l);
        const int parity = ((n + j - 1 - l) % 2 == 0) ? 1 : -1;
        EXPECT_EQ(sign(r.values[2 * (j - 1)]), parity * sign(d.x));
        EXPECT_EQ(sign(r.values[2 * (j - 1) + 1]), parity * sign(d.y));
        ++checked;
    }
    EXPECT_EQ(checked, 300);
}

TEST(Jacobian, FiniteDifferenceAndBanding) {
    Rng rng(37);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 5;
        const auto pts = geointerp::testing::random_convex_data(rng, n);
        const auto t = geointerp::testing::random_parameters(rng, n);
        const auto jac = sv::jacobian(pts, t);
        const auto fd = geointerp::testing::fd_jacobian(pts, t);
        const double scale = jac.cwiseAbs().maxCoeff();
        for (int r = 0; r < jac.rows(); ++r) {
            const int j = r / 2 + 1;
            for (int c = 0; c < jac.cols(); ++c) {
                const int node = c + 1;
                if (node < j - 1 || node > n + j) {
                    EXPECT_EQ(jac(r, c), 0.0);
                } else {
                    EXPECT_NEAR(jac(r, c), fd(r, c), 1e-6 * std::max(std::abs(jac(r, c)), 1e-6 * scale));
                }
            }
        }
        const auto doubled = sv::jacobian(pts.transformed(Matrix2{{2, 0, 0, 2}}), t);
        EXPECT_TRUE(doubled.isApprox(2.0 * jac, 1e-14));
    }
}

TEST(SolveQuadratic, Parabola) {
    const auto res = sv::solve_quadratic(parabola(2));
    EXPECT_TRUE(res.converged);
    EXPECT_NEAR(res.t[0], 1.0 / 3, 1e-15);
    EXPECT_NEAR(res.t[1], 2.0 / 3, 1e-15);
}

TEST(SolveQuadratic, SymmetricData) {
    Rng rng(38);
    for (int trial = 0; trial < 50; ++trial) {
        const double u = geointerp::testing::uniform(rng, 0.1, 0.45);
        const double c = geointerp::testing::uniform(rng, 0.5, 2.0);
        std::vector<Point> pts;
        for (double x : {-1.0, -u, u, 1.0}) pts.push_back({x, c * x * x});
        const auto res = sv::solve_quadratic(PointSequence(pts));
        EXPECT_NEAR(res.t[1], 1.0 - res.t[0], 1e-14);
    }
}

TEST(SolveQuadratic, ResidualVanishesAndErrors) {
    Rng rng(39);
    for (int trial = 0; trial < 100; ++trial) {
        const auto pts = geointerp::testing::random_convex_data(rng, 2);
        const auto res = sv::solve_quadratic(pts);
        EXPECT_LT(sv::scaled_residual(pts, res.t).max_norm(), 1e-10 * pts.data_scale());
    }
    EXPECT_THROW(sv::solve_quadratic(parabola(3)), geointerp::NotQuadratic);
    EXPECT_THROW(sv::solve_quadratic(PointSequence({{0, 0}, {1, 1}, {2, 2}, {3, 3}})),
                 geointerp::InadmissibleDeterminants);
    EXPECT_THROW(sv::solve_quadratic(PointSequence({{0, 0}, {1, 1}, {2, 0}, {3, 1}})),
                 geointerp::InadmissibleDeterminants);
}

TEST(NewtonSolve, ParabolaExamples) {
    const auto res = sv::newton_solve(parabola(2));
    EXPECT_TRUE(res.converged);
    EXPECT_LE(res.iterations, 6);
    EXPECT_NEAR(res.t[0], 1.0 / 3, 1e-10);
    EXPECT_NEAR(res.t[1], 2.0 / 3, 1e-10);

    for (int n = 2; n <= 6; ++n) {
        const auto r = sv::newton_solve(parabola(n));
        ASSERT_TRUE(r.converged) << n;
        const auto eq = sv::ParameterVector::equidistant(n);
        for (std::size_t k = 0; k < eq.size(); ++k) EXPECT_NEAR(r.t[k], eq[k], 1e-10);
    }
}

TEST(NewtonSolve, CircleArc) {
    const auto g = geointerp::analysis::DataCurve::circle_arc(1.0, 0.0, std::numbers::pi / 2);
    const auto pts = geointerp::analysis::sample_points(g, geointerp::analysis::equal_spacing(g.lo(), g.hi(), 6));
    const auto res = sv::newton_solve(pts);
    ASSERT_TRUE(res.converged);
    EXPECT_LT(res.residual_norm, 1e-12 * pts.data_scale());
    const auto c = geointerp::curve::construct_curve(pts, res.t);
    EXPECT_LT(geointerp::curve::verify_interpolation(c, pts, res.t), 1e-9 * pts.data_scale());
}

TEST(NewtonSolve, TraceAndDeterminism) {
    Rng rng(40);
    const auto pts = geointerp::testing::random_convex_data(rng, 4);
    const auto a = sv::newton_solve(pts);
    const auto b = sv::newton_solve(pts);
    ASSERT_TRUE(a.converged);
    EXPECT_EQ(a.trace.size(), static_cast<std::size_t>(a.iterations) + 1);
    for (std::size_t k = 0; k < a.t.size(); ++k) EXPECT_EQ(a.t[k], b.t[k]);
    for (std::size_t k = 1; k < a.trace.size(); ++k) {
        EXPECT_LT(a.trace[k].residual_norm, a.trace[k - 1].residual_norm);
    }
    sv::SolverOptions quiet;
    quiet.record_trace = false;
    EXPECT_TRUE(sv::newton_solve(pts, std::nullopt, quiet).trace.empty());
}

TEST(NewtonSolve, IterationCapReportsUnconverged) {
    Rng rng(41);
    const auto pts = geointerp::testing::random_convex_data(rng, 5);
    sv::SolverOptions capped;
    capped.max_iterations = 1;
    capped.tolerance = 1e-300;
    const auto res = sv::newton_solve(pts, std::nullopt, capped);
    EXPECT_FALSE(res.converged);
    EXPECT_EQ(res.status, sv::SolveStatus::max_iterations_exceeded);
}

TEST(NewtonSolve, CollinearDataDoesNotThrow) {
    const PointSequence pts({{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}, {5, 5}});
    EXPECT_NO_THROW({
        const auto res = sv::newton_solve(pts);
        (void)res;
    });
}

TEST(NewtonSolve, ConvergedImpliesTolerance) {
    Rng rng(42);
    for (int trial = 0; trial < 60; ++trial) {
        const int n = 2 + trial % 5;
        const auto pts = geointerp::testing::random_convex_data(rng, n);
        const auto res = sv::newton_solve(pts);
        ASSERT_TRUE(res.converged);
        EXPECT_LE(res.residual_norm, 1e-12 * pts.data_scale());
        EXPECT_GT(res.t.min_gap(), 0.0);
    }
}

TEST(NewtonSolve, UnverifiedRootIsNotConverged) {
    const auto g = geointerp::analysis::DataCurve::circle_arc(1.0, 0.0, std::numbers::pi / 2);
    const auto pts = geointerp::analysis::sample_points(g, geointerp::analysis::equal_spacing(g.lo(), g.hi(), 8));
    sv::SolverOptions strict;
    strict.verify_tolerance = 0.0;
    strict.max_restarts = 0;
    const auto res = sv::newton_solve(pts, std::nullopt, strict);
    EXPECT_FALSE(res.converged);
    EXPECT_EQ(res.status, sv::SolveStatus::unverified);
    EXPECT_EQ(sv::to_string(res.status), "unverified");
    EXPECT_LT(res.residual_norm, 1e-12 * pts.data_scale());
}
