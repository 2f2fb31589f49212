#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <regex>
#include <string>

#include <json.hpp>

#include "geointerp/admissibility.hpp"
#include "geointerp/curve.hpp"
#include "geointerp/errors.hpp"
#include "geointerp/io.hpp"
#include "geointerp/solver.hpp"
#include "test_support.hpp"

namespace io = geointerp::io;
namespace sv = geointerp::solver;
using geointerp::Point;
using geointerp::PointSequence;
using geointerp::testing::Rng;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
    std::size_t c = 0;
    for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++c;
    return c;
}

}  // namespace

TEST(ParsePoints, Examples) {
    const auto pts = io::parse_points(std::string_view("0,0\n1,1\n2,4\n3,9"));
    EXPECT_EQ(pts.size(), 4u);
    EXPECT_EQ(pts.degree(), 2);
    EXPECT_EQ(pts[3], (Point{3, 9}));

    const auto same = io::parse_points(std::string_view("# header\n0,0\n\n1,1\n2,4\n3,9"));
    EXPECT_EQ(same.size(), 4u);
    EXPECT_EQ(same[1], (Point{1, 1}));

    const auto spaced = io::parse_points(std::string_view(" 0 , 0 \r\n1,1 # note\n2,4\n3,9\n"));
    EXPECT_EQ(spaced[0], (Point{0, 0}));

    EXPECT_THROW(io::parse_points(std::string_view("0,0\n1,1\n2,4")), geointerp::OddCount);
    EXPECT_THROW(io::parse_points(std::string_view("0,0\n1,1")), geointerp::TooFew);
}

TEST(ParsePoints, ErrorLineNumbers) {
    try {
        io::parse_points(std::string_view("# c\n0,0\n1,x\n2,4\n"));
        FAIL() << "expected ParseError";
    } catch (const geointerp::ParseError& e) {
        EXPECT_EQ(e.line(), 3u);
    }
    EXPECT_THROW(io::parse_points(std::string_view("0,0,0\n1,1\n2,4\n3,9")), geointerp::ParseError);
    EXPECT_THROW(io::parse_points(std::string_view("0;0\n1,1\n2,4\n3,9")), geointerp::ParseError);
    EXPECT_THROW(io::parse_points(std::string_view("0,inf\n1,1\n2,4\n3,9")), geointerp::ParseError);
    EXPECT_THROW(io::parse_points(std::string_view("0,\n1,1\n2,4\n3,9")), geointerp::ParseError);
}

TEST(ParsePoints, RoundTripIsBitExact) {
    Rng rng(71);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> expo(-300, 300);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Point> raw;
        double x = 0.0;
        for (int k = 0; k < 2 * (2 + trial % 5); ++k) {
            x += 1.0 + std::abs(mant(rng));
            raw.push_back({trial % 3 ? x : std::ldexp(x, expo(rng)), std::ldexp(mant(rng), expo(rng))});
        }
        if (trial == 0) raw[1].y = -0.0;
        const PointSequence pts(raw);
        const auto back = io::parse_points(io::emit_points(pts));
        ASSERT_EQ(back.size(), pts.size());
        for (std::size_t l = 0; l < pts.size(); ++l) {
            EXPECT_EQ(std::signbit(back[l].x), std::signbit(pts[l].x));
            EXPECT_EQ(std::signbit(back[l].y), std::signbit(pts[l].y));
            EXPECT_EQ(back[l], pts[l]);
        }
    }
}

TEST(FormatNumber, SeventeenDigits) {
    EXPECT_EQ(io::format_number(1.0 / 3), "0.33333333333333331");
    EXPECT_EQ(io::format_number(1.0), "1");
    EXPECT_EQ(io::format_number(0.0), "0");
    EXPECT_EQ(io::format_number(std::numeric_limits<double>::denorm_min()), "4.9406564584124654e-324");
}

TEST(EmitSolution, ParabolaRows) {
    const PointSequence pts({{0, 0}, {1, 1}, {2, 4}, {3, 9}});
    const auto res = sv::solve_quadratic(pts);
    const auto c = geointerp::curve::construct_curve(pts, res.t);
    const std::string csv = io::emit_solution(res, c, pts);
    EXPECT_EQ(csv.rfind("t,a,b,residual\n0,0,0,0\n0.33333333333333331,1,1,0\n", 0), 0u) << csv;
    EXPECT_NE(csv.find("converged,true\n"), std::string::npos);
    EXPECT_EQ(csv.find("trace"), std::string::npos);
    EXPECT_EQ(csv, io::emit_solution(res, c, pts));

    auto unconverged = res;
    unconverged.converged = false;
    unconverged.trace.clear();
    const std::string bad = io::emit_solution(unconverged, c, pts, {true});
    EXPECT_NE(bad.find("converged,false\n"), std::string::npos);
    EXPECT_EQ(bad.find("trace"), std::string::npos);
}

TEST(EmitSolution, TraceSection) {
    Rng rng(72);
    const auto pts = geointerp::testing::random_convex_data(rng, 3);
    const auto res = sv::newton_solve(pts);
    const auto c = geointerp::curve::construct_curve(pts, res.t);
    const std::string csv = io::emit_solution(res, c, pts, {true});
    EXPECT_NE(csv.find("trace\niteration,residual_norm,t1,t2,t3,t4\n"), std::string::npos);
    EXPECT_EQ(count(csv, "\n"), 1 + 6 + 3 + 2 + res.trace.size());
}

TEST(EmitSvg, Examples) {
    const PointSequence pts({{0, 0}, {1, 1}, {2, 4}, {3, 9}});
    const auto res = sv::solve_quadratic(pts);
    const auto c = geointerp::curve::construct_curve(pts, res.t);

    const std::string one = io::emit_svg(pts, {{c, "geometric"}}, 2);
    EXPECT_EQ(count(one, "<polyline"), 1u);
    const std::regex pts_attr("points=\"([^\"]*)\"");
    std::smatch m;
    ASSERT_TRUE(std::regex_search(one, m, pts_attr));
    EXPECT_EQ(m[1].str(), "0.000000,0.000000 3.000000,9.000000");
    EXPECT_EQ(count(one, "<circle"), 4u);
    EXPECT_NE(one.find(">geometric</text>"), std::string::npos);
    EXPECT_NE(one.find("viewBox=\"-0.150000 -9.450000 3.300000 9.900000\""), std::string::npos);

    const std::string none = io::emit_svg(pts, {}, 10);
    EXPECT_EQ(count(none, "<polyline"), 0u);
    EXPECT_EQ(count(none, "<circle"), 4u);

    EXPECT_EQ(io::emit_svg(pts, {{c, "a<b"}}, 50), io::emit_svg(pts, {{c, "a<b"}}, 50));
    EXPECT_NE(io::emit_svg(pts, {{c, "a<b"}}, 5).find("a&lt;b"), std::string::npos);
    EXPECT_THROW(io::emit_svg(pts, {}, 1), geointerp::InvalidArgument);
}

TEST(AdmissibilityJson, Shape) {
    const auto good = nlohmann::json::parse(
        io::admissibility_json(geointerp::admissibility::assess(PointSequence({{0, 0}, {1, 1}, {2, 4}, {3, 9}}))));
    EXPECT_EQ(good["theorem1"]["pass"], true);
    EXPECT_EQ(good["theorem1"]["signs"]["differences"], 1);
    EXPECT_EQ(good["theorem1"]["signs"]["determinants"], 1);
    EXPECT_EQ(good["theorem2"]["pass"], true);
    EXPECT_EQ(good["theorem2"]["sign"], 1);
    EXPECT_EQ(good["transform"], nlohmann::json::parse("[[1,0],[0,1]]"));

    const auto bad = nlohmann::json::parse(
        io::admissibility_json(geointerp::admissibility::assess(PointSequence({{0, 0}, {1, 1}, {2, 2}, {3, 3}}))));
    EXPECT_EQ(bad["theorem1"]["pass"], false);
    EXPECT_EQ(bad["theorem2"]["pass"], false);
    EXPECT_TRUE(bad["transform"].is_null());
}
