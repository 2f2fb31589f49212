#include "geointerp/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "geointerp/errors.hpp"

namespace geointerp::io {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_field(std::string_view field, std::size_t line) {
    field = trim(field);
    double value = 0.0;
    const char* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw ParseError(line, "invalid number '" + std::string(field) + "'");
    }
    return value;
}

std::string fixed6(double value) {
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.6f", value);
    std::string s(buf.data());
    if (s == "-0.000000") s = "0.000000";
    return s;
}

std::string xml_escape(std::string_view text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

constexpr std::array<const char*, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c",
                                              "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string format_number(double value) {
    std::array<char, 64> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", value);
    return buf.data();
}

PointSequence parse_points(std::istream& in) {
    std::vector<Point> pts;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view text(raw);
        if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
        text = trim(text);
        if (text.empty()) continue;
        const auto comma = text.find(',');
        if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
            throw ParseError(line, "expected exactly one ',' separating x and y");
        }
        pts.push_back({parse_field(text.substr(0, comma), line), parse_field(text.substr(comma + 1), line)});
    }
    if (pts.size() % 2 != 0) {
        throw OddCount("point count must be even, got " + std::to_string(pts.size()));
    }
    if (pts.size() < 4) throw TooFew("need at least 4 points, got " + std::to_string(pts.size()));
    return PointSequence(std::move(pts));
}

PointSequence parse_points(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_points(in);
}

std::string emit_points(const PointSequence& pts) {
    std::string out;
    for (const auto& p : pts.points()) {
        out += format_number(p.x);
        out += ',';
        out += format_number(p.y);
        out += '\n';
    }
    return out;
}

std::string emit_solution(const solver::SolveResult& result, const curve::PolynomialCurve& curve,
                          const PointSequence& pts, const SolutionCsvOptions& options) {
    std::string out = "t,a,b,residual\n";
    const std::vector<double> params = result.t.full();
    for (std::size_t l = 0; l < pts.size(); ++l) {
        const double residual = max_norm(curve::eval_curve(curve, params[l]) - pts[l]);
        out += format_number(params[l]) + ',' + format_number(pts[l].x) + ',' +
               format_number(pts[l].y) + ',' + format_number(residual) + '\n';
    }
    out += "residual_norm," + format_number(result.residual_norm) + '\n';
    out += "iterations," + std::to_string(result.iterations) + '\n';
    out += std::string("converged,") + (result.converged ? "true" : "false") + '\n';

    if (options.include_trace && !result.trace.empty()) {
        out += "trace\niteration,residual_norm";
        for (std::size_t k = 1; k <= result.t.size(); ++k) out += ",t" + std::to_string(k);
        out += '\n';
        for (std::size_t i = 0; i < result.trace.size(); ++i) {
            out += std::to_string(i) + ',' + format_number(result.trace[i].residual_norm);
            for (double v : result.trace[i].t) out += ',' + format_number(v);
            out += '\n';
        }
    }
    return out;
}

std::string emit_svg(const PointSequence& pts, const std::vector<LabeledCurve>& curves,
                     std::size_t samples_per_curve, const SvgOptions& options) {
    if (samples_per_curve < 2) throw InvalidArgument("need at least two samples per curve");

    double min_x = pts[0].x, max_x = pts[0].x, min_y = pts[0].y, max_y = pts[0].y;
    for (const auto& p : pts.points()) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    double w = max_x - min_x;
    double h = max_y - min_y;
    const double extent = std::max({w, h, 1e-12});
    if (w <= 0.0) w = extent;
    if (h <= 0.0) h = extent;
    const double vx = min_x - 0.05 * w;
    const double vy = -(max_y + 0.05 * h);  // y is flipped inside the plot group
    const double vw = 1.1 * w;
    const double vh = 1.1 * h;
    const double size = std::max(vw, vh);

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\""
        << options.height << "\" viewBox=\"" << fixed6(vx) << ' ' << fixed6(vy) << ' ' << fixed6(vw)
        << ' ' << fixed6(vh) << "\" preserveAspectRatio=\"xMidYMid meet\">\n";
    svg << "<rect x=\"" << fixed6(vx) << "\" y=\"" << fixed6(vy) << "\" width=\"" << fixed6(vw)
        << "\" height=\"" << fixed6(vh) << "\" fill=\"white\"/>\n";
    svg << "<g transform=\"scale(1,-1)\">\n";

    for (std::size_t c = 0; c < curves.size(); ++c) {
        svg << "<polyline fill=\"none\" stroke=\"" << kPalette[c % kPalette.size()]
            << "\" stroke-width=\"1.5\" vector-effect=\"non-scaling-stroke\" points=\"";
        for (std::size_t i = 0; i < samples_per_curve; ++i) {
            const double t = static_cast<double>(i) / (samples_per_curve - 1);
            const Point p = curve::eval_curve(curves[c].curve, t);
            if (i > 0) svg << ' ';
            svg << fixed6(p.x) << ',' << fixed6(p.y);
        }
        svg << "\"/>\n";
    }
    for (const auto& p : pts.points()) {
        svg << "<circle cx=\"" << fixed6(p.x) << "\" cy=\"" << fixed6(p.y) << "\" r=\""
            << fixed6(0.008 * size) << "\" fill=\"black\"/>\n";
    }
    svg << "</g>\n";

    const double font = 0.04 * size;
    for (std::size_t c = 0; c < curves.size(); ++c) {
        svg << "<text x=\"" << fixed6(vx + 0.02 * vw) << "\" y=\""
            << fixed6(vy + (static_cast<double>(c) + 1.5) * font) << "\" font-size=\"" << fixed6(font)
            << "\" font-family=\"sans-serif\" fill=\"" << kPalette[c % kPalette.size()] << "\">"
            << xml_escape(curves[c].label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string admissibility_json(const admissibility::AdmissibilityReport& report) {
    nlohmann::ordered_json j;
    j["theorem1"] = {{"pass", report.theorem1.pass},
                     {"signs",
                      {{"differences", report.theorem1.difference_sign},
                       {"determinants", report.theorem1.determinant_sign}}}};
    j["theorem2"] = {{"pass", report.theorem2.pass}, {"sign", report.theorem2.sign}};
    if (report.transform) {
        const Matrix2& m = *report.transform;
        j["transform"] = {{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}};
    } else {
        j["transform"] = nullptr;
    }
    return j.dump(2) + '\n';
}

}  // namespace geointerp::io
