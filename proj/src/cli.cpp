#include "geointerp/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <ostream>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "geointerp/admissibility.hpp"
#include "geointerp/curve.hpp"
#include "geointerp/errors.hpp"
#include "geointerp/io.hpp"
#include "geointerp/solver.hpp"

namespace geointerp::cli {

namespace {

constexpr const char* kCurveHelp =
    "Built-in curve: kind[:param=value,...]\n"
    "  circle    radius=1 start=0 end=pi/2\n"
    "  ellipse   a=2 b=1 start=0 end=pi/2\n"
    "  parabola  c=1 start=0 end=3\n"
    "  spiral    k=0.2 start=0 end=pi/2";

std::shared_ptr<spdlog::logger> make_logger(std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_st>(err);
    auto logger = std::make_shared<spdlog::logger>("geointerp", sink);
    logger->set_pattern("[%l] %v");
    logger->set_level(spdlog::level::off);
    if (const char* env = std::getenv("GEOINTERP_LOG")) {
        const std::string_view level(env);
        if (level == "info") logger->set_level(spdlog::level::info);
        if (level == "trace") logger->set_level(spdlog::level::trace);
    }
    return logger;
}

double parse_double(std::string_view text, std::string_view name) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw InvalidArgument("curve parameter '" + std::string(name) + "': invalid number '" +
                              std::string(text) + "'");
    }
    return value;
}

PointSequence read_points(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open input '" + path + "'");
    return io::parse_points(in);
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot open output '" + path + "'");
    out << text;
    if (!out) throw InvalidArgument("failed writing '" + path + "'");
}

solver::SolverOptions solver_options(const JobConfig& cfg) {
    solver::SolverOptions o;
    o.tolerance = cfg.tolerance;
    o.max_iterations = cfg.max_iterations;
    o.seed = cfg.seed;
    return o;
}

PointSequence sample_curve(const JobConfig& cfg) {
    const analysis::DataCurve g = parse_curve_spec(cfg.curve_spec);
    return analysis::sample_points(g, analysis::equal_spacing(g.lo(), g.hi(), 2 * cfg.n));
}

PointSequence job_points(const JobConfig& cfg) {
    if (!cfg.input.empty()) return read_points(cfg.input);
    return sample_curve(cfg);
}

struct Solved {
    solver::SolveResult result;
    curve::PolynomialCurve curve;
    double verify = 0.0;
    bool ok = false;
};

Solved solve_points(const PointSequence& pts, const JobConfig& cfg, spdlog::logger& log) {
    const auto report = admissibility::assess(pts);
    log.info("n={} theorem1={} theorem2={} transform={}", pts.degree(), report.theorem1.pass,
             report.theorem2.pass, report.transform.has_value());

    const auto options = solver_options(cfg);
    solver::SolveResult result = (cfg.closed_form && pts.degree() == 2)
                                     ? solver::solve_quadratic(pts, options)
                                     : solver::newton_solve(pts, std::nullopt, options);
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
        log.trace("iteration {} residual {}", i, result.trace[i].residual_norm);
    }
    log.info("status={} iterations={} restarts={} residual={}", solver::to_string(result.status),
             result.iterations, result.restarts, result.residual_norm);

    auto c = curve::construct_curve(pts, result.t);
    const double verify = curve::verify_interpolation(c, pts, result.t);
    const bool ok = result.converged && verify <= curve::kVerifyTolerance * pts.data_scale();
    return {std::move(result), std::move(c), verify, ok};
}

int cmd_check(const JobConfig& cfg, std::ostream& out, spdlog::logger& log) {
    const PointSequence pts = job_points(cfg);
    const auto report = admissibility::assess(pts);
    log.info("admissible={}", report.admissible());
    out << io::admissibility_json(report);
    return report.admissible() ? exit_ok : exit_domain_failure;
}

int cmd_solve(const JobConfig& cfg, std::ostream& out, std::ostream& err, spdlog::logger& log) {
    const PointSequence pts = job_points(cfg);
    const Solved s = solve_points(pts, cfg, log);
    const std::string csv = io::emit_solution(s.result, s.curve, pts, {cfg.trace});
    if (cfg.csv_out.empty()) {
        out << csv;
    } else {
        write_file(cfg.csv_out, csv);
    }
    if (!cfg.svg_out.empty()) {
        write_file(cfg.svg_out, io::emit_svg(pts, {{s.curve, "geometric"}}, cfg.samples,
                                             {cfg.width, cfg.height}));
    }
    if (!s.ok) {
        err << "error: solve did not converge (" << solver::to_string(s.result.status)
            << ", interpolation error " << io::format_number(s.verify) << ")\n";
        return exit_domain_failure;
    }
    return exit_ok;
}

int cmd_curve(const JobConfig& cfg, std::ostream& out, std::ostream& err, spdlog::logger& log) {
    const PointSequence pts = job_points(cfg);
    const Solved s = solve_points(pts, cfg, log);
    if (!s.ok) {
        err << "error: solve did not converge (" << solver::to_string(s.result.status) << ")\n";
        return exit_domain_failure;
    }
    std::string text = "t,x,y\n";
    for (std::size_t i = 0; i < cfg.samples; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(cfg.samples - 1);
        const Point p = curve::eval_curve(s.curve, t);
        text += io::format_number(t) + ',' + io::format_number(p.x) + ',' + io::format_number(p.y) + '\n';
    }
    if (cfg.csv_out.empty()) {
        out << text;
    } else {
        write_file(cfg.csv_out, text);
    }
    return exit_ok;
}

std::string order_csv(const analysis::OrderEstimate& est) {
    std::string text = "scale,error,slope\n";
    for (std::size_t k = 0; k < est.scales.size(); ++k) {
        text += io::format_number(est.scales[k]) + ',' + io::format_number(est.errors[k]) + ',';
        if (k > 0) text += io::format_number(est.slopes[k - 1]);
        text += '\n';
    }
    return text;
}

int cmd_order(const JobConfig& cfg, std::ostream& out, std::ostream& err, spdlog::logger& log) {
    const analysis::DataCurve g = parse_curve_spec(cfg.curve_spec);
    analysis::OrderOptions options;
    options.grid_size = cfg.grid;
    options.solver = solver_options(cfg);
    options.solver.record_trace = false;
    try {
        const auto est = analysis::estimate_order(g, cfg.n, cfg.scales, cfg.shrink, options);
        for (std::size_t k = 0; k < est.scales.size(); ++k) {
            log.info("scale {} error {}", est.scales[k], est.errors[k]);
        }
        std::string text = order_csv(est);
        text += "final_order," + io::format_number(est.final_order) + '\n';
        text += std::string("reliable,") + (est.reliable ? "true" : "false") + '\n';
        if (cfg.csv_out.empty()) {
            out << text;
        } else {
            write_file(cfg.csv_out, text);
        }
        return exit_ok;
    } catch (const analysis::OrderSolveFailed& e) {
        const std::string text = order_csv(e.partial());
        if (cfg.csv_out.empty()) {
            out << text;
        } else {
            write_file(cfg.csv_out, text);
        }
        err << "error: " << e.what() << '\n';
        return exit_domain_failure;
    }
}

int cmd_sample(const JobConfig& cfg, std::ostream& out) {
    const std::string text = io::emit_points(sample_curve(cfg));
    if (cfg.csv_out.empty()) {
        out << text;
    } else {
        write_file(cfg.csv_out, text);
    }
    return exit_ok;
}

int cmd_compare(const JobConfig& cfg, std::ostream& out, std::ostream& err, spdlog::logger& log) {
    const PointSequence pts = job_points(cfg);
    std::vector<io::LabeledCurve> curves;
    std::vector<analysis::ParamScheme> schemes;
    if (cfg.scheme) {
        schemes.push_back(*cfg.scheme);
    } else {
        schemes = {analysis::ParamScheme::uniform, analysis::ParamScheme::chordal,
                   analysis::ParamScheme::centripetal};
    }
    for (const auto scheme : schemes) {
        auto fixed = analysis::fixed_param_interpolant(pts, scheme);
        curves.push_back({std::move(fixed.curve), std::string(analysis::to_string(scheme))});
    }
    const Solved s = solve_points(pts, cfg, log);
    if (s.ok) curves.push_back({s.curve, "geometric"});

    const std::string svg = io::emit_svg(pts, curves, cfg.samples, {cfg.width, cfg.height});
    if (cfg.svg_out.empty()) {
        out << svg;
    } else {
        write_file(cfg.svg_out, svg);
    }
    if (!s.ok) {
        err << "error: geometric solve did not converge (" << solver::to_string(s.result.status)
            << ")\n";
        return exit_domain_failure;
    }
    return exit_ok;
}

int execute(const JobConfig& cfg, std::ostream& out, std::ostream& err, spdlog::logger& log) {
    switch (cfg.command) {
        case Command::check: return cmd_check(cfg, out, log);
        case Command::solve: return cmd_solve(cfg, out, err, log);
        case Command::curve: return cmd_curve(cfg, out, err, log);
        case Command::order: return cmd_order(cfg, out, err, log);
        case Command::sample: return cmd_sample(cfg, out);
        case Command::compare: return cmd_compare(cfg, out, err, log);
    }
    return exit_usage;
}

}  // namespace

void JobConfig::validate() const {
    if (!(tolerance > 0.0)) throw InvalidArgument("--tol must be positive");
    if (max_iterations < 1) throw InvalidArgument("--max-iter must be at least 1");
    if (samples < 2) throw InvalidArgument("--samples must be at least 2");
    if (grid < 2) throw InvalidArgument("--grid must be at least 2");
    if (width < 1 || height < 1) throw InvalidArgument("plot dimensions must be positive");

    const bool needs_source = command == Command::check || command == Command::solve ||
                              command == Command::curve || command == Command::compare;
    const bool has_curve = !curve_spec.empty();
    if (needs_source && input.empty() && !has_curve) {
        throw InvalidArgument("one of --input or --curve is required");
    }
    if (!input.empty() && has_curve) throw InvalidArgument("--input and --curve are exclusive");
    if ((command == Command::order || command == Command::sample) && !has_curve) {
        throw InvalidArgument("--curve is required");
    }
    if ((has_curve || command == Command::order) && n < 2) throw InvalidArgument("--n must be at least 2");
    if (n != 0 && n < 2) throw InvalidArgument("--n must be at least 2");
    if (command == Command::order) {
        if (scales < 2) throw InvalidArgument("--scales must be at least 2");
        if (!(shrink > 0.0 && shrink < 1.0)) throw InvalidArgument("--shrink must lie in (0, 1)");
    }
}

analysis::DataCurve parse_curve_spec(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string kind(spec.substr(0, colon));

    std::map<std::string, double, std::less<>> params;
    if (colon != std::string_view::npos) {
        std::string_view rest = spec.substr(colon + 1);
        while (!rest.empty()) {
            const auto comma = rest.find(',');
            const std::string_view item = rest.substr(0, comma);
            const auto eq = item.find('=');
            if (eq == std::string_view::npos || eq == 0) {
                throw InvalidArgument("curve parameter '" + std::string(item) + "': expected name=value");
            }
            const std::string name(item.substr(0, eq));
            params[name] = parse_double(item.substr(eq + 1), name);
            rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        }
    }

    std::map<std::string, double, std::less<>> defaults;
    constexpr double quarter = std::numbers::pi / 2;
    if (kind == "circle") {
        defaults = {{"radius", 1.0}, {"start", 0.0}, {"end", quarter}};
    } else if (kind == "ellipse") {
        defaults = {{"a", 2.0}, {"b", 1.0}, {"start", 0.0}, {"end", quarter}};
    } else if (kind == "parabola") {
        defaults = {{"c", 1.0}, {"start", 0.0}, {"end", 3.0}};
    } else if (kind == "spiral") {
        defaults = {{"k", 0.2}, {"start", 0.0}, {"end", quarter}};
    } else {
        throw InvalidArgument("unknown curve kind '" + kind + "'");
    }
    for (const auto& [name, value] : params) {
        if (!defaults.contains(name)) {
            throw InvalidArgument("curve '" + kind + "' has no parameter '" + name + "'");
        }
        defaults[name] = value;
    }
    const double lo = defaults["start"];
    const double hi = defaults["end"];
    if (kind == "circle") return analysis::DataCurve::circle_arc(defaults["radius"], lo, hi);
    if (kind == "ellipse") return analysis::DataCurve::ellipse_arc(defaults["a"], defaults["b"], lo, hi);
    if (kind == "parabola") return analysis::DataCurve::parabola(defaults["c"], lo, hi);
    return analysis::DataCurve::log_spiral(defaults["k"], lo, hi);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    JobConfig cfg;
    std::string scheme;

    CLI::App app{"Planar geometric Lagrange interpolation", "geointerp"};
    app.require_subcommand(1, 1);
    app.footer(kCurveHelp);

    const auto add_source = [&](CLI::App* sub) {
        sub->add_option("--input", cfg.input, "CSV point file, one x,y per line");
        sub->add_option("--curve", cfg.curve_spec, "Built-in curve spec, sampled at 2n points");
        sub->add_option("--n", cfg.n, "Degree bound when sampling a built-in curve");
    };
    const auto add_solver = [&](CLI::App* sub) {
        sub->add_option("--tol", cfg.tolerance, "Newton tolerance relative to the data scale");
        sub->add_option("--max-iter", cfg.max_iterations, "Newton iteration cap");
        sub->add_option("--seed", cfg.seed, "Seed for randomized restarts");
        sub->add_flag("--closed-form", cfg.closed_form, "Use the closed form when n = 2");
    };

    auto* check = app.add_subcommand("check", "Admissibility report as JSON");
    add_source(check);

    auto* solve = app.add_subcommand("solve", "Solve and print the CSV solution");
    add_source(solve);
    add_solver(solve);
    solve->add_option("--csv", cfg.csv_out, "Write the CSV here instead of stdout");
    solve->add_option("--svg", cfg.svg_out, "Also write an SVG plot");
    solve->add_option("--samples", cfg.samples, "Polyline vertices in the SVG");
    solve->add_flag("--trace", cfg.trace, "Append the iteration trace");

    auto* curve_cmd = app.add_subcommand("curve", "Evaluate the solved curve on a uniform grid");
    add_source(curve_cmd);
    add_solver(curve_cmd);
    curve_cmd->add_option("--samples", cfg.samples, "Grid size");
    curve_cmd->add_option("--csv", cfg.csv_out, "Write the CSV here instead of stdout");

    auto* order = app.add_subcommand("order", "Approximation order on a shrinking interval");
    order->add_option("--curve", cfg.curve_spec, "Built-in curve spec")->required();
    order->add_option("--n", cfg.n, "Degree bound")->required();
    order->add_option("--scales", cfg.scales, "Number of interval lengths");
    order->add_option("--shrink", cfg.shrink, "Length ratio between scales");
    order->add_option("--grid", cfg.grid, "Error grid size");
    order->add_option("--csv", cfg.csv_out, "Write the CSV here instead of stdout");
    add_solver(order);

    auto* sample = app.add_subcommand("sample", "Points from a built-in curve");
    sample->add_option("--curve", cfg.curve_spec, "Built-in curve spec")->required();
    sample->add_option("--n", cfg.n, "Degree bound (2n points)")->required();
    sample->add_option("--csv", cfg.csv_out, "Write the points here instead of stdout");

    auto* compare = app.add_subcommand("compare", "Fixed parametrizations vs geometric, as SVG");
    add_source(compare);
    add_solver(compare);
    compare->add_option("--scheme", scheme, "Single baseline scheme")
        ->check(CLI::IsMember({"uniform", "chordal", "centripetal"}));
    compare->add_option("--svg", cfg.svg_out, "Write the SVG here instead of stdout");
    compare->add_option("--samples", cfg.samples, "Polyline vertices per curve");
    compare->add_option("--width", cfg.width, "SVG width");
    compare->add_option("--height", cfg.height, "SVG height");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    const std::map<CLI::App*, Command> commands{
        {check, Command::check}, {solve, Command::solve},   {curve_cmd, Command::curve},
        {order, Command::order}, {sample, Command::sample}, {compare, Command::compare}};
    cfg.command = commands.at(app.get_subcommands().front());
    if (scheme == "uniform") cfg.scheme = analysis::ParamScheme::uniform;
    if (scheme == "chordal") cfg.scheme = analysis::ParamScheme::chordal;
    if (scheme == "centripetal") cfg.scheme = analysis::ParamScheme::centripetal;

    auto log = make_logger(err);
    try {
        cfg.validate();
        const int code = execute(cfg, out, err, *log);
        log->flush();
        return code;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const OddCount& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const TooFew& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_domain_failure;
    }
}

int dispatch(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace geointerp::cli
