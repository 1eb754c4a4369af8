// Command-line front end: flag parsing, pipeline orchestration, artifact
// writing, oracle checking, and the one-line run summary. Exit codes:
// 0 success, 2 bad input (expression, flags, ranges, unwritable output),
// 3 oracle check exceeded tolerance.
#pragma once

#include <bifurcus/pipeline.hpp>
#include <bifurcus/render.hpp>

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace bifurcus::cli {

struct RunConfig {
    std::string system_text;
    std::string state = "x";
    std::string param;
    std::optional<locus::Window> x_range;
    std::optional<locus::Window> param_range;
    std::optional<double> domain_min;
    bool multiply_state = false;  // wrap the system in an overall state factor
    std::optional<std::string> out_path;
    std::optional<std::string> format;  // svg | csv | json
    bool trace = false;
    bool check = false;
    int grid = 1000;
    double tol = 1e-4;  // oracle Hausdorff bound for --check
};

namespace detail {

inline std::string short_g(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace detail

/// "a:b" with a < b.
inline locus::Window parse_range(const std::string& text) {
    std::size_t colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("range must look like a:b, got '" + text + "'");
    auto number = [&](const std::string& part) {
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad number '" + part + "' in range");
        }
        if (used != part.size())
            throw std::invalid_argument("bad number '" + part + "' in range");
        return v;
    };
    locus::Window w{number(text.substr(0, colon)), number(text.substr(colon + 1))};
    if (!(w.lo < w.hi))
        throw std::invalid_argument("range '" + text + "' is empty: need a < b");
    return w;
}

inline std::string infer_format(const std::string& path) {
    std::size_t dot = path.rfind('.');
    if (dot == std::string::npos) return "svg";
    std::string ext = path.substr(dot + 1);
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (ext == "csv" || ext == "json" || ext == "svg") return ext;
    return "svg";
}

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.grid < 2) {
        err << "bifurcus: check: --grid must request at least 2 columns\n";
        return 2;
    }
    if (cfg.param.empty()) {
        err << "bifurcus: parse: NoParameter: --param names the bifurcation parameter\n";
        return 2;
    }

    expr::ParamAffineSystem sys;
    try {
        sys = expr::parse_system(cfg.system_text, cfg.state, cfg.param);
    } catch (const expr::ParameterNotAffine& e) {
        err << "bifurcus: parse: ParameterNotAffine: " << e.what() << "\n";
        return 2;
    } catch (const expr::NoParameter& e) {
        err << "bifurcus: parse: NoParameter: " << e.what() << "\n";
        return 2;
    } catch (const expr::NotPolynomialInState& e) {
        err << "bifurcus: parse: NotPolynomialInState: " << e.what() << "\n";
        return 2;
    } catch (const expr::ParseError& e) {
        err << "bifurcus: parse: " << e.what() << "\n";
        return 2;
    }
    if (cfg.multiply_state) {
        Polynomial state_factor(std::vector<Rational>{Rational(0), Rational(1)});
        sys.f = sys.f * state_factor;
        sys.g = sys.g * state_factor;
    }

    BuildOptions opt;
    opt.x_range = cfg.x_range;
    opt.param_range = cfg.param_range;
    opt.domain_min = cfg.domain_min;
    opt.input_expression = cfg.multiply_state
                               ? cfg.state + "*(" + cfg.system_text + ")"
                               : cfg.system_text;
    BuildResult built;
    try {
        built = build_diagram(sys, opt);
    } catch (const std::exception& e) {
        err << "bifurcus: locus: " << e.what() << "\n";
        return 2;
    }
    const locus::Diagram& dg = built.diagram;

    if (cfg.out_path) {
        std::string format = cfg.format ? *cfg.format : infer_format(*cfg.out_path);
        std::string payload;
        if (format == "svg") payload = render::to_svg(dg);
        else if (format == "csv") payload = render::to_csv(dg);
        else if (format == "json") payload = render::to_json(dg);
        else {
            err << "bifurcus: render: unknown format '" << format << "'\n";
            return 2;
        }
        std::ofstream file(*cfg.out_path, std::ios::binary | std::ios::trunc);
        file << payload << std::flush;
        if (!file) {
            err << "bifurcus: render: cannot write " << *cfg.out_path << "\n";
            return 2;
        }
    }

    if (cfg.trace)
        out << render::step_trace(sys, built.decomposition, built.poles_zeros, dg);

    int status = 0;
    std::string check_note;
    if (cfg.check) {
        auto rep = oracle::compare(dg, sys, oracle::default_grid(dg, cfg.grid));
        bool ok = std::isfinite(rep.max_hausdorff) && rep.max_hausdorff <= cfg.tol &&
                  rep.stability_mismatches == 0 && rep.missing == 0 && rep.extra == 0;
        if (ok) {
            check_note = ", oracle agreement within " + detail::short_g(cfg.tol) +
                         " over " + std::to_string(rep.columns.size()) + " columns";
        } else {
            double offending = rep.worst_lambda;
            for (const auto& c : rep.columns)
                if (c.stability_mismatches || c.missing || c.extra) {
                    offending = c.lambda;
                    break;
                }
            err << "bifurcus: check: oracle disagreement at column " << cfg.param << "="
                << render::num17(offending) << " (max Hausdorff "
                << detail::short_g(rep.max_hausdorff) << ", "
                << rep.stability_mismatches << " stability mismatches, " << rep.missing
                << " missing, " << rep.extra << " extra)\n";
            status = 3;
        }
    }

    // max relative residual over every emitted sample, in double precision
    std::vector<double> fd, gd;
    int deg = std::max(sys.f.degree(), sys.g.degree());
    for (int i = 0; i <= deg; ++i) {
        const auto& fc = sys.f.coefficients();
        const auto& gc = sys.g.coefficients();
        fd.push_back(i < static_cast<int>(fc.size()) ? to_double(fc[i]) : 0.0);
        gd.push_back(i < static_cast<int>(gc.size()) ? to_double(gc[i]) : 0.0);
    }
    double max_residual = 0.0;
    auto scan = [&](const locus::Branch& br) {
        for (const auto& s : br.samples) {
            double scale = 0.0, pw = 1.0, ax = std::abs(s.x);
            for (int i = 0; i <= deg; ++i) {
                scale += std::abs(fd[i] + s.param * gd[i]) * pw;
                pw *= ax;
            }
            double value = 0.0;
            for (int i = deg; i >= 0; --i) value = value * s.x + (fd[i] + s.param * gd[i]);
            max_residual = std::max(max_residual, std::abs(value) / std::max(scale, 1.0));
        }
    };
    for (const auto& br : dg.branches) scan(br);
    for (const auto& br : dg.constant_branches) scan(br);

    std::string bif_note = "no bifurcation points";
    if (!dg.bifurcations.empty()) {
        bif_note = std::to_string(dg.bifurcations.size()) + " bifurcation point" +
                   (dg.bifurcations.size() == 1 ? "" : "s") + " (";
        for (std::size_t i = 0; i < dg.bifurcations.size(); ++i) {
            if (i) bif_note += ", ";
            bif_note += std::string(render::bifurcation_kind_name(dg.bifurcations[i].kind)) +
                        " at (" + detail::short_g(dg.bifurcations[i].lambda) + "," +
                        detail::short_g(dg.bifurcations[i].x) + ")";
        }
        bif_note += ")";
    }
    out << dg.branches.size() + dg.constant_branches.size() << " branches ("
        << dg.branches.size() << " traced, " << dg.constant_branches.size()
        << " constant), " << bif_note << ", max residual "
        << detail::short_g(max_residual) << check_note << "\n";
    return status;
}

/// Parse argv and dispatch. Kept separate from run() so tests can drive the
/// pipeline with a RunConfig directly.
inline int main_entry(int argc, const char* const* argv, std::ostream& out,
                      std::ostream& err) {
    CLI::App app{"Bifurcation diagrams of dx/dt = f(x) + p*g(x) by root-locus construction"};
    RunConfig cfg;
    std::string x_range_text, param_range_text, format_text, out_text;
    double domain_min_value = 0.0;

    app.add_option("--system", cfg.system_text,
                   "right-hand side: polynomial in the state, affine in the parameter")
        ->required();
    app.add_option("--state", cfg.state, "state symbol")->capture_default_str();
    app.add_option("--param", cfg.param, "bifurcation parameter symbol")->required();
    app.add_option("--x-range", x_range_text, "state window as a:b");
    app.add_option("--param-range", param_range_text, "parameter window as a:b");
    app.add_option("--domain-min", domain_min_value,
                   "clip the state domain from below (polar radius systems)");
    app.add_flag("--multiply-state", cfg.multiply_state,
                 "multiply the whole system by the state symbol");
    app.add_option("--out", out_text, "artifact path");
    app.add_option("--format", format_text, "svg|csv|json; default follows --out extension")
        ->check(CLI::IsMember({"svg", "csv", "json"}));
    app.add_flag("--trace", cfg.trace, "print the construction walkthrough (markdown)");
    app.add_flag("--check", cfg.check, "cross-check the diagram against the exact oracle");
    app.add_option("--grid", cfg.grid, "oracle grid columns")->capture_default_str();
    app.add_option("--tol", cfg.tol, "oracle Hausdorff tolerance")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "bifurcus: args: " << e.what() << "\n";
        return 2;
    }
    try {
        if (!x_range_text.empty()) cfg.x_range = parse_range(x_range_text);
        if (!param_range_text.empty()) cfg.param_range = parse_range(param_range_text);
    } catch (const std::invalid_argument& e) {
        err << "bifurcus: args: " << e.what() << "\n";
        return 2;
    }
    if (app.count("--domain-min")) cfg.domain_min = domain_min_value;
    if (!out_text.empty()) cfg.out_path = out_text;
    if (!format_text.empty()) cfg.format = format_text;
    return run(cfg, out, err);
}

}  // namespace bifurcus::cli
