// Serialization of finished diagrams: SVG figures, CSV sample dumps,
// schema-versioned JSON (with a lossless parser for round-trips), and a
// markdown walkthrough of every construction stage. All emitters are pure
// functions of their inputs, so identical diagrams produce identical bytes.
#pragma once

#include <bifurcus/oracle.hpp>
#include <bifurcus/stability.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bifurcus::render {

using json = nlohmann::ordered_json;

namespace detail {

inline std::string fmt(const char* format, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, v);
    return buf;
}

}  // namespace detail

/// Round-trip float form for data files.
inline std::string num17(double v) { return detail::fmt("%.17g", v); }

/// Pixel coordinates; two decimals keep files small without visible error.
inline std::string fmt_px(double v) { return detail::fmt("%.2f", v); }

/// Short human form with a proper minus sign, for prose and labels.
inline std::string pretty(double v) {
    if (std::isinf(v)) return v < 0 ? "−∞" : "+∞";
    std::string s = detail::fmt("%g", v);
    if (!s.empty() && s[0] == '-') s.replace(0, 1, "−");
    return s;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

inline const char* kind_name(locus::EndpointKind k) {
    switch (k) {
        case locus::EndpointKind::pole: return "pole";
        case locus::EndpointKind::fold: return "fold";
        case locus::EndpointKind::horizontal_asymptote: return "horizontal-asymptote";
        case locus::EndpointKind::vertical_asymptote: return "vertical-asymptote";
        case locus::EndpointKind::domain_boundary: return "domain-boundary";
        case locus::EndpointKind::junction: return "junction";
    }
    return "domain-boundary";
}

inline locus::EndpointKind kind_from(const std::string& s) {
    using K = locus::EndpointKind;
    for (K k : {K::pole, K::fold, K::horizontal_asymptote, K::vertical_asymptote,
                K::domain_boundary, K::junction})
        if (s == kind_name(k)) return k;
    throw std::invalid_argument("unknown endpoint kind: " + s);
}

inline const char* label_name(locus::StabilityLabel l) {
    switch (l) {
        case locus::StabilityLabel::stable: return "stable";
        case locus::StabilityLabel::unstable: return "unstable";
        case locus::StabilityLabel::degenerate: return "degenerate";
        case locus::StabilityLabel::unknown: break;
    }
    return "unknown";
}

inline locus::StabilityLabel label_from(const std::string& s) {
    using L = locus::StabilityLabel;
    for (L l : {L::stable, L::unstable, L::degenerate, L::unknown})
        if (s == label_name(l)) return l;
    throw std::invalid_argument("unknown stability label: " + s);
}

inline const char* bifurcation_kind_name(locus::BifurcationPoint::Kind k) {
    switch (k) {
        case locus::BifurcationPoint::Kind::fold: return "fold";
        case locus::BifurcationPoint::Kind::transcritical: return "transcritical";
        case locus::BifurcationPoint::Kind::pitchfork: return "pitchfork";
        case locus::BifurcationPoint::Kind::degenerate: return "degenerate";
    }
    return "degenerate";
}

inline locus::BifurcationPoint::Kind bifurcation_kind_from(const std::string& s) {
    using K = locus::BifurcationPoint::Kind;
    for (K k : {K::fold, K::transcritical, K::pitchfork, K::degenerate})
        if (s == bifurcation_kind_name(k)) return k;
    throw std::invalid_argument("unknown bifurcation kind: " + s);
}

struct Style {
    std::string branch_color = "#1f6fb4";     // traced pieces, all labels
    std::string constant_color = "#c0392b";   // parameter-free lines stand apart
    std::string asymptote_color = "#9a9a9a";
    std::string marker_color = "#111111";
    double branch_width = 1.6;
    double asymptote_width = 0.8;
    double marker_radius = 4.0;
};

/// Dash pattern carrying the stability convention: solid = stable,
/// dashed = unstable, dotted = degenerate.
inline const char* dash_for(locus::StabilityLabel l) {
    switch (l) {
        case locus::StabilityLabel::stable: return "";
        case locus::StabilityLabel::unstable: return "7,4";
        case locus::StabilityLabel::degenerate: return "1.5,3.5";
        case locus::StabilityLabel::unknown: break;
    }
    return "4,2,1,2";
}

struct RenderConfig {
    int width = 800;
    int height = 600;
    std::optional<locus::Window> x_window;      // defaults to the diagram's
    std::optional<locus::Window> param_window;  // defaults to the diagram's
    double max_gap_px = 2.0;  // samples closer than a quarter of this collapse
    Style style;
};

inline std::string to_svg(const locus::Diagram& dg, const RenderConfig& cfg = {}) {
    if (cfg.width < 100 || cfg.height < 100)
        throw std::invalid_argument("to_svg: canvas below 100x100");
    locus::Window xw = cfg.x_window ? *cfg.x_window : dg.x_window;
    locus::Window pw = cfg.param_window ? *cfg.param_window : dg.param_window;
    if (!(xw.span() > 0.0) || !(pw.span() > 0.0))
        throw std::invalid_argument("to_svg: degenerate window");

    const double W = cfg.width, H = cfg.height;
    const double L = 62.0, R = 14.0, T = 14.0, B = 44.0;
    auto px_of = [&](double lambda) {
        return L + (lambda - pw.lo) / pw.span() * (W - L - R);
    };
    auto py_of = [&](double x) {
        return H - B - (x - xw.lo) / xw.span() * (H - T - B);
    };
    auto in_window = [&](const locus::Sample& s) {
        return pw.contains(s.param) && xw.contains(s.x);
    };

    const Style& st = cfg.style;
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(cfg.width) + "\" height=\"" + std::to_string(cfg.height) +
           "\" viewBox=\"0 0 " + std::to_string(cfg.width) + " " +
           std::to_string(cfg.height) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(cfg.width) +
           "\" height=\"" + std::to_string(cfg.height) + "\" fill=\"#ffffff\"/>\n";
    out += "<defs><clipPath id=\"plot\"><rect x=\"" + fmt_px(L) + "\" y=\"" +
           fmt_px(T) + "\" width=\"" + fmt_px(W - L - R) + "\" height=\"" +
           fmt_px(H - T - B) + "\"/></clipPath></defs>\n";

    // axes: frame, ticks, labels
    out += "<g class=\"axes\" stroke=\"#333333\" fill=\"none\">\n";
    out += "<rect x=\"" + fmt_px(L) + "\" y=\"" + fmt_px(T) + "\" width=\"" +
           fmt_px(W - L - R) + "\" height=\"" + fmt_px(H - T - B) + "\"/>\n";
    auto nice_ticks = [](double lo, double hi, int target) {
        double raw = (hi - lo) / target;
        double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double norm = raw / mag;
        double step = mag * (norm < 1.5 ? 1.0 : norm < 3.5 ? 2.0 : norm < 7.5 ? 5.0 : 10.0);
        std::vector<double> out;
        long long k0 = static_cast<long long>(std::ceil(lo / step - 1e-9));
        for (long long k = k0; k * step <= hi + (hi - lo) * 1e-9; ++k) {
            double t = k == 0 ? 0.0 : k * step;
            if (t >= lo - (hi - lo) * 1e-9) out.push_back(t);
        }
        return out;
    };
    for (double t : nice_ticks(pw.lo, pw.hi, 8)) {
        double x = px_of(t);
        out += "<line x1=\"" + fmt_px(x) + "\" y1=\"" + fmt_px(H - B) + "\" x2=\"" +
               fmt_px(x) + "\" y2=\"" + fmt_px(H - B + 5) + "\"/>\n";
        out += "<text x=\"" + fmt_px(x) + "\" y=\"" + fmt_px(H - B + 18) +
               "\" stroke=\"none\" fill=\"#333333\" font-size=\"11\" "
               "text-anchor=\"middle\" font-family=\"sans-serif\">" +
               xml_escape(pretty(t)) + "</text>\n";
    }
    for (double t : nice_ticks(xw.lo, xw.hi, 6)) {
        double y = py_of(t);
        out += "<line x1=\"" + fmt_px(L - 5) + "\" y1=\"" + fmt_px(y) + "\" x2=\"" +
               fmt_px(L) + "\" y2=\"" + fmt_px(y) + "\"/>\n";
        out += "<text x=\"" + fmt_px(L - 8) + "\" y=\"" + fmt_px(y + 4) +
               "\" stroke=\"none\" fill=\"#333333\" font-size=\"11\" "
               "text-anchor=\"end\" font-family=\"sans-serif\">" +
               xml_escape(pretty(t)) + "</text>\n";
    }
    out += "<text x=\"" + fmt_px(L + (W - L - R) / 2) + "\" y=\"" + fmt_px(H - 10) +
           "\" stroke=\"none\" fill=\"#333333\" font-size=\"13\" "
           "text-anchor=\"middle\" font-family=\"sans-serif\">" +
           xml_escape(dg.param_name) + "</text>\n";
    out += "<text x=\"16\" y=\"" + fmt_px(T + (H - T - B) / 2) +
           "\" stroke=\"none\" fill=\"#333333\" font-size=\"13\" "
           "text-anchor=\"middle\" font-family=\"sans-serif\" transform=\"rotate(-90 16 " +
           fmt_px(T + (H - T - B) / 2) + ")\">" + xml_escape(dg.state_name) +
           "</text>\n";
    out += "</g>\n";

    bool any_content = false, any_visible = false;
    auto note = [&](bool visible) {
        any_content = true;
        any_visible = any_visible || visible;
    };

    out += "<g class=\"content\" clip-path=\"url(#plot)\" fill=\"none\">\n";

    if (dg.vertical_asymptote) {
        double va = to_double(*dg.vertical_asymptote);
        bool vis = pw.contains(va);
        note(vis);
        if (vis)
            out += "<line class=\"asymptote\" x1=\"" + fmt_px(px_of(va)) + "\" y1=\"" +
                   fmt_px(T) + "\" x2=\"" + fmt_px(px_of(va)) + "\" y2=\"" +
                   fmt_px(H - B) + "\" stroke=\"" + st.asymptote_color +
                   "\" stroke-width=\"" + fmt_px(st.asymptote_width) + "\"/>\n";
    }
    for (double ha : dg.horizontal_asymptotes) {
        bool vis = xw.contains(ha);
        note(vis);
        if (vis)
            out += "<line class=\"asymptote\" x1=\"" + fmt_px(L) + "\" y1=\"" +
                   fmt_px(py_of(ha)) + "\" x2=\"" + fmt_px(W - R) + "\" y2=\"" +
                   fmt_px(py_of(ha)) + "\" stroke=\"" + st.asymptote_color +
                   "\" stroke-width=\"" + fmt_px(st.asymptote_width) + "\"/>\n";
    }

    auto emit_path = [&](const locus::Branch& br, const char* cls,
                         const std::string& color) {
        bool vis = std::any_of(br.samples.begin(), br.samples.end(), in_window);
        note(vis);
        if (!vis) return;
        double thin = std::max(0.0, cfg.max_gap_px * 0.25);
        std::string d;
        double lx = 0, ly = 0;
        bool first = true;
        for (std::size_t i = 0; i < br.samples.size(); ++i) {
            double x = px_of(br.samples[i].param), y = py_of(br.samples[i].x);
            bool last = i + 1 == br.samples.size();
            if (!first && !last && std::hypot(x - lx, y - ly) < thin) continue;
            d += first ? "M" : " L";
            d += fmt_px(x) + "," + fmt_px(y);
            lx = x;
            ly = y;
            first = false;
        }
        out += "<path class=\"" + std::string(cls) + "\" d=\"" + d + "\" stroke=\"" +
               color + "\" stroke-width=\"" + fmt_px(st.branch_width) + "\"";
        const char* dash = dash_for(br.stability);
        if (*dash) out += " stroke-dasharray=\"" + std::string(dash) + "\"";
        out += "><title>" + std::string(label_name(br.stability)) + "</title></path>\n";
    };
    for (const auto& br : dg.constant_branches) emit_path(br, "constant", st.constant_color);
    for (const auto& br : dg.branches) emit_path(br, "branch", st.branch_color);

    for (const auto& bp : dg.bifurcations) {
        bool vis = pw.contains(bp.lambda) && xw.contains(bp.x);
        note(vis);
        if (vis)
            out += "<circle class=\"marker\" cx=\"" + fmt_px(px_of(bp.lambda)) +
                   "\" cy=\"" + fmt_px(py_of(bp.x)) + "\" r=\"" +
                   fmt_px(st.marker_radius) + "\" fill=\"" + st.marker_color +
                   "\"><title>" + bifurcation_kind_name(bp.kind) + "</title></circle>\n";
    }
    out += "</g>\n";

    // legend with the line conventions
    double lx0 = W - R - 158, ly0 = T + 10;
    out += "<g class=\"legend\" font-size=\"11\" font-family=\"sans-serif\">\n";
    out += "<rect x=\"" + fmt_px(lx0 - 8) + "\" y=\"" + fmt_px(ly0 - 8) +
           "\" width=\"150\" height=\"100\" fill=\"#ffffff\" fill-opacity=\"0.85\" "
           "stroke=\"#cccccc\"/>\n";
    struct Entry {
        const char* text;
        std::string color;
        const char* dash;
        bool marker;
    };
    const Entry entries[] = {
        {"stable", st.branch_color, "", false},
        {"unstable", st.branch_color, "7,4", false},
        {"degenerate", st.branch_color, "1.5,3.5", false},
        {"parameter-free", st.constant_color, "", false},
        {"asymptote", st.asymptote_color, "", false},
        {"bifurcation", st.marker_color, "", true},
    };
    double ey = ly0 + 6;
    for (const Entry& e : entries) {
        if (e.marker) {
            out += "<circle cx=\"" + fmt_px(lx0 + 14) + "\" cy=\"" + fmt_px(ey - 3) +
                   "\" r=\"3.5\" fill=\"" + e.color + "\"/>\n";
        } else {
            out += "<line x1=\"" + fmt_px(lx0) + "\" y1=\"" + fmt_px(ey - 3) +
                   "\" x2=\"" + fmt_px(lx0 + 28) + "\" y2=\"" + fmt_px(ey - 3) +
                   "\" stroke=\"" + e.color + "\" stroke-width=\"2\"";
            if (*e.dash) out += " stroke-dasharray=\"" + std::string(e.dash) + "\"";
            out += "/>\n";
        }
        out += "<text x=\"" + fmt_px(lx0 + 34) + "\" y=\"" + fmt_px(ey) +
               "\" fill=\"#333333\">" + e.text + "</text>\n";
        ey += 15;
    }
    out += "</g>\n";

    if (any_content && !any_visible)
        out += "<text class=\"warning\" x=\"" + fmt_px(W / 2) + "\" y=\"" +
               fmt_px(T + 24) + "\" fill=\"#b00020\" font-size=\"13\" "
               "text-anchor=\"middle\" font-family=\"sans-serif\">"
               "warning: window excludes all diagram content</text>\n";

    out += "</svg>\n";
    return out;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += "\"\"";
        else quoted += c;
    }
    return quoted + "\"";
}

inline std::string to_csv(const locus::Diagram& dg) {
    std::string out = "branch_id,kind,lambda,x,stability\n";
    auto emit = [&](const std::string& id, const char* kind, const locus::Branch& br) {
        auto rows = br.samples;
        std::sort(rows.begin(), rows.end(),
                  [](const locus::Sample& a, const locus::Sample& b) {
                      return a.param != b.param ? a.param < b.param : a.x < b.x;
                  });
        for (const auto& s : rows)
            out += csv_field(id) + "," + kind + "," + num17(s.param) + "," +
                   num17(s.x) + "," + label_name(br.stability) + "\n";
    };
    for (std::size_t i = 0; i < dg.branches.size(); ++i)
        emit(stability::traced_branch_id(i), "traced", dg.branches[i]);
    for (std::size_t i = 0; i < dg.constant_branches.size(); ++i)
        emit(stability::constant_branch_id(i), "constant", dg.constant_branches[i]);
    return out;
}

namespace detail {

inline json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

inline json window_json(const locus::Window& w) {
    return json{{"lo", w.lo}, {"hi", w.hi}};
}

inline locus::Window window_from(const json& j) {
    return {j.at("lo").get<double>(), j.at("hi").get<double>()};
}

inline json branch_json(const std::string& id, const locus::Branch& br) {
    json samples = json::array();
    for (const auto& s : br.samples) samples.push_back(json::array({s.param, s.x}));
    return json{{"id", id},
                {"slope_sign", br.slope_sign},
                {"start", kind_name(br.start_kind)},
                {"end", kind_name(br.end_kind)},
                {"stability", label_name(br.stability)},
                {"samples", std::move(samples)}};
}

inline locus::Branch branch_from(const json& j) {
    locus::Branch br;
    br.slope_sign = j.at("slope_sign").get<int>();
    br.start_kind = kind_from(j.at("start").get<std::string>());
    br.end_kind = kind_from(j.at("end").get<std::string>());
    br.stability = label_from(j.at("stability").get<std::string>());
    for (const auto& s : j.at("samples"))
        br.samples.push_back({s.at(0).get<double>(), s.at(1).get<double>()});
    return br;
}

}  // namespace detail

inline json diagram_json(const locus::Diagram& dg) {
    json j;
    j["schema_version"] = 1;
    j["kind"] = "bifurcation_diagram";
    j["system"] = {{"expression", dg.input_expression},
                   {"state", dg.state_name},
                   {"parameter", dg.param_name}};
    j["x_window"] = detail::window_json(dg.x_window);
    j["param_window"] = detail::window_json(dg.param_window);
    j["domain_min"] = dg.domain_min ? json(*dg.domain_min) : json(nullptr);
    j["mu_was_flipped"] = dg.mu_was_flipped;
    j["vertical_asymptote"] =
        dg.vertical_asymptote ? json(to_double(*dg.vertical_asymptote)) : json(nullptr);
    j["horizontal_asymptotes"] = dg.horizontal_asymptotes;
    json regions = json::array();
    for (const auto& r : dg.sign_regions)
        regions.push_back({{"x_lo", detail::finite_or_null(r.x_lo)},
                           {"x_hi", detail::finite_or_null(r.x_hi)},
                           {"mu_sign", r.mu_sign},
                           {"count_above", r.count_above}});
    j["sign_regions"] = std::move(regions);
    json branches = json::array();
    for (std::size_t i = 0; i < dg.branches.size(); ++i)
        branches.push_back(detail::branch_json(stability::traced_branch_id(i), dg.branches[i]));
    j["branches"] = std::move(branches);
    json constants = json::array();
    for (std::size_t i = 0; i < dg.constant_branches.size(); ++i)
        constants.push_back(
            detail::branch_json(stability::constant_branch_id(i), dg.constant_branches[i]));
    j["constant_branches"] = std::move(constants);
    json bifs = json::array();
    for (const auto& bp : dg.bifurcations)
        bifs.push_back({{"kind", bifurcation_kind_name(bp.kind)},
                        {"lambda", bp.lambda},
                        {"x", bp.x},
                        {"branches", bp.branch_ids}});
    j["bifurcation_points"] = std::move(bifs);
    j["sampling"] = {{"initial_samples", dg.sampling.initial_samples},
                     {"max_branch_samples", dg.sampling.max_branch_samples},
                     {"param_cap", dg.sampling.param_cap},
                     {"screen_width", dg.sampling.screen_width},
                     {"screen_height", dg.sampling.screen_height},
                     {"screen_gap_px", dg.sampling.screen_gap_px},
                     {"invert_tol", dg.sampling.invert_tol}};
    j["tolerances"] = {{"eps_res", dg.eps_res}};
    return j;
}

inline locus::Diagram diagram_from_json(const json& j) {
    if (j.at("schema_version").get<int>() != 1)
        throw std::invalid_argument("unsupported schema_version");
    locus::Diagram dg;
    const json& sys = j.at("system");
    dg.input_expression = sys.at("expression").get<std::string>();
    dg.state_name = sys.at("state").get<std::string>();
    dg.param_name = sys.at("parameter").get<std::string>();
    dg.x_window = detail::window_from(j.at("x_window"));
    dg.param_window = detail::window_from(j.at("param_window"));
    if (!j.at("domain_min").is_null()) dg.domain_min = j.at("domain_min").get<double>();
    dg.mu_was_flipped = j.at("mu_was_flipped").get<bool>();
    if (!j.at("vertical_asymptote").is_null())
        dg.vertical_asymptote = Rational(j.at("vertical_asymptote").get<double>());
    dg.horizontal_asymptotes = j.at("horizontal_asymptotes").get<std::vector<double>>();
    const double inf = std::numeric_limits<double>::infinity();
    for (const auto& r : j.at("sign_regions")) {
        locus::SignRegion sr;
        sr.x_lo = r.at("x_lo").is_null() ? -inf : r.at("x_lo").get<double>();
        sr.x_hi = r.at("x_hi").is_null() ? inf : r.at("x_hi").get<double>();
        sr.mu_sign = r.at("mu_sign").get<int>();
        sr.count_above = r.at("count_above").get<int>();
        dg.sign_regions.push_back(sr);
    }
    for (const auto& b : j.at("branches")) dg.branches.push_back(detail::branch_from(b));
    for (const auto& b : j.at("constant_branches"))
        dg.constant_branches.push_back(detail::branch_from(b));
    for (const auto& b : j.at("bifurcation_points")) {
        locus::BifurcationPoint bp;
        bp.kind = bifurcation_kind_from(b.at("kind").get<std::string>());
        bp.lambda = b.at("lambda").get<double>();
        bp.x = b.at("x").get<double>();
        bp.branch_ids = b.at("branches").get<std::vector<std::string>>();
        dg.bifurcations.push_back(bp);
    }
    const json& s = j.at("sampling");
    dg.sampling.initial_samples = s.at("initial_samples").get<int>();
    dg.sampling.max_branch_samples = s.at("max_branch_samples").get<int>();
    dg.sampling.param_cap = s.at("param_cap").get<double>();
    dg.sampling.screen_width = s.at("screen_width").get<int>();
    dg.sampling.screen_height = s.at("screen_height").get<int>();
    dg.sampling.screen_gap_px = s.at("screen_gap_px").get<double>();
    dg.sampling.invert_tol = s.at("invert_tol").get<double>();
    dg.eps_res = j.at("tolerances").at("eps_res").get<double>();
    return dg;
}

inline json report_json(const oracle::ComparisonReport& rep) {
    json j;
    j["schema_version"] = 1;
    j["kind"] = "comparison_report";
    j["max_hausdorff"] = detail::finite_or_null(rep.max_hausdorff);
    j["worst_lambda"] = rep.worst_lambda;
    j["stability_mismatches"] = rep.stability_mismatches;
    j["missing"] = rep.missing;
    j["extra"] = rep.extra;
    j["identically_zero_columns"] = rep.identically_zero_columns;
    json cols = json::array();
    for (const auto& c : rep.columns)
        cols.push_back({{"lambda", c.lambda},
                        {"algo_to_oracle", detail::finite_or_null(c.algo_to_oracle)},
                        {"oracle_to_algo", detail::finite_or_null(c.oracle_to_algo)},
                        {"stability_mismatches", c.stability_mismatches},
                        {"missing", c.missing},
                        {"extra", c.extra}});
    j["columns"] = std::move(cols);
    return j;
}

inline std::string to_json(const locus::Diagram& dg) { return diagram_json(dg).dump(2) + "\n"; }

inline std::string to_json(const oracle::ComparisonReport& rep) {
    return report_json(rep).dump(2) + "\n";
}

inline locus::Diagram diagram_from_json_text(const std::string& text) {
    return diagram_from_json(json::parse(text));
}

namespace detail {

inline std::string count_word(int n) {
    switch (n) {
        case 1: return "one";
        case 2: return "two";
        case 3: return "three";
        case 4: return "four";
    }
    return std::to_string(n);
}

inline std::string root_list_phrase(const std::vector<RealRoot>& roots,
                                    const char* singular, const char* plural) {
    if (roots.empty()) return std::string("no ") + plural;
    if (roots.size() == 1) {
        const RealRoot& r = roots.front();
        std::string at = "x=" + pretty(r.value);
        if (r.multiplicity == 1) return "one " + std::string(singular) + " at " + at;
        return count_word(r.multiplicity) + " " + plural + " at " + at;
    }
    std::string out = std::string(plural) + " at ";
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (i) out += ", ";
        out += "x=" + pretty(roots[i].value);
        if (roots[i].multiplicity > 1)
            out += " (multiplicity " + std::to_string(roots[i].multiplicity) + ")";
    }
    return out;
}

}  // namespace detail

/// Markdown walkthrough of the whole construction, one section per stage:
/// decomposition, pole/zero layout, sign regions, asymptotes, branch tracing,
/// parameter-free lines, axis orientation, stability, bifurcation points.
inline std::string step_trace(const expr::ParamAffineSystem& sys,
                              const locus::Decomposition& d,
                              const locus::PoleZeroSet& pz,
                              const locus::Diagram& dg) {
    const std::string mu = "μ", lambda = "λ";
    std::string mu_eq = mu + "=" + (d.mu_is_minus_lambda ? "−" : "") + lambda;
    std::string out;
    out += "# Bifurcation diagram for ẋ = " + dg.input_expression + "\n\n";
    out += "state `" + dg.state_name + "` on the vertical axis, parameter `" +
           dg.param_name + "` (plotted as " + lambda + ") on the horizontal axis\n";

    out += "\n## Decomposition\n\n";
    out += "Writing s·(f + " + lambda + "·g) = h·(f1 + " + mu +
           "·g1) with positive leading coefficients:\n\n";
    out += "- h  = " + d.h.to_string(dg.state_name) + "\n";
    out += "- f1 = " + d.f1.to_string(dg.state_name) + "\n";
    out += "- g1 = " + d.g1.to_string(dg.state_name) + "\n";
    out += "- s  = " + std::string(d.sign < 0 ? "−1" : "+1") + ", " + mu_eq + "\n";
    std::vector<RealRoot> h_roots;
    if (!d.h.is_zero() && d.h.degree() > 0) h_roots = real_roots(d.h).roots;
    out += "\nlocus data: " + detail::root_list_phrase(pz.poles.roots, "pole", "poles") +
           ", " + detail::root_list_phrase(pz.zeros.roots, "zero", "zeros") + ", " +
           (h_roots.empty()
                ? std::string("no constant roots")
                : (h_roots.size() == 1 && h_roots[0].multiplicity == 1
                       ? "constant root at x=" + pretty(h_roots[0].value)
                       : detail::root_list_phrase(h_roots, "constant root", "constant roots"))) +
           ", " + mu_eq + "\n";

    out += "\n## Sign regions\n\n";
    out += "A point of the state axis carries locus for " + mu +
           ">0 exactly when an odd number of poles and zeros (with multiplicity) "
           "lies above it:\n\n";
    for (auto it = dg.sign_regions.rbegin(); it != dg.sign_regions.rend(); ++it)
        out += "- x ∈ (" + pretty(it->x_lo) + ", " + pretty(it->x_hi) + "): " + mu +
               (it->mu_sign > 0 ? ">0" : "<0") + " (" + std::to_string(it->count_above) +
               " above)\n";

    out += "\n## Asymptotes\n\n";
    std::string va_phrase =
        dg.vertical_asymptote
            ? "vertical asymptote at " + lambda + "=" + pretty(to_double(*dg.vertical_asymptote))
            : std::string("no finite vertical asymptote");
    std::string ha_phrase;
    if (dg.horizontal_asymptotes.empty()) {
        ha_phrase = "no horizontal asymptotes";
    } else {
        ha_phrase = dg.horizontal_asymptotes.size() == 1 ? "horizontal asymptote x="
                                                         : "horizontal asymptotes x=";
        for (std::size_t i = 0; i < dg.horizontal_asymptotes.size(); ++i) {
            if (i) ha_phrase += ", x=";
            ha_phrase += pretty(dg.horizontal_asymptotes[i]);
        }
    }
    out += va_phrase + "; " + ha_phrase + "\n";

    out += "\n## Branches\n\n";
    if (dg.branches.empty()) out += "no traced branches inside the window\n";
    for (std::size_t i = 0; i < dg.branches.size(); ++i) {
        const locus::Branch& br = dg.branches[i];
        if (br.samples.empty()) continue;
        auto [plo, phi] = std::minmax(br.samples.front().param, br.samples.back().param);
        auto [xlo, xhi] = std::minmax(br.samples.front().x, br.samples.back().x);
        out += "- " + stability::traced_branch_id(i) + ": " + lambda + " ∈ [" +
               pretty(plo) + ", " + pretty(phi) + "], x ∈ [" + pretty(xlo) + ", " +
               pretty(xhi) + "], " + (br.slope_sign >= 0 ? "rising" : "falling") + ", " +
               kind_name(br.start_kind) + " → " + kind_name(br.end_kind) + ", " +
               label_name(br.stability) + "\n";
    }

    out += "\n## Parameter-free branches\n\n";
    if (dg.constant_branches.empty()) out += "none: h has no real roots\n";
    for (std::size_t i = 0; i < dg.constant_branches.size(); ++i) {
        const locus::Branch& br = dg.constant_branches[i];
        if (br.samples.empty()) continue;
        out += "- " + stability::constant_branch_id(i) + ": x=" +
               pretty(br.samples.front().x) + " for " + lambda + " ∈ [" +
               pretty(br.samples.front().param) + ", " + pretty(br.samples.back().param) +
               "], " + label_name(br.stability) + "\n";
    }

    out += "\n## Axis orientation\n\n";
    out += dg.mu_was_flipped
               ? mu_eq + ": the traced locus was reflected horizontally so the axis reads " +
                     lambda + "\n"
               : mu_eq + ": no reflection needed\n";

    out += "\n## Stability\n\n";
    out += "Labels alternate downward from the top of the window (flipping at "
           "multiple roots), cross-checked against the derivative sign of the "
           "right-hand side at every sampled column; see the branch lists above.\n";

    out += "\n## Bifurcation points\n\n";
    if (dg.bifurcations.empty()) out += "none detected inside the window\n";
    for (const auto& bp : dg.bifurcations) {
        out += "- " + std::string(bifurcation_kind_name(bp.kind)) + " at (" + lambda +
               ", x) = (" + pretty(bp.lambda) + ", " + pretty(bp.x) + ")";
        if (!bp.branch_ids.empty()) {
            out += " joining ";
            for (std::size_t i = 0; i < bp.branch_ids.size(); ++i) {
                if (i) out += ", ";
                out += bp.branch_ids[i];
            }
        }
        out += "\n";
    }
    return out;
}

}  // namespace bifurcus::render
