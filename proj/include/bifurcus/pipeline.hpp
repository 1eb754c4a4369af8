// End-to-end diagram construction: factor, trace, flip to the original
// parameter, pick windows, detect bifurcations, split the parameter-free
// lines, and label stability.
#pragma once

#include <bifurcus/stability.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace bifurcus {

struct BuildOptions {
    std::optional<locus::Window> x_range;
    std::optional<locus::Window> param_range;
    std::optional<double> domain_min;
    locus::SamplingConfig sampling;
    stability::AlternationConfig alternation;
    std::string input_expression;
};

struct BuildResult {
    locus::Diagram diagram;
    locus::Decomposition decomposition;
    locus::PoleZeroSet poles_zeros;
};

namespace detail {

/// Cut branches down to the requested parameter window, interpolating a
/// boundary sample where a branch leaves it.
inline void trim_to_param_window(locus::Diagram& dg) {
    const double lo = dg.param_window.lo, hi = dg.param_window.hi;
    std::vector<locus::Branch> kept;
    for (auto& br : dg.branches) {
        std::vector<locus::Sample> out;
        const auto& s = br.samples;
        auto boundary_between = [&](const locus::Sample& a, const locus::Sample& b,
                                    double level) {
            double t = (level - a.param) / (b.param - a.param);
            return locus::Sample{level, a.x + t * (b.x - a.x)};
        };
        bool cut_front = false, cut_back = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            bool in = s[i].param >= lo && s[i].param <= hi;
            if (in) {
                if (out.empty() && i > 0) {
                    double level = s[i - 1].param < lo ? lo : hi;
                    out.push_back(boundary_between(s[i - 1], s[i], level));
                    cut_front = true;
                }
                out.push_back(s[i]);
            } else if (!out.empty()) {
                double level = s[i].param < lo ? lo : hi;
                out.push_back(boundary_between(s[i - 1], s[i], level));
                cut_back = true;
                break;
            }
        }
        if (out.size() < 2) continue;
        locus::Branch nb = br;
        nb.samples = std::move(out);
        if (cut_front) nb.start_kind = locus::EndpointKind::domain_boundary;
        if (cut_back) nb.end_kind = locus::EndpointKind::domain_boundary;
        kept.push_back(std::move(nb));
    }
    dg.branches = std::move(kept);
}

}  // namespace detail

inline BuildResult build_diagram(const expr::ParamAffineSystem& sys,
                                 const BuildOptions& opt = {}) {
    BuildResult r;
    r.decomposition = locus::decompose(sys);
    r.poles_zeros = locus::poles_zeros(r.decomposition);
    locus::Diagram& dg = r.diagram;

    dg.param_name = sys.param;
    dg.state_name = sys.state;
    dg.input_expression = opt.input_expression;
    dg.domain_min = opt.domain_min;
    dg.sampling = opt.sampling;
    if (opt.param_range)
        dg.sampling.param_cap =
            std::max(dg.sampling.param_cap,
                     std::max(std::abs(opt.param_range->lo),
                              std::abs(opt.param_range->hi)));

    dg.x_window = opt.x_range ? *opt.x_range
                              : locus::expand_to_contain(
                                    locus::default_x_window(r.poles_zeros),
                                    r.poles_zeros);
    if (!opt.x_range && opt.domain_min && *opt.domain_min > dg.x_window.lo &&
        *opt.domain_min < dg.x_window.hi)
        dg.x_window.lo = *opt.domain_min;
    dg.branches = locus::trace_branches(r.decomposition, r.poles_zeros, dg.x_window,
                                        dg.sampling, opt.domain_min);
    dg.vertical_asymptote = locus::vertical_asymptote(r.decomposition);
    locus::flip_to_lambda(dg.branches, dg.vertical_asymptote,
                          r.decomposition.mu_is_minus_lambda);
    dg.mu_was_flipped = r.decomposition.mu_is_minus_lambda;
    for (double ha : locus::horizontal_asymptotes(r.poles_zeros))
        if (dg.x_window.contains(ha) && (!opt.domain_min || ha >= *opt.domain_min))
            dg.horizontal_asymptotes.push_back(ha);
    dg.sign_regions = locus::sign_regions(r.poles_zeros);

    if (opt.param_range) {
        dg.param_window = *opt.param_range;
        detail::trim_to_param_window(dg);
    } else {
        // symmetric hull of the achieved parameter range, snapped to the band
        // cap once tracing actually hit the band
        double m = 0.0;
        for (const auto& br : dg.branches)
            for (const auto& s : br.samples) m = std::max(m, std::abs(s.param));
        if (m == 0.0 || m > 0.999 * dg.sampling.param_cap)
            m = dg.sampling.param_cap;
        dg.param_window = {-m, m};
    }

    dg.bifurcations = stability::detect_bifurcations(dg, r.decomposition);
    stability::materialize_constant_branches(dg, r.decomposition);
    stability::classify_by_alternation(dg, sys, opt.alternation);
    return r;
}

}  // namespace bifurcus
