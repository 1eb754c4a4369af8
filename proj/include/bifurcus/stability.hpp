// Stability labels and bifurcation points. Labels come from the top-down
// alternation walk over vertical parameter columns, cross-checked by the sign
// of d/dx[f + lambda*g]; bifurcations are classified from the exact root
// multiplicities of the common factor h and of the slope numerator.
#pragma once

#include <bifurcus/locus.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace bifurcus::stability {

using locus::StabilityLabel;

inline std::string traced_branch_id(std::size_t i) {
    return "branch-" + std::to_string(i);
}
inline std::string constant_branch_id(std::size_t i) {
    return "const-" + std::to_string(i);
}

/// Interpolated x where a branch polyline meets the vertical line at the
/// given parameter value. Parameters are monotone along a branch, so there is
/// at most one hit; branches that are vertical lines in the diagram plane
/// (constant parameter) report none.
inline std::optional<double> branch_x_at(const locus::Branch& br, double param) {
    const auto& s = br.samples;
    if (s.size() < 2) return std::nullopt;
    double p0 = s.front().param, p1 = s.back().param;
    if (p0 == p1) return std::nullopt;
    // a whisker of slack so columns at the exact band edge still meet the
    // endpoint the cap bisection stopped just short of
    double eps = 1e-9 * (1.0 + std::max(std::abs(p0), std::abs(p1)));
    if (param < std::min(p0, p1) - eps || param > std::max(p0, p1) + eps)
        return std::nullopt;
    const bool inc = p1 > p0;
    std::size_t a = 0, b = s.size() - 1;
    while (b - a > 1) {
        std::size_t m = a + (b - a) / 2;
        if (inc ? s[m].param <= param : s[m].param >= param)
            a = m;
        else
            b = m;
    }
    double pa = s[a].param, pb = s[b].param;
    if (pa == pb) return s[a].x;
    double t = std::clamp((param - pa) / (pb - pa), 0.0, 1.0);
    return s[a].x + t * (s[b].x - s[a].x);
}

/// Labels for one parameter column: equilibria ordered descending in x, the
/// topmost unstable exactly when f + lambda*g is positive at the probe (a
/// point above every listed equilibrium), alternating downward and flipping
/// parity only at odd-multiplicity roots. Multiple roots are degenerate.
inline std::vector<StabilityLabel> alternation_column(
    const expr::ParamAffineSystem& sys, const Rational& lambda,
    const std::vector<RealRoot>& descending, const Rational& probe) {
    int sign_above = sign_of(sys.f.evaluate(probe) + lambda * sys.g.evaluate(probe));
    std::vector<StabilityLabel> labels;
    labels.reserve(descending.size());
    for (const auto& r : descending) {
        if (sign_above == 0)
            labels.push_back(StabilityLabel::unknown);
        else if (r.multiplicity > 1)
            labels.push_back(StabilityLabel::degenerate);
        else
            labels.push_back(sign_above > 0 ? StabilityLabel::unstable
                                            : StabilityLabel::stable);
        if (r.multiplicity % 2 == 1) sign_above = -sign_above;
    }
    return labels;
}

namespace detail {

inline StabilityLabel point_label(const Polynomial& fp, const Polynomial& gp,
                                  double lambda, double x, double eps_rel) {
    double v = fp.evaluate(x) + lambda * gp.evaluate(x);
    double scale = 0.0, power = 1.0;
    int top = std::max(fp.degree(), gp.degree());
    for (int i = 0; i <= top; ++i) {
        scale += std::abs((to_double(fp.coeff(i)) + lambda * to_double(gp.coeff(i))) *
                          power);
        power *= x;
    }
    double eps = eps_rel * std::max(scale, 1.0);
    if (v < -eps) return StabilityLabel::stable;
    if (v > eps) return StabilityLabel::unstable;
    return StabilityLabel::degenerate;
}

inline StabilityLabel majority_point_label(const Polynomial& fp, const Polynomial& gp,
                                           const locus::Branch& br, double eps_rel) {
    long stable = 0, unstable = 0;
    for (const auto& s : br.samples) {
        StabilityLabel l = point_label(fp, gp, s.param, s.x, eps_rel);
        if (l == StabilityLabel::stable) ++stable;
        if (l == StabilityLabel::unstable) ++unstable;
    }
    if (stable == 0 && unstable == 0) return StabilityLabel::degenerate;
    return stable >= unstable ? StabilityLabel::stable : StabilityLabel::unstable;
}

inline int multiplicity_near(const RootSet& rs, double x, double tol) {
    for (const auto& r : rs.roots)
        if (std::abs(r.value - x) <= tol) return r.multiplicity;
    return 0;
}

}  // namespace detail

/// Stability of a single sampled equilibrium from the derivative sign:
/// stable below -eps, unstable above +eps, degenerate in between, with eps
/// scaled to the local coefficient magnitude.
inline StabilityLabel derivative_label(const expr::ParamAffineSystem& sys, double lambda,
                                       double x, double eps_rel = 1e-8) {
    return detail::point_label(sys.f.derivative(), sys.g.derivative(), lambda, x,
                               eps_rel);
}

/// Label every branch by the per-sample derivative sign (majority over the
/// branch). Independent of the alternation walk; used as a cross-check.
inline void classify_by_derivative(locus::Diagram& dg,
                                   const expr::ParamAffineSystem& sys,
                                   double eps_rel = 1e-8) {
    Polynomial fp = sys.f.derivative(), gp = sys.g.derivative();
    for (auto& br : dg.branches)
        br.stability = detail::majority_point_label(fp, gp, br, eps_rel);
    for (auto& br : dg.constant_branches)
        br.stability = detail::majority_point_label(fp, gp, br, eps_rel);
}

/// Locate and classify the bifurcation points inside the diagram windows:
/// crossings of the locus with a parameter-free line (roots of h) are
/// transcritical for a transversal simple crossing, pitchfork when the locus
/// has a simple vertex exactly on the line, degenerate otherwise; vertices of
/// the locus away from those lines are folds when the slope numerator root is
/// simple, degenerate when it is not. Participating traced branches are bound
/// by endpoint proximity; constant segments are bound when they are built.
inline std::vector<locus::BifurcationPoint> detect_bifurcations(
    const locus::Diagram& dg, const locus::Decomposition& d) {
    using BP = locus::BifurcationPoint;
    std::vector<BP> out;
    if (d.f1.is_zero()) return out;
    auto pz = locus::poles_zeros(d);
    Polynomial w = locus::slope_numerator(d);
    RootSet w_roots;
    if (!w.is_zero() && w.degree() >= 1) w_roots = real_roots(w);

    auto lambda_at = [&](double x) {
        double mu = -d.f1.evaluate(x) / d.g1.evaluate(x);
        return d.mu_is_minus_lambda ? -mu : mu;
    };
    const double xtol = 1e-8 * std::max(1.0, dg.x_window.span());
    auto in_windows = [&](double lam, double x) {
        return std::isfinite(lam) && dg.x_window.contains(x) &&
               dg.param_window.contains(lam) &&
               (!dg.domain_min || x >= *dg.domain_min - 1e-12);
    };

    std::vector<double> taken;
    if (d.h.degree() >= 1) {
        for (const auto& hr : real_roots(d.h).roots) {
            if (detail::multiplicity_near(pz.zeros, hr.value, xtol) > 0)
                continue;  // the line sits on a horizontal asymptote
            double lam = lambda_at(hr.value);
            if (!in_windows(lam, hr.value)) continue;
            int m_w = detail::multiplicity_near(w_roots, hr.value, xtol);
            BP bp;
            bp.lambda = lam;
            bp.x = hr.value;
            bp.kind = (hr.multiplicity == 1 && m_w == 0) ? BP::Kind::transcritical
                      : (hr.multiplicity == 1 && m_w == 1)
                          ? BP::Kind::pitchfork
                          : BP::Kind::degenerate;
            out.push_back(bp);
            taken.push_back(hr.value);
        }
    }
    for (const auto& c : locus::critical_points(d, pz).roots) {
        bool merged = false;
        for (double t : taken)
            if (std::abs(t - c.value) <= xtol) merged = true;
        if (merged) continue;
        double lam = lambda_at(c.value);
        if (!in_windows(lam, c.value)) continue;
        BP bp;
        bp.lambda = lam;
        bp.x = c.value;
        bp.kind = c.multiplicity == 1 ? BP::Kind::fold : BP::Kind::degenerate;
        out.push_back(bp);
    }
    std::sort(out.begin(), out.end(), [](const BP& a, const BP& b) {
        if (a.lambda != b.lambda) return a.lambda < b.lambda;
        return a.x < b.x;
    });

    const double tol_l = 1e-6 * std::max(1.0, dg.param_window.span());
    const double tol_x = 1e-6 * std::max(1.0, dg.x_window.span());
    for (auto& bp : out)
        for (std::size_t i = 0; i < dg.branches.size(); ++i) {
            const auto& s = dg.branches[i].samples;
            if (s.empty()) continue;
            for (const auto& end : {s.front(), s.back()})
                if (std::abs(end.param - bp.lambda) <= tol_l &&
                    std::abs(end.x - bp.x) <= tol_x) {
                    bp.branch_ids.push_back(traced_branch_id(i));
                    break;
                }
        }
    return out;
}

/// Build the parameter-free branches as horizontal sample lines, split where
/// a bifurcation sits on them so labels stay uniform per segment, and bind
/// the new segment ids into the bifurcation records.
inline void materialize_constant_branches(locus::Diagram& dg,
                                          const locus::Decomposition& d,
                                          int samples_per_segment = 64) {
    dg.constant_branches.clear();
    if (d.h.degree() < 1) return;
    const auto& pw = dg.param_window;
    if (!(pw.span() > 0.0)) return;
    const double xtol = 1e-8 * std::max(1.0, dg.x_window.span());

    for (const auto& hr : real_roots(d.h).roots) {
        if (!dg.x_window.contains(hr.value)) continue;
        if (dg.domain_min && hr.value < *dg.domain_min - 1e-12) continue;
        std::vector<double> cuts{pw.lo, pw.hi};
        for (const auto& bp : dg.bifurcations)
            if (std::abs(bp.x - hr.value) <= xtol && bp.lambda > pw.lo &&
                bp.lambda < pw.hi)
                cuts.push_back(bp.lambda);
        std::sort(cuts.begin(), cuts.end());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            double a = cuts[k], b = cuts[k + 1];
            if (!(b - a > 1e-12)) continue;
            locus::Branch cb;
            cb.slope_sign = 0;
            cb.start_kind = k == 0 ? locus::EndpointKind::domain_boundary
                                   : locus::EndpointKind::junction;
            cb.end_kind = k + 2 == cuts.size() ? locus::EndpointKind::domain_boundary
                                               : locus::EndpointKind::junction;
            const int n = samples_per_segment;
            cb.samples.reserve(static_cast<std::size_t>(n) + 1);
            for (int i = 0; i <= n; ++i) {
                double lam =
                    i == n ? b : a + (b - a) * (static_cast<double>(i) / n);
                cb.samples.push_back({lam, hr.value});
            }
            dg.constant_branches.push_back(std::move(cb));
        }
    }

    const double tol_l = 1e-9 * std::max(1.0, pw.span());
    for (auto& bp : dg.bifurcations)
        for (std::size_t i = 0; i < dg.constant_branches.size(); ++i) {
            const auto& s = dg.constant_branches[i].samples;
            if (s.empty() || std::abs(s.front().x - bp.x) > xtol) continue;
            if (std::abs(s.front().param - bp.lambda) <= tol_l ||
                std::abs(s.back().param - bp.lambda) <= tol_l)
                bp.branch_ids.push_back(constant_branch_id(i));
        }
}

struct AlternationConfig {
    int columns = 201;             // uniform parameter columns over the window
    double bif_exclusion = 1e-3;   // skip columns this close to a bifurcation
    double split_fraction = 0.10;  // minority share that triggers refinement
    int refine_factor = 4;
};

/// Label every branch by sweeping vertical parameter columns: within each
/// column the diagram's equilibria are ordered descending in x and labeled by
/// the alternation walk, with the sign probed exactly at the window top (no
/// diagram content lies above it). Each branch takes the majority over its
/// columns; close votes re-run on a denser sweep over that branch alone, and
/// branches no column reaches fall back to the derivative sign.
inline void classify_by_alternation(locus::Diagram& dg,
                                    const expr::ParamAffineSystem& sys,
                                    const AlternationConfig& cfg = {}) {
    struct Votes {
        long stable = 0, unstable = 0;
    };
    const std::size_t nt = dg.branches.size(), nc = dg.constant_branches.size();
    if (nt + nc == 0) return;
    std::vector<Votes> votes(nt + nc);
    auto branch_at = [&](std::size_t i) -> locus::Branch& {
        return i < nt ? dg.branches[i] : dg.constant_branches[i - nt];
    };

    const Rational probe(dg.x_window.hi);
    const double close_tol = 1e-6 * std::max(dg.x_window.span(), 1.0);
    auto near_bifurcation = [&](double lam) {
        for (const auto& bp : dg.bifurcations)
            if (std::abs(lam - bp.lambda) <= cfg.bif_exclusion) return true;
        return false;
    };

    auto run_columns = [&](const std::vector<Rational>& lams,
                           std::optional<std::size_t> only) {
        for (const auto& lam : lams) {
            double ld = to_double(lam);
            if (near_bifurcation(ld)) continue;
            std::vector<std::pair<double, std::size_t>> hits;
            for (std::size_t i = 0; i < nt + nc; ++i)
                if (auto x = branch_x_at(branch_at(i), ld)) hits.emplace_back(*x, i);
            if (hits.empty()) continue;
            std::sort(hits.begin(), hits.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
            bool ambiguous = false;
            for (std::size_t k = 0; k + 1 < hits.size(); ++k)
                if (hits[k].first - hits[k + 1].first <= close_tol) ambiguous = true;
            if (ambiguous) continue;

            std::vector<RealRoot> desc;
            desc.reserve(hits.size());
            for (const auto& h : hits) desc.push_back({h.first, 1});
            auto labels = alternation_column(sys, lam, desc, probe);
            for (std::size_t k = 0; k < hits.size(); ++k) {
                if (only && *only != hits[k].second) continue;
                if (labels[k] == StabilityLabel::stable)
                    ++votes[hits[k].second].stable;
                else if (labels[k] == StabilityLabel::unstable)
                    ++votes[hits[k].second].unstable;
            }
        }
    };

    auto uniform_columns = [](double lo, double hi, int count) {
        std::vector<Rational> out;
        count = std::max(count, 2);
        Rational rlo(lo), span = Rational(hi) - Rational(lo);
        for (int j = 0; j < count; ++j)
            out.push_back(rlo + span * Rational(j) / Rational(count - 1));
        return out;
    };

    run_columns(uniform_columns(dg.param_window.lo, dg.param_window.hi, cfg.columns),
                std::nullopt);

    Polynomial fp = sys.f.derivative(), gp = sys.g.derivative();
    for (std::size_t i = 0; i < nt + nc; ++i) {
        auto& br = branch_at(i);
        long s = votes[i].stable, u = votes[i].unstable;
        if (s + u == 0) {
            br.stability = detail::majority_point_label(fp, gp, br, 1e-8);
            continue;
        }
        if (std::min(s, u) > cfg.split_fraction * (s + u)) {
            double lo = std::min(br.samples.front().param, br.samples.back().param);
            double hi = std::max(br.samples.front().param, br.samples.back().param);
            int dense = std::max(
                33, static_cast<int>(std::ceil(cfg.columns * cfg.refine_factor *
                                               (hi - lo) /
                                               std::max(dg.param_window.span(), 1e-12))));
            votes[i] = {};
            run_columns(uniform_columns(lo, hi, dense), i);
            s = votes[i].stable;
            u = votes[i].unstable;
        }
        br.stability = s > u    ? StabilityLabel::stable
                       : u > s ? StabilityLabel::unstable
                               : detail::majority_point_label(fp, gp, br, 1e-8);
    }
}

}  // namespace bifurcus::stability
