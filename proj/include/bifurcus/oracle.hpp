// Brute-force cross-check: instantiate f + lambda*g at exact rational grid
// points, isolate its real roots with certified counts, label by derivative
// sign, and measure column-wise set distances against the traced diagram.
#pragma once

#include <bifurcus/stability.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace bifurcus::oracle {

struct OracleEquilibrium {
    double x = 0.0;
    int multiplicity = 1;
    locus::StabilityLabel label = locus::StabilityLabel::unknown;
};

struct OracleColumn {
    Rational lambda;
    bool identically_zero = false;  // f + lambda*g vanished as a polynomial
    std::vector<OracleEquilibrium> equilibria;  // ascending in x
};

inline OracleColumn oracle_equilibria(const expr::ParamAffineSystem& sys,
                                      const Rational& lambda,
                                      const RootTolerances& tol = {}) {
    OracleColumn col;
    col.lambda = lambda;
    Polynomial p = sys.f + sys.g * lambda;
    if (p.is_zero()) {
        col.identically_zero = true;
        return col;
    }
    if (p.degree() < 1) return col;
    double ld = to_double(lambda);
    for (const auto& r : real_roots(p, tol).roots) {
        OracleEquilibrium e;
        e.x = r.value;
        e.multiplicity = r.multiplicity;
        e.label = r.multiplicity > 1 ? locus::StabilityLabel::degenerate
                                     : stability::derivative_label(sys, ld, r.value);
        col.equilibria.push_back(e);
    }
    return col;
}

struct ColumnComparison {
    double lambda = 0.0;
    double algo_to_oracle = 0.0;  // worst diagram point -> oracle set distance
    double oracle_to_algo = 0.0;  // worst oracle point -> diagram set distance
    int stability_mismatches = 0;
    int missing = 0;  // oracle equilibria with no diagram point inside the radius
    int extra = 0;    // diagram points with no oracle equilibrium inside the radius
};

struct ComparisonReport {
    std::vector<ColumnComparison> columns;
    double max_hausdorff = 0.0;
    double worst_lambda = 0.0;
    long stability_mismatches = 0;
    long missing = 0;
    long extra = 0;
    long identically_zero_columns = 0;
};

/// Uniform parameter grid over the diagram window plus a cluster of points
/// within 1e-2 of every detected bifurcation, where the two methods are most
/// likely to disagree.
inline std::vector<Rational> default_grid(const locus::Diagram& dg, int points = 1000) {
    std::vector<Rational> out;
    Rational lo(dg.param_window.lo);
    Rational hi(dg.param_window.hi);
    Rational span = hi - lo;
    points = std::max(points, 2);
    for (int j = 0; j < points; ++j)
        out.push_back(lo + span * Rational(j) / Rational(points - 1));
    for (const auto& bp : dg.bifurcations) {
        Rational center(bp.lambda);
        for (int k = 0; k < 5; ++k) {
            Rational off = Rational(1, 100 * (1 << k));
            for (Rational cand : {Rational(center - off), Rational(center + off)})
                if (cand >= lo && cand <= hi) out.push_back(cand);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Column-by-column comparison. Diagram points come from intersecting every
/// branch polyline with the vertical line; oracle points are the certified
/// roots restricted to the diagram's x-window (and domain cut). Matched pairs
/// are compared as stable-vs-unstable contradictions only, and columns within
/// 1e-3 of a detected bifurcation are exempt from mismatch counting.
inline ComparisonReport compare(const locus::Diagram& dg,
                                const expr::ParamAffineSystem& sys,
                                const std::vector<Rational>& grid,
                                const RootTolerances& tol = {}) {
    ComparisonReport rep;
    rep.columns.reserve(grid.size());
    const double match_radius = 1e-4 * std::max(dg.x_window.span(), 1e-12);
    const double inf = std::numeric_limits<double>::infinity();
    using SL = locus::StabilityLabel;

    struct Hit {
        double x;
        SL label;
    };

    for (const auto& lam : grid) {
        ColumnComparison cc;
        const double ld = to_double(lam);
        cc.lambda = ld;

        std::vector<Hit> algo;
        for (const auto& br : dg.branches)
            if (auto x = stability::branch_x_at(br, ld))
                algo.push_back({*x, br.stability});
        for (const auto& br : dg.constant_branches)
            if (auto x = stability::branch_x_at(br, ld))
                algo.push_back({*x, br.stability});

        auto col = oracle_equilibria(sys, lam, tol);
        if (col.identically_zero) {
            ++rep.identically_zero_columns;
            rep.columns.push_back(cc);
            continue;
        }
        std::vector<OracleEquilibrium> orc;
        for (const auto& e : col.equilibria) {
            if (!dg.x_window.contains(e.x)) continue;
            if (dg.domain_min && e.x < *dg.domain_min - 1e-12) continue;
            orc.push_back(e);
        }

        bool exempt = false;
        for (const auto& bp : dg.bifurcations)
            if (std::abs(ld - bp.lambda) <= 1e-3) exempt = true;

        for (const auto& a : algo) {
            double best = inf;
            const OracleEquilibrium* mate = nullptr;
            for (const auto& e : orc) {
                double dd = std::abs(a.x - e.x);
                if (dd < best) {
                    best = dd;
                    mate = &e;
                }
            }
            cc.algo_to_oracle = std::max(cc.algo_to_oracle, best);
            if (!mate || best > match_radius) {
                ++cc.extra;
                continue;
            }
            if (exempt) continue;
            if ((a.label == SL::stable && mate->label == SL::unstable) ||
                (a.label == SL::unstable && mate->label == SL::stable))
                ++cc.stability_mismatches;
        }
        for (const auto& e : orc) {
            double best = inf;
            for (const auto& a : algo) best = std::min(best, std::abs(a.x - e.x));
            cc.oracle_to_algo = std::max(cc.oracle_to_algo, best);
            if (best > match_radius) ++cc.missing;
        }

        double h = std::max(cc.algo_to_oracle, cc.oracle_to_algo);
        if (h > rep.max_hausdorff) {
            rep.max_hausdorff = h;
            rep.worst_lambda = ld;
        }
        rep.stability_mismatches += cc.stability_mismatches;
        rep.missing += cc.missing;
        rep.extra += cc.extra;
        rep.columns.push_back(std::move(cc));
    }
    return rep;
}

}  // namespace bifurcus::oracle
