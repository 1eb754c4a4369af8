// Geometry of the diagram: factor the system, locate poles/zeros, derive
// sign regions and asymptotes, then trace the locus mu(x) = -f1(x)/g1(x)
// into branches split at critical points, asymptote escapes, constant-line
// crossings, and window edges.
#pragma once

#include <bifurcus/expr.hpp>
#include <bifurcus/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace bifurcus::locus {

struct Decomposition {
    Polynomial h;   // common factor, monic; its roots are parameter-free branches
    Polynomial f1;  // poles live here; positive leading coefficient
    Polynomial g1;  // zeros live here; positive leading coefficient
    int sign = 1;   // s in s*(f + lambda*g) == h*(f1 + mu*g1)
    bool mu_is_minus_lambda = false;
};

struct PoleZeroSet {
    RootSet poles;  // roots of f1: equilibria at lambda = 0
    RootSet zeros;  // roots of g1: equilibria as |lambda| -> infinity
};

struct SignRegion {
    double x_lo, x_hi;  // open interval; +-infinity allowed
    int mu_sign;        // +1 iff count_above is odd
    int count_above;    // poles + zeros strictly above, with multiplicity
};

struct Asymptotes {
    std::optional<Rational> vertical;  // mu* value, present iff deg f1 <= deg g1
    std::vector<double> horizontal;    // x values: exactly the zeros
};

enum class EndpointKind {
    pole,                  // branch touches the mu = 0 axis at a root of f1
    fold,                  // critical point of mu(x); slope sign changes across it
    horizontal_asymptote,  // |mu| escape toward a zero of g1
    vertical_asymptote,    // window-edge exit converging to the finite mu limit
    domain_boundary,       // window edge, domain cut, or parameter-band cut
    junction,              // crossing with a parameter-free branch (split for labeling)
};

enum class StabilityLabel { unknown, stable, unstable, degenerate };

struct Sample {
    double param;  // mu before flip_to_lambda, lambda after
    double x;
};

struct Branch {
    std::vector<Sample> samples;  // ordered by x for traced, by param for constant
    int slope_sign = 0;           // sign of d(param)/dx over the interior
    EndpointKind start_kind = EndpointKind::domain_boundary;
    EndpointKind end_kind = EndpointKind::domain_boundary;
    StabilityLabel stability = StabilityLabel::unknown;
};

struct BifurcationPoint {
    enum class Kind { fold, transcritical, pitchfork, degenerate };
    double lambda = 0.0;
    double x = 0.0;
    Kind kind = Kind::fold;
    std::vector<std::string> branch_ids;
};

struct Window {
    double lo = 0.0, hi = 0.0;
    double span() const { return hi - lo; }
    bool contains(double v) const { return v >= lo && v <= hi; }
};

struct SamplingConfig {
    int initial_samples = 512;         // uniform per elementary interval
    int max_branch_samples = 1 << 16;  // refinement ceiling
    double param_cap = 20.0;           // |mu| band while tracing
    int screen_width = 800;            // render budget the sampler targets
    int screen_height = 600;
    double screen_gap_px = 2.0;        // split pairs further apart than this
    double invert_tol = 2e-5;          // x error allowed when a vertical
                                       // parameter line cuts a segment
};

struct Diagram {
    std::string param_name;   // horizontal axis symbol (original parameter)
    std::string state_name;   // vertical axis symbol
    std::string input_expression;
    Window x_window;
    Window param_window;
    std::optional<double> domain_min;
    std::vector<Branch> branches;           // traced locus pieces
    std::vector<Branch> constant_branches;  // horizontal lines at roots of h
    std::optional<Rational> vertical_asymptote;  // in final lambda coordinates
    std::vector<double> horizontal_asymptotes;
    std::vector<SignRegion> sign_regions;   // in mu convention (pre-flip)
    std::vector<BifurcationPoint> bifurcations;
    SamplingConfig sampling;
    double eps_res = 1e-9;
    bool mu_was_flipped = false;
};

/// Factor f + lambda*g as s*(f + lambda*g) = h*(f1 + mu*g1) with both
/// quotient leading coefficients positive and mu = +-lambda.
inline Decomposition decompose(const expr::ParamAffineSystem& sys) {
    if (sys.g.is_zero()) throw std::domain_error("decompose: g is zero");
    Decomposition d;
    d.h = sys.f.is_zero() ? sys.g.monic() : gcd(sys.f, sys.g);
    Polynomial f1_raw = sys.f.is_zero() ? Polynomial() : sys.f.divide_exact(d.h);
    Polynomial g1_raw = sys.g.divide_exact(d.h);
    int sf = f1_raw.is_zero() ? 1 : sign_of(f1_raw.leading_coefficient());
    int sg = sign_of(g1_raw.leading_coefficient());
    d.f1 = sf < 0 ? -f1_raw : f1_raw;
    d.g1 = sg < 0 ? -g1_raw : g1_raw;
    d.sign = sf;
    d.mu_is_minus_lambda = (sf * sg) < 0;
    return d;
}

inline PoleZeroSet poles_zeros(const Decomposition& d, const RootTolerances& tol = {}) {
    PoleZeroSet pz;
    if (!d.f1.is_zero() && d.f1.degree() > 0) pz.poles = real_roots(d.f1, tol);
    if (d.g1.degree() > 0) pz.zeros = real_roots(d.g1, tol);
    return pz;
}

/// Split the state axis at poles and zeros; an interval carries mu > 0
/// exactly when an odd number of poles+zeros (with multiplicity) lies above.
inline std::vector<SignRegion> sign_regions(const PoleZeroSet& pz) {
    std::vector<RealRoot> marks;
    marks.insert(marks.end(), pz.poles.roots.begin(), pz.poles.roots.end());
    marks.insert(marks.end(), pz.zeros.roots.begin(), pz.zeros.roots.end());
    std::sort(marks.begin(), marks.end(),
              [](const RealRoot& a, const RealRoot& b) { return a.value < b.value; });

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<SignRegion> regions;
    std::vector<int> above(marks.size() + 1, 0);
    for (std::size_t i = marks.size(); i-- > 0;)
        above[i] = above[i + 1] + marks[i].multiplicity;
    for (std::size_t i = 0; i <= marks.size(); ++i) {
        SignRegion r;
        r.x_lo = i == 0 ? -inf : marks[i - 1].value;
        r.x_hi = i == marks.size() ? inf : marks[i].value;
        r.count_above = above[i];
        r.mu_sign = (r.count_above % 2 == 1) ? 1 : -1;
        regions.push_back(r);
    }
    return regions;
}

/// Finite limit of mu as |x| grows: absent when deg f1 > deg g1, zero when
/// the degree is smaller, ratio of leading coefficients when equal.
inline std::optional<Rational> vertical_asymptote(const Decomposition& d) {
    int df = d.f1.degree(), dg = d.g1.degree();
    if (df > dg) return std::nullopt;
    if (df < dg) return Rational(0);
    return -d.f1.leading_coefficient() / d.g1.leading_coefficient();
}

inline std::vector<double> horizontal_asymptotes(const PoleZeroSet& pz) {
    std::vector<double> xs;
    for (const auto& z : pz.zeros.roots) xs.push_back(z.value);
    return xs;
}

/// Numerator of -mu'(x); its real roots away from zeros are the fold points.
inline Polynomial slope_numerator(const Decomposition& d) {
    if (d.f1.is_zero()) return Polynomial();
    return d.f1.derivative() * d.g1 - d.f1 * d.g1.derivative();
}

/// Critical points of mu(x) with exact multiplicities; roots of the slope
/// numerator that coincide with zeros of g1 are excluded (not in the domain).
inline RootSet critical_points(const Decomposition& d, const PoleZeroSet& pz) {
    Polynomial w = slope_numerator(d);
    if (w.is_zero() || w.degree() < 1) return {};
    RootSet all = real_roots(w);
    RootSet filtered;
    for (const auto& r : all.roots) {
        bool on_zero = false;
        for (const auto& z : pz.zeros.roots)
            if (std::abs(r.value - z.value) <= 1e-9) on_zero = true;
        if (!on_zero) filtered.roots.push_back(r);
    }
    return filtered;
}

inline Window default_x_window(const PoleZeroSet& pz) {
    std::vector<double> locs;
    for (const auto& r : pz.poles.roots) locs.push_back(r.value);
    for (const auto& r : pz.zeros.roots) locs.push_back(r.value);
    std::sort(locs.begin(), locs.end());
    Window w{-10.0, 10.0};
    if (locs.size() >= 2 && locs.back() > locs.front()) {
        double spread = locs.back() - locs.front();
        w = {locs.front() - 2.0 * spread, locs.back() + 2.0 * spread};
    } else if (!locs.empty()) {
        w.lo = std::min(w.lo, locs.front());
        w.hi = std::max(w.hi, locs.back());
    }
    return w;
}

inline Window expand_to_contain(Window w, const PoleZeroSet& pz) {
    for (const auto& r : pz.poles.roots) {
        w.lo = std::min(w.lo, r.value);
        w.hi = std::max(w.hi, r.value);
    }
    for (const auto& r : pz.zeros.roots) {
        w.lo = std::min(w.lo, r.value);
        w.hi = std::max(w.hi, r.value);
    }
    return w;
}

namespace detail {

enum class EventType { edge, domain, crit, junction, zero, pole };  // ascending priority

struct Event {
    double x;
    EventType type;
};

inline double eval_double(const Polynomial& p, double x) { return p.evaluate(x); }

struct MuFn {
    const Polynomial& f1;
    const Polynomial& g1;
    double operator()(double x) const {
        return -eval_double(f1, x) / eval_double(g1, x);
    }
};

/// Step off an asymptote location until mu is finite.
inline double nudge_off(const MuFn& mu, double x0, double direction, double width) {
    double offset = width * 1e-9;
    for (int i = 0; i < 60; ++i) {
        double x = x0 + direction * offset;
        if (std::isfinite(mu(x))) return x;
        offset *= 8.0;
    }
    return x0 + direction * width * 0.5;
}

/// x where |mu| crosses the cap, bracketed by (over, under); returns the
/// in-band side of the crossing.
inline double bisect_cap(const MuFn& mu, double cap, double x_over, double x_under) {
    for (int i = 0; i < 80; ++i) {
        double m = 0.5 * (x_over + x_under);
        double v = std::abs(mu(m));
        if (!std::isfinite(v) || v > cap)
            x_over = m;
        else
            x_under = m;
    }
    return x_under;
}

inline EndpointKind endpoint_kind(EventType t, bool band_clipped, bool has_vertical) {
    switch (t) {
        case EventType::pole: return EndpointKind::pole;
        case EventType::zero: return EndpointKind::horizontal_asymptote;
        case EventType::junction: return EndpointKind::junction;
        case EventType::crit:
            return band_clipped ? EndpointKind::domain_boundary : EndpointKind::fold;
        case EventType::edge:
            return has_vertical ? EndpointKind::vertical_asymptote
                                : EndpointKind::domain_boundary;
        case EventType::domain: return EndpointKind::domain_boundary;
    }
    return EndpointKind::domain_boundary;
}

inline int exact_slope_sign(const Polynomial& w, double a, double b) {
    if (w.is_zero()) return 0;
    double mid = 0.5 * (a + b);
    for (int i = 0; i < 8; ++i) {
        int s = sign_of(w.evaluate(Rational(mid)));
        if (s != 0) return -s;  // mu' = -w / g1^2
        mid += (b - a) / 7.0;
        if (mid >= b) mid = 0.5 * (a + b) - (b - a) / 11.0;
    }
    return 0;
}

inline std::optional<Branch> trace_interval(const Decomposition& d, const Polynomial& w,
                                            const Event& e0, const Event& e1,
                                            const SamplingConfig& cfg, double x_span,
                                            bool has_vertical) {
    MuFn mu{d.f1, d.g1};
    const double width = e1.x - e0.x;
    if (!(width > 1e-12)) return std::nullopt;

    double a_eval = e0.type == EventType::zero ? nudge_off(mu, e0.x, +1.0, width) : e0.x;
    double b_eval = e1.type == EventType::zero ? nudge_off(mu, e1.x, -1.0, width) : e1.x;
    double mu_a = e0.type == EventType::pole ? 0.0 : mu(a_eval);
    double mu_b = e1.type == EventType::pole ? 0.0 : mu(b_eval);

    const double cap = cfg.param_cap;
    bool clip_a = !std::isfinite(mu_a) || std::abs(mu_a) > cap;
    bool clip_b = !std::isfinite(mu_b) || std::abs(mu_b) > cap;
    double a_cut, b_cut;
    if (clip_a && clip_b) {
        // mu is monotone between consecutive events, so two out-of-band ends
        // of the same sign mean the whole interval is out.  Opposite signs
        // mean mu crosses zero at a simple root of f1 inside and the branch
        // sweeps the entire band; keep the in-band middle piece.
        if (!std::isfinite(mu_a) || !std::isfinite(mu_b) || (mu_a < 0) == (mu_b < 0))
            return std::nullopt;
        double za = a_eval, zb = b_eval;
        const bool neg_a = mu_a < 0;
        for (int i = 0; i < 80; ++i) {
            double m = 0.5 * (za + zb);
            ((mu(m) < 0) == neg_a ? za : zb) = m;
        }
        double inside = 0.5 * (za + zb);
        a_cut = bisect_cap(mu, cap, a_eval, inside);
        b_cut = bisect_cap(mu, cap, b_eval, inside);
    } else {
        a_cut = clip_a ? bisect_cap(mu, cap, a_eval, b_eval) : a_eval;
        b_cut = clip_b ? bisect_cap(mu, cap, b_eval, a_cut) : b_eval;
    }
    if (!(b_cut - a_cut > 1e-12)) return std::nullopt;

    Branch br;
    const int n = cfg.initial_samples;
    br.samples.reserve(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        double x = i == n ? b_cut
                          : a_cut + (b_cut - a_cut) * (static_cast<double>(i) / n);
        br.samples.push_back({mu(x), x});
    }
    if (!clip_a && e0.type == EventType::pole) br.samples.front() = {0.0, e0.x};
    if (!clip_b && e1.type == EventType::pole) br.samples.back() = {0.0, e1.x};

    // refinement: keep screen-space gaps small, and keep the error of
    // inverting a chord (vertical parameter line -> x) within invert_tol so
    // column-wise set comparisons see the polyline as the true curve
    const double px_per_param = cfg.screen_width / (2.0 * cap);
    const double px_per_x = cfg.screen_height / x_span;
    for (int round = 0; round < 16; ++round) {
        std::vector<Sample> refined;
        refined.reserve(br.samples.size() * 2);
        bool inserted = false;
        for (std::size_t i = 0; i + 1 < br.samples.size(); ++i) {
            const Sample& s0 = br.samples[i];
            const Sample& s1 = br.samples[i + 1];
            refined.push_back(s0);
            if (static_cast<int>(refined.size() + (br.samples.size() - i)) >=
                cfg.max_branch_samples)
                continue;
            double gap_px = std::hypot((s1.param - s0.param) * px_per_param,
                                       (s1.x - s0.x) * px_per_x);
            double xm = 0.5 * (s0.x + s1.x);
            double mum = mu(xm);
            bool split = gap_px > cfg.screen_gap_px;
            if (!split) {
                double denom = s1.param - s0.param;
                if (denom != 0.0) {
                    double t = (mum - s0.param) / denom;
                    double x_hat = s0.x + t * (s1.x - s0.x);
                    split = t < -0.5 || t > 1.5 ||
                            std::abs(x_hat - xm) > cfg.invert_tol;
                }
            }
            if (split && xm > s0.x && xm < s1.x) {
                refined.push_back({mum, xm});
                inserted = true;
            }
        }
        refined.push_back(br.samples.back());
        br.samples = std::move(refined);
        if (!inserted) break;
    }

    br.slope_sign = exact_slope_sign(w, a_cut, b_cut);
    br.start_kind = clip_a && e0.type != EventType::zero
                        ? EndpointKind::domain_boundary
                        : endpoint_kind(e0.type, clip_a, has_vertical);
    br.end_kind = clip_b && e1.type != EventType::zero
                      ? EndpointKind::domain_boundary
                      : endpoint_kind(e1.type, clip_b, has_vertical);
    if (br.samples.size() < 2) return std::nullopt;
    return br;
}

}  // namespace detail

inline std::vector<double> constant_branches(const Decomposition& d,
                                             const RootTolerances& tol = {}) {
    std::vector<double> xs;
    if (d.h.degree() < 1) return xs;
    for (const auto& r : real_roots(d.h, tol).roots) xs.push_back(r.value);
    return xs;
}

/// x locations where the locus crosses a parameter-free branch away from
/// poles/zeros; traced branches split there so labels stay per-segment.
inline std::vector<double> junction_points(const Decomposition& d, const PoleZeroSet& pz,
                                           const RootTolerances& tol = {}) {
    std::vector<double> out;
    if (d.h.degree() < 1) return out;
    for (const auto& r : real_roots(d.h, tol).roots) {
        bool near_existing = false;
        for (const auto& p : pz.poles.roots)
            if (std::abs(r.value - p.value) <= 1e-9) near_existing = true;
        for (const auto& z : pz.zeros.roots)
            if (std::abs(r.value - z.value) <= 1e-9) near_existing = true;
        if (!near_existing) out.push_back(r.value);
    }
    return out;
}

/// Trace the locus over the window, splitting at poles, zeros, critical
/// points, constant-line crossings, and boundaries. Branches come back in mu
/// coordinates ordered by starting x.
inline std::vector<Branch> trace_branches(const Decomposition& d, const PoleZeroSet& pz,
                                          Window x_window, const SamplingConfig& cfg = {},
                                          std::optional<double> domain_min = std::nullopt) {
    double lo = x_window.lo, hi = x_window.hi;
    bool lo_is_domain = false;
    if (domain_min && *domain_min > lo) {
        lo = *domain_min;
        lo_is_domain = true;
    }
    if (!(lo < hi)) return {};

    using detail::Event;
    using detail::EventType;
    std::vector<Event> events;
    events.push_back({lo, lo_is_domain ? EventType::domain : EventType::edge});
    events.push_back({hi, EventType::edge});
    auto add_interior = [&](double x, EventType t) {
        if (x > lo && x < hi) events.push_back({x, t});
    };
    // The locus passes smoothly through a simple pole, so poles split a
    // branch only when the slope vanishes there (multiplicity >= 2) or a
    // parameter-free branch crosses there (root of h).
    std::vector<double> h_roots = constant_branches(d);
    for (const auto& p : pz.poles.roots) {
        bool on_constant = false;
        for (double hr : h_roots)
            if (std::abs(hr - p.value) <= 1e-9) on_constant = true;
        if (p.multiplicity >= 2 || on_constant) add_interior(p.value, EventType::pole);
    }
    for (const auto& z : pz.zeros.roots) add_interior(z.value, EventType::zero);
    Polynomial w = slope_numerator(d);
    for (const auto& c : critical_points(d, pz).roots)
        add_interior(c.value, EventType::crit);
    for (double j : junction_points(d, pz)) add_interior(j, EventType::junction);

    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        if (a.x != b.x) return a.x < b.x;
        return static_cast<int>(a.type) > static_cast<int>(b.type);
    });
    std::vector<Event> merged;
    for (const auto& e : events) {
        if (!merged.empty() && e.x - merged.back().x <= 1e-9) {
            if (static_cast<int>(e.type) > static_cast<int>(merged.back().type))
                merged.back().type = e.type;
            continue;
        }
        merged.push_back(e);
    }

    const bool has_vertical = vertical_asymptote(d).has_value();
    std::vector<Branch> out;
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        auto br = detail::trace_interval(d, w, merged[i], merged[i + 1], cfg,
                                         x_window.span(), has_vertical);
        if (br) out.push_back(std::move(*br));
    }
    return out;
}

/// Step from mu to the original parameter: negate every sample when
/// mu = -lambda, otherwise identity. Involution on sample sets.
inline void flip_to_lambda(std::vector<Branch>& branches,
                           std::optional<Rational>& vertical, bool mu_is_minus_lambda) {
    if (!mu_is_minus_lambda) return;
    for (auto& br : branches) {
        for (auto& s : br.samples) s.param = -s.param;
        br.slope_sign = -br.slope_sign;
    }
    if (vertical) *vertical = -*vertical;
}

}  // namespace bifurcus::locus
