// Certified real-root isolation.
//
// Square-free factors come from Yun's algorithm, so every multiplicity is
// exact. Each square-free factor is cleared to a primitive integer
// polynomial, its roots are counted with a Sturm chain and isolated by
// bisection on dyadic points (all sign evaluations are exact integer
// arithmetic), then the bracket is narrowed below the requested width and the
// value is polished in double precision.
#pragma once

#include <bifurcus/polynomial.hpp>

#include <cmath>
#include <cstdint>
#include <vector>

namespace bifurcus {

struct RootTolerances {
    double residual = 1e-9;  // relative residual accepted for a reported root
    double cluster = 1e-8;   // refined roots closer than this merge
    // Bisection continues until the bracket is narrower than 2^-41 (~4.5e-13).
    int bisection_bits = 41;
};

struct RealRoot {
    double value = 0.0;
    int multiplicity = 0;
};

struct RootSet {
    std::vector<RealRoot> roots;  // sorted ascending by value

    int total_multiplicity() const {
        int n = 0;
        for (const auto& r : roots) n += r.multiplicity;
        return n;
    }
    bool empty() const { return roots.empty(); }
};

namespace detail {

using IntPoly = std::vector<BigInt>;  // ascending, leading entry nonzero

inline int ip_degree(const IntPoly& p) { return static_cast<int>(p.size()) - 1; }

inline void ip_trim(IntPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline void ip_strip_content(IntPoly& p) {
    BigInt g = 0;
    for (const auto& c : p) g = gcd(g, c < 0 ? BigInt(-c) : c);
    if (g > 1)
        for (auto& c : p) c /= g;
}

/// Clear denominators and strip integer content; same roots as the input.
inline IntPoly to_primitive_int(const Polynomial& p) {
    BigInt den_lcm = 1;
    for (const auto& c : p.coefficients()) den_lcm = lcm(den_lcm, denominator(c));
    IntPoly out;
    out.reserve(p.coefficients().size());
    for (const auto& c : p.coefficients())
        out.push_back(numerator(c) * (den_lcm / denominator(c)));
    ip_trim(out);
    ip_strip_content(out);
    return out;
}

inline IntPoly ip_derivative(const IntPoly& p) {
    IntPoly out;
    for (std::size_t i = 1; i < p.size(); ++i) out.push_back(p[i] * BigInt(i));
    ip_trim(out);
    ip_strip_content(out);
    return out;
}

/// Exact point num/2^k2; bisection only ever needs dyadic endpoints.
struct Dyadic {
    BigInt num;
    unsigned k2 = 0;

    Rational to_rational() const { return Rational(num, BigInt(1) << k2); }
    double to_double() const { return bifurcus::to_double(to_rational()); }
};

inline Dyadic dyadic_midpoint(const Dyadic& a, const Dyadic& b) {
    unsigned k = std::max(a.k2, b.k2);
    BigInt na = a.num << (k - a.k2);
    BigInt nb = b.num << (k - b.k2);
    return Dyadic{na + nb, k + 1};
}

inline Rational dyadic_width(const Dyadic& a, const Dyadic& b) {
    unsigned k = std::max(a.k2, b.k2);
    BigInt na = a.num << (k - a.k2);
    BigInt nb = b.num << (k - b.k2);
    return Rational(nb - na, BigInt(1) << k);
}

/// Exact sign of p at num/2^k2 via p(x)*2^(k2*deg) which is an integer.
inline int ip_sign_at(const IntPoly& p, const Dyadic& x) {
    if (p.empty()) return 0;
    const int d = ip_degree(p);
    const BigInt two_k = BigInt(1) << x.k2;
    BigInt acc = p[static_cast<std::size_t>(d)];
    BigInt scale = 1;
    for (int i = d - 1; i >= 0; --i) {
        scale *= two_k;
        acc = acc * x.num + p[static_cast<std::size_t>(i)] * scale;
    }
    if (acc > 0) return 1;
    if (acc < 0) return -1;
    return 0;
}

/// Sturm chain with pseudo-remainders; signs match the classical rational
/// chain at every evaluation point.
inline std::vector<IntPoly> sturm_chain(const IntPoly& q) {
    std::vector<IntPoly> chain;
    chain.push_back(q);
    chain.push_back(ip_derivative(q));
    while (!chain.back().empty() && ip_degree(chain.back()) > 0) {
        const IntPoly& a = chain[chain.size() - 2];
        const IntPoly& b = chain.back();
        IntPoly r = a;
        const BigInt lead = b.back();
        int steps = 0;
        while (!r.empty() && ip_degree(r) >= ip_degree(b)) {
            const int shift = ip_degree(r) - ip_degree(b);
            const BigInt r_lead = r.back();
            IntPoly next(r.size() - 1, BigInt(0));
            for (std::size_t i = 0; i + 1 < r.size(); ++i) next[i] = r[i] * lead;
            for (std::size_t i = 0; i + 1 < b.size(); ++i)
                next[static_cast<std::size_t>(shift) + i] -= b[i] * r_lead;
            ip_trim(next);
            r = std::move(next);
            ++steps;
        }
        // r == lead^steps * rem(a, b); flip to -rem times a positive constant.
        const bool negative_scale = (lead < 0) && (steps % 2 == 1);
        for (auto& c : r) c = negative_scale ? c : -c;
        ip_strip_content(r);
        if (r.empty()) break;  // only for inputs with repeated roots
        chain.push_back(std::move(r));
    }
    return chain;
}

inline int sign_variations(const std::vector<IntPoly>& chain, const Dyadic& x) {
    int variations = 0, prev = 0;
    for (const auto& p : chain) {
        int s = ip_sign_at(p, x);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++variations;
        prev = s;
    }
    return variations;
}

/// Smallest power-of-two bound with all real roots strictly inside (-B, B).
inline Dyadic cauchy_bound(const IntPoly& q) {
    const BigInt lead = q.back() < 0 ? BigInt(-q.back()) : q.back();
    BigInt max_ratio_ceil = 0;
    for (std::size_t i = 0; i + 1 < q.size(); ++i) {
        BigInt c = q[i] < 0 ? BigInt(-q[i]) : q[i];
        BigInt r = (c + lead - 1) / lead;
        if (r > max_ratio_ceil) max_ratio_ceil = r;
    }
    BigInt bound = max_ratio_ceil + 1;
    BigInt b = 1;
    while (b < bound) b <<= 1;
    return Dyadic{b << 1, 0};  // extra margin keeps the endpoints clearly off-root
}

struct IsolatedRoot {
    Dyadic lo, hi;       // bracket with opposite signs of q, or exact
    bool exact = false;  // root is exactly at lo (== hi)
};

/// Point strictly between `a` and `target` where q is nonzero, halving the
/// distance to `target` until one is found. Terminates because q has finitely
/// many roots and the probes converge to `target`.
inline Dyadic nonroot_toward(const IntPoly& q, Dyadic a, const Dyadic& target) {
    for (;;) {
        Dyadic m = dyadic_midpoint(a, target);
        if (ip_sign_at(q, m) != 0) return m;
        a = m;
    }
}

inline void isolate_recursive(const IntPoly& q, const std::vector<IntPoly>& chain,
                              const Dyadic& lo, const Dyadic& hi, int count,
                              std::vector<IsolatedRoot>& out) {
    if (count <= 0) return;
    if (count == 1) {
        out.push_back(IsolatedRoot{lo, hi, false});
        return;
    }
    Dyadic mid = dyadic_midpoint(lo, hi);
    if (ip_sign_at(q, mid) != 0) {
        int upper = sign_variations(chain, mid) - sign_variations(chain, hi);
        isolate_recursive(q, chain, lo, mid, count - upper, out);
        isolate_recursive(q, chain, mid, hi, upper, out);
        return;
    }
    // The midpoint is an exact root. Record it and bracket the remaining
    // count-1 roots on the two sides, moving the side points toward the root
    // until none are lost in between.
    out.push_back(IsolatedRoot{mid, mid, true});
    Dyadic left_hi = nonroot_toward(q, lo, mid);
    Dyadic right_lo = nonroot_toward(q, hi, mid);
    const int v_lo = sign_variations(chain, lo);
    const int v_hi = sign_variations(chain, hi);
    int left = v_lo - sign_variations(chain, left_hi);
    int right = sign_variations(chain, right_lo) - v_hi;
    while (left + right != count - 1) {
        left_hi = nonroot_toward(q, left_hi, mid);
        right_lo = nonroot_toward(q, right_lo, mid);
        left = v_lo - sign_variations(chain, left_hi);
        right = sign_variations(chain, right_lo) - v_hi;
    }
    isolate_recursive(q, chain, lo, left_hi, left, out);
    isolate_recursive(q, chain, right_lo, hi, right, out);
}

/// Shrink a sign-change bracket until its width drops below 2^-bits.
inline IsolatedRoot refine_bracket(const IntPoly& q, IsolatedRoot r, int bits) {
    if (r.exact) return r;
    const Rational target(1, BigInt(1) << bits);
    const int lo_sign = ip_sign_at(q, r.lo);
    while (dyadic_width(r.lo, r.hi) > target) {
        Dyadic mid = dyadic_midpoint(r.lo, r.hi);
        int s = ip_sign_at(q, mid);
        if (s == 0) {
            r.lo = r.hi = mid;
            r.exact = true;
            return r;
        }
        (s == lo_sign ? r.lo : r.hi) = mid;
    }
    return r;
}

/// Final floating refinement: a few clamped Newton steps inside the bracket.
inline double polish(const IntPoly& q, const IsolatedRoot& r) {
    if (r.exact) return r.lo.to_double();
    const double lo = r.lo.to_double(), hi = r.hi.to_double();
    std::vector<double> c(q.size()), dc;
    for (std::size_t i = 0; i < q.size(); ++i) c[i] = q[i].convert_to<double>();
    for (std::size_t i = 1; i < c.size(); ++i) dc.push_back(c[i] * static_cast<double>(i));
    auto eval = [](const std::vector<double>& p, double x) {
        double acc = 0.0;
        for (std::size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
        return acc;
    };
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 3; ++it) {
        double d = eval(dc, x);
        if (d == 0.0) break;
        double next = x - eval(c, x) / d;
        if (!(next >= lo && next <= hi)) break;
        x = next;
    }
    return x;
}

}  // namespace detail

/// All real roots of p with exact multiplicities. Deterministic for identical
/// input. Throws std::domain_error for the zero polynomial.
inline RootSet real_roots(const Polynomial& p, const RootTolerances& tol = {}) {
    if (p.is_zero()) throw std::domain_error("real_roots of zero polynomial");
    RootSet result;
    if (p.degree() == 0) return result;

    std::vector<RealRoot> collected;
    for (const auto& [factor, exponent] : square_free_factorization(p)) {
        detail::IntPoly q = detail::to_primitive_int(factor);
        const int d = detail::ip_degree(q);
        if (d < 1) continue;
        if (d == 1) {
            Rational root(-q[0], q[1]);
            collected.push_back({to_double(root), exponent});
            continue;
        }
        auto chain = detail::sturm_chain(q);
        detail::Dyadic bound = detail::cauchy_bound(q);
        detail::Dyadic lo{-bound.num, 0}, hi{bound.num, 0};
        int count = detail::sign_variations(chain, lo) - detail::sign_variations(chain, hi);
        std::vector<detail::IsolatedRoot> brackets;
        detail::isolate_recursive(q, chain, lo, hi, count, brackets);
        for (auto& b : brackets) {
            auto refined = detail::refine_bracket(q, b, tol.bisection_bits);
            collected.push_back({detail::polish(q, refined), exponent});
        }
    }

    std::sort(collected.begin(), collected.end(),
              [](const RealRoot& a, const RealRoot& b) { return a.value < b.value; });
    for (const auto& r : collected) {
        if (!result.roots.empty() && r.value - result.roots.back().value <= tol.cluster) {
            auto& last = result.roots.back();
            // weighted merge keeps the reported point inside the cluster
            last.value = (last.value * last.multiplicity + r.value * r.multiplicity) /
                         (last.multiplicity + r.multiplicity);
            last.multiplicity += r.multiplicity;
        } else {
            result.roots.push_back(r);
        }
    }
    return result;
}

/// Residual scale sum_i |c_i x^i|; the certified-root contract is
/// |p(x)| <= residual_tol * scale.
inline double residual_scale(const Polynomial& p, double x) {
    double scale = 0.0, power = 1.0;
    for (const auto& c : p.coefficients()) {
        scale += std::abs(to_double(c) * power);
        power *= x;
    }
    return scale;
}

}  // namespace bifurcus
