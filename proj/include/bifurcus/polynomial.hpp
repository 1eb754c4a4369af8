// Univariate polynomials with exact rational coefficients.
//
// Coefficients are stored in ascending power order and the representation is
// kept normalized: the leading coefficient is nonzero unless the polynomial is
// zero (empty coefficient vector, degree() == -1).
#pragma once

#include <bifurcus/rational.hpp>

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bifurcus {

class Polynomial {
public:
    Polynomial() = default;

    explicit Polynomial(const Rational& constant) {
        if (constant != 0) coeffs_.push_back(constant);
    }

    explicit Polynomial(std::vector<Rational> ascending_coeffs)
        : coeffs_(std::move(ascending_coeffs)) {
        trim();
    }

    /// Convenience: build from integer coefficients, ascending power.
    static Polynomial from_ints(std::initializer_list<long long> ascending) {
        std::vector<Rational> c;
        c.reserve(ascending.size());
        for (long long v : ascending) c.emplace_back(v);
        return Polynomial(std::move(c));
    }

    static Polynomial variable() { return from_ints({0, 1}); }

    static Polynomial monomial(int power, const Rational& coeff) {
        if (power < 0) throw std::invalid_argument("negative power");
        if (coeff == 0) return Polynomial();
        std::vector<Rational> c(static_cast<std::size_t>(power) + 1, Rational(0));
        c.back() = coeff;
        return Polynomial(std::move(c));
    }

    bool is_zero() const { return coeffs_.empty(); }

    /// Degree; -1 is the zero-polynomial sentinel.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    const Rational& coeff(int power) const {
        static const Rational zero(0);
        if (power < 0 || power >= static_cast<int>(coeffs_.size())) return zero;
        return coeffs_[static_cast<std::size_t>(power)];
    }

    const std::vector<Rational>& coefficients() const { return coeffs_; }

    const Rational& leading_coefficient() const {
        if (is_zero()) throw std::domain_error("zero polynomial has no leading coefficient");
        return coeffs_.back();
    }

    bool operator==(const Polynomial& other) const { return coeffs_ == other.coeffs_; }
    bool operator!=(const Polynomial& other) const { return !(*this == other); }

    Polynomial operator-() const {
        Polynomial r(*this);
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }

    Polynomial operator+(const Polynomial& other) const {
        std::vector<Rational> c(std::max(coeffs_.size(), other.coeffs_.size()), Rational(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
        for (std::size_t i = 0; i < other.coeffs_.size(); ++i) c[i] += other.coeffs_[i];
        return Polynomial(std::move(c));
    }

    Polynomial operator-(const Polynomial& other) const { return *this + (-other); }

    Polynomial operator*(const Polynomial& other) const {
        if (is_zero() || other.is_zero()) return Polynomial();
        std::vector<Rational> c(coeffs_.size() + other.coeffs_.size() - 1, Rational(0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            for (std::size_t j = 0; j < other.coeffs_.size(); ++j)
                c[i + j] += coeffs_[i] * other.coeffs_[j];
        return Polynomial(std::move(c));
    }

    Polynomial operator*(const Rational& s) const {
        if (s == 0) return Polynomial();
        Polynomial r(*this);
        for (auto& c : r.coeffs_) c *= s;
        return r;
    }

    Polynomial pow(unsigned exponent) const {
        Polynomial result(Rational(1));
        Polynomial base(*this);
        while (exponent > 0) {
            if (exponent & 1u) result = result * base;
            base = base * base;
            exponent >>= 1u;
        }
        return result;
    }

    Polynomial derivative() const {
        if (coeffs_.size() <= 1) return Polynomial();
        std::vector<Rational> c(coeffs_.size() - 1);
        for (std::size_t i = 1; i < coeffs_.size(); ++i) c[i - 1] = coeffs_[i] * Rational(i);
        return Polynomial(std::move(c));
    }

    Rational evaluate(const Rational& x) const {
        Rational acc(0);
        for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
        return acc;
    }

    double evaluate(double x) const {
        double acc = 0.0;
        for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + to_double(coeffs_[i]);
        return acc;
    }

    /// Quotient and remainder with deg(rem) < deg(divisor).
    std::pair<Polynomial, Polynomial> divide(const Polynomial& divisor) const {
        if (divisor.is_zero()) throw std::domain_error("polynomial division by zero");
        Polynomial quotient;
        Polynomial remainder(*this);
        const int dd = divisor.degree();
        const Rational& lead = divisor.leading_coefficient();
        std::vector<Rational> q(remainder.degree() >= dd
                                    ? static_cast<std::size_t>(remainder.degree() - dd) + 1
                                    : 0,
                                Rational(0));
        while (!remainder.is_zero() && remainder.degree() >= dd) {
            int shift = remainder.degree() - dd;
            Rational factor = remainder.leading_coefficient() / lead;
            q[static_cast<std::size_t>(shift)] = factor;
            remainder = remainder - Polynomial::monomial(shift, factor) * divisor;
        }
        return {Polynomial(std::move(q)), remainder};
    }

    /// Division known to be exact; throws if a nonzero remainder shows up.
    Polynomial divide_exact(const Polynomial& divisor) const {
        auto [q, r] = divide(divisor);
        if (!r.is_zero()) throw std::domain_error("inexact polynomial division");
        return q;
    }

    Polynomial monic() const {
        if (is_zero()) return *this;
        return *this * (Rational(1) / leading_coefficient());
    }

    /// Positive gcd of all numerators over lcm of denominators; p / content(p)
    /// has integer coefficients with no common factor.
    Rational content() const {
        if (is_zero()) return Rational(0);
        BigInt num_gcd = 0, den_lcm = 1;
        for (const auto& c : coeffs_) {
            if (c == 0) continue;
            num_gcd = gcd(num_gcd, numerator(c) < 0 ? BigInt(-numerator(c)) : numerator(c));
            den_lcm = lcm(den_lcm, denominator(c));
        }
        return Rational(num_gcd, den_lcm);
    }

    std::string to_string(const std::string& var = "x") const {
        if (is_zero()) return "0";
        std::string out;
        for (int p = degree(); p >= 0; --p) {
            const Rational& c = coeff(p);
            if (c == 0) continue;
            bool first = out.empty();
            Rational mag = c < 0 ? Rational(-c) : c;
            if (first) {
                if (c < 0) out += "-";
            } else {
                out += c < 0 ? " - " : " + ";
            }
            bool unit = (mag == 1) && p > 0;
            if (!unit) out += rational_to_string(mag);
            if (p > 0) {
                if (!unit) out += "*";
                out += var;
                if (p > 1) out += "^" + std::to_string(p);
            }
        }
        return out;
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }

    std::vector<Rational> coeffs_;
};

inline Polynomial operator*(const Rational& s, const Polynomial& p) { return p * s; }

/// Monic greatest common divisor over the rationals; gcd(p, 0) = monic(p).
inline Polynomial gcd(const Polynomial& p, const Polynomial& q) {
    if (p.is_zero() && q.is_zero())
        throw std::domain_error("gcd of two zero polynomials is undefined");
    Polynomial a = p, b = q;
    while (!b.is_zero()) {
        auto [quot, rem] = a.divide(b);
        (void)quot;
        a = std::move(b);
        b = std::move(rem);
        // Keeping iterates monic bounds coefficient growth for the small
        // degrees this library works with.
        if (!b.is_zero()) b = b.monic();
    }
    return a.monic();
}

/// Yun's square-free factorization: monic(p) = prod factor_i ^ exponent_i with
/// pairwise-coprime square-free factors. Factors with exponent gaps are omitted.
inline std::vector<std::pair<Polynomial, int>> square_free_factorization(const Polynomial& p) {
    if (p.is_zero()) throw std::domain_error("square-free factorization of zero polynomial");
    std::vector<std::pair<Polynomial, int>> factors;
    Polynomial a = p.monic();
    if (a.degree() == 0) return factors;
    Polynomial g = gcd(a, a.derivative());
    if (g.degree() == 0) {
        factors.emplace_back(a, 1);
        return factors;
    }
    Polynomial b = a.divide_exact(g);
    Polynomial c = a.derivative().divide_exact(g);
    Polynomial d = c - b.derivative();
    int exponent = 1;
    while (b.degree() > 0) {
        Polynomial f = gcd(b, d);
        if (f.degree() > 0) factors.emplace_back(f, exponent);
        b = b.divide_exact(f);
        c = d.divide_exact(f);
        d = c - b.derivative();
        ++exponent;
    }
    return factors;
}

}  // namespace bifurcus
