#include <bifurcus/roots.hpp>

#include "test_util.hpp"

#include <cmath>
#include <map>
#include <random>

using bifurcus::Polynomial;
using bifurcus::Rational;
using bifurcus::real_roots;
using bifurcus::RootSet;
using test_util::poly;
using test_util::rat;

namespace {

void check_roots(const RootSet& rs, const std::vector<std::pair<double, int>>& expected,
                 double tol = 1e-12) {
    REQUIRE(rs.roots.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(rs.roots[i].value == Catch::Approx(expected[i].first).margin(tol));
        CHECK(rs.roots[i].multiplicity == expected[i].second);
    }
}

}  // namespace

TEST_CASE("simple cubics and empty cases", "[roots]") {
    check_roots(real_roots(poly({0, -1, 0, 1})), {{-1.0, 1}, {0.0, 1}, {1.0, 1}});
    CHECK(real_roots(poly({1, 0, 1})).empty());
    check_roots(real_roots(poly({0, 0, 1})), {{0.0, 2}});
    CHECK(real_roots(poly({3})).empty());
    CHECK_THROWS_AS(real_roots(Polynomial()), std::domain_error);
}

// Independently computed with a multiprecision solver and frozen here.
TEST_CASE("cubic critical polynomials", "[roots]") {
    check_roots(real_roots(poly({-1, 0, 3, 4})), {{0.4554100411010284672112, 1}});
    check_roots(real_roots(poly({-1, 0, 3, 1})), {{-2.879385241571816768108, 1},
                                                  {-0.6527036446661393022966, 1},
                                                  {0.5320888862379560704048, 1}});
    // 2r^5 - 4r^3 = 2 r^3 (r^2 - 2)
    check_roots(real_roots(poly({0, 0, 0, -4, 0, 2})),
                {{-1.414213562373095048802, 1}, {0.0, 3}, {1.414213562373095048802, 1}});
}

TEST_CASE("rational and repeated roots", "[roots]") {
    check_roots(real_roots(Polynomial(std::vector<Rational>{rat(-1, 4), rat(0), rat(1)})),
                {{-0.5, 1}, {0.5, 1}});
    check_roots(real_roots(poly({1, -2, 1})), {{1.0, 2}});
    // (x-1)^2 (x+2)^3
    Polynomial p = poly({-1, 1}).pow(2) * poly({2, 1}).pow(3);
    check_roots(real_roots(p), {{-2.0, 3}, {1.0, 2}});
}

TEST_CASE("nearby roots merge into one cluster", "[roots]") {
    Polynomial close = poly({-1, 1}) * Polynomial(std::vector<Rational>{
                                           -(rat(1) + Rational(1, 1000000000)), rat(1)});
    auto rs = real_roots(close);
    REQUIRE(rs.roots.size() == 1);
    CHECK(rs.roots[0].multiplicity == 2);
    CHECK(rs.roots[0].value == Catch::Approx(1.0 + 0.5e-9).margin(1e-10));

    // spaced further apart than the cluster radius they stay separate
    Polynomial apart = poly({-1, 1}) * Polynomial(std::vector<Rational>{
                                           -(rat(1) + Rational(1, 1000000)), rat(1)});
    CHECK(real_roots(apart).roots.size() == 2);
}

TEST_CASE("planted integer roots are recovered", "[roots]") {
    std::mt19937 rng(31415);
    std::uniform_int_distribution<int> root_dist(-6, 6);
    std::uniform_int_distribution<int> mult_dist(1, 3);
    for (int trial = 0; trial < 40; ++trial) {
        std::map<int, int> planted;
        int degree = 0;
        while (degree < 6) {
            int r = root_dist(rng);
            int m = mult_dist(rng);
            if (planted.count(r)) continue;
            planted[r] = m;
            degree += m;
        }
        Polynomial p{rat(1)};
        for (auto [r, m] : planted) p = p * poly({-r, 1}).pow(static_cast<unsigned>(m));

        auto rs = real_roots(p);
        REQUIRE(rs.roots.size() == planted.size());
        CHECK(rs.total_multiplicity() == p.degree());
        auto it = planted.begin();
        for (const auto& found : rs.roots) {
            CHECK(found.value == Catch::Approx(it->first).margin(1e-9));
            CHECK(found.multiplicity == it->second);
            ++it;
        }
    }
}

TEST_CASE("roots satisfy the residual bound", "[roots]") {
    std::mt19937 rng(2718);
    std::uniform_int_distribution<int> coeff(-50, 50);
    int nonempty = 0;
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<Rational> c;
        for (int i = 0; i < 6; ++i) c.emplace_back(coeff(rng));
        c.emplace_back(1 + std::abs(coeff(rng)));
        Polynomial p{c};
        auto rs = real_roots(p);
        CHECK(rs.total_multiplicity() <= p.degree());
        nonempty += rs.empty() ? 0 : 1;
        for (const auto& r : rs.roots) {
            double residual = std::abs(p.evaluate(r.value));
            CHECK(residual <= 1e-9 * bifurcus::residual_scale(p, r.value));
        }
    }
    CHECK(nonempty > 30);  // the sweep actually exercised the isolator
}

TEST_CASE("large magnitude roots", "[roots]") {
    // (x - 1000)(x + 1024)(x - 1/1024)
    Polynomial p = poly({-1000, 1}) * poly({1024, 1}) *
                   Polynomial(std::vector<Rational>{Rational(-1, 1024), rat(1)});
    check_roots(real_roots(p), {{-1024.0, 1}, {1.0 / 1024.0, 1}, {1000.0, 1}}, 1e-9);
}
