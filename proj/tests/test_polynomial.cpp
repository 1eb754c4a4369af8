#include <bifurcus/polynomial.hpp>

#include "test_util.hpp"

#include <random>

using bifurcus::Polynomial;
using bifurcus::Rational;
using test_util::poly;
using test_util::rat;

TEST_CASE("construction trims and reports degree", "[polynomial]") {
    CHECK(Polynomial().is_zero());
    CHECK(Polynomial().degree() == -1);
    CHECK(poly({0, 0, 0}).is_zero());
    CHECK(poly({5}).degree() == 0);
    CHECK(poly({0, 1}).degree() == 1);
    CHECK(poly({1, 2, 0, 0}).degree() == 1);
    CHECK(Polynomial::variable() == poly({0, 1}));
    CHECK(Polynomial::monomial(3, rat(2)) == poly({0, 0, 0, 2}));
    CHECK(poly({7}).coeff(0) == 7);
    CHECK(poly({7}).coeff(5) == 0);
    CHECK(poly({7}).coeff(-1) == 0);
}

TEST_CASE("arithmetic identities", "[polynomial]") {
    Polynomial p = poly({1, -2, 3});
    Polynomial q = poly({0, 1, 0, -1});  // x - x^3
    CHECK(p + q - q == p);
    CHECK(p * q == q * p);
    CHECK((p - p).is_zero());
    CHECK(-(-p) == p);
    CHECK(p * rat(0) == Polynomial());
    CHECK(rat(2) * p == p + p);
    CHECK(p * poly({1}) == p);
    CHECK(poly({0, 1}).pow(3) == poly({0, 0, 0, 1}));
    CHECK(poly({1, 1}).pow(3) == poly({1, 3, 3, 1}));
    CHECK(p.pow(0) == poly({1}));
}

TEST_CASE("derivative and evaluation", "[polynomial]") {
    Polynomial p = poly({2, 0, -3, 1});  // x^3 - 3x^2 + 2
    CHECK(p.derivative() == poly({0, -6, 3}));
    CHECK(poly({5}).derivative().is_zero());
    CHECK(p.evaluate(Rational(0)) == 2);
    CHECK(p.evaluate(Rational(1)) == 0);
    CHECK(poly({0, -1, 0, 1}).evaluate(Rational(1, 2)) == Rational(-3, 8));
    CHECK(p.evaluate(2.0) == Catch::Approx(-2.0));
}

TEST_CASE("division with remainder", "[polynomial]") {
    Polynomial p = poly({2, -3, 0, 1});  // x^3 - 3x + 2 = (x-1)^2 (x+2)
    auto [q, r] = p.divide(poly({-1, 1}));
    CHECK(q == poly({-2, 1, 1}));
    CHECK(r.is_zero());

    auto [q2, r2] = poly({1, 0, 1}).divide(poly({-1, 1}));
    CHECK(q2 == poly({1, 1}));
    CHECK(r2 == poly({2}));

    CHECK(p.divide_exact(poly({-1, 1})) == poly({-2, 1, 1}));
    CHECK_THROWS_AS(poly({1, 0, 1}).divide_exact(poly({-1, 1})), std::domain_error);
    CHECK_THROWS_AS(p.divide(Polynomial()), std::domain_error);

    // random division identity p = q*d + r with deg r < deg d
    std::mt19937 rng(20260825);
    std::uniform_int_distribution<int> coeff(-9, 9);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Rational> pc, dc;
        for (int i = 0; i < 7; ++i) pc.emplace_back(coeff(rng));
        for (int i = 0; i < 3; ++i) dc.emplace_back(coeff(rng));
        dc.emplace_back(1 + std::abs(coeff(rng)));
        Polynomial num{pc}, den{dc};
        auto [quot, rem] = num.divide(den);
        CHECK(quot * den + rem == num);
        CHECK(rem.degree() < den.degree());
    }
}

TEST_CASE("monic and content", "[polynomial]") {
    CHECK(poly({-4, 0, 2}).monic() == poly({-2, 0, 1}));
    CHECK(poly({0, 6, 4}).content() == 2);
    Polynomial p = Polynomial(std::vector<Rational>{rat(4, 5), rat(2, 3)});
    CHECK(p.content() == Rational(2, 15));
    CHECK_THROWS_AS(Polynomial().leading_coefficient(), std::domain_error);
}

TEST_CASE("gcd is monic and matches hand results", "[polynomial]") {
    CHECK(bifurcus::gcd(poly({0, 0, 0, -1}), poly({0, 1})) == poly({0, 1}));
    CHECK(bifurcus::gcd(poly({0, 1, 0, -1}), poly({1, 2})) == poly({1}));
    CHECK(bifurcus::gcd(poly({2, -3, 0, 1}), poly({-3, 0, 3})) == poly({-1, 1}));
    CHECK(bifurcus::gcd(poly({0, 2}), Polynomial()) == poly({0, 1}));
    CHECK_THROWS_AS(bifurcus::gcd(Polynomial(), Polynomial()), std::domain_error);
}

TEST_CASE("square-free factorization", "[polynomial]") {
    auto sq = bifurcus::square_free_factorization(poly({0, 0, 1}));
    REQUIRE(sq.size() == 1);
    CHECK(sq[0].first == poly({0, 1}));
    CHECK(sq[0].second == 2);

    auto f = bifurcus::square_free_factorization(poly({2, -3, 0, 1}));
    REQUIRE(f.size() == 2);
    CHECK(f[0].first == poly({2, 1}));
    CHECK(f[0].second == 1);
    CHECK(f[1].first == poly({-1, 1}));
    CHECK(f[1].second == 2);

    CHECK(bifurcus::square_free_factorization(poly({42})).empty());
    CHECK_THROWS_AS(bifurcus::square_free_factorization(Polynomial()), std::domain_error);

    // reconstruction property on planted factor structures
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> root(-4, 4);
    for (int trial = 0; trial < 25; ++trial) {
        Polynomial product{rat(1)};
        std::vector<int> used;
        for (int exp = 1; exp <= 3; ++exp) {
            int r = root(rng);
            bool fresh = std::find(used.begin(), used.end(), r) == used.end();
            if (!fresh) continue;
            used.push_back(r);
            product = product * poly({-r, 1}).pow(static_cast<unsigned>(exp));
        }
        if (product.degree() < 1) continue;
        Polynomial rebuilt{rat(1)};
        for (const auto& [factor, exp] : bifurcus::square_free_factorization(product))
            rebuilt = rebuilt * factor.pow(static_cast<unsigned>(exp));
        CHECK(rebuilt.monic() == product.monic());
    }
}

TEST_CASE("printing", "[polynomial]") {
    CHECK(Polynomial().to_string() == "0");
    CHECK(poly({0, -1, 0, 1}).to_string() == "x^3 - x");
    CHECK(poly({1, 0, 2}).to_string() == "2*x^2 + 1");
    CHECK(poly({2, 0, -1}).to_string() == "-x^2 + 2");
    CHECK(Polynomial(std::vector<Rational>{rat(1, 2)}).to_string() == "1/2");
    CHECK(Polynomial(std::vector<Rational>{rat(0), rat(-1, 2)}).to_string("r") == "-1/2*r");
}

TEST_CASE("rational helpers", "[polynomial]") {
    using bifurcus::rational_from_decimal;
    CHECK(rational_from_decimal("0.1") == Rational(1, 10));
    CHECK(rational_from_decimal("2.50") == Rational(5, 2));
    CHECK(rational_from_decimal("-3") == -3);
    CHECK(rational_from_decimal(".5") == Rational(1, 2));
    CHECK_THROWS_AS(rational_from_decimal("1e3"), std::invalid_argument);
    CHECK_THROWS_AS(rational_from_decimal("1.2.3"), std::invalid_argument);
    CHECK_THROWS_AS(rational_from_decimal(""), std::invalid_argument);
    CHECK(bifurcus::rational_to_string(Rational(-1, 2)) == "-1/2");
    CHECK(bifurcus::rational_to_string(Rational(4)) == "4");
    CHECK(bifurcus::rational_from_string("-1/2") == Rational(-1, 2));
    CHECK(bifurcus::format_double(0.5) == "0.5");
    CHECK(bifurcus::format_double(-0.0) == "0");
}
