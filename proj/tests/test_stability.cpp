#include <bifurcus/stability.hpp>

#include "test_util.hpp"

#include <cmath>
#include <optional>
#include <random>

using namespace bifurcus;
using test_util::poly;
using test_util::rat;
using locus::StabilityLabel;

namespace {

expr::ParamAffineSystem pitchfork_cubic() {
    return expr::parse_system("lambda*x - x^3", "x", "lambda");
}
expr::ParamAffineSystem offset_cubic() {
    return expr::parse_system("c + (1+2*c)*x - x^3", "x", "c");
}
expr::ParamAffineSystem polar_quintic() {
    return expr::parse_system("lambda*r - lambda*r^3 + r^5", "r", "lambda");
}

struct Built {
    expr::ParamAffineSystem sys;
    locus::Decomposition d;
    locus::Diagram dg;
};

Built build(const expr::ParamAffineSystem& sys,
            std::optional<double> domain_min = std::nullopt) {
    Built b{sys, locus::decompose(sys), {}};
    auto pz = locus::poles_zeros(b.d);
    b.dg.x_window = locus::expand_to_contain(locus::default_x_window(pz), pz);
    b.dg.domain_min = domain_min;
    b.dg.branches = locus::trace_branches(b.d, pz, b.dg.x_window, {}, domain_min);
    b.dg.vertical_asymptote = locus::vertical_asymptote(b.d);
    locus::flip_to_lambda(b.dg.branches, b.dg.vertical_asymptote,
                          b.d.mu_is_minus_lambda);
    double m = 0.0;
    for (const auto& br : b.dg.branches)
        for (const auto& s : br.samples) m = std::max(m, std::abs(s.param));
    if (m > 0.999 * b.dg.sampling.param_cap || m == 0.0)
        m = b.dg.sampling.param_cap;
    b.dg.param_window = {-m, m};
    b.dg.bifurcations = stability::detect_bifurcations(b.dg, b.d);
    stability::materialize_constant_branches(b.dg, b.d);
    return b;
}

std::vector<RealRoot> desc_simple(std::initializer_list<double> xs) {
    std::vector<RealRoot> out;
    for (double x : xs) out.push_back({x, 1});
    return out;
}

}  // namespace

TEST_CASE("alternation walk labels single columns", "[stability]") {
    auto sys = pitchfork_cubic();
    auto l1 = stability::alternation_column(sys, rat(1), desc_simple({1, 0, -1}), rat(3));
    REQUIRE(l1.size() == 3);
    CHECK(l1[0] == StabilityLabel::stable);
    CHECK(l1[1] == StabilityLabel::unstable);
    CHECK(l1[2] == StabilityLabel::stable);

    auto l2 = stability::alternation_column(sys, rat(-1), desc_simple({0}), rat(3));
    REQUIRE(l2.size() == 1);
    CHECK(l2[0] == StabilityLabel::stable);

    auto q = polar_quintic();
    auto l3 = stability::alternation_column(
        q, rat(5),
        desc_simple({1.9021130325903071442, 1.1755705045849462583, 0.0}), rat(3));
    REQUIRE(l3.size() == 3);
    CHECK(l3[0] == StabilityLabel::unstable);
    CHECK(l3[1] == StabilityLabel::stable);
    CHECK(l3[2] == StabilityLabel::unstable);

    // a multiple root is degenerate and, when odd, still flips the parity
    std::vector<RealRoot> with_triple{{2.0, 1}, {0.0, 3}, {-2.0, 1}};
    auto l4 = stability::alternation_column(
        expr::ParamAffineSystem{"x", "a", poly({0, -4, 0, 0, 0, -1}), poly({1})},
        rat(0), with_triple, rat(3));
    CHECK(l4[1] == StabilityLabel::degenerate);
}

TEST_CASE("derivative labels at single points", "[stability]") {
    auto sys = pitchfork_cubic();
    CHECK(stability::derivative_label(sys, 1.0, 1.0) == StabilityLabel::stable);
    CHECK(stability::derivative_label(sys, 0.0, 0.0) == StabilityLabel::degenerate);
    CHECK(stability::derivative_label(sys, 4.0, 0.0) == StabilityLabel::unstable);
    CHECK(stability::derivative_label(offset_cubic(), 0.0, 1.0) ==
          StabilityLabel::stable);
}

TEST_CASE("bifurcations of the parabola diagram", "[stability]") {
    auto b = build(pitchfork_cubic());
    REQUIRE(b.dg.bifurcations.size() == 1);
    const auto& bp = b.dg.bifurcations[0];
    CHECK(bp.kind == locus::BifurcationPoint::Kind::pitchfork);
    CHECK(bp.lambda == Catch::Approx(0.0).margin(1e-12));
    CHECK(bp.x == Catch::Approx(0.0).margin(1e-12));
    // both arms and both constant segments meet there
    auto has = [&](const std::string& id) {
        for (const auto& s : bp.branch_ids)
            if (s == id) return true;
        return false;
    };
    CHECK(has("branch-0"));
    CHECK(has("branch-1"));
    CHECK(has("const-0"));
    CHECK(has("const-1"));
}

TEST_CASE("the offset cubic has a single fold", "[stability]") {
    auto b = build(offset_cubic());
    REQUIRE(b.dg.bifurcations.size() == 1);
    const auto& bp = b.dg.bifurcations[0];
    CHECK(bp.kind == locus::BifurcationPoint::Kind::fold);
    CHECK(bp.x == Catch::Approx(0.4554100411010284672112).margin(1e-10));
    CHECK(bp.lambda == Catch::Approx(-0.18890254169653934).margin(1e-10));

    // the fold satisfies both residual conditions
    const auto& sys = b.sys;
    double p = to_double(sys.f.evaluate(Rational(bp.x))) +
               bp.lambda * to_double(sys.g.evaluate(Rational(bp.x)));
    double dp = to_double(sys.f.derivative().evaluate(Rational(bp.x))) +
                bp.lambda * to_double(sys.g.derivative().evaluate(Rational(bp.x)));
    CHECK(std::abs(p) <= 1e-8);
    CHECK(std::abs(dp) <= 1e-8);
}

TEST_CASE("quintic diagram reports the degenerate origin and the fold", "[stability]") {
    auto b = build(polar_quintic(), 0.0);
    REQUIRE(b.dg.bifurcations.size() == 2);
    CHECK(b.dg.bifurcations[0].kind == locus::BifurcationPoint::Kind::degenerate);
    CHECK(b.dg.bifurcations[0].lambda == Catch::Approx(0.0).margin(1e-12));
    CHECK(b.dg.bifurcations[0].x == Catch::Approx(0.0).margin(1e-12));
    CHECK(b.dg.bifurcations[1].kind == locus::BifurcationPoint::Kind::fold);
    CHECK(b.dg.bifurcations[1].lambda == Catch::Approx(4.0).margin(1e-9));
    CHECK(b.dg.bifurcations[1].x == Catch::Approx(1.4142135623730951).margin(1e-10));

    // the mirror-image fold sits below the domain cut and is not reported
    for (const auto& bp : b.dg.bifurcations) CHECK(bp.x >= 0.0);
}

TEST_CASE("constant branches split at their crossings", "[stability]") {
    auto b = build(pitchfork_cubic());
    REQUIRE(b.dg.constant_branches.size() == 2);
    const auto& c0 = b.dg.constant_branches[0];
    const auto& c1 = b.dg.constant_branches[1];
    CHECK(c0.samples.front().param == Catch::Approx(-20.0));
    CHECK(c0.samples.back().param == Catch::Approx(0.0).margin(1e-12));
    CHECK(c1.samples.front().param == Catch::Approx(0.0).margin(1e-12));
    CHECK(c1.samples.back().param == Catch::Approx(20.0));
    CHECK(c0.start_kind == locus::EndpointKind::domain_boundary);
    CHECK(c0.end_kind == locus::EndpointKind::junction);
    CHECK(c1.start_kind == locus::EndpointKind::junction);
    CHECK(c1.end_kind == locus::EndpointKind::domain_boundary);
    for (const auto& s : c0.samples) CHECK(s.x == 0.0);
}

TEST_CASE("full classification of the parabola diagram", "[stability]") {
    auto b = build(pitchfork_cubic());
    stability::classify_by_alternation(b.dg, b.sys);
    REQUIRE(b.dg.branches.size() == 2);
    CHECK(b.dg.branches[0].stability == StabilityLabel::stable);
    CHECK(b.dg.branches[1].stability == StabilityLabel::stable);
    REQUIRE(b.dg.constant_branches.size() == 2);
    CHECK(b.dg.constant_branches[0].stability == StabilityLabel::stable);
    CHECK(b.dg.constant_branches[1].stability == StabilityLabel::unstable);

    auto cross = b;
    stability::classify_by_derivative(cross.dg, cross.sys);
    for (std::size_t i = 0; i < b.dg.branches.size(); ++i)
        CHECK(cross.dg.branches[i].stability == b.dg.branches[i].stability);
    for (std::size_t i = 0; i < b.dg.constant_branches.size(); ++i)
        CHECK(cross.dg.constant_branches[i].stability ==
              b.dg.constant_branches[i].stability);
}

TEST_CASE("full classification of the clipped quintic", "[stability]") {
    auto b = build(polar_quintic(), 0.0);
    stability::classify_by_alternation(b.dg, b.sys);
    REQUIRE(b.dg.branches.size() == 3);
    // ordering by starting x: inner arc, middle arc to the fold, outer arc
    CHECK(b.dg.branches[0].stability == StabilityLabel::unstable);
    CHECK(b.dg.branches[1].stability == StabilityLabel::stable);
    CHECK(b.dg.branches[2].stability == StabilityLabel::unstable);
    REQUIRE(b.dg.constant_branches.size() == 2);
    CHECK(b.dg.constant_branches[0].stability == StabilityLabel::stable);
    CHECK(b.dg.constant_branches[1].stability == StabilityLabel::unstable);

    auto cross = b;
    stability::classify_by_derivative(cross.dg, cross.sys);
    for (std::size_t i = 0; i < b.dg.branches.size(); ++i)
        CHECK(cross.dg.branches[i].stability == b.dg.branches[i].stability);
}

TEST_CASE("alternation agrees with the derivative sign at simple roots",
          "[stability]") {
    std::mt19937 rng(777);
    std::uniform_int_distribution<int> coeff(-5, 5), degree(1, 6), lam_num(-600, 600);
    long checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        std::vector<Rational> fc, gc;
        int df = degree(rng), dgg = degree(rng);
        for (int i = 0; i < df; ++i) fc.emplace_back(coeff(rng));
        fc.emplace_back(1 + std::abs(coeff(rng)));
        for (int i = 0; i < dgg; ++i) gc.emplace_back(coeff(rng));
        gc.emplace_back(1 + std::abs(coeff(rng)));
        Polynomial f{fc}, g{gc};
        if (bifurcus::gcd(f, g).degree() != 0) continue;
        expr::ParamAffineSystem sys{"x", "a", f, g};

        for (int k = 0; k < 5; ++k) {
            Rational lam = rat(lam_num(rng), 100);
            Polynomial p = f + g * lam;
            if (p.degree() < 1) continue;
            auto roots = real_roots(p);
            if (roots.empty()) continue;
            std::vector<RealRoot> desc(roots.roots.rbegin(), roots.roots.rend());
            double spread = desc.front().value - desc.back().value;
            Rational probe(desc.front().value + 1.0 + spread);
            auto labels = stability::alternation_column(sys, lam, desc, probe);

            int prev = 0;
            for (std::size_t i = 0; i < desc.size(); ++i) {
                if (desc[i].multiplicity != 1) {
                    prev = 0;
                    continue;
                }
                auto dl = stability::derivative_label(sys, to_double(lam),
                                                      desc[i].value);
                if (dl == StabilityLabel::degenerate) continue;
                CHECK(labels[i] == dl);
                int sd = dl == StabilityLabel::stable ? -1 : 1;
                if (prev != 0) CHECK(sd == -prev);
                prev = sd;
                ++checked;
            }
        }
    }
    CHECK(checked > 300);
}

TEST_CASE("labels survive positive scaling of the whole system", "[stability]") {
    auto base = build(offset_cubic());
    stability::classify_by_alternation(base.dg, base.sys);

    expr::ParamAffineSystem scaled{"x", "c", base.sys.f * rat(3), base.sys.g * rat(3)};
    auto other = build(scaled);
    stability::classify_by_alternation(other.dg, other.sys);

    REQUIRE(other.dg.branches.size() == base.dg.branches.size());
    for (std::size_t i = 0; i < base.dg.branches.size(); ++i)
        CHECK(other.dg.branches[i].stability == base.dg.branches[i].stability);
    REQUIRE(other.dg.bifurcations.size() == base.dg.bifurcations.size());
    for (std::size_t i = 0; i < base.dg.bifurcations.size(); ++i)
        CHECK(other.dg.bifurcations[i].kind == base.dg.bifurcations[i].kind);
}

TEST_CASE("branch intersection with a vertical line", "[stability]") {
    locus::Branch up;
    up.samples = {{0.0, 0.0}, {1.0, 1.0}, {4.0, 2.0}};
    auto x1 = stability::branch_x_at(up, 2.25);
    REQUIRE(x1.has_value());
    CHECK(*x1 == Catch::Approx(1.0 + 1.25 / 3.0));
    CHECK_FALSE(stability::branch_x_at(up, 5.0).has_value());
    CHECK_FALSE(stability::branch_x_at(up, -0.5).has_value());

    locus::Branch down;
    down.samples = {{4.0, -2.0}, {1.0, -1.0}, {0.0, 0.0}};
    auto x2 = stability::branch_x_at(down, 2.25);
    REQUIRE(x2.has_value());
    CHECK(*x2 == Catch::Approx(-(1.0 + 1.25 / 3.0)));

    locus::Branch flat;
    flat.samples = {{3.0, 0.0}, {3.0, 1.0}};
    CHECK_FALSE(stability::branch_x_at(flat, 3.0).has_value());
}
