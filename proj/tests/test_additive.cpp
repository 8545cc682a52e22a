#include <doctest.h>

#include "trop/additive.hpp"
#include "trop/parse.hpp"

#include "test_util.hpp"

#include <random>

using namespace trop;

namespace {

TropCurve tropical_line() {
    TropCurve C;
    C.dim = 2;
    C.vertices.push_back({Rat(0), Rat(0)});
    C.rays.push_back({0, {-1, 0}, 1});
    C.rays.push_back({0, {0, -1}, 1});
    C.rays.push_back({0, {1, 1}, 1});
    return canonicalize(C);
}

TropCurve triangle_curve() {  // Z(x1*x2 + x1 + x2): two positive ends
    return curve_from_poly2(parse_poly("x1*x2 + x1 + x2"));
}

// Additive space curve: vertex at 0, spine ray (1,1,1), axis rays down.
TropCurve star3() {
    TropCurve C;
    C.dim = 3;
    C.vertices.push_back({Rat(0), Rat(0), Rat(0)});
    C.rays.push_back({0, {1, 1, 1}, 1});
    C.rays.push_back({0, {-1, 0, 0}, 1});
    C.rays.push_back({0, {0, -1, 0}, 1});
    C.rays.push_back({0, {0, 0, -1}, 1});
    return canonicalize(C);
}

// Random simple bivariate polynomial with >= 2 essential monomials.
TropPolynomial random_simple2(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nt(2, 6), which(0, 4), num(-10, 10),
        den(1, 3);
    const Exps shapes[5] = {{0, 0}, {1, 0}, {2, 0}, {0, 1}, {0, 2}};
    for (;;) {
        std::vector<Monomial> ms;
        int k = nt(rng);
        for (int t = 0; t < k; ++t)
            ms.push_back({Rat(num(rng), den(rng)), shapes[which(rng)]});
        TropPolynomial f(2, ms);
        if (f.monomials().size() >= 2) return f;
    }
}

}  // namespace

TEST_CASE("check_criteria on the tropical line") {
    auto r = check_criteria(tropical_line());
    CHECK(r.sign_coherent);
    CHECK(r.unique_positive_end);
    CHECK(r.vertex_degrees);
    CHECK(r.zero_propagation);
    CHECK(r.j_sets);
    CHECK(r.all());
}

TEST_CASE("check_criteria rejects non-balanceable input") {
    TropCurve bare;
    bare.dim = 2;
    bare.vertices.push_back({Rat(0), Rat(0)});
    bare.rays.push_back({0, {1, 0}, 1});
    CHECK_THROWS_AS(check_criteria(bare), std::invalid_argument);
}

TEST_CASE("check_criteria: two positive ends flagged") {
    auto r = check_criteria(triangle_curve());
    CHECK(r.sign_coherent);
    CHECK_FALSE(r.unique_positive_end);
    CHECK_FALSE(r.vertex_degrees);  // two nonneg edges at the vertex
}

TEST_CASE("check_criteria: zero coordinates must propagate") {
    TropCurve C;
    C.dim = 3;
    C.vertices.push_back({Rat(0), Rat(0), Rat(0)});
    C.rays.push_back({0, {1, 1, 0}, 1});
    C.rays.push_back({0, {-1, 0, 0}, 1});
    C.rays.push_back({0, {0, -1, 0}, 1});
    C.rays.push_back({0, {0, 0, -1}, 1});
    C.rays.push_back({0, {0, 0, 1}, 1});
    auto r = check_criteria(C);
    CHECK_FALSE(r.zero_propagation);
}

TEST_CASE("check_criteria: J-sets must be intersection-closed") {
    TropCurve C;
    C.dim = 3;
    C.vertices.push_back({Rat(0), Rat(0), Rat(0)});
    C.rays.push_back({0, {1, 1, 1}, 2});
    C.rays.push_back({0, {-1, -1, 0}, 1});
    C.rays.push_back({0, {0, -1, -1}, 1});
    C.rays.push_back({0, {-1, 0, -1}, 1});
    CHECK(balancing_check(canonicalize(C)).balanced);
    auto r = check_criteria(C);
    CHECK(r.sign_coherent);
    CHECK(r.vertex_degrees);
    CHECK_FALSE(r.j_sets);
}

TEST_CASE("closure_oracle finds witnesses") {
    CHECK(closure_oracle(tropical_line(), 100, 1).pass);

    auto r = closure_oracle(triangle_curve(), 100, 1);
    REQUIRE_FALSE(r.pass);
    REQUIRE(r.witness.has_value());
    const auto& [u, v] = *r.witness;
    Point w(2);
    for (int i = 0; i < 2; ++i) w[i] = std::max(u[i], v[i]);
    CHECK(on_curve(triangle_curve(), u));
    CHECK(on_curve(triangle_curve(), v));
    CHECK_FALSE(on_curve(triangle_curve(), w));
}

TEST_CASE("is_additive: exact plane decisions") {
    auto a = is_additive(tropical_line());
    CHECK(a.verdict == AdditivityCertificate::Verdict::additive);
    CHECK_FALSE(a.witness.has_value());

    auto b = is_additive(triangle_curve());
    CHECK(b.verdict == AdditivityCertificate::Verdict::not_additive);
    REQUIRE(b.witness.has_value());

    // monotone and axis lines are additive; descending diagonals are not
    auto diag = is_additive(curve_from_poly2(parse_poly("x1 + x2")));
    CHECK(diag.verdict == AdditivityCertificate::Verdict::additive);
    auto vert = is_additive(curve_from_poly2(parse_poly("0 + x1", 2)));
    CHECK(vert.verdict == AdditivityCertificate::Verdict::additive);
    auto anti = is_additive(curve_from_poly2(parse_poly("x1*x2 + 0")));
    CHECK(anti.verdict == AdditivityCertificate::Verdict::not_additive);
}

TEST_CASE("is_additive: non-terminal spine with a non-axis bottom ray") {
    TropCurve C;
    C.dim = 2;
    C.vertices.push_back({Rat(0), Rat(0)});
    C.rays.push_back({0, {1, 1}, 2});
    C.rays.push_back({0, {-1, -2}, 1});
    C.rays.push_back({0, {-1, 0}, 1});
    CHECK(balancing_check(canonicalize(C)).balanced);
    auto r = is_additive(C);
    CHECK(r.verdict == AdditivityCertificate::Verdict::additive);

    auto S = spine(C);
    CHECK_FALSE(S.terminal);
    REQUIRE(S.vertices.size() == 1);
    CHECK(S.dirs == std::vector<Dir>{{1, 2}, {1, 1}});
}

TEST_CASE("is_additive: two strictly negative rays at one vertex") {
    TropCurve C;
    C.dim = 2;
    C.vertices.push_back({Rat(0), Rat(0)});
    C.rays.push_back({0, {1, 1}, 3});
    C.rays.push_back({0, {-1, -2}, 1});
    C.rays.push_back({0, {-2, -1}, 1});
    CHECK(balancing_check(canonicalize(C)).balanced);
    auto r = is_additive(C);
    CHECK(r.verdict == AdditivityCertificate::Verdict::not_additive);
    CHECK_FALSE(r.criteria.vertex_degrees);
    REQUIRE(r.witness.has_value());
    Point w(2);
    for (int i = 0; i < 2; ++i)
        w[i] = std::max(r.witness->first[i], r.witness->second[i]);
    CHECK_FALSE(on_curve(canonicalize(C), w));
}

TEST_CASE("is_additive: finite point sets decided exactly") {
    TropCurve C;
    C.dim = 2;
    C.isolated_points = {{Rat(0), Rat(0)}, {Rat(1), Rat(2)}, {Rat(2), Rat(1)},
                         {Rat(2), Rat(2)}};
    CHECK(is_additive(C).verdict == AdditivityCertificate::Verdict::additive);

    C.isolated_points.pop_back();
    auto r = is_additive(C);
    CHECK(r.verdict == AdditivityCertificate::Verdict::not_additive);
    REQUIRE(r.witness.has_value());
}

TEST_CASE("is_additive: simple bivariate loci are additive") {
    std::mt19937_64 rng(31);
    int decided = 0;
    for (int i = 0; i < 40 && decided < 25; ++i) {
        auto f = random_simple2(rng);
        TropCurve C;
        try {
            C = curve_from_poly2(f);
        } catch (const std::invalid_argument&) {
            continue;  // single essential monomial, empty locus
        }
        ++decided;
        auto r = is_additive(C);
        CHECK(r.verdict == AdditivityCertificate::Verdict::additive);
    }
    CHECK(decided >= 15);
}

TEST_CASE("is_additive: space curves get the semi-decision verdict") {
    auto r = is_additive(star3());
    CHECK(r.verdict ==
          AdditivityCertificate::Verdict::criteria_pass_oracle_pass);

    TropCurve diag;
    diag.dim = 3;
    diag.lines.push_back({{Rat(0), Rat(0), Rat(0)}, {1, 1, 1}, 1});
    CHECK(is_additive(diag).verdict ==
          AdditivityCertificate::Verdict::criteria_pass_oracle_pass);
}

TEST_CASE("spine of the tropical line is terminal") {
    auto S = spine(tropical_line());
    CHECK(S.terminal);
    REQUIRE(S.vertices.size() == 1);
    CHECK(S.vertices[0] == Point{Rat(0), Rat(0)});
    CHECK(S.dirs == std::vector<Dir>{{1, 1}});
}

TEST_CASE("spine of a two-vertex curve") {
    TropCurve C;
    C.dim = 2;
    C.vertices = {{Rat(0), Rat(0)}, {Rat(1), Rat(2)}};
    C.edges = {{0, 1, 1}};
    C.rays = {{0, {-1, 0}, 1}, {0, {0, -1}, 1}, {1, {1, 1, }, 1},
              {1, {-1, 0}, 1}, {1, {0, -1}, 1}};
    auto K = canonicalize(C);
    auto S = spine(K);
    CHECK(S.terminal);
    REQUIRE(S.vertices.size() == 2);
    CHECK(S.vertices[0] == Point{Rat(0), Rat(0)});
    CHECK(S.vertices[1] == Point{Rat(1), Rat(2)});
    CHECK(S.dirs == std::vector<Dir>{{1, 2}, {1, 1}});

    CHECK(is_additive(K).verdict == AdditivityCertificate::Verdict::additive);
}

TEST_CASE("spine of a positive line") {
    TropCurve C;
    C.dim = 2;
    C.lines.push_back({{Rat(0), Rat(0)}, {1, 2}, 1});
    auto S = spine(C);
    CHECK_FALSE(S.terminal);
    CHECK(S.vertices.empty());
    CHECK(S.dirs == std::vector<Dir>{{1, 2}});

    CHECK_THROWS_AS(spine(curve_from_poly2(parse_poly("0 + x1", 2))),
                    std::invalid_argument);
}

TEST_CASE("restrict_below clips to the lower orthant at a spine vertex") {
    auto R = restrict_below(tropical_line(), 0);
    REQUIRE(R.vertices.size() == 1);
    CHECK(R.vertices[0] == Point{Rat(0), Rat(0)});
    CHECK(R.rays.size() == 2);
    CHECK(R.edges.empty());
    CHECK(on_curve(R, {Rat(-3), Rat(0)}));
    CHECK_FALSE(on_curve(R, {Rat(1), Rat(1)}));

    // at the upper vertex of a two-vertex curve the clip keeps the edge
    TropCurve C;
    C.dim = 2;
    C.vertices = {{Rat(0), Rat(0)}, {Rat(1), Rat(2)}};
    C.edges = {{0, 1, 1}};
    C.rays = {{0, {-1, 0}, 1}, {0, {0, -1}, 1}, {1, {1, 1}, 1},
              {1, {-1, 0}, 1}, {1, {0, -1}, 1}};
    auto R2 = restrict_below(canonicalize(C), 1);
    CHECK(R2.edges.size() == 1);
    CHECK(on_curve(R2, {Rat(1, 2), Rat(1)}));
    CHECK_FALSE(on_curve(R2, {Rat(2), Rat(3)}));
}

TEST_CASE("cut_sets at the tropical line vertex") {
    auto cs = cut_sets(tropical_line(), 0);
    REQUIRE(cs.size() == 2);
    CHECK(cs[0].J == std::set<int>{1});
    REQUIRE(cs[0].part.rays.size() == 1);
    CHECK(cs[0].part.rays[0].dir == Dir{-1, 0});
    CHECK(cs[1].J == std::set<int>{2});
    REQUIRE(cs[1].part.rays.size() == 1);
    CHECK(cs[1].part.rays[0].dir == Dir{0, -1});
}

TEST_CASE("poset_leq on the tropical line") {
    auto C = tropical_line();
    Point o{Rat(0), Rat(0)}, a{Rat(-2), Rat(0)}, b{Rat(0), Rat(-3)},
        t{Rat(2), Rat(2)};
    CHECK(poset_leq(a, o, C));
    CHECK(poset_leq(b, o, C));
    CHECK(poset_leq(a, t, C));
    CHECK(poset_leq(o, o, C));
    CHECK_FALSE(poset_leq(o, a, C));   // o has a larger first coordinate
    CHECK_FALSE(poset_leq(t, o, C));
    CHECK_THROWS_AS(poset_leq({Rat(5), Rat(0)}, o, C), std::invalid_argument);

    // a and b are incomparable: max(a, b) = o is reached from both
    CHECK_FALSE(poset_leq(a, b, C));
    CHECK_FALSE(poset_leq(b, a, C));
}

TEST_CASE("poset_leq is reflexive and transitive on samples") {
    auto C = canonicalize(curve_from_poly2(parse_poly("0 + x1 + x2 + -1*x1^2")));
    auto pts = testutil::canonical_samples(C);
    for (const auto& u : pts) CHECK(poset_leq(u, u, C));
    for (const auto& u : pts)
        for (const auto& v : pts)
            for (const auto& w : pts)
                if (poset_leq(u, v, C) && poset_leq(v, w, C))
                    CHECK(poset_leq(u, w, C));
}

TEST_CASE("is_contractible") {
    CHECK(is_contractible(tropical_line()));

    TropCurve cyc;
    cyc.dim = 2;
    cyc.vertices = {{Rat(0), Rat(0)}, {Rat(1), Rat(0)}, {Rat(1), Rat(1)},
                    {Rat(0), Rat(1)}};
    cyc.edges = {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {0, 3, 1}};
    CHECK_FALSE(is_contractible(cyc));

    TropCurve two_lines;
    two_lines.dim = 2;
    two_lines.lines.push_back({{Rat(0), Rat(0)}, {1, 1}, 1});
    two_lines.lines.push_back({{Rat(0), Rat(5)}, {1, 1}, 1});
    CHECK_FALSE(is_contractible(two_lines));

    TropCurve one_line;
    one_line.dim = 2;
    one_line.lines.push_back({{Rat(0), Rat(0)}, {1, 1}, 1});
    CHECK(is_contractible(one_line));

    TropCurve empty;
    empty.dim = 2;
    CHECK_FALSE(is_contractible(empty));
}

TEST_CASE("component_subsemigroup_check") {
    // line plus a far isolated point: each component is closed on its own
    TropCurve C;
    C.dim = 2;
    C.lines.push_back({{Rat(0), Rat(0)}, {1, 1}, 1});
    C.isolated_points.push_back({Rat(100), Rat(-100)});
    auto rep = component_subsemigroup_check(C, 50, 3);
    CHECK(rep.pass);
    CHECK(rep.pairs_checked > 0);

    auto bad = component_subsemigroup_check(triangle_curve(), 50, 3);
    CHECK_FALSE(bad.pass);
    REQUIRE(bad.witness.has_value());
}

TEST_CASE("tree_meet on a path") {
    RootedMetricTree T;
    T.root = 0;
    T.parent = {0, 0, 1};
    T.edge_length = {Rat(0), Rat(1), Rat(1)};
    auto p1 = tree_point(T, 1, Rat(0));
    auto p2 = tree_point(T, 2, Rat(0));
    CHECK(tree_meet(T, p1, p2) == p1);
    CHECK(tree_meet(T, p2, p1) == p1);

    // two points on the same edge meet at the higher one
    auto hi = tree_point(T, 2, Rat(3, 4)), lo = tree_point(T, 2, Rat(1, 4));
    CHECK(tree_meet(T, hi, lo) == hi);

    // offset equal to the edge length collapses to the parent
    CHECK(tree_point(T, 2, Rat(1)) == p1);

    CHECK_THROWS_AS(tree_point(T, 2, Rat(2)), std::invalid_argument);
    CHECK_THROWS_AS(tree_point(T, 0, Rat(1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(tree_point(T, 9, Rat(0)), std::invalid_argument);
}

TEST_CASE("tree_meet on a star") {
    RootedMetricTree T;
    T.root = 0;
    T.parent = {0, 0, 0, 0};
    T.edge_length = {Rat(0), Rat(2), Rat(3), Rat(5)};
    auto a = tree_point(T, 1, Rat(1, 2));
    auto b = tree_point(T, 2, Rat(0));
    auto m = tree_meet(T, a, b);
    CHECK(m == tree_point(T, 0, Rat(0)));

    // meet is associative-ish on a deeper tree: (a ^ b) ^ c == a ^ (b ^ c)
    RootedMetricTree D;
    D.root = 0;
    D.parent = {0, 0, 1, 1, 2, 2};
    D.edge_length = {Rat(0), Rat(1), Rat(1), Rat(1), Rat(1), Rat(1)};
    std::vector<TreePoint> pts = {
        tree_point(D, 3, Rat(1, 3)), tree_point(D, 4, Rat(0)),
        tree_point(D, 5, Rat(1, 2)), tree_point(D, 2, Rat(2, 3))};
    for (const auto& x : pts)
        for (const auto& y : pts)
            for (const auto& z : pts)
                CHECK(tree_meet(D, tree_meet(D, x, y), z) ==
                      tree_meet(D, x, tree_meet(D, y, z)));
}

TEST_CASE("tree_meet is idempotent and commutative") {
    RootedMetricTree T;
    T.root = 0;
    T.parent = {0, 0, 1, 2, 2};
    T.edge_length = {Rat(0), Rat(3, 2), Rat(1), Rat(1, 2), Rat(4)};
    std::vector<TreePoint> pts;
    for (std::size_t n = 0; n < T.parent.size(); ++n) {
        pts.push_back(tree_point(T, n, Rat(0)));
        if (n != T.root) pts.push_back(tree_point(T, n, T.edge_length[n] / 3));
    }
    for (const auto& x : pts) {
        CHECK(tree_meet(T, x, x) == x);
        for (const auto& y : pts)
            CHECK(tree_meet(T, x, y) == tree_meet(T, y, x));
    }
}
