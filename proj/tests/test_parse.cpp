#include <doctest.h>

#include "trop/parse.hpp"

#include <random>

using namespace trop;

TEST_CASE("grammar basics") {
    auto f = parse_poly("0 + x1 + x2");
    CHECK(f.nvars() == 2);
    CHECK(f.monomials().size() == 3);
    CHECK(serialize(f) == "0 + x2 + x1");

    auto g = parse_poly("x1*x2 + x1 + x2");
    CHECK_FALSE(is_simple(g));

    auto h = parse_poly("-1*x1^2 + 3/2*x2");
    CHECK(h.monomials()[0].coeff == Rat(3, 2));   // (0,1)
    CHECK(h.monomials()[1].coeff == Rat(-1));     // (2,0)
    CHECK(h.monomials()[1].exps == Exps{2, 0});
}

TEST_CASE("unicode operator aliases") {
    CHECK(parse_poly("0 ⊕ x1 ⊕ x2") == parse_poly("0 + x1 + x2"));
    CHECK(parse_poly("2⊙x1 ⊕ x2") == parse_poly("2*x1 + x2"));
}

TEST_CASE("parse errors carry spans") {
    CHECK_THROWS_AS(parse_poly(""), ParseError);
    CHECK_THROWS_AS(parse_poly("x0 + x1"), ParseError);
    CHECK_THROWS_AS(parse_poly("x1^-2"), ParseError);
    try {
        parse_poly("x1 + @");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(e.span().start == 5);
    }
}

TEST_CASE("ideal parsing") {
    auto I = parse_ideal("x1*x2 + x1 + x2 ; x1*x2 + x1 + -1*x2");
    CHECK(I.generators.size() == 2);
    CHECK(I.generators[0].nvars() == 2);
    CHECK(I.generators[1].nvars() == 2);

    auto J = parse_ideal("x1 + x2");
    CHECK(J.generators.size() == 1);

    CHECK_THROWS_AS(parse_ideal("x1 + ; x2"), ParseError);

    // newline separator, uniform nvars across generators
    auto K = parse_ideal("x1 + 0\nx3 + 1");
    CHECK(K.generators.size() == 2);
    CHECK(K.generators[0].nvars() == 3);
}

TEST_CASE("serialize then parse is the identity") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> nv(1, 3), nt(1, 6), ex(0, 5),
        num(-30, 30), den(1, 7);
    for (int i = 0; i < 200; ++i) {
        int n = nv(rng);
        std::vector<Monomial> ms;
        int k = nt(rng);
        for (int t = 0; t < k; ++t) {
            Monomial m{Rat(num(rng), den(rng)), Exps(n)};
            for (int j = 0; j < n; ++j) m.exps[j] = ex(rng);
            ms.push_back(std::move(m));
        }
        TropPolynomial f(n, std::move(ms));
        auto g = parse_poly(serialize(f), n);
        CHECK(f == g);
        CHECK(serialize(g) == serialize(f));
    }
}

TEST_CASE("parser fuzzing: value or spanned error, never abort") {
    std::mt19937_64 rng(8);
    const std::string alphabet = "x123+*^/- .;\n()abc";
    std::uniform_int_distribution<int> len(0, 24),
        pick(0, static_cast<int>(alphabet.size()) - 1);
    for (int i = 0; i < 3000; ++i) {
        std::string s;
        int L = len(rng);
        for (int j = 0; j < L; ++j) s += alphabet[pick(rng)];
        try {
            auto f = parse_poly(s);
            auto g = parse_poly(serialize(f));
            CHECK(f == g);
        } catch (const ParseError& e) {
            CHECK(e.span().start <= e.span().end);
        }
    }
}

TEST_CASE("curve JSON round trips") {
    TropCurve diag;
    diag.dim = 2;
    diag.lines.push_back({{Rat(0), Rat(0)}, {1, 1}, 1});
    auto C = curve_from_json(curve_to_json(diag));
    CHECK(C == diag);

    TropCurve line;
    line.dim = 2;
    line.vertices.push_back({Rat(0), Rat(0)});
    line.rays.push_back({0, {-1, 0}, 1});
    line.rays.push_back({0, {0, -1}, 1});
    line.rays.push_back({0, {1, 1}, 1});
    CHECK(curve_from_json(curve_to_json(line)) == line);

    // non-primitive direction rejected
    TropCurve bad = line;
    bad.rays[0].dir = {2, 2};
    CHECK_THROWS_AS(curve_from_json(curve_to_json(bad)), ParseError);
}

TEST_CASE("curve JSON schema violations carry a path") {
    try {
        curve_from_json(R"({"dim":2,"vertices":[["0","0"]],"edges":[{"ends":[0,0]}]})");
        CHECK(false);
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("edges[0]") != std::string::npos);
    }
    CHECK_THROWS_AS(curve_from_json("not json"), ParseError);
    CHECK_THROWS_AS(curve_from_json(R"({"vertices":[]})"), ParseError);
}

TEST_CASE("rationals serialized as strings in lowest terms") {
    CHECK(rat_to_string(Rat(6, 4)) == "3/2");
    CHECK(rat_to_string(Rat(-6, 3)) == "-2");
    CHECK(rat_from_string("3/2") == Rat(3, 2));
    CHECK_THROWS_AS(rat_from_string("1/0"), ParseError);
}
