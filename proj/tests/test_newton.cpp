#include <doctest.h>

#include "trop/newton.hpp"
#include "trop/parse.hpp"

#include <algorithm>
#include <random>

using namespace trop;

TEST_CASE("newton_polytope vertices") {
    auto v = newton_polytope(parse_poly("0 + x1 + x2"));
    CHECK(v == std::vector<Exps>{{0, 0}, {0, 1}, {1, 0}});

    v = newton_polytope(parse_poly("x1*x2 + x1 + x2"));
    CHECK(v == std::vector<Exps>{{0, 1}, {1, 0}, {1, 1}});

    v = newton_polytope(parse_poly("0 + x1 + x1^2"));
    CHECK(v == std::vector<Exps>{{0}, {2}});
}

TEST_CASE("dual_subdivision univariate examples") {
    // f = 0 + 1*x1 + x1^2: lifts {0,-1,0}, lower hull splits at the middle.
    auto S = dual_subdivision(parse_poly("0 + 1*x1 + x1^2"));
    REQUIRE(S.cells.size() == 2);
    std::vector<std::vector<std::size_t>> cells;
    for (const auto& c : S.cells) cells.push_back(c.points);
    std::sort(cells.begin(), cells.end());
    CHECK(cells[0] == std::vector<std::size_t>{0, 1});
    CHECK(cells[1] == std::vector<std::size_t>{1, 2});

    // f = 0 + (-1)*x1 + x1^2: middle lift above the chord, single cell.
    S = dual_subdivision(parse_poly("0 + -1*x1 + x1^2"));
    REQUIRE(S.cells.size() == 1);
    CHECK(S.cells[0].points == std::vector<std::size_t>{0, 2});
}

TEST_CASE("coplanar lift gives a single cell") {
    auto S = dual_subdivision(parse_poly("0 + x1 + x2"));
    REQUIRE(S.cells.size() == 1);
    CHECK(S.cells[0].points.size() == 3);
}

TEST_CASE("essential_monomials examples and LP agreement") {
    auto f = parse_poly("0 + 1*x1 + x1^2");
    CHECK(essential_monomials(f) == std::vector<std::size_t>{0, 1, 2});

    f = parse_poly("0 + -1*x1 + x1^2");
    CHECK(essential_monomials(f) == std::vector<std::size_t>{0, 2});

    f = parse_poly("x1 + x2");
    CHECK(essential_monomials(f).size() == 2);

    // tie on the chord: middle monomial inessential (never a strict max)
    f = parse_poly("0 + 0*x1 + x1^2");
    CHECK(essential_monomials(f) == std::vector<std::size_t>{0, 2});
}

TEST_CASE("subdivision and LP essentials agree on random polynomials") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> nv(1, 3), nt(2, 8), ex(0, 4),
        num(-20, 20), den(1, 5);
    for (int i = 0; i < 120; ++i) {
        int n = nv(rng);
        std::vector<Monomial> ms;
        int k = nt(rng);
        for (int t = 0; t < k; ++t) {
            Monomial m{Rat(num(rng), den(rng)), Exps(n)};
            for (int j = 0; j < n; ++j) m.exps[j] = ex(rng);
            ms.push_back(std::move(m));
        }
        TropPolynomial f(n, std::move(ms));
        CHECK(essential_monomials(f) == essential_monomials_lp(f));
    }
}

TEST_CASE("cells cover with affine supports weakly below all lifts") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> nt(2, 10), ex(0, 4), num(-20, 20),
        den(1, 5);
    for (int i = 0; i < 60; ++i) {
        int n = 1 + (i % 3);
        std::vector<Monomial> ms;
        int k = nt(rng);
        for (int t = 0; t < k; ++t) {
            Monomial m{Rat(num(rng), den(rng)), Exps(n)};
            for (int j = 0; j < n; ++j) m.exps[j] = ex(rng);
            ms.push_back(std::move(m));
        }
        TropPolynomial f(n, std::move(ms));
        auto S = dual_subdivision(f);
        REQUIRE(!S.cells.empty());
        for (const auto& cell : S.cells) {
            for (std::size_t p = 0; p < S.points.size(); ++p) {
                Rat v = cell.c;
                for (int j = 0; j < n; ++j) v += cell.a[j] * S.points[p][j];
                bool tight =
                    std::find(cell.points.begin(), cell.points.end(), p) !=
                    cell.points.end();
                if (tight) CHECK(v == S.lifts[p]);
                else CHECK(v <= S.lifts[p]);
            }
        }
    }
}

TEST_CASE("removing an inessential monomial leaves the function unchanged") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> nt(3, 8), ex(0, 4), num(-12, 12),
        den(1, 4), pnum(-40, 40), pden(1, 7);
    int checked = 0;
    for (int i = 0; i < 200 && checked < 25; ++i) {
        int n = 1 + (i % 2);
        std::vector<Monomial> ms;
        int k = nt(rng);
        for (int t = 0; t < k; ++t) {
            Monomial m{Rat(num(rng), den(rng)), Exps(n)};
            for (int j = 0; j < n; ++j) m.exps[j] = ex(rng);
            ms.push_back(std::move(m));
        }
        TropPolynomial f(n, ms);
        auto ess = essential_monomials(f);
        if (ess.size() == f.monomials().size()) continue;
        ++checked;
        std::vector<Monomial> kept;
        for (auto idx : ess) kept.push_back(f.monomials()[idx]);
        TropPolynomial g(n, kept);
        for (int t = 0; t < 40; ++t) {
            Point u(n);
            for (int j = 0; j < n; ++j) u[j] = Rat(pnum(rng), pden(rng));
            CHECK(evaluate(f, u).value == evaluate(g, u).value);
        }
    }
    CHECK(checked > 0);
}

TEST_CASE("Stokes / Minkowski relation") {
    // 2-D: any subdivision cell closes up.
    auto S2 = dual_subdivision(parse_poly("0 + x1 + x2 + 1*x1*x2"));
    CHECK(verify_stokes(S2, 0).ok);

    // trivariate with generic lifts
    auto S3 =
        dual_subdivision(parse_poly("0 + x1 + x2 + x3 + 1*x1*x2*x3", 3));
    CHECK(verify_stokes(S3, 0).ok);
    CHECK(verify_stokes(S3, 1).ok);

    // single simplex
    auto S1 = dual_subdivision(parse_poly("0 + x1 + x2 + x3", 3));
    CHECK(verify_stokes(S1, 0).ok);

    CHECK_FALSE(verify_stokes(S2, 1).ok);  // k out of range for n=2
}

TEST_CASE("Stokes on random trivariate polynomials") {
    std::mt19937_64 rng(14);
    std::uniform_int_distribution<int> nt(4, 12), ex(0, 3), num(-15, 15),
        den(1, 4);
    for (int i = 0; i < 25; ++i) {
        std::vector<Monomial> ms;
        int k = nt(rng);
        for (int t = 0; t < k; ++t) {
            Monomial m{Rat(num(rng), den(rng)), Exps(3)};
            for (int j = 0; j < 3; ++j) m.exps[j] = ex(rng);
            ms.push_back(std::move(m));
        }
        TropPolynomial f(3, std::move(ms));
        auto S = dual_subdivision(f);
        CHECK(verify_stokes(S, 0).ok);
        CHECK(verify_stokes(S, 1).ok);
    }
}

TEST_CASE("n > 3 rejected for subdivisions, allowed for LP essentials") {
    std::vector<Monomial> ms;
    for (int j = 0; j < 4; ++j) {
        Exps e(4, 0);
        e[j] = 1;
        ms.push_back({Rat(0), e});
    }
    TropPolynomial f(4, ms);
    CHECK_THROWS_AS(dual_subdivision(f), std::invalid_argument);
    CHECK(essential_monomials_lp(f).size() == 4);
    CHECK(essential_monomials(f).size() == 4);
}
