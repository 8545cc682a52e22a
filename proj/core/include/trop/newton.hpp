/*
 * newton.hpp
 * ----------
 * Newton polytopes and the regular subdivision S(f) of a tropical
 * polynomial, computed from the lower convex hull of the lifted points
 * (omega, -A_omega).  Maximal linearity domains of the Legendre dual are
 * the cells; their vertices are the essential monomials.
 *
 * The lower hull is found by exhaustive supporting-hyperplane enumeration
 * over point subsets (ambient dimension <= 3, <= 32 points): simpler to
 * make exact and to test than an incremental hull.  Degenerate lifts
 * (collinear / coplanar exponent sets) produce lower-dimensional maximal
 * cells, kept explicitly.
 */
#pragma once

#include "trop/poly.hpp"

#include <string>

namespace trop {

struct SubdivisionCell {
    std::vector<std::size_t> points;  // indices of lifted points on the support
    // Affine support: lift == <a, omega> + c on the cell, >= elsewhere.
    std::vector<Rat> a;
    Rat c;
};

struct NewtonSubdivision {
    int dim = 0;                       // ambient lattice dimension n
    std::vector<Exps> points;          // lattice points omega (monomial order)
    std::vector<Rat> lifts;            // -A_omega
    std::vector<SubdivisionCell> cells;  // maximal cells of the lower hull
};

// Vertices of conv(Omega) in canonical (lexicographic) order.
std::vector<Exps> newton_polytope(const TropPolynomial& f);

// Regular subdivision from the lower hull; n <= 3 only.
NewtonSubdivision dual_subdivision(const TropPolynomial& f);

// Indices of monomials that are vertices of S(f).  Uses the subdivision
// for n <= 3 and the LP-feasibility test for higher dimensions; the two
// must agree where both apply.
std::vector<std::size_t> essential_monomials(const TropPolynomial& f);
// Independent test: monomial i is essential iff some u makes it the
// strict unique maximizer (exact linear feasibility, any n).
std::vector<std::size_t> essential_monomials_lp(const TropPolynomial& f);

struct StokesReport {
    bool ok = true;
    std::string message;
};
// Cross-multiplied Minkowski relation for every (n-k)-cell of S: the sum
// over facets of (facet volume) x (outer normal in the cell's span)
// vanishes, with square-root normalizations cleared so the check is an
// exact rational identity.  Requires n in {2,3} and k < n-1.
StokesReport verify_stokes(const NewtonSubdivision& S, int k);

}  // namespace trop
