/*
 * curve.hpp
 * ---------
 * Embedded rational tropical curves and the polyhedral toolkit around them:
 * plane curves realized from bivariate polynomials via Newton-subdivision
 * duality, corner-locus membership for ideals in any dimension, exact planar
 * overlay intersection, balancing checks, negative-orthant cones, regular
 * components and skeletons, and finite-polyhedral-complex validation.
 *
 * A TropCurve is a 1-complex in Q^n: vertices, bounded edges between them,
 * rays anchored at vertices, and free lines (vertex-free components, e.g.
 * binomial loci).  Ray and line directions are primitive integer vectors;
 * lines use a canonical sign (first nonzero coordinate positive).
 */
#pragma once

#include "trop/poly.hpp"

#include <optional>
#include <set>
#include <utility>

namespace trop {

using Dir = std::vector<long long>;  // integer direction vector

// gcd-reduce to a primitive vector; throws on the zero vector.
Dir primitive(Dir d);
// Primitive with canonical sign (first nonzero coordinate positive).
Dir primitive_signed(Dir d);

struct CurveEdge {
    std::size_t a, b;     // vertex indices, a < b after canonicalization
    long long weight = 1;
    bool operator==(const CurveEdge&) const = default;
};
struct CurveRay {
    std::size_t vertex;
    Dir dir;              // primitive
    long long weight = 1;
    bool operator==(const CurveRay&) const = default;
};
struct CurveLine {
    Point point;
    Dir dir;              // primitive, canonical sign
    long long weight = 1;
    bool operator==(const CurveLine&) const = default;
};

struct TropCurve {
    int dim = 2;
    std::vector<Point> vertices;
    std::vector<CurveEdge> edges;
    std::vector<CurveRay> rays;
    std::vector<CurveLine> lines;
    std::vector<Point> isolated_points;  // overlay outputs need not be pure

    bool operator==(const TropCurve&) const = default;
};

// Sorted vertices/edges/rays/lines, merged degree-2 collinear equal-weight
// junctions, primitive directions.  Equality of canonical forms is the
// set-level equality test used throughout.
TropCurve canonicalize(const TropCurve& C);

// Parameterized 1-cells of a curve: p + t d with t in [0, tmax], [0, inf)
// or (-inf, inf).  Convenient for exact sampling and intersection work.
struct Piece {
    enum class Kind { segment, ray, line } kind;
    Point p;
    Dir d;         // primitive
    Rat tmax;      // segments only
    long long weight = 1;
};
std::vector<Piece> curve_pieces(const TropCurve& C);
// Does u lie on the (closed) piece?
bool on_piece(const Piece& pc, const Point& u);

// Z(f) for bivariate f via duality with the Newton subdivision: vertices
// dual to 2-cells, edges/rays dual (orthogonally) to subdivision edges,
// weight = lattice length of the dual edge.  Throws if fewer than two
// essential monomials (empty corner locus).
TropCurve curve_from_poly2(const TropPolynomial& f);

// u in Z(I): every generator attains its max at u at least twice.
bool membership(const Ideal& I, const Point& u);
bool membership(const TropPolynomial& f, const Point& u);

// Exact overlay intersection of the plane curves Z(f_i); weights dropped.
TropCurve intersect_plane(const Ideal& I);

// Geometric containment of a point in a curve (exact).
bool on_curve(const TropCurve& C, const Point& u);

struct BalancingReport {
    bool balanced = true;
    std::vector<std::size_t> failing_vertices;
};
BalancingReport balancing_check(const TropCurve& C);
// Search positive integer weights (<= 64) making C balanced.
// nullopt means "infeasible or unknown"; feasible is distinguished by found.
struct BalancingSolution {
    enum class Status { found, infeasible, unknown } status;
    std::vector<long long> edge_weights;  // parallel to edges then rays
    std::vector<long long> ray_weights;
};
BalancingSolution balancing_solve(const TropCurve& C);

// H-representation of a convex rational polyhedron: rows a.x (rel) b.
struct LinCon {
    enum class Rel { le, eq, lt } rel;
    std::vector<Rat> a;
    Rat b;
};
struct HPolyhedron {
    int dim = 0;
    std::vector<LinCon> cons;
};

// Exact feasibility (Fourier-Motzkin with strict-inequality tracking).
bool feasible(const HPolyhedron& P);
// Affine dimension of the solution set; -1 if empty.
int affine_dim(const HPolyhedron& P);

// Closure of the cone cell Sigma_u(J): x_j <= u_j on J, x_j = u_j off J.
HPolyhedron cone_sigma(const Point& u, const std::set<int>& J);
// All proper J with Sigma_{u_i}(J) meeting C (relative-interior cells).
std::vector<std::set<int>> cone_cells(const TropCurve& C, std::size_t vertex);

// Maximal open segments/rays between topological vertices (whole lines for
// vertex-free components).
struct RegComponent {
    enum class Kind { segment, ray, line } kind;
    Point a;          // endpoint / ray anchor / line anchor
    Point b;          // second endpoint (segments only)
    Dir dir;          // rays and lines
};
std::vector<RegComponent> reg_components(const TropCurve& C);
// skeleton(C, 0) = vertex set of the canonical form.
std::vector<Point> skeleton0(const TropCurve& C);

struct FpcReport {
    bool valid = true;
    std::string message;
    std::pair<std::size_t, std::size_t> witness{0, 0};
};
// FPC axioms: faces of every cell present, pairwise intersections are
// common faces.  Exact, for small cell counts in dimension <= 3.
FpcReport fpc_validate(const std::vector<HPolyhedron>& cells);

}  // namespace trop
