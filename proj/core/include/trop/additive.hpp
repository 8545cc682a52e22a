/*
 * additive.hpp
 * ------------
 * Additivity analysis of tropical set-curves: is the curve a subsemigroup
 * of (R^n, coordinate-wise max)?
 *
 * The necessary structure of an additive curve: every edge direction is
 * sign-coherent (all >= 0 or all <= 0); each vertex carries exactly one
 * nonnegative edge and at most one strictly negative edge; the strictly
 * positive edges form the spine, a monotone path homeomorphic to R or
 * [0, inf); the downward edges at a spine vertex enter distinct cells
 * Sigma_u(J) of the negative-orthant boundary, with J-sets closed under
 * nonempty intersection.
 *
 * For plane curves additivity is decided exactly (the shape theorem: spine
 * plus negatively-directed axis-parallel rays).  For space curves the
 * verdict combines the exact criteria with a seeded sampling oracle and is
 * labeled accordingly; it can be upgraded to exact by running synthesis
 * plus verification.
 */
#pragma once

#include "trop/curve.hpp"

#include <optional>

namespace trop {

struct Spine {
    bool terminal = false;          // spine is [0, inf): u1 is minimal
    std::vector<Point> vertices;    // u1 < ... < um, coordinate-wise strict
    // Edge directions, primitive and strictly positive:
    //   non-terminal: a(e0), a(e1), ..., a(em)   (m+1 entries)
    //   terminal:     a(e1), ..., a(em)          (m entries)
    // e_i joins u_i to u_{i+1}; e0 and em are the unbounded ends.
    std::vector<Dir> dirs;
};

struct CriteriaChecklist {
    bool sign_coherent = false;        // (i) no mixed-sign edge directions
    bool unique_positive_end = false;  // (i) one maximal positive ray/line end
    bool vertex_degrees = false;       // (ii) one nonneg, <= 1 strictly neg
    bool zero_propagation = false;     // (iii) zero coords propagate
    bool j_sets = false;               // (v) injective + intersection-closed
    bool all() const {
        return sign_coherent && unique_positive_end && vertex_degrees &&
               zero_propagation && j_sets;
    }
};

struct AdditivityCertificate {
    enum class Verdict { additive, not_additive, criteria_pass_oracle_pass };
    Verdict verdict;
    std::optional<std::pair<Point, Point>> witness;  // u (+) v off the curve
    CriteriaChecklist criteria;
};

// Exact checks of the structural criteria.  Throws if the input is not
// balanceable (not a tropical set-curve).
CriteriaChecklist check_criteria(const TropCurve& C);

struct OracleResult {
    bool pass = true;
    int pairs_checked = 0;
    std::optional<std::pair<Point, Point>> witness;
};
// Deterministically samples point pairs on C (vertices, edge midpoints, ray
// points at parameters 1/2/4, plus seeded rational combinations) and tests
// geometric containment of the coordinate-wise max.
OracleResult closure_oracle(const TropCurve& C, int samples,
                            std::uint64_t seed);

// n = 2: exact decision.  n = 3: criteria plus oracle (semi-decision).
AdditivityCertificate is_additive(const TropCurve& C);

// The spine (union of strictly-positive-direction edges), ordered.  Throws
// if the curve has no strictly positive edges or they do not form a
// monotone path.
Spine spine(const TropCurve& C);

// U_i = U intersected with u_i + R^n_{<=0} (closed), exact.
TropCurve restrict_below(const TropCurve& C, std::size_t spine_index);

// U_{i,J} = U intersected with the closed cone cell at spine vertex i.
struct CutSet {
    std::set<int> J;
    TropCurve part;
};
std::vector<CutSet> cut_sets(const TropCurve& C, std::size_t spine_index);

// u <= v iff v = a (+) u for some a on C; exact per-cell feasibility.
// Throws if u or v is not on C.
bool poset_leq(const Point& u, const Point& v, const TropCurve& C);

// Connected and acyclic as an abstract graph (rays create no cycles).
bool is_contractible(const TropCurve& C);

struct ComponentCheckReport {
    bool pass = true;
    int pairs_checked = 0;
    std::optional<std::pair<Point, Point>> witness;
};
// Sampled pairs within one connected component have their max in the same
// component.
ComponentCheckReport component_subsemigroup_check(const TropCurve& C,
                                                  int samples,
                                                  std::uint64_t seed);

// Rooted metric tree with positive rational edge lengths.
struct RootedMetricTree {
    // parent[i] is the parent of node i; parent[root] = root.
    std::size_t root = 0;
    std::vector<std::size_t> parent;
    std::vector<Rat> edge_length;  // length of (i, parent[i]); unused at root
};
// A point on the tree: on the edge from `node` toward its parent, at
// distance `offset` above `node` (0 <= offset <= edge length; offset 0 is
// the node itself).
struct TreePoint {
    std::size_t node = 0;
    Rat offset;
    bool operator==(const TreePoint&) const = default;
};
// Validates and normalizes (offset == edge length collapses to the parent).
TreePoint tree_point(const RootedMetricTree& T, std::size_t node, Rat offset);
// The point w with base path gamma_w = gamma_p intersect gamma_q.
TreePoint tree_meet(const RootedMetricTree& T, const TreePoint& p,
                    const TreePoint& q);

}  // namespace trop
