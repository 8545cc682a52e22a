/*
 * synth.hpp
 * ---------
 * Simple-ideal synthesis for additive tropical sets: one simple bivariate
 * polynomial for an additive plane curve, binomial ideals for rational
 * affine subspaces, the auxiliary ideals cutting the spine-with-cones hulls
 * of a space curve, and the full three-variable construction combining a
 * plane polynomial f(l1,l2) with a correction g(l3), plus a verification
 * harness (exact membership sampling, and exact set equality in the plane).
 */
#pragma once

#include "trop/additive.hpp"
#include "trop/curve.hpp"
#include "trop/poly.hpp"

#include <optional>

namespace trop {

// Parameters p_e per spine edge (aligned with Spine::dirs) with the slope
// table b[e][j] = p_e / a_{ej}.
struct SynthesisParams {
    long long cgap = 16;
    bool terminal = false;
    std::vector<long long> p;               // per spine edge, Spine::dirs order
    std::vector<std::vector<long long>> b;  // b[e][j], integers
};

// Smallest doubling schedule meeting the divisibility and growth conditions
// (p_e divisible by 2 * prod_j a_{ej}; slope gaps >= cgap * n), then further
// doubling until, for every target sequence xi (one value per spine vertex),
// the induced value sequence at the spine vertices is xi-convex (strictly
// increasing divided differences).  Throws after 64 fruitless doublings.
SynthesisParams choose_params(const Spine& S,
                              const std::vector<std::vector<Rat>>& targets,
                              long long cgap = 16);

// Coefficients of one generator f_{kl}: values tied at every spine vertex,
// gauge value 0 at u1.
struct CoefficientSolution {
    int k = 1, l = 2;                    // 1-based variable pair, k < l
    std::vector<Rat> Ak, Al;             // per spine edge (dirs order)
    std::vector<std::vector<Rat>> B, C;  // [edge][var]; only j != k,l used
    Rat anchor;                          // common value at u1 (gauge, 0)
};
std::vector<CoefficientSolution> tildeU_coefficients(
    const Spine& S, const SynthesisParams& params);

// Ideal cutting the hull  U+ with the full cone boundary at every spine
// vertex: n(n-1)/2 generators f_{kl}; terminal spines replace the lowest
// slope level by a constant.  All monomials re-checked essential.
Ideal synthesize_tildeU(const TropCurve& C, const SynthesisParams& params);

// Extends the previous ideal with one exclusion generator f_{i,K} per spine
// vertex i and per cone cell K absent from the curve, using phantom spine
// vertices at parameter 1 on the end rays and the +-1 exponent shifts.
Ideal synthesize_tildeU_red(const TropCurve& C, const SynthesisParams& params);

// One simple bivariate polynomial with Z(f) = C, exactly (canonical
// equality replayed internally).  Throws std::invalid_argument with the
// non-additivity witness in the message when C is not exactly additive.
TropPolynomial synthesize_plane(const TropCurve& C);

// Simple ideal cutting an additive space curve in R^3: the reduced-hull
// generators plus, per spine vertex i and cone cell J on the curve, either
// a projected plane polynomial (|J| = 1) or the pair f + g / companion
// built from the surgered curve W_{i,J}.
Ideal synthesize_space_curve(const TropCurve& C);

// n - k simple binomials, one per coordinate (k+1)-plane projection, whose
// common corner locus is the affine subspace point + span(basis).  Throws
// when no coordinate ordering yields simple binomials.
Ideal synthesize_affine_subspace(const Point& point,
                                 const std::vector<Dir>& basis);

struct SimpleIdealReport {
    Ideal generators;
    bool simple = true;
    int on_curve_pass = 0, on_curve_total = 0;
    int off_curve_pass = 0, off_curve_total = 0;
    std::optional<bool> exact_equality;  // plane curves only
    std::vector<Point> witnesses;        // failing sample points
    bool pass() const {
        return simple && on_curve_pass == on_curve_total &&
               off_curve_pass == off_curve_total &&
               (!exact_equality || *exact_equality);
    }
};

// (a) all generators simple; (b) exact membership at the canonical on-curve
// samples; (c) seeded off-curve box samples all rejected; (d) for plane
// curves, exact set equality via overlay intersection.
SimpleIdealReport verify_ideal(const Ideal& I, const TropCurve& C,
                               int off_samples, std::uint64_t seed);

std::string report_to_json(const SimpleIdealReport& rep);

}  // namespace trop
