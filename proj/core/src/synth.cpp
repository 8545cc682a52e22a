/*
 * synth.cpp
 * ---------
 * Simple-ideal synthesis: parameter schedules, the pairwise and exclusion
 * generators cutting the reduced hull of a spine-with-cones curve, exact
 * plane synthesis via dual slope jumps, the three-variable f(l1,l2) (+) g(l3)
 * construction with its companion projections, binomial ideals for affine
 * subspaces, and the sampling verification harness.
 */
#include "trop/synth.hpp"

#include "trop/newton.hpp"
#include "trop/parse.hpp"
#include "geom_util.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <sstream>

namespace trop {

namespace {

using boost::multiprecision::denominator;
using boost::multiprecision::numerator;

// Retryable construction failure: the caller may rescale or boost slopes.
struct SynthRetry : std::runtime_error {
    using std::runtime_error::runtime_error;
};

long long to_ll(const BigInt& v) {
    static const BigInt kCap = BigInt(1) << 62;
    if (v > kCap || v < -kCap) throw SynthRetry("synth: exponent overflow");
    return v.convert_to<long long>();
}

long long rat_ll(const Rat& q) {
    if (denominator(q) != 1) throw std::logic_error("synth: expected integer");
    return to_ll(numerator(q));
}

BigInt rat_floor(const Rat& q) {
    BigInt n = numerator(q), d = denominator(q);
    BigInt r = n / d;
    if (n < 0 && r * d != n) --r;
    return r;
}

Rat pow2(int k) { return Rat(BigInt(1) << k); }

Point padd(const Point& p, const Dir& d, const Rat& t) {
    Point r = p;
    for (std::size_t c = 0; c < r.size(); ++c) r[c] += t * d[c];
    return r;
}

bool leq_pt(const Point& a, const Point& b) {
    for (std::size_t c = 0; c < a.size(); ++c)
        if (a[c] > b[c]) return false;
    return true;
}

bool is_zero_dir(const Dir& d) {
    return std::all_of(d.begin(), d.end(), [](long long v) { return v == 0; });
}

Point drop_coord(const Point& p, int ax) {
    Point r;
    for (std::size_t c = 0; c < p.size(); ++c)
        if (static_cast<int>(c) != ax) r.push_back(p[c]);
    return r;
}

Dir drop_coord_d(const Dir& d, int ax) {
    Dir r;
    for (std::size_t c = 0; c < d.size(); ++c)
        if (static_cast<int>(c) != ax) r.push_back(d[c]);
    return r;
}

std::size_t vertex_index(const TropCurve& K, const Point& u) {
    for (std::size_t i = 0; i < K.vertices.size(); ++i)
        if (K.vertices[i] == u) return i;
    throw std::logic_error("synth: spine vertex missing from the curve");
}

// Exact sample points covering every cell of the curve.  The spec profile
// (dense = false) is vertices, isolated points, segment midpoints, ray
// points p+d and p+3d, and line points p-2d, p, p+2d.
std::vector<Point> covering_samples(const TropCurve& C, bool dense) {
    std::vector<Point> out = C.vertices;
    out.insert(out.end(), C.isolated_points.begin(), C.isolated_points.end());
    const std::vector<Rat> seg =
        dense ? std::vector<Rat>{Rat(1, 4), Rat(1, 2), Rat(3, 4)}
              : std::vector<Rat>{Rat(1, 2)};
    const std::vector<Rat> ray =
        dense ? std::vector<Rat>{Rat(1, 2), Rat(1), Rat(3), Rat(17, 2)}
              : std::vector<Rat>{Rat(1), Rat(3)};
    const std::vector<Rat> lin =
        dense ? std::vector<Rat>{Rat(-5), Rat(-2), Rat(-1, 2), Rat(0),
                                 Rat(1, 2), Rat(2), Rat(5)}
              : std::vector<Rat>{Rat(-2), Rat(0), Rat(2)};
    for (const Piece& pc : curve_pieces(C)) {
        switch (pc.kind) {
            case Piece::Kind::segment:
                for (const Rat& t : seg) out.push_back(padd(pc.p, pc.d, t * pc.tmax));
                break;
            case Piece::Kind::ray:
                for (const Rat& t : ray) out.push_back(padd(pc.p, pc.d, t));
                break;
            case Piece::Kind::line:
                for (const Rat& t : lin) out.push_back(padd(pc.p, pc.d, t));
                break;
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

TropCurve strip_weights(const TropCurve& C) {
    TropCurve K = C;
    for (auto& e : K.edges) e.weight = 1;
    for (auto& r : K.rays) r.weight = 1;
    for (auto& l : K.lines) l.weight = 1;
    return canonicalize(K);
}

// Assemble a canonical curve from parameterized pieces (weights taken as
// given; overlaps are resolved by canonicalize).
TropCurve pieces_to_curve(int dim, const std::vector<Piece>& pieces,
                          std::vector<Point> isolated = {}) {
    TropCurve C;
    C.dim = dim;
    auto vid = [&C](const Point& p) -> std::size_t {
        for (std::size_t i = 0; i < C.vertices.size(); ++i)
            if (C.vertices[i] == p) return i;
        C.vertices.push_back(p);
        return C.vertices.size() - 1;
    };
    for (const Piece& pc : pieces) {
        switch (pc.kind) {
            case Piece::Kind::segment: {
                Point q = padd(pc.p, pc.d, pc.tmax);
                if (q == pc.p) break;
                std::size_t a = vid(pc.p), b = vid(q);
                C.edges.push_back({std::min(a, b), std::max(a, b), pc.weight});
                break;
            }
            case Piece::Kind::ray:
                C.rays.push_back({vid(pc.p), pc.d, pc.weight});
                break;
            case Piece::Kind::line:
                C.lines.push_back({pc.p, primitive_signed(pc.d), pc.weight});
                break;
        }
    }
    C.isolated_points = std::move(isolated);
    return canonicalize(C);
}

// Coordinate projection of a curve (weights reset to 1); pieces collapsing
// to points survive only when not absorbed by the projected 1-skeleton.
TropCurve project_drop(const TropCurve& C, int ax) {
    std::vector<Piece> out;
    std::vector<Point> zero_dim;
    for (const Piece& pc : curve_pieces(C)) {
        Point p2 = drop_coord(pc.p, ax);
        Dir d2 = drop_coord_d(pc.d, ax);
        if (is_zero_dir(d2)) {
            zero_dim.push_back(p2);
            continue;
        }
        Dir prim = primitive(d2);
        Piece np{pc.kind, p2, prim, Rat(0), 1};
        if (pc.kind == Piece::Kind::segment) {
            std::size_t c = 0;
            while (prim[c] == 0) ++c;
            np.tmax = pc.tmax * Rat(d2[c]) / Rat(prim[c]);
        }
        out.push_back(np);
    }
    TropCurve P = pieces_to_curve(C.dim - 1, out);
    for (const Point& p : zero_dim)
        if (!on_curve(P, p) &&
            std::find(P.isolated_points.begin(), P.isolated_points.end(), p) ==
                P.isolated_points.end())
            P.isolated_points.push_back(p);
    return canonicalize(P);
}

// Embed a bivariate polynomial into n variables on axes (ax0, ax1).
TropPolynomial embed2(const TropPolynomial& f2, int ax0, int ax1, int n) {
    std::vector<Monomial> mons;
    for (const Monomial& mo : f2.monomials()) {
        Exps e(n, 0);
        e[ax0] = mo.exps[0];
        e[ax1] = mo.exps[1];
        mons.push_back({mo.coeff, e});
    }
    return TropPolynomial(n, mons);
}

// Multiply all exponents and coefficients by s > 0: the corner locus, the
// ties and all strict comparisons are preserved.
TropPolynomial scale_poly(const TropPolynomial& f, const BigInt& s) {
    std::vector<Monomial> mons;
    for (const Monomial& mo : f.monomials()) {
        Exps e = mo.exps;
        for (auto& v : e) v = to_ll(BigInt(v) * s);
        mons.push_back({mo.coeff * Rat(s), e});
    }
    return TropPolynomial(f.nvars(), mons);
}

// Edge-number view of a spine: vertices u(1..m); edge e joins u(e) to
// u(e+1), with e ranging over [lo, m] where lo = 1 for terminal spines
// (e_m and, when present, e_0 are the unbounded ends).
struct SpineView {
    const Spine* S;
    int m;
    bool term;
    explicit SpineView(const Spine& s)
        : S(&s), m(static_cast<int>(s.vertices.size())), term(s.terminal) {
        const std::size_t expect =
            s.vertices.empty() ? 1 : s.vertices.size() + (s.terminal ? 0 : 1);
        if (s.dirs.size() != expect || (s.terminal && s.vertices.empty()))
            throw std::invalid_argument("spine: edge/vertex count mismatch");
    }
    int lo() const { return term ? 1 : 0; }
    const Point& u(int i) const { return S->vertices[i - 1]; }
    const Dir& a(int e) const { return S->dirs[term ? e - 1 : e]; }
};

// Lattice parameter of the interior edge e (u(e+1) = u(e) + mu * a(e)).
Rat edge_mu(const SpineView& sv, int e) {
    const Dir& d = sv.a(e);
    std::size_t c = 0;
    while (d[c] == 0) ++c;
    return (sv.u(e + 1)[c] - sv.u(e)[c]) / Rat(d[c]);
}

// Extended vertex chain u_0..u_{m+1} (phantoms at parameter 1 on the ends)
// and the gauge values V(u_1) = 0, V(u_{e+1}) = V(u_e) + p_e mu_e.
struct Chain {
    std::vector<Point> u;  // index 0..m+1; u[0] unused for terminal spines
    std::vector<Rat> V;
};

Chain spine_chain(const SpineView& sv, const std::vector<Rat>& p) {
    const int m = sv.m;
    Chain ch;
    ch.u.resize(m + 2);
    ch.V.assign(m + 2, Rat(0));
    for (int i = 1; i <= m; ++i) ch.u[i] = sv.u(i);
    ch.u[m + 1] = padd(sv.u(m), sv.a(m), Rat(1));
    for (int e = 1; e < m; ++e) ch.V[e + 1] = ch.V[e] + p[e] * edge_mu(sv, e);
    ch.V[m + 1] = ch.V[m] + p[m];
    if (!sv.term) {
        ch.u[0] = padd(sv.u(1), sv.a(0), Rat(-1));
        ch.V[0] = -p[0];
    }
    return ch;
}

// Parameters of an additive plane curve with at least one spine vertex:
// per-edge weights and per-vertex negative axis rays.  Throws
// std::invalid_argument when the curve is not of the realizable shape
// (spine plus negatively directed axis-parallel rays).
struct PlaneData {
    int m = 0;
    bool term = true;
    std::vector<Point> u;          // 1..m
    std::vector<Dir> a;            // by edge number lo..m
    std::vector<long long> tw;     // spine edge weights, by edge number
    std::vector<bool> has_h, has_v;    // per vertex 1..m
    std::vector<long long> wh, wv;     // axis ray weights, per vertex
    int lo() const { return term ? 1 : 0; }
};

PlaneData plane_shape(const TropCurve& K) {
    if (!K.lines.empty() || !K.isolated_points.empty())
        throw std::invalid_argument("plane_shape: curve is not a pure spine-with-rays shape");
    Spine S = spine(K);
    SpineView sv(S);
    PlaneData D;
    D.m = sv.m;
    D.term = sv.term;
    if (D.m == 0) throw std::invalid_argument("plane_shape: no spine vertices");
    D.u.assign(D.m + 1, Point{});
    D.a.assign(D.m + 1, Dir{});
    D.tw.assign(D.m + 1, 0);
    D.has_h.assign(D.m + 1, false);
    D.has_v.assign(D.m + 1, false);
    D.wh.assign(D.m + 1, 0);
    D.wv.assign(D.m + 1, 0);
    for (int i = 1; i <= D.m; ++i) D.u[i] = sv.u(i);
    for (int e = D.lo(); e <= D.m; ++e) D.a[e] = sv.a(e);
    std::vector<std::size_t> vid(D.m + 1);
    for (int i = 1; i <= D.m; ++i) vid[i] = vertex_index(K, D.u[i]);
    std::size_t used_edges = 0, used_rays = 0;
    for (int e = 1; e < D.m; ++e) {
        bool found = false;
        for (const CurveEdge& ed : K.edges)
            if ((ed.a == vid[e] && ed.b == vid[e + 1]) ||
                (ed.a == vid[e + 1] && ed.b == vid[e])) {
                D.tw[e] = ed.weight;
                found = true;
                ++used_edges;
                break;
            }
        if (!found) throw std::invalid_argument("plane_shape: broken spine edge");
    }
    if (used_edges != K.edges.size())
        throw std::invalid_argument("plane_shape: non-spine bounded edge");
    for (const CurveRay& r : K.rays) {
        if (r.vertex == vid[D.m] && r.dir == D.a[D.m]) {
            D.tw[D.m] = r.weight;
            ++used_rays;
            continue;
        }
        if (!D.term && r.vertex == vid[1]) {
            Dir rev = D.a[0];
            for (auto& c : rev) c = -c;
            if (r.dir == rev) {
                D.tw[0] = r.weight;
                ++used_rays;
                continue;
            }
        }
        int at = -1;
        for (int i = 1; i <= D.m; ++i)
            if (r.vertex == vid[i]) at = i;
        if (at < 0) throw std::invalid_argument("plane_shape: ray at a non-spine vertex");
        if (r.dir == Dir{-1, 0}) {
            D.has_h[at] = true;
            D.wh[at] = r.weight;
        } else if (r.dir == Dir{0, -1}) {
            D.has_v[at] = true;
            D.wv[at] = r.weight;
        } else {
            throw std::invalid_argument("plane_shape: non-axis downward ray");
        }
        ++used_rays;
    }
    if (D.tw[D.m] == 0 || (!D.term && D.tw[0] == 0))
        throw std::invalid_argument("plane_shape: missing spine end");
    if (used_rays != K.rays.size())
        throw std::invalid_argument("plane_shape: unaccounted ray");
    return D;
}

// Simple bivariate polynomial from per-edge dual slopes: on spine edge e
// the x-monomial x^{P_e} ties the y-monomial y^{Q_e}; axis rays are the
// ties of consecutive x- (resp. y-) monomials.  Exponents must be integers.
TropPolynomial assemble_plane(const PlaneData& D, const std::vector<Rat>& P,
                              const std::vector<Rat>& Q) {
    // Gauge f(u_1) = 0; along edge e both tying monomials track f, so f
    // grows with rate P_e * a_x per lattice step.
    std::vector<Rat> V(D.m + 1, Rat(0));
    for (int e = 1; e < D.m; ++e) {
        const Dir& d = D.a[e];
        std::size_t c = d[0] != 0 ? 0 : 1;
        Rat mu = (D.u[e + 1][c] - D.u[e][c]) / Rat(d[c]);
        V[e + 1] = V[e] + (P[e] * d[0]) * mu;
    }
    std::vector<Monomial> mons;
    if (D.term) mons.push_back({Rat(0), Exps{0, 0}});
    for (int e = D.lo(); e <= D.m; ++e) {
        int anc = std::max(e, 1);
        mons.push_back({V[anc] - P[e] * D.u[anc][0], Exps{rat_ll(P[e]), 0}});
        mons.push_back({V[anc] - Q[e] * D.u[anc][1], Exps{0, rat_ll(Q[e])}});
    }
    return TropPolynomial(2, mons);
}

// Univariate correction polynomial g = (+)_k A_k (*) x^{c_k}, k = 0..m+1,
// with rational exponents until the final combined scaling.
struct GPoly {
    std::vector<Rat> c, A;
};

std::pair<Rat, std::vector<int>> geval(const GPoly& g, const Rat& x) {
    Rat best;
    std::vector<int> arg;
    for (std::size_t k = 0; k < g.c.size(); ++k) {
        Rat v = g.A[k] + g.c[k] * x;
        if (arg.empty() || v > best) {
            best = v;
            arg.assign(1, static_cast<int>(k));
        } else if (v == best) {
            arg.push_back(static_cast<int>(k));
        }
    }
    return {best, arg};
}

void validate_g(const GPoly& g, const std::vector<Rat>& h, int i, int m,
                bool terminal) {
    for (int k = 0; k <= m; ++k)
        if (!(g.c[k] < g.c[k + 1]))
            throw SynthRetry("g: exponents not strictly increasing");
    if (g.c[0] < 0) throw SynthRetry("g: negative lowest exponent");
    auto at_i = geval(g, h[i]).second;
    if (terminal) {
        if (at_i != std::vector<int>{i})
            throw SynthRetry("g: the i-th monomial is not the unique maximizer at u_i");
    } else {
        if (at_i != std::vector<int>{i - 1, i})
            throw SynthRetry("g: expected a two-monomial tie at u_i");
    }
    for (int k = i + 1; k <= m + 1; ++k) {
        auto arg = geval(g, h[k]).second;
        if (std::find(arg.begin(), arg.end(), k - 1) == arg.end() ||
            std::find(arg.begin(), arg.end(), k) == arg.end())
            throw SynthRetry("g: missing tie at an upper spine vertex");
    }
}

// Conditions (a)-(h): F[k] = f(pi(u_k)) for k = 1..m+1, Fv = f(v_1); h are
// the third coordinates; s is the junction index (0 <= s < i).
GPoly build_g_terminal(const std::vector<Rat>& F, const Rat& Fv,
                       const std::vector<Rat>& h, int i, int s, int m) {
    GPoly g;
    g.c.assign(m + 2, Rat(0));
    g.A.assign(m + 2, Rat(0));
    if (!(Fv < F[i + 1])) throw SynthRetry("g: f(v1) must stay below f(u_{i+1})");
    g.c[i] = (F[i + 1] - Fv) / (h[i + 1] - h[i]);
    g.A[i] = F[i + 1] - g.c[i] * h[i + 1];
    for (int k = i + 1; k <= m; ++k) {
        g.c[k] = (F[k + 1] - F[k]) / (h[k + 1] - h[k]);
        g.A[k] = F[k + 1] - g.c[k] * h[k + 1];
    }
    g.c[m + 1] = g.c[m] + 1;
    g.A[m + 1] = F[m + 1] - g.c[m + 1] * h[m + 1];
    if (i >= 1) {
        if (s == i - 1 && s >= 1) {
            // (d) and (f) coincide: anchor monomial i-1 at (h_s, F_s) and let
            // the implied epsilon be checked by the uniqueness validation.
            g.c[i - 1] = g.c[i] - 1;
            g.A[i - 1] = F[s] - g.c[i - 1] * h[s];
        } else if (s == 0 && i == 1) {
            Rat eps(1, 2);
            g.c[0] = g.c[1] - 1;
            g.A[0] = g.A[1] + (h[1] - eps);
        } else {
            Rat eps = std::min(Rat(1), Rat(h[i] - h[i - 1])) / 2;
            g.c[i - 1] = g.c[i] - 1;
            g.A[i - 1] = g.A[i] + (h[i] - eps);
            for (int k = i - 2; k > s; --k) {
                g.c[k] = g.c[k + 1] - 1;
                g.A[k] = g.A[k + 1] + h[k + 1];
            }
            if (s >= 1) {
                Rat T = g.A[s + 1] + g.c[s + 1] * h[s + 1];
                if (!(T > F[s])) throw SynthRetry("g: junction value too low");
                g.c[s] = (T - F[s]) / (h[s + 1] - h[s]);
                g.A[s] = F[s] - g.c[s] * h[s];
            } else {
                g.c[0] = g.c[1] - 1;
                g.A[0] = g.A[1] + h[1];
            }
        }
        for (int k = s - 1; k >= 1; --k) {
            g.c[k] = (F[k + 1] - F[k]) / (h[k + 1] - h[k]);
            g.A[k] = F[k + 1] - g.c[k] * h[k + 1];
        }
        if (s >= 1) {
            g.c[0] = g.c[1] - 1;
            g.A[0] = F[1] - g.c[0] * h[1];
        }
    }
    validate_g(g, h, i, m, true);
    return g;
}

// Conditions (a), (b), (c'), (d'); Fw = f(w) for the minimal spine point w
// of the projection.
GPoly build_g_nonterminal(const std::vector<Rat>& F, const Rat& Fw,
                          const std::vector<Rat>& h, int i, int m) {
    GPoly g;
    g.c.assign(m + 2, Rat(0));
    g.A.assign(m + 2, Rat(0));
    if (!(Fw < F[i + 1])) throw SynthRetry("g: f(w) must stay below f(u_{i+1})");
    g.c[i] = (F[i + 1] - Fw) / (h[i + 1] - h[i]);
    g.A[i] = F[i + 1] - g.c[i] * h[i + 1];
    for (int k = i + 1; k <= m; ++k) {
        g.c[k] = (F[k + 1] - F[k]) / (h[k + 1] - h[k]);
        g.A[k] = F[k + 1] - g.c[k] * h[k + 1];
    }
    g.c[m + 1] = g.c[m] + 1;
    g.A[m + 1] = F[m + 1] - g.c[m + 1] * h[m + 1];
    for (int k = i - 1; k >= 0; --k) {
        g.c[k] = g.c[k + 1] - 1;
        g.A[k] = g.A[k + 1] + h[k + 1];
    }
    validate_g(g, h, i, m, false);
    return g;
}

// F = f(l_{axA}, l_{axB}) (+) g(l_{axC}), scaled by the exponent-denominator
// lcm of g so that all exponents are integers.
TropPolynomial combine_fg(const TropPolynomial& f2, int axA, int axB, int axC,
                          const GPoly& g) {
    BigInt M = 1;
    for (const Rat& c : g.c) M = boost::multiprecision::lcm(M, denominator(c));
    std::vector<Monomial> mons;
    for (const Monomial& mo : f2.monomials()) {
        Exps e(3, 0);
        e[axA] = to_ll(BigInt(mo.exps[0]) * M);
        e[axB] = to_ll(BigInt(mo.exps[1]) * M);
        mons.push_back({mo.coeff * Rat(M), e});
    }
    for (std::size_t k = 0; k < g.c.size(); ++k) {
        Exps e(3, 0);
        e[axC] = rat_ll(g.c[k] * Rat(M));
        mons.push_back({g.A[k] * Rat(M), e});
    }
    return TropPolynomial(3, mons);
}

// A simple polynomial whose corner locus equals the given additive plane
// set-curve (weights free), with the anchor values strictly increasing and
// strictly convex with respect to xi.  When e15 holds the lowest dual slope
// is attenuated and the top slopes are boosted, as required by the
// space-curve correction.
TropPolynomial plane_poly_for_set(const TropCurve& C2,
                                  const std::vector<Point>& anchors,
                                  const std::vector<Rat>& xi, bool e15,
                                  int boost_level);

TropPolynomial synthesize_plane_lines(const TropCurve& K);

TropPolynomial plane_poly_for_set(const TropCurve& C2,
                                  const std::vector<Point>& anchors,
                                  const std::vector<Rat>& xi, bool e15,
                                  int boost_level) {
    TropCurve K = strip_weights(C2);
    if (!K.isolated_points.empty())
        throw SynthRetry("plane_poly_for_set: projection has isolated points");
    auto cert = is_additive(K);
    if (cert.verdict == AdditivityCertificate::Verdict::not_additive)
        throw SynthRetry("plane_poly_for_set: projected curve is not additive");
    if (K.vertices.empty()) {
        if (!anchors.empty())
            throw SynthRetry("plane_poly_for_set: anchored synthesis needs a vertex");
        return synthesize_plane_lines(K);
    }
    PlaneData D;
    try {
        D = plane_shape(K);
    } catch (const std::invalid_argument& ex) {
        throw SynthRetry(std::string("plane_poly_for_set: ") + ex.what());
    }
    for (std::size_t r = 1; r < xi.size(); ++r)
        if (!(xi[r - 1] < xi[r]))
            throw SynthRetry("plane_poly_for_set: xi not strictly increasing");
    Rat B = pow2(1 + boost_level);
    for (int attempt = 0; attempt < 24; ++attempt, B *= 2) {
        std::vector<Rat> P(D.m + 1, Rat(0)), Q(D.m + 1, Rat(0));
        Rat prevp = 0, prevq = 0;
        if (!D.term) {
            Rat t0 = e15 ? Rat(1) / pow2(6 + 2 * boost_level) : Rat(1);
            P[0] = Rat(D.a[0][1]) * t0;
            Q[0] = Rat(D.a[0][0]) * t0;
            prevp = P[0];
            prevq = Q[0];
        }
        for (int iv = 1; iv <= D.m; ++iv) {
            const Rat ax(D.a[iv][0]), ay(D.a[iv][1]);
            Rat t;
            if (D.has_h[iv] && D.has_v[iv]) {
                Rat bound = std::max(prevq / ax, prevp / ay);
                t = bound == 0 ? B : bound * B;
            } else if (D.has_v[iv]) {
                t = prevq / ax;  // horizontal jump forced to zero
                if (!(ay * t > prevp))
                    throw SynthRetry("plane_poly_for_set: infeasible vertical jump");
            } else if (D.has_h[iv]) {
                t = prevp / ay;
                if (!(ax * t > prevq))
                    throw SynthRetry("plane_poly_for_set: infeasible horizontal jump");
            } else {
                throw SynthRetry("plane_poly_for_set: bare spine corner");
            }
            P[iv] = ay * t;
            Q[iv] = ax * t;
            prevp = P[iv];
            prevq = Q[iv];
        }
        if (e15) {
            if (!(D.has_h[D.m] && D.has_v[D.m]))
                throw SynthRetry("plane_poly_for_set: top vertex lacks an axis ray");
            Rat mx(1);
            for (int e = D.lo(); e < D.m; ++e) mx = std::max({mx, P[e], Q[e]});
            while (P[D.m] <= 64 * mx || Q[D.m] <= 64 * mx) {
                P[D.m] *= 2;
                Q[D.m] *= 2;
            }
        }
        BigInt M = 1;
        for (int e = D.lo(); e <= D.m; ++e) {
            M = boost::multiprecision::lcm(M, denominator(P[e]));
            M = boost::multiprecision::lcm(M, denominator(Q[e]));
        }
        for (int e = D.lo(); e <= D.m; ++e) {
            P[e] *= Rat(M);
            Q[e] *= Rat(M);
        }
        TropPolynomial f = assemble_plane(D, P, Q);
        bool convex = true;
        std::vector<Rat> vals;
        for (const Point& pt : anchors) vals.push_back(evaluate(f, pt).value.value());
        for (std::size_t r = 1; r < vals.size() && convex; ++r)
            if (!(vals[r - 1] < vals[r])) convex = false;
        for (std::size_t r = 2; r < vals.size() && convex; ++r) {
            Rat d1 = (vals[r - 1] - vals[r - 2]) / (xi[r - 1] - xi[r - 2]);
            Rat d2 = (vals[r] - vals[r - 1]) / (xi[r] - xi[r - 1]);
            if (!(d1 < d2)) convex = false;
        }
        if (!convex) continue;
        if (strip_weights(curve_from_poly2(f)) != K)
            throw std::logic_error("plane_poly_for_set: set replay failed");
        return f;
    }
    throw SynthRetry("plane_poly_for_set: could not achieve the required convexity");
}

// Vertex-free additive plane curves: a single line in any sign-coherent
// direction, or several parallel axis lines (a univariate staircase).
TropPolynomial synthesize_plane_lines(const TropCurve& K) {
    if (K.lines.empty())
        throw std::invalid_argument("synthesize_plane: no one-dimensional cells");
    std::vector<Monomial> mons;
    if (K.lines.size() == 1) {
        const CurveLine& L = K.lines.front();
        const long long a = L.dir[0], b = L.dir[1], w = L.weight;
        if (a < 0 || b < 0)
            throw std::invalid_argument("synthesize_plane: mixed-sign line direction");
        if (a == 0) {
            mons = {{Rat(0), Exps{0, 0}}, {-Rat(w) * L.point[0], Exps{w, 0}}};
        } else if (b == 0) {
            mons = {{Rat(0), Exps{0, 0}}, {-Rat(w) * L.point[1], Exps{0, w}}};
        } else {
            const long long P = b * w, Q = a * w;
            mons = {{-Rat(P) * L.point[0], Exps{P, 0}},
                    {-Rat(Q) * L.point[1], Exps{0, Q}}};
        }
    } else {
        const Dir d0 = K.lines.front().dir;
        if (d0 != Dir{0, 1} && d0 != Dir{1, 0})
            throw std::invalid_argument("synthesize_plane: parallel non-axis lines");
        const int c = d0 == Dir{0, 1} ? 0 : 1;  // frozen coordinate
        std::vector<std::pair<Rat, long long>> walls;  // position, weight
        for (const CurveLine& L : K.lines) {
            if (L.dir != d0)
                throw std::invalid_argument("synthesize_plane: non-parallel lines");
            walls.emplace_back(L.point[c], L.weight);
        }
        std::sort(walls.begin(), walls.end());
        mons.push_back({Rat(0), Exps{0, 0}});
        long long E = 0;
        Rat A(0);
        for (const auto& [x, w] : walls) {
            A -= Rat(w) * x;
            E += w;
            Exps e{0, 0};
            e[c] = E;
            mons.push_back({A, e});
        }
    }
    TropPolynomial f(2, mons);
    if (curve_from_poly2(f) != K)
        throw std::logic_error("synthesize_plane: line replay failed");
    return f;
}

// Interior sample points of the relative interior of Sigma_u(J).
std::vector<Point> cell_samples(const Point& u, const std::set<int>& J) {
    static const std::vector<std::vector<Rat>> t1{{Rat(1, 2)}, {Rat(1)}, {Rat(3)}, {Rat(10)}};
    static const std::vector<std::vector<Rat>> t2{
        {Rat(1), Rat(1)}, {Rat(1, 2), Rat(2)}, {Rat(3), Rat(1)}, {Rat(1), Rat(5)}};
    static const std::vector<std::vector<Rat>> t3{
        {Rat(1), Rat(1), Rat(1)}, {Rat(2), Rat(1), Rat(1, 2)}, {Rat(1), Rat(3), Rat(2)}};
    const auto& grid = J.size() == 1 ? t1 : J.size() == 2 ? t2 : t3;
    std::vector<Point> out;
    for (const auto& ts : grid) {
        Point p = u;
        std::size_t r = 0;
        for (int j : J) p[j - 1] -= ts[r++];
        out.push_back(p);
    }
    return out;
}

// The exclusion generator f_{i,K}: phantom levels -1 and m+1, +-1 exponent
// shifts off K, and, for singleton K at a non-minimal vertex, the flat
// schedule that merges the j0-monomials of levels i-1 and i so that a single
// tracker covers both adjacent spine edges.
TropPolynomial exclusion_poly(const TropCurve& K, const SpineView& sv,
                              const std::vector<Rat>& pbase, int i,
                              const std::set<int>& Kset,
                              const std::vector<std::vector<std::set<int>>>& cells) {
    const int n = K.dim, m = sv.m;
    std::vector<Rat> p = pbase;
    const bool flat = Kset.size() == 1;
    int j0 = -1;
    if (!flat) {
        for (int j = 1; j <= n; ++j)
            if (!Kset.count(j)) {
                j0 = j;
                break;
            }
    } else {
        if (sv.term && i == 1)
            throw SynthRetry("exclusion_poly: singleton exclusion at a terminal minimal vertex");
        const Dir& up = sv.a(i);
        const Dir& dn = sv.a(i - 1);
        auto ratio = [&](int j) { return Rat(up[j - 1]) / Rat(dn[j - 1]); };
        for (int j = 1; j <= n; ++j) {
            if (Kset.count(j)) continue;
            if (j0 < 0 || ratio(j) > ratio(j0)) j0 = j;
        }
        // The merged tracker must dominate every K-direction strictly; ties
        // outside K are separated later by the +-1 shifts.
        for (int j = 1; j <= n; ++j)
            if (Kset.count(j) && !(ratio(j0) > ratio(j)))
                throw SynthRetry(
                    "exclusion_poly: no dominant slope ratio for a flat schedule");
        p[i] = p[i - 1] * ratio(j0);
        // Restore the growth gaps on the edges above the merged one.
        for (int e = i + 1; e <= m; ++e) {
            Rat need(0);
            for (int j = 0; j < n; ++j) {
                Rat prev = p[e - 1] / Rat(sv.a(e - 1)[j]);
                need = std::max(need,
                                (prev + Rat(2 * sv.a(e)[j] * n)) * sv.a(e)[j]);
            }
            if (p[e] < need) p[e] = need;
        }
    }
    const int lo_lvl = sv.term ? 1 : -1;
    std::map<int, std::vector<Rat>> b;
    for (int e = sv.lo(); e <= m; ++e) {
        b[e].assign(n, Rat(0));
        for (int j = 1; j <= n; ++j) b[e][j - 1] = p[e] / Rat(sv.a(e)[j - 1]);
    }
    b[m + 1].assign(n, Rat(0));
    for (int j = 1; j <= n; ++j) b[m + 1][j - 1] = 2 * b[m][j - 1];
    if (!sv.term) {
        b[-1].assign(n, Rat(0));
        for (int j = 1; j <= n; ++j) b[-1][j - 1] = b[0][j - 1] / 2;
    }
    BigInt M = 1;
    for (auto& [lvl, row] : b)
        for (const Rat& v : row) M = boost::multiprecision::lcm(M, denominator(v));
    if (M != 1) {
        for (auto& v : p) v *= Rat(M);
        for (auto& [lvl, row] : b)
            for (auto& v : row) v *= Rat(M);
    }
    Chain ch = spine_chain(sv, p);
    std::vector<Monomial> mons;
    if (sv.term) mons.push_back({Rat(0), Exps(n, 0)});
    for (int lvl = lo_lvl; lvl <= m + 1; ++lvl) {
        for (int j = 1; j <= n; ++j) {
            Rat bb = b[lvl][j - 1];
            int anc;
            if (lvl == i) {
                if (flat && j == j0) continue;  // merged with level i-1
                if (Kset.count(j)) {
                    anc = i;
                } else {
                    bb += 1;
                    anc = i + 1;
                }
            } else if (lvl == i - 1) {
                if (!Kset.count(j) && j != j0) bb -= 1;
                anc = std::max(i - 1, 0);
            } else {
                anc = std::clamp(lvl, 0, m + 1);
            }
            if (!(bb >= 1)) throw SynthRetry("exclusion_poly: nonpositive exponent");
            Exps e(n, 0);
            e[j - 1] = rat_ll(bb);
            mons.push_back({ch.V[anc] - bb * ch.u[anc][j - 1], e});
        }
    }
    TropPolynomial f(n, mons);
    if (essential_monomials_lp(f).size() != f.monomials().size())
        throw SynthRetry("exclusion_poly: non-essential monomial");
    for (const Point& pt : covering_samples(K, true))
        if (!membership(f, pt))
            throw SynthRetry("exclusion_poly: curve sample escapes the locus");
    for (int k = 1; k <= m; ++k) {
        if (k == i) {
            for (const auto& J : cells[k])
                for (const Point& pt : cell_samples(sv.u(k), J))
                    if (!membership(f, pt))
                        throw SynthRetry("exclusion_poly: retained cell sample escapes");
        } else {
            for (int mask = 1; mask < (1 << n) - 1; ++mask) {
                std::set<int> J;
                for (int j = 1; j <= n; ++j)
                    if (mask & (1 << (j - 1))) J.insert(j);
                for (const Point& pt : cell_samples(sv.u(k), J))
                    if (!membership(f, pt))
                        throw SynthRetry("exclusion_poly: cone boundary sample escapes");
            }
        }
    }
    for (const Point& pt : cell_samples(sv.u(i), Kset)) {
        if (membership(f, pt))
            throw SynthRetry("exclusion_poly: excluded cell sample still on the locus");
        if (evaluate(f, pt).argmax.size() != 1)
            throw SynthRetry("exclusion_poly: excluded cell maximizer not unique");
    }
    return f;
}

}  // namespace

SynthesisParams choose_params(const Spine& S,
                              const std::vector<std::vector<Rat>>& targets,
                              long long cgap) {
    if (S.dirs.empty()) throw std::invalid_argument("choose_params: spine has no edges");
    if (cgap < 1) throw std::invalid_argument("choose_params: cgap must be positive");
    SpineView sv(S);
    const int m = sv.m;
    const int n = static_cast<int>(S.dirs.front().size());
    for (const auto& xi : targets) {
        if (static_cast<int>(xi.size()) != m)
            throw std::invalid_argument("choose_params: target length differs from vertex count");
        for (std::size_t r = 1; r < xi.size(); ++r)
            if (!(xi[r - 1] < xi[r]))
                throw std::invalid_argument("choose_params: target not strictly increasing");
    }
    std::vector<BigInt> base(m + 1, 1), mult(m + 1, 1), used(m + 1, 1);
    for (int e = sv.lo(); e <= m; ++e) {
        base[e] = 2;
        for (int j = 0; j < n; ++j) base[e] *= sv.a(e)[j];
    }
    for (int attempt = 0; attempt <= 64; ++attempt) {
        std::vector<BigInt> p(m + 1, 0), prevb(n, 0);
        std::vector<std::vector<BigInt>> b(m + 1, std::vector<BigInt>(n, 0));
        for (int e = sv.lo(); e <= m; ++e) {
            BigInt need = mult[e];
            for (int j = 0; j < n; ++j) {
                BigInt req = (prevb[j] + cgap * n) * sv.a(e)[j];
                BigInt k = (req + base[e] - 1) / base[e];
                need = std::max(need, k);
            }
            used[e] = need;
            p[e] = need * base[e];
            for (int j = 0; j < n; ++j) b[e][j] = p[e] / sv.a(e)[j];
            prevb = b[e];
        }
        std::vector<Rat> V(m + 1, Rat(0));
        for (int e = 1; e < m; ++e) V[e + 1] = V[e] + Rat(p[e]) * edge_mu(sv, e);
        int bad_edge = -1;
        for (const auto& xi : targets) {
            for (int k = 1; k + 1 < m && bad_edge < 0; ++k) {
                Rat d1 = (V[k + 1] - V[k]) / (xi[k] - xi[k - 1]);
                Rat d2 = (V[k + 2] - V[k + 1]) / (xi[k + 1] - xi[k]);
                if (!(d1 < d2)) bad_edge = k + 1;
            }
            if (bad_edge >= 0) break;
        }
        if (bad_edge < 0) {
            SynthesisParams out;
            out.cgap = cgap;
            out.terminal = sv.term;
            for (int e = sv.lo(); e <= m; ++e) {
                out.p.push_back(to_ll(p[e]));
                std::vector<long long> row;
                for (int j = 0; j < n; ++j) row.push_back(to_ll(b[e][j]));
                out.b.push_back(std::move(row));
            }
            return out;
        }
        mult[bad_edge] = used[bad_edge] * 2;
    }
    throw std::runtime_error("choose_params: could not reach target convexity in 64 doublings");
}

std::vector<CoefficientSolution> tildeU_coefficients(
    const Spine& S, const SynthesisParams& params) {
    SpineView sv(S);
    const int m = sv.m;
    if (m == 0)
        throw std::invalid_argument("tildeU_coefficients: spine has no vertices (no gauge point)");
    const int n = static_cast<int>(S.dirs.front().size());
    const std::size_t E = S.dirs.size();
    if (params.terminal != sv.term || params.p.size() != E || params.b.size() != E)
        throw std::invalid_argument("tildeU_coefficients: parameter shape mismatch");
    std::vector<Rat> p(m + 1, Rat(0));
    for (int e = sv.lo(); e <= m; ++e) {
        p[e] = Rat(params.p[e - sv.lo()]);
        for (int j = 0; j < n; ++j)
            if (Rat(params.b[e - sv.lo()][j]) * Rat(sv.a(e)[j]) != p[e])
                throw std::logic_error("tildeU_coefficients: inconsistent slope table");
    }
    Chain ch = spine_chain(sv, p);
    auto bof = [&](int e, int j) { return Rat(params.b[e - sv.lo()][j - 1]); };
    std::vector<CoefficientSolution> out;
    for (int k = 1; k <= n; ++k)
        for (int l = k + 1; l <= n; ++l) {
            CoefficientSolution cs;
            cs.k = k;
            cs.l = l;
            cs.anchor = Rat(0);
            cs.Ak.assign(E, Rat(0));
            cs.Al.assign(E, Rat(0));
            cs.B.assign(E, std::vector<Rat>(n, Rat(0)));
            cs.C.assign(E, std::vector<Rat>(n, Rat(0)));
            for (int e = sv.lo(); e <= m; ++e) {
                const std::size_t idx = e - sv.lo();
                const int anc = std::max(e, 1);
                cs.Ak[idx] = ch.V[anc] - bof(e, k) * ch.u[anc][k - 1];
                cs.Al[idx] = ch.V[anc] - bof(e, l) * ch.u[anc][l - 1];
                for (int j = 1; j <= n; ++j) {
                    if (j == k || j == l) continue;
                    if (e >= 1)
                        cs.B[idx][j - 1] =
                            ch.V[e] - (bof(e, j) - j) * ch.u[e][j - 1];
                    if (e <= m - 1)
                        cs.C[idx][j - 1] =
                            ch.V[e + 1] - (bof(e, j) + j) * ch.u[e + 1][j - 1];
                }
            }
            out.push_back(std::move(cs));
        }
    return out;
}

Ideal synthesize_tildeU(const TropCurve& C, const SynthesisParams& params) {
    TropCurve K = canonicalize(C);
    const int n = K.dim;
    Spine S = spine(K);
    SpineView sv(S);
    Ideal I;
    if (sv.m == 0) {
        // A single line: one binomial per coordinate pair, gauge 0 at the
        // anchor point of the line.
        if (K.lines.empty() || params.p.empty())
            throw std::invalid_argument("synthesize_tildeU: malformed line input");
        const Point& q = K.lines.front().point;
        const Dir a = K.lines.front().dir;
        for (int k = 1; k <= n; ++k)
            for (int l = k + 1; l <= n; ++l) {
                Rat bk = Rat(params.p[0]) / Rat(a[k - 1]);
                Rat bl = Rat(params.p[0]) / Rat(a[l - 1]);
                Exps ek(n, 0), el(n, 0);
                ek[k - 1] = rat_ll(bk);
                el[l - 1] = rat_ll(bl);
                TropPolynomial f(n, {{-bk * q[k - 1], ek}, {-bl * q[l - 1], el}});
                I.generators.push_back(f);
            }
    } else {
        auto sols = tildeU_coefficients(S, params);
        const std::size_t E = S.dirs.size();
        for (const auto& cs : sols) {
            std::vector<Monomial> mons;
            if (params.terminal) mons.push_back({cs.anchor, Exps(n, 0)});
            for (std::size_t idx = 0; idx < E; ++idx) {
                const int e = static_cast<int>(idx) + sv.lo();
                Exps ek(n, 0), el(n, 0);
                ek[cs.k - 1] = params.b[idx][cs.k - 1];
                el[cs.l - 1] = params.b[idx][cs.l - 1];
                mons.push_back({cs.Ak[idx], ek});
                mons.push_back({cs.Al[idx], el});
                for (int j = 1; j <= n; ++j) {
                    if (j == cs.k || j == cs.l) continue;
                    if (e >= 1) {
                        Exps eb(n, 0);
                        eb[j - 1] = params.b[idx][j - 1] - j;
                        mons.push_back({cs.B[idx][j - 1], eb});
                    }
                    if (e <= sv.m - 1) {
                        Exps ec(n, 0);
                        ec[j - 1] = params.b[idx][j - 1] + j;
                        mons.push_back({cs.C[idx][j - 1], ec});
                    }
                }
            }
            I.generators.push_back(TropPolynomial(n, mons));
        }
    }
    for (const auto& f : I.generators)
        if (essential_monomials_lp(f).size() != f.monomials().size())
            throw std::logic_error("synthesize_tildeU: non-essential monomial");
    for (const Point& pt : covering_samples(K, true))
        if (!membership(I, pt))
            throw std::logic_error("synthesize_tildeU: curve sample escapes the hull");
    return I;
}

Ideal synthesize_tildeU_red(const TropCurve& C, const SynthesisParams& params) {
    TropCurve K = canonicalize(C);
    const int n = K.dim;
    Ideal I = synthesize_tildeU(K, params);
    Spine S = spine(K);
    SpineView sv(S);
    const int m = sv.m;
    if (m == 0) return I;
    std::vector<Rat> p(m + 1, Rat(0));
    for (int e = sv.lo(); e <= m; ++e) p[e] = Rat(params.p[e - sv.lo()]);
    std::vector<std::vector<std::set<int>>> cells(m + 1);
    for (int i = 1; i <= m; ++i)
        cells[i] = cone_cells(K, vertex_index(K, sv.u(i)));
    std::vector<std::pair<int, std::set<int>>> needed;
    for (int i = 1; i <= m; ++i)
        for (int mask = 1; mask < (1 << n) - 1; ++mask) {
            std::set<int> Kset;
            for (int j = 1; j <= n; ++j)
                if (mask & (1 << (j - 1))) Kset.insert(j);
            bool covered = false;
            for (const auto& J : cells[i])
                if (std::includes(J.begin(), J.end(), Kset.begin(), Kset.end()))
                    covered = true;
            if (!covered) needed.emplace_back(i, std::move(Kset));
        }
    for (const auto& [i, Kset] : needed)
        I.generators.push_back(exclusion_poly(K, sv, p, i, Kset, cells));
    // Ideal-level exclusion replay: no retained cell or curve sample may be
    // cut away, every excluded cell must be.
    for (const auto& [i, Kset] : needed)
        for (const Point& pt : cell_samples(sv.u(i), Kset))
            if (membership(I, pt))
                throw std::logic_error("synthesize_tildeU_red: excluded cell not cut");
    return I;
}

namespace {

std::string point_str(const Point& p) {
    std::string s = "(";
    for (std::size_t c = 0; c < p.size(); ++c) {
        if (c) s += ", ";
        s += rat_to_string(p[c]);
    }
    return s + ")";
}

std::string witness_message(const char* who, const AdditivityCertificate& cert) {
    std::string msg = std::string(who) + ": the set is not additive";
    if (cert.witness) {
        Point mx = cert.witness->first;
        for (std::size_t c = 0; c < mx.size(); ++c)
            mx[c] = std::max(mx[c], cert.witness->second[c]);
        msg += "; witness " + point_str(cert.witness->first) + " (+) " +
               point_str(cert.witness->second) + " = " + point_str(mx) +
               " escapes";
    }
    return msg;
}

// The pair-cell generator F = f(l_{j1}, l_{j2}) (+) g(l_{j3}) for the cone
// cell J = {j1, j2} at spine vertex i, built from the surgered curve W_{i,J};
// non-terminal cell trees additionally require the companion projection.
void append_pair_gens(Ideal& I, const TropCurve& K, const SpineView& sv, int i,
                      const std::set<int>& J,
                      const std::vector<std::vector<std::set<int>>>& cells,
                      int boost_level,
                      const std::function<void(int)>& emit_projection) {
    const int m = sv.m;
    const int j1 = *J.begin(), j2 = *std::next(J.begin());
    const int j3 = 6 - j1 - j2;
    const int axA = j1 - 1, axB = j2 - 1, axC = j3 - 1;
    const Point um1 = padd(sv.u(m), sv.a(m), Rat(1));

    // W_{i,J}: split the top ray at the phantom vertex (with its three
    // negative axis rays); above i, replace the open J-quadrant parts by the
    // two negative axis rays.
    std::vector<Piece> wp;
    for (const Piece& pc : curve_pieces(K)) {
        if (pc.kind == Piece::Kind::ray && pc.p == sv.u(m) && pc.d == sv.a(m)) {
            wp.push_back({Piece::Kind::segment, pc.p, pc.d, Rat(1), pc.weight});
            wp.push_back({Piece::Kind::ray, um1, pc.d, Rat(0), pc.weight});
            continue;
        }
        bool dropped = false;
        if (pc.kind != Piece::Kind::line && pc.d[axC] == 0) {
            for (int k = i + 1; k <= m && !dropped; ++k) {
                const Point& uk = sv.u(k);
                if (pc.p[axC] != uk[axC]) continue;
                bool closed = pc.p[axA] <= uk[axA] && pc.p[axB] <= uk[axB];
                if (closed) {
                    if (pc.kind == Piece::Kind::segment) {
                        Point q = padd(pc.p, pc.d, pc.tmax);
                        closed = q[axA] <= uk[axA] && q[axB] <= uk[axB];
                    } else {
                        closed = pc.d[axA] <= 0 && pc.d[axB] <= 0;
                    }
                }
                if (!closed) continue;
                Point probe = pc.kind == Piece::Kind::segment
                                  ? padd(pc.p, pc.d, pc.tmax / 2)
                                  : padd(pc.p, pc.d, Rat(1));
                if (probe[axA] < uk[axA] && probe[axB] < uk[axB]) dropped = true;
            }
        }
        if (!dropped) wp.push_back(pc);
    }
    for (int k = i + 1; k <= m; ++k)
        for (int ax : {axA, axB}) {
            Dir d(3, 0);
            d[ax] = -1;
            wp.push_back({Piece::Kind::ray, sv.u(k), d, Rat(0), 1});
        }
    for (int ax = 0; ax < 3; ++ax) {
        Dir d(3, 0);
        d[ax] = -1;
        wp.push_back({Piece::Kind::ray, um1, d, Rat(0), 1});
    }
    TropCurve W = pieces_to_curve(3, wp);

    // V-hat: the projected J-cell part of U with a positive ray attached.
    auto cuts = cut_sets(K, static_cast<std::size_t>(i - 1));
    const TropCurve* part = nullptr;
    for (const auto& cu : cuts)
        if (cu.J == J) part = &cu.part;
    if (!part) throw std::logic_error("append_pair_gens: cone cell lost by cut_sets");
    TropCurve Vh = project_drop(*part, axC);
    const Point pui = drop_coord(sv.u(i), axC);
    {
        auto pcs = curve_pieces(Vh);
        pcs.push_back({Piece::Kind::ray, pui, Dir{1, 1}, Rat(0), 1});
        Vh = pieces_to_curve(2, pcs);
    }
    Spine SV;
    try {
        SV = spine(Vh);
    } catch (const std::invalid_argument& ex) {
        throw SynthRetry(std::string("append_pair_gens: cell tree shape: ") + ex.what());
    }
    const bool termv = SV.terminal;

    std::vector<Rat> h(m + 2);
    std::vector<Point> pu(m + 2);
    for (int k = 1; k <= m; ++k) {
        h[k] = sv.u(k)[axC];
        pu[k] = drop_coord(sv.u(k), axC);
    }
    h[m + 1] = um1[axC];
    pu[m + 1] = drop_coord(um1, axC);

    Point vlow;  // v_1 (terminal) or w (non-terminal)
    int s = 0;
    std::vector<Point> anchors;
    std::vector<Rat> xs;
    if (termv) {
        if (SV.vertices.empty())
            throw SynthRetry("append_pair_gens: terminal cell tree without a vertex");
        vlow = SV.vertices.front();
        if (vlow == pui)
            throw SynthRetry("append_pair_gens: cell tree bottom coincides with the apex");
        for (int k = i - 1; k >= 1 && s == 0; --k)
            if (pu[k] != vlow && leq_pt(pu[k], vlow)) s = k;
        for (int k = 1; k <= s; ++k) {
            anchors.push_back(pu[k]);
            xs.push_back(h[k]);
        }
    } else {
        TropCurve PU = project_drop(K, axC);
        Spine SU;
        try {
            SU = spine(PU);
        } catch (const std::invalid_argument& ex) {
            throw SynthRetry(std::string("append_pair_gens: projection shape: ") + ex.what());
        }
        if (SU.terminal)
            throw SynthRetry("append_pair_gens: projection terminal under a non-terminal cell tree");
        Point low = pu[1];
        if (!SU.vertices.empty() && leq_pt(SU.vertices.front(), pu[1]))
            low = SU.vertices.front();
        vlow = padd(low, SU.dirs.front(), Rat(-1));
    }
    anchors.push_back(vlow);
    xs.push_back(h[i]);
    for (int k = i + 1; k <= m + 1; ++k) {
        anchors.push_back(pu[k]);
        xs.push_back(h[k]);
    }

    TropCurve PW = project_drop(W, axC);
    TropPolynomial f2 = plane_poly_for_set(PW, anchors, xs, true, boost_level);
    for (int sc = 0;; ++sc) {
        try {
            std::vector<Rat> F(m + 2, Rat(0));
            for (int k = 1; k <= m + 1; ++k)
                F[k] = evaluate(f2, pu[k]).value.value();
            Rat Fv = evaluate(f2, vlow).value.value();
            GPoly g = termv ? build_g_terminal(F, Fv, h, i, s, m)
                            : build_g_nonterminal(F, Fv, h, i, m);
            TropPolynomial FF = combine_fg(f2, axA, axB, axC, g);
            for (const Point& pt : covering_samples(K, true))
                if (!membership(FF, pt))
                    throw SynthRetry("append_pair_gens: curve sample escapes the combined locus");
            for (int k = 1; k <= m; ++k)
                for (const auto& Jr : cells[k]) {
                    if (k == i && Jr == J) continue;  // the cell being cut
                    for (const Point& pt : cell_samples(sv.u(k), Jr))
                        if (!membership(FF, pt))
                            throw SynthRetry("append_pair_gens: retained cell sample escapes");
                }
            I.generators.push_back(FF);
            if (!termv) emit_projection(axC);
            return;
        } catch (const SynthRetry&) {
            if (sc >= 12) throw;
            f2 = scale_poly(f2, 2);
        }
    }
}

}  // namespace

TropPolynomial synthesize_plane(const TropCurve& C) {
    TropCurve K = canonicalize(C);
    if (K.dim != 2)
        throw std::invalid_argument("synthesize_plane: two variables required");
    auto cert = is_additive(K);
    if (cert.verdict == AdditivityCertificate::Verdict::not_additive)
        throw std::invalid_argument(witness_message("synthesize_plane", cert));
    if (K.vertices.empty()) {
        if (!K.lines.empty() && K.isolated_points.empty())
            return synthesize_plane_lines(K);
        throw std::invalid_argument(
            "synthesize_plane: a finite point set is not a simple corner locus");
    }
    TropCurve KK = K;
    if (!balancing_check(KK).balanced) {
        auto bs = balancing_solve(KK);
        if (bs.status != BalancingSolution::Status::found)
            throw std::invalid_argument("synthesize_plane: weights cannot be balanced");
        for (std::size_t e = 0; e < KK.edges.size(); ++e)
            KK.edges[e].weight = bs.edge_weights[e];
        for (std::size_t r = 0; r < KK.rays.size(); ++r)
            KK.rays[r].weight = bs.ray_weights[r];
        KK = canonicalize(KK);
    }
    PlaneData D = plane_shape(KK);
    std::vector<Rat> P(D.m + 1, Rat(0)), Q(D.m + 1, Rat(0));
    for (int e = D.lo(); e <= D.m; ++e) {
        P[e] = Rat(D.a[e][1]) * D.tw[e];
        Q[e] = Rat(D.a[e][0]) * D.tw[e];
    }
    for (int iv = 1; iv <= D.m; ++iv) {
        Rat prevp = iv == 1 && D.term ? Rat(0) : P[iv - 1];
        Rat prevq = iv == 1 && D.term ? Rat(0) : Q[iv - 1];
        if (P[iv] - prevp != Rat(D.wv[iv]) || Q[iv] - prevq != Rat(D.wh[iv]))
            throw std::logic_error("synthesize_plane: slope jumps contradict balancing");
    }
    TropPolynomial f = assemble_plane(D, P, Q);
    if (curve_from_poly2(f) != KK)
        throw std::logic_error("synthesize_plane: canonical round trip failed");
    return f;
}

Ideal synthesize_space_curve(const TropCurve& C) {
    TropCurve K = canonicalize(C);
    if (K.dim != 3)
        throw std::invalid_argument("synthesize_space_curve: three variables required");
    auto cert = is_additive(K);
    if (cert.verdict == AdditivityCertificate::Verdict::not_additive)
        throw std::invalid_argument(witness_message("synthesize_space_curve", cert));
    Spine S = spine(K);
    SpineView sv(S);
    std::vector<std::vector<std::set<int>>> cells(sv.m + 1);
    for (int i = 1; i <= sv.m; ++i)
        cells[i] = cone_cells(K, vertex_index(K, sv.u(i)));
    std::string last = "sampled verification failed";
    for (int boost = 0; boost <= 5; ++boost) {
        try {
            SynthesisParams params = choose_params(S, {}, 16);
            Ideal I = synthesize_tildeU_red(K, params);
            std::set<int> emitted;
            auto emit_projection = [&](int drop_ax) {
                if (!emitted.insert(drop_ax).second) return;
                TropPolynomial f2 =
                    plane_poly_for_set(project_drop(K, drop_ax), {}, {}, false, boost);
                const int ax0 = drop_ax == 0 ? 1 : 0;
                const int ax1 = drop_ax == 2 ? 1 : 2;
                I.generators.push_back(embed2(f2, ax0, ax1, 3));
            };
            for (int i = 1; i <= sv.m; ++i)
                for (const auto& J : cells[i]) {
                    if (J.size() == 1) {
                        const int keep = *J.begin();
                        emit_projection(keep == 3 ? 1 : 2);  // largest non-J axis
                    } else if (J.size() == 2) {
                        append_pair_gens(I, K, sv, i, J, cells, boost, emit_projection);
                    }
                }
            auto rep = verify_ideal(I, K, 600, 0xC0FFEEull + boost);
            if (rep.pass()) return I;
        } catch (const SynthRetry& ex) {
            last = ex.what();
        }
    }
    throw std::runtime_error(std::string("synthesize_space_curve: ") + last);
}

Ideal synthesize_affine_subspace(const Point& point,
                                 const std::vector<Dir>& basis) {
    const int n = static_cast<int>(point.size());
    if (n == 0)
        throw std::invalid_argument("synthesize_affine_subspace: empty ambient space");
    for (const Dir& d : basis)
        if (static_cast<int>(d.size()) != n)
            throw std::invalid_argument(
                "synthesize_affine_subspace: direction length mismatch");
    const int k = static_cast<int>(basis.size());
    detail::Mat M;
    for (const Dir& d : basis) {
        detail::Vec row;
        for (long long v : d) row.push_back(Rat(v));
        M.push_back(row);
    }
    if (k > 0 && detail::mat_rank(M) != static_cast<std::size_t>(k))
        throw std::invalid_argument("synthesize_affine_subspace: basis not independent");
    if (k >= n)
        throw std::invalid_argument(
            "synthesize_affine_subspace: the whole space is not a corner locus");
    if (k == 0) {
        std::vector<TropPolynomial> gens;
        for (int i = 0; i < n; ++i) {
            Exps e(n, 0);
            e[i] = 1;
            gens.push_back(TropPolynomial(
                n, {{Rat(0), e}, {point[i], Exps(n, 0)}}));
        }
        return Ideal{gens};
    }
    // Try every coordinate k-subset S whose minor is nonsingular; each j
    // outside S gets the primitive normal of the basis restricted to S+{j},
    // which must be a (<= 2)-term opposite-sign vector to stay simple.
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != k) continue;
        {
            detail::Mat Ms;
            for (const Dir& d : basis) {
                detail::Vec row;
                for (int c = 0; c < n; ++c)
                    if (mask & (1u << c)) row.push_back(Rat(d[c]));
                Ms.push_back(row);
            }
            if (detail::mat_rank(Ms) != static_cast<std::size_t>(k)) continue;
        }
        std::vector<TropPolynomial> gens;
        bool ok = true;
        for (int j = 0; j < n && ok; ++j) {
            if (mask & (1u << j)) continue;
            std::vector<int> T;
            for (int c = 0; c < n; ++c)
                if (c == j || (mask & (1u << c))) T.push_back(c);
            detail::Mat Mt;
            for (const Dir& d : basis) {
                detail::Vec row;
                for (int c : T) row.push_back(Rat(d[c]));
                Mt.push_back(row);
            }
            detail::Mat ns = detail::nullspace(Mt, T.size());
            if (ns.size() != 1) {
                ok = false;
                break;
            }
            // clear denominators, reduce, canonical sign
            BigInt den = 1;
            for (const Rat& v : ns[0])
                den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(v));
            std::vector<BigInt> nu;
            BigInt g = 0;
            for (const Rat& v : ns[0]) {
                BigInt z = boost::multiprecision::numerator(Rat(v * den));
                nu.push_back(z);
                g = boost::multiprecision::gcd(g, boost::multiprecision::abs(z));
            }
            std::vector<int> support;
            for (std::size_t c = 0; c < nu.size(); ++c) {
                nu[c] /= g;
                if (nu[c] != 0) support.push_back(static_cast<int>(c));
            }
            if (support.empty() || support.size() > 2) {
                ok = false;
                break;
            }
            if (nu[support[0]] < 0)
                for (BigInt& z : nu) z = -z;
            if (support.size() == 1) {
                const int al = T[support[0]];
                Exps e(n, 0);
                e[al] = to_ll(nu[support[0]]);
                Rat c0 = Rat(e[al]) * point[al];
                gens.push_back(TropPolynomial(n, {{Rat(0), e}, {c0, Exps(n, 0)}}));
                continue;
            }
            if (nu[support[1]] > 0) {
                ok = false;  // same-sign pair: not a simple binomial locus
                break;
            }
            const int al = T[support[0]], be = T[support[1]];
            Exps ea(n, 0), eb(n, 0);
            ea[al] = to_ll(nu[support[0]]);
            eb[be] = to_ll(-nu[support[1]]);
            Rat c0 = Rat(ea[al]) * point[al] - Rat(eb[be]) * point[be];
            gens.push_back(TropPolynomial(n, {{Rat(0), ea}, {c0, eb}}));
        }
        if (ok && static_cast<int>(gens.size()) == n - k) return Ideal{gens};
    }
    throw std::invalid_argument(
        "synthesize_affine_subspace: no coordinate ordering yields simple binomials");
}

SimpleIdealReport verify_ideal(const Ideal& I, const TropCurve& C,
                               int off_samples, std::uint64_t seed) {
    SimpleIdealReport rep;
    rep.generators = I;
    rep.simple = is_simple(I);
    TropCurve K = canonicalize(C);
    auto ons = covering_samples(K, false);
    rep.on_curve_total = static_cast<int>(ons.size());
    for (const Point& pt : ons) {
        if (membership(I, pt))
            ++rep.on_curve_pass;
        else
            rep.witnesses.push_back(pt);
    }

    const int n = K.dim;
    Point lo(n, Rat(-1)), hi(n, Rat(1));
    bool first = true;
    auto grow = [&](const Point& p) {
        for (int c = 0; c < n; ++c) {
            if (first) {
                lo[c] = hi[c] = p[c];
            } else {
                lo[c] = std::min(lo[c], p[c]);
                hi[c] = std::max(hi[c], p[c]);
            }
        }
        first = false;
    };
    for (const Point& p : K.vertices) grow(p);
    for (const auto& r : K.rays) grow(padd(K.vertices[r.vertex], r.dir, Rat(1)));
    for (const auto& l : K.lines) {
        grow(padd(l.point, l.dir, Rat(2)));
        grow(padd(l.point, l.dir, Rat(-2)));
    }
    for (const Point& p : K.isolated_points) grow(p);

    std::mt19937_64 rng(seed);
    std::vector<BigInt> lo8(n), range8(n);
    for (int c = 0; c < n; ++c) {
        Rat half = (hi[c] - lo[c]) / 2 + 1;
        lo8[c] = rat_floor((lo[c] - half) * 8);
        BigInt hi8 = rat_floor((hi[c] + half) * 8) + 1;
        range8[c] = hi8 - lo8[c] + 1;
    }
    for (int attempt = 0;
         rep.off_curve_total < off_samples && attempt < 100 * off_samples;
         ++attempt) {
        Point pt(n);
        for (int c = 0; c < n; ++c) {
            BigInt z = lo8[c] + BigInt(rng() % static_cast<std::uint64_t>(range8[c]));
            pt[c] = Rat(z) / 8;
        }
        if (on_curve(K, pt)) continue;
        ++rep.off_curve_total;
        if (!membership(I, pt))
            ++rep.off_curve_pass;
        else
            rep.witnesses.push_back(pt);
    }

    if (n == 2 && !I.generators.empty())
        rep.exact_equality =
            strip_weights(intersect_plane(I)) == strip_weights(K);
    return rep;
}

std::string report_to_json(const SimpleIdealReport& rep) {
    std::ostringstream os;
    os << "{\"generators\":[";
    for (std::size_t i = 0; i < rep.generators.generators.size(); ++i) {
        if (i) os << ",";
        os << '"' << serialize(rep.generators.generators[i]) << '"';
    }
    os << "],\"simple\":" << (rep.simple ? "true" : "false");
    os << ",\"on_curve_pass\":\"" << rep.on_curve_pass << "/"
       << rep.on_curve_total << "\"";
    os << ",\"off_curve_pass\":\"" << rep.off_curve_pass << "/"
       << rep.off_curve_total << "\"";
    if (rep.exact_equality)
        os << ",\"exact_equality\":" << (*rep.exact_equality ? "true" : "false");
    os << ",\"witnesses\":[";
    for (std::size_t i = 0; i < rep.witnesses.size(); ++i) {
        if (i) os << ",";
        os << "[";
        for (std::size_t c = 0; c < rep.witnesses[i].size(); ++c) {
            if (c) os << ",";
            os << '"' << rat_to_string(rep.witnesses[i][c]) << '"';
        }
        os << "]";
    }
    os << "]}";
    return os.str();
}

}  // namespace trop
