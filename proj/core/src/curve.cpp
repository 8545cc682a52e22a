#include "trop/curve.hpp"

#include "geom_util.hpp"
#include "trop/newton.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <variant>

namespace trop {

using detail::Mat;
using detail::Vec;

namespace {

BigInt gcd_big(BigInt a, BigInt b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        BigInt t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace

Dir primitive(Dir d) {
    long long g = 0;
    for (long long x : d) g = std::gcd(g, x < 0 ? -x : x);
    if (g == 0) throw std::invalid_argument("primitive: zero vector");
    for (auto& x : d) x /= g;
    return d;
}

Dir primitive_signed(Dir d) {
    d = primitive(std::move(d));
    for (long long x : d) {
        if (x > 0) break;
        if (x < 0) {
            for (auto& y : d) y = -y;
            break;
        }
    }
    return d;
}

namespace {

// b - a = t * dir with dir primitive integer and t > 0.
std::pair<Dir, Rat> primitive_of_diff(const Point& a, const Point& b) {
    BigInt L = 1;
    std::vector<Rat> v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        v[i] = b[i] - a[i];
        L = L / gcd_big(L, denominator(v[i])) * denominator(v[i]);
    }
    std::vector<BigInt> w(a.size());
    BigInt g = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        w[i] = numerator(v[i]) * (L / denominator(v[i]));
        g = gcd_big(g, w[i]);
    }
    if (g == 0) throw std::invalid_argument("primitive_of_diff: equal points");
    Dir d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        d[i] = static_cast<long long>(w[i] / g);
    return {std::move(d), Rat(g, L)};
}

Point point_at(const Piece& pc, const Rat& t) {
    Point u(pc.p.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = pc.p[i] + t * pc.d[i];
    return u;
}

// Parameter interval of a piece: [0, tmax], [0, inf) or (-inf, inf).
struct Ival {
    std::optional<Rat> lo, hi;
};

Ival piece_interval(const Piece& pc) {
    switch (pc.kind) {
        case Piece::Kind::segment: return {Rat(0), pc.tmax};
        case Piece::Kind::ray: return {Rat(0), std::nullopt};
        default: return {std::nullopt, std::nullopt};
    }
}

std::optional<Piece> piece_from_interval(const Point& p, const Dir& d,
                                         const Ival& iv, long long weight) {
    Piece pc;
    pc.d = d;
    pc.weight = weight;
    if (iv.lo && iv.hi) {
        if (*iv.lo > *iv.hi) return std::nullopt;
        if (*iv.lo == *iv.hi) return std::nullopt;  // a point, not a piece
        pc.kind = Piece::Kind::segment;
        Piece tmp{Piece::Kind::line, p, d, 0, weight};
        pc.p = point_at(tmp, *iv.lo);
        pc.tmax = *iv.hi - *iv.lo;
    } else if (iv.lo) {
        pc.kind = Piece::Kind::ray;
        Piece tmp{Piece::Kind::line, p, d, 0, weight};
        pc.p = point_at(tmp, *iv.lo);
    } else if (iv.hi) {
        pc.kind = Piece::Kind::ray;
        Piece tmp{Piece::Kind::line, p, d, 0, weight};
        pc.p = point_at(tmp, *iv.hi);
        for (auto& x : pc.d) x = -x;
    } else {
        pc.kind = Piece::Kind::line;
        pc.p = p;
    }
    return pc;
}

bool in_interval(const Ival& iv, const Rat& t) {
    if (iv.lo && t < *iv.lo) return false;
    if (iv.hi && t > *iv.hi) return false;
    return true;
}

// Parameter of u on the line p + t d, if it lies there.
std::optional<Rat> line_param(const Point& p, const Dir& d, const Point& u) {
    std::size_t j = 0;
    while (j < d.size() && d[j] == 0) ++j;
    Rat t = (u[j] - p[j]) / d[j];
    for (std::size_t i = 0; i < d.size(); ++i)
        if (u[i] - p[i] != t * d[i]) return std::nullopt;
    return t;
}

using IsectResult = std::variant<std::monostate, Point, Piece>;

IsectResult piece_intersect(const Piece& A, const Piece& B) {
    const std::size_t n = A.p.size();
    // Collinear directions?
    bool parallel = true;
    for (std::size_t i = 0; i < n && parallel; ++i)
        for (std::size_t j = i + 1; j < n && parallel; ++j)
            if (Rat(A.d[i]) * B.d[j] != Rat(A.d[j]) * B.d[i]) parallel = false;
    if (parallel) {
        auto t0 = line_param(A.p, A.d, B.p);
        if (!t0) return std::monostate{};
        // B.d = sigma A.d with sigma = +-1 (both primitive).
        int sigma = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (A.d[i] != 0) { sigma = (B.d[i] == A.d[i]) ? 1 : -1; break; }
        Ival ib = piece_interval(B);
        // Map B's interval into A's parameter: t = t0 + sigma * s.
        Ival ib_in_a;
        if (sigma == 1) {
            if (ib.lo) ib_in_a.lo = *t0 + *ib.lo;
            if (ib.hi) ib_in_a.hi = *t0 + *ib.hi;
        } else {
            if (ib.hi) ib_in_a.lo = *t0 - *ib.hi;
            if (ib.lo) ib_in_a.hi = *t0 - *ib.lo;
        }
        Ival ia = piece_interval(A);
        Ival r;
        r.lo = ia.lo ? (ib_in_a.lo ? std::optional(std::max(*ia.lo, *ib_in_a.lo))
                                   : ia.lo)
                     : ib_in_a.lo;
        r.hi = ia.hi ? (ib_in_a.hi ? std::optional(std::min(*ia.hi, *ib_in_a.hi))
                                   : ia.hi)
                     : ib_in_a.hi;
        if (r.lo && r.hi && *r.lo > *r.hi) return std::monostate{};
        if (r.lo && r.hi && *r.lo == *r.hi) return point_at(A, *r.lo);
        auto pc = piece_from_interval(A.p, A.d, r, 1);
        if (!pc) return std::monostate{};
        return *pc;
    }
    // Transversal: solve A.p + t A.d = B.p + s B.d.
    Mat M(n, Vec(2));
    Vec rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        M[i][0] = A.d[i];
        M[i][1] = Rat(-B.d[i]);
        rhs[i] = B.p[i] - A.p[i];
    }
    auto sol = detail::lin_solve(M, rhs);
    if (!sol) return std::monostate{};
    // lin_solve only guarantees consistency; verify.
    for (std::size_t i = 0; i < n; ++i)
        if (Rat(A.d[i]) * (*sol)[0] - Rat(B.d[i]) * (*sol)[1] != rhs[i])
            return std::monostate{};
    if (!in_interval(piece_interval(A), (*sol)[0]) ||
        !in_interval(piece_interval(B), (*sol)[1]))
        return std::monostate{};
    return point_at(A, (*sol)[0]);
}

}  // namespace

std::vector<Piece> curve_pieces(const TropCurve& C) {
    std::vector<Piece> out;
    for (const CurveEdge& e : C.edges) {
        auto [d, t] = primitive_of_diff(C.vertices[e.a], C.vertices[e.b]);
        out.push_back(Piece{Piece::Kind::segment, C.vertices[e.a], std::move(d),
                            t, e.weight});
    }
    for (const CurveRay& r : C.rays)
        out.push_back(
            Piece{Piece::Kind::ray, C.vertices[r.vertex], r.dir, 0, r.weight});
    for (const CurveLine& l : C.lines)
        out.push_back(Piece{Piece::Kind::line, l.point, l.dir, 0, l.weight});
    return out;
}

bool on_piece(const Piece& pc, const Point& u) {
    auto t = line_param(pc.p, pc.d, u);
    return t && in_interval(piece_interval(pc), *t);
}

bool on_curve(const TropCurve& C, const Point& u) {
    for (const Point& v : C.vertices)
        if (v == u) return true;
    for (const Point& v : C.isolated_points)
        if (v == u) return true;
    for (const Piece& pc : curve_pieces(C))
        if (on_piece(pc, u)) return true;
    return false;
}

TropCurve canonicalize(const TropCurve& C) {
    const int n = C.dim;
    std::vector<Piece> pieces = curve_pieces(C);
    std::vector<Point> loose = C.isolated_points;
    // Vertices with no incident 1-cells degenerate to isolated points.
    {
        std::vector<bool> used(C.vertices.size(), false);
        for (const CurveEdge& e : C.edges) used[e.a] = used[e.b] = true;
        for (const CurveRay& r : C.rays) used[r.vertex] = true;
        for (std::size_t i = 0; i < C.vertices.size(); ++i)
            if (!used[i]) loose.push_back(C.vertices[i]);
    }

    // Split every piece at every point where it meets an endpoint of any
    // piece or crosses another piece.
    std::vector<Point> candidates;
    for (const Piece& pc : pieces) {
        if (pc.kind != Piece::Kind::line) candidates.push_back(pc.p);
        if (pc.kind == Piece::Kind::segment)
            candidates.push_back(point_at(pc, pc.tmax));
    }
    for (std::size_t i = 0; i < pieces.size(); ++i)
        for (std::size_t j = i + 1; j < pieces.size(); ++j) {
            auto r = piece_intersect(pieces[i], pieces[j]);
            if (auto* pt = std::get_if<Point>(&r)) candidates.push_back(*pt);
            else if (auto* pp = std::get_if<Piece>(&r)) {
                if (pp->kind != Piece::Kind::line) candidates.push_back(pp->p);
                if (pp->kind == Piece::Kind::segment)
                    candidates.push_back(point_at(*pp, pp->tmax));
            }
        }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()),
                     candidates.end());

    struct Sub {
        Point a;                    // first endpoint or tail anchor
        std::optional<Point> b;     // second endpoint (absent for tails/lines)
        Dir d;                      // primitive, a -> b or tail direction
        long long weight;
        bool is_line = false;
    };
    std::vector<Sub> subs;
    for (const Piece& pc : pieces) {
        Ival iv = piece_interval(pc);
        std::vector<Rat> cuts;
        for (const Point& q : candidates) {
            auto t = line_param(pc.p, pc.d, q);
            if (t && in_interval(iv, *t)) cuts.push_back(*t);
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        if (cuts.empty()) {
            // No structure touches this piece; keep as is.
            if (pc.kind == Piece::Kind::line)
                subs.push_back({pc.p, std::nullopt, pc.d, pc.weight, true});
            else if (pc.kind == Piece::Kind::ray)
                subs.push_back({pc.p, std::nullopt, pc.d, pc.weight, false});
            else
                subs.push_back({pc.p, point_at(pc, pc.tmax), pc.d, pc.weight,
                                false});
            continue;
        }
        Dir neg = pc.d;
        for (auto& x : neg) x = -x;
        if (!iv.lo)  // line/backward tail before the first cut
            subs.push_back(
                {point_at(pc, cuts.front()), std::nullopt, neg, pc.weight, false});
        else if (*iv.lo < cuts.front())
            subs.push_back({point_at(pc, *iv.lo), point_at(pc, cuts.front()),
                            pc.d, pc.weight, false});
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            subs.push_back({point_at(pc, cuts[i]), point_at(pc, cuts[i + 1]),
                            pc.d, pc.weight, false});
        if (!iv.hi)
            subs.push_back(
                {point_at(pc, cuts.back()), std::nullopt, pc.d, pc.weight, false});
        else if (cuts.back() < *iv.hi)
            subs.push_back({point_at(pc, cuts.back()), point_at(pc, *iv.hi),
                            pc.d, pc.weight, false});
    }

    // Deduplicate overlapping subpieces (identical geometry after splitting).
    {
        std::map<std::pair<std::vector<std::pair<Point, std::optional<Point>>>,
                           Dir>,
                 std::size_t>
            seen;
        std::vector<Sub> dedup;
        auto key_of = [](const Sub& s) {
            Sub t = s;
            if (t.b && *t.b < t.a) {
                std::swap(t.a, *t.b);
                for (auto& x : t.d) x = -x;
            }
            if (t.is_line) {
                // Anchor at the foot of the perpendicular from the origin.
                Dir d = primitive_signed(t.d);
                Rat dd = 0, pd = 0;
                for (std::size_t i = 0; i < d.size(); ++i) {
                    dd += Rat(d[i]) * d[i];
                    pd += t.a[i] * d[i];
                }
                Rat tt = pd / dd;
                for (std::size_t i = 0; i < d.size(); ++i)
                    t.a[i] -= tt * d[i];
                t.d = d;
            }
            return std::make_pair(
                std::vector<std::pair<Point, std::optional<Point>>>{{t.a, t.b}},
                t.d);
        };
        for (const Sub& s : subs) {
            auto k = key_of(s);
            auto it = seen.find(k);
            if (it == seen.end()) {
                seen.emplace(std::move(k), dedup.size());
                Sub t = s;
                if (t.b && *t.b < t.a) {
                    std::swap(t.a, *t.b);
                    for (auto& x : t.d) x = -x;
                }
                dedup.push_back(std::move(t));
            } else {
                dedup[it->second].weight =
                    std::max(dedup[it->second].weight, s.weight);
            }
        }
        subs = std::move(dedup);
    }

    // Node incidence: a node is a true vertex unless it is a straight
    // degree-2 junction with equal weights.
    std::map<Point, std::vector<std::pair<std::size_t, int>>> inc;  // (sub, end)
    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (subs[i].is_line) continue;
        inc[subs[i].a].push_back({i, 0});
        if (subs[i].b) inc[*subs[i].b].push_back({i, 1});
    }
    auto outgoing_dir = [&](std::size_t i, int end) {
        Dir d = subs[i].d;
        if (end == 1)
            for (auto& x : d) x = -x;
        return d;
    };
    std::map<Point, bool> is_vertex;
    for (const auto& [p, lst] : inc) {
        if (lst.size() != 2) {
            is_vertex[p] = true;
            continue;
        }
        Dir d0 = outgoing_dir(lst[0].first, lst[0].second);
        Dir d1 = outgoing_dir(lst[1].first, lst[1].second);
        Dir neg = d1;
        for (auto& x : neg) x = -x;
        is_vertex[p] =
            !(d0 == neg && subs[lst[0].first].weight == subs[lst[1].first].weight);
    }

    // Walk maximal chains through non-vertex nodes.
    TropCurve R;
    R.dim = n;
    std::vector<bool> visited(subs.size(), false);
    std::map<Point, std::size_t> vindex;
    auto vertex_id = [&](const Point& p) {
        auto it = vindex.find(p);
        if (it != vindex.end()) return it->second;
        vindex[p] = R.vertices.size();
        R.vertices.push_back(p);
        return R.vertices.size() - 1;
    };
    struct ChainEnd {
        bool open = false;  // ray tail
        Point node;
        Dir tail_dir;
    };
    auto walk = [&](std::size_t start, int from_end) {
        // Walk away from (subs[start], end from_end) through straight nodes;
        // returns the chain end.
        std::size_t cur = start;
        int exit_end = 1 - from_end;
        for (;;) {
            visited[cur] = true;
            if (exit_end == 1 && !subs[cur].b)
                return ChainEnd{true, subs[cur].a, subs[cur].d};
            Point node = exit_end == 0 ? subs[cur].a : *subs[cur].b;
            if (is_vertex[node]) return ChainEnd{false, node, {}};
            auto& lst = inc[node];
            std::pair<std::size_t, int> other = lst[0];
            if (other.first == cur && other.second == exit_end) other = lst[1];
            cur = other.first;
            exit_end = 1 - other.second;
        }
    };
    std::vector<CurveLine> lines;
    for (std::size_t i = 0; i < subs.size(); ++i) {
        if (visited[i]) continue;
        if (subs[i].is_line) {
            visited[i] = true;
            Dir d = primitive_signed(subs[i].d);
            Rat dd = 0, pd = 0;
            for (std::size_t k = 0; k < d.size(); ++k) {
                dd += Rat(d[k]) * d[k];
                pd += subs[i].a[k] * d[k];
            }
            Point anchor = subs[i].a;
            Rat tt = pd / dd;
            for (std::size_t k = 0; k < d.size(); ++k) anchor[k] -= tt * d[k];
            lines.push_back({anchor, d, subs[i].weight});
            continue;
        }
        ChainEnd e0 = walk(i, 1);  // towards end 0
        ChainEnd e1 = walk(i, 0);  // towards end 1
        long long w = subs[i].weight;
        if (!e0.open && !e1.open) {
            std::size_t a = vertex_id(e0.node), b = vertex_id(e1.node);
            if (a > b) std::swap(a, b);
            R.edges.push_back({a, b, w});
        } else if (e0.open && e1.open) {
            // Two opposite tails fused through straight nodes: a full line.
            Dir d = primitive_signed(e1.tail_dir);
            Rat dd = 0, pd = 0;
            for (std::size_t k = 0; k < d.size(); ++k) {
                dd += Rat(d[k]) * d[k];
                pd += e1.node[k] * d[k];
            }
            Point anchor = e1.node;
            Rat tt = pd / dd;
            for (std::size_t k = 0; k < d.size(); ++k) anchor[k] -= tt * d[k];
            lines.push_back({anchor, d, w});
        } else {
            const ChainEnd& v = e0.open ? e1 : e0;
            const ChainEnd& o = e0.open ? e0 : e1;
            R.rays.push_back({vertex_id(v.node), o.tail_dir, w});
        }
    }
    R.lines = std::move(lines);

    // Isolated points: drop those covered by 1-cells, deduplicate.
    std::vector<Piece> final_pieces;
    {
        TropCurve tmp = R;
        final_pieces = curve_pieces(tmp);
    }
    std::sort(loose.begin(), loose.end());
    loose.erase(std::unique(loose.begin(), loose.end()), loose.end());
    for (const Point& p : loose) {
        bool covered = false;
        for (const Piece& pc : final_pieces)
            if (on_piece(pc, p)) { covered = true; break; }
        for (const Point& v : R.vertices)
            if (v == p) covered = true;
        if (!covered) R.isolated_points.push_back(p);
    }

    // Deterministic order: sort vertices and remap.
    std::vector<std::size_t> perm(R.vertices.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) {
        return R.vertices[x] < R.vertices[y];
    });
    std::vector<std::size_t> inv(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
    TropCurve S;
    S.dim = n;
    for (auto i : perm) S.vertices.push_back(R.vertices[i]);
    for (auto e : R.edges) {
        e.a = inv[e.a];
        e.b = inv[e.b];
        if (e.a > e.b) std::swap(e.a, e.b);
        S.edges.push_back(e);
    }
    for (auto r : R.rays) {
        r.vertex = inv[r.vertex];
        S.rays.push_back(r);
    }
    S.lines = R.lines;
    S.isolated_points = R.isolated_points;
    std::sort(S.edges.begin(), S.edges.end(),
              [](const CurveEdge& x, const CurveEdge& y) {
                  return std::tie(x.a, x.b, x.weight) <
                         std::tie(y.a, y.b, y.weight);
              });
    std::sort(S.rays.begin(), S.rays.end(),
              [](const CurveRay& x, const CurveRay& y) {
                  return std::tie(x.vertex, x.dir, x.weight) <
                         std::tie(y.vertex, y.dir, y.weight);
              });
    std::sort(S.lines.begin(), S.lines.end(),
              [](const CurveLine& x, const CurveLine& y) {
                  return std::tie(x.point, x.dir, x.weight) <
                         std::tie(y.point, y.dir, y.weight);
              });
    std::sort(S.isolated_points.begin(), S.isolated_points.end());
    return S;
}

TropCurve curve_from_poly2(const TropPolynomial& f) {
    if (f.nvars() != 2)
        throw std::invalid_argument("curve_from_poly2: nvars != 2");
    auto ess = essential_monomials(f);
    if (ess.size() < 2)
        throw std::invalid_argument(
            "curve_from_poly2: fewer than two essential monomials (empty corner locus)");
    NewtonSubdivision S = dual_subdivision(f);
    std::vector<Vec> pts;
    for (const auto& e : S.points) pts.push_back(detail::to_vec(e));
    int m = detail::affine_dim_points(pts);

    TropCurve C;
    C.dim = 2;
    auto lattice_length = [&](const Exps& a, const Exps& b) {
        long long g = 0;
        for (std::size_t i = 0; i < a.size(); ++i)
            g = std::gcd(g, std::llabs(a[i] - b[i]));
        return g;
    };
    if (m == 1) {
        for (const auto& cell : S.cells) {
            std::vector<Vec> cp;
            for (auto i : cell.points) cp.push_back(pts[i]);
            auto ext = detail::extreme_points(cp);
            const Exps& w1 = S.points[cell.points[ext[0]]];
            const Exps& w2 = S.points[cell.points[ext[1]]];
            Dir d = primitive_signed({-(w2[1] - w1[1]), w2[0] - w1[0]});
            // Anchor: normalize the support point onto the canonical foot.
            Point anchor = {cell.a[0], cell.a[1]};
            Rat dd = Rat(d[0]) * d[0] + Rat(d[1]) * d[1];
            Rat pd = anchor[0] * d[0] + anchor[1] * d[1];
            Rat t = pd / dd;
            anchor[0] -= t * d[0];
            anchor[1] -= t * d[1];
            C.lines.push_back({anchor, d, lattice_length(w1, w2)});
        }
        return canonicalize(C);
    }

    // m == 2: vertices dual to cells, 1-cells dual to subdivision edges.
    for (const auto& cell : S.cells) C.vertices.push_back({cell.a[0], cell.a[1]});
    std::map<std::vector<std::size_t>, std::vector<std::pair<std::size_t, Vec>>>
        edge_owners;  // facet tight set (global) -> (cell, outward normal)
    for (std::size_t ci = 0; ci < S.cells.size(); ++ci) {
        std::vector<Vec> cp;
        for (auto i : S.cells[ci].points) cp.push_back(pts[i]);
        for (const auto& fc : detail::facets_of(cp)) {
            std::vector<std::size_t> global;
            for (auto t : fc.tight) global.push_back(S.cells[ci].points[t]);
            std::sort(global.begin(), global.end());
            // facets_of orients normal.x <= offset on the cell; outward is
            // +normal.
            edge_owners[global].push_back({ci, fc.normal});
        }
    }
    for (const auto& [tight, owners] : edge_owners) {
        std::vector<Vec> fp;
        for (auto i : tight) fp.push_back(pts[i]);
        auto ext = detail::extreme_points(fp);
        const Exps& w1 = S.points[tight[ext[0]]];
        const Exps& w2 = S.points[tight[ext[1]]];
        long long len = lattice_length(w1, w2);
        if (owners.size() == 2) {
            C.edges.push_back({owners[0].first, owners[1].first, len});
        } else {
            // Boundary edge of the Newton polytope: ray in the direction of
            // the outer normal.
            const Vec& nr = owners[0].second;
            BigInt L = 1;
            for (const Rat& x : nr)
                L = L / gcd_big(L, denominator(x)) * denominator(x);
            Dir d(2);
            for (int i = 0; i < 2; ++i) {
                BigInt v = numerator(nr[i]) * (L / denominator(nr[i]));
                d[i] = static_cast<long long>(v);
            }
            C.rays.push_back({owners[0].first, primitive(d), len});
        }
    }
    return canonicalize(C);
}

bool membership(const TropPolynomial& f, const Point& u) {
    if (f.is_bottom()) return true;  // value -inf everywhere
    return evaluate(f, u).argmax.size() >= 2;
}

bool membership(const Ideal& I, const Point& u) {
    for (const auto& f : I.generators)
        if (!membership(f, u)) return false;
    return true;
}

TropCurve intersect_plane(const Ideal& I) {
    for (const auto& f : I.generators)
        if (f.nvars() != 2)
            throw std::invalid_argument("intersect_plane: generators must be bivariate");
    // Set-level pieces of each generator's corner locus.
    auto pieces_of = [](const TropPolynomial& f) -> std::optional<std::vector<Piece>> {
        if (f.is_bottom()) return std::nullopt;  // whole plane: no constraint
        if (essential_monomials(f).size() < 2)
            return std::vector<Piece>{};  // empty corner locus
        auto ps = curve_pieces(curve_from_poly2(f));
        for (auto& p : ps) p.weight = 1;
        return ps;
    };

    bool started = false;
    std::vector<Piece> cur;
    std::vector<Point> pts;
    for (const auto& f : I.generators) {
        auto nxt = pieces_of(f);
        if (!nxt) continue;  // -inf generator vanishes identically
        if (!started) {
            cur = std::move(*nxt);
            started = true;
            continue;
        }
        std::vector<Piece> ncur;
        std::vector<Point> npts;
        for (const Piece& a : cur)
            for (const Piece& b : *nxt) {
                auto r = piece_intersect(a, b);
                if (auto* pt = std::get_if<Point>(&r)) npts.push_back(*pt);
                else if (auto* pp = std::get_if<Piece>(&r)) ncur.push_back(*pp);
            }
        for (const Point& p : pts)
            for (const Piece& b : *nxt)
                if (on_piece(b, p)) { npts.push_back(p); break; }
        cur = std::move(ncur);
        pts = std::move(npts);
    }
    if (!started)
        throw std::invalid_argument("intersect_plane: all generators are -inf");

    TropCurve raw;
    raw.dim = 2;
    for (const Piece& pc : cur) {
        if (pc.kind == Piece::Kind::line) {
            raw.lines.push_back({pc.p, primitive_signed(pc.d), 1});
        } else if (pc.kind == Piece::Kind::ray) {
            raw.vertices.push_back(pc.p);
            raw.rays.push_back({raw.vertices.size() - 1, pc.d, 1});
        } else {
            raw.vertices.push_back(pc.p);
            raw.vertices.push_back(point_at(pc, pc.tmax));
            raw.edges.push_back(
                {raw.vertices.size() - 2, raw.vertices.size() - 1, 1});
        }
    }
    raw.isolated_points = std::move(pts);
    return canonicalize(raw);
}

namespace {

// Outgoing weighted directions at each vertex of a canonical curve.
std::vector<std::vector<std::pair<Dir, long long>>> vertex_stars(
    const TropCurve& C) {
    std::vector<std::vector<std::pair<Dir, long long>>> star(C.vertices.size());
    for (const CurveEdge& e : C.edges) {
        auto [d, t] = primitive_of_diff(C.vertices[e.a], C.vertices[e.b]);
        Dir neg = d;
        for (auto& x : neg) x = -x;
        star[e.a].push_back({d, e.weight});
        star[e.b].push_back({neg, e.weight});
    }
    for (const CurveRay& r : C.rays) star[r.vertex].push_back({r.dir, r.weight});
    return star;
}

}  // namespace

BalancingReport balancing_check(const TropCurve& C) {
    BalancingReport rep;
    auto star = vertex_stars(C);
    for (std::size_t v = 0; v < star.size(); ++v) {
        std::vector<long long> sum(C.dim, 0);
        for (const auto& [d, w] : star[v])
            for (int i = 0; i < C.dim; ++i) sum[i] += w * d[i];
        for (int i = 0; i < C.dim; ++i)
            if (sum[i] != 0) {
                rep.balanced = false;
                rep.failing_vertices.push_back(v);
                break;
            }
    }
    return rep;
}

BalancingSolution balancing_solve(const TropCurve& C) {
    BalancingSolution sol;
    const std::size_t ne = C.edges.size(), nr = C.rays.size();
    const std::size_t k = ne + nr;
    if (k == 0) {
        sol.status = BalancingSolution::Status::found;
        return sol;
    }
    // Incidence matrix: rows (vertex, coordinate), columns edge/ray weights.
    Mat M(C.vertices.size() * C.dim, Vec(k, Rat(0)));
    auto add = [&](std::size_t v, const Dir& d, std::size_t col) {
        for (int i = 0; i < C.dim; ++i) M[v * C.dim + i][col] += d[i];
    };
    for (std::size_t e = 0; e < ne; ++e) {
        auto [d, t] =
            primitive_of_diff(C.vertices[C.edges[e].a], C.vertices[C.edges[e].b]);
        Dir neg = d;
        for (auto& x : neg) x = -x;
        add(C.edges[e].a, d, e);
        add(C.edges[e].b, neg, e);
    }
    for (std::size_t r = 0; r < nr; ++r)
        add(C.rays[r].vertex, C.rays[r].dir, ne + r);

    // Rational feasibility with w >= 1 decides infeasibility exactly.
    std::vector<LinCon> cons;
    for (const auto& row : M) {
        bool nz = false;
        for (const Rat& x : row)
            if (x != 0) nz = true;
        if (nz) cons.push_back({LinCon::Rel::eq, row, Rat(0)});
    }
    for (std::size_t i = 0; i < k; ++i) {
        LinCon c{LinCon::Rel::le, Vec(k, Rat(0)), Rat(-1)};
        c.a[i] = -1;
        cons.push_back(std::move(c));
    }
    if (!detail::fm_feasible(cons, static_cast<int>(k))) {
        sol.status = BalancingSolution::Status::infeasible;
        return sol;
    }
    // Bounded search over the integer nullspace for weights in [1, 64].
    Mat B = detail::nullspace(M, k);
    for (auto& v : B) {  // clear denominators
        BigInt L = 1;
        for (const Rat& x : v) L = L / gcd_big(L, denominator(x)) * denominator(x);
        for (auto& x : v) x *= Rat(L);
    }
    auto try_vec = [&](const Vec& w) -> bool {
        for (const Rat& x : w)
            if (x < 1 || x > 64 || denominator(x) != 1) return false;
        std::vector<long long> iw;
        for (const Rat& x : w) iw.push_back(static_cast<long long>(numerator(x)));
        long long g = 0;
        for (long long x : iw) g = std::gcd(g, x);
        for (auto& x : iw) x /= g;
        sol.edge_weights.assign(iw.begin(), iw.begin() + ne);
        sol.ray_weights.assign(iw.begin() + ne, iw.end());
        sol.status = BalancingSolution::Status::found;
        return true;
    };
    const int kb = static_cast<int>(B.size());
    if (kb >= 1 && kb <= 4) {
        const int bound = kb == 1 ? 64 : 16;
        std::vector<int> c(kb, -bound);
        for (;;) {
            bool zero = std::all_of(c.begin(), c.end(), [](int x) { return !x; });
            if (!zero) {
                Vec w(k, Rat(0));
                for (int i = 0; i < kb; ++i)
                    for (std::size_t j = 0; j < k; ++j) w[j] += Rat(c[i]) * B[i][j];
                if (try_vec(w)) return sol;
            }
            int i = 0;
            while (i < kb && c[i] == bound) c[i++] = -bound;
            if (i == kb) break;
            ++c[i];
        }
    }
    sol.status = BalancingSolution::Status::unknown;
    return sol;
}

bool feasible(const HPolyhedron& P) { return detail::fm_feasible(P.cons, P.dim); }

int affine_dim(const HPolyhedron& P) {
    if (!feasible(P)) return -1;
    Mat eqs;
    for (std::size_t i = 0; i < P.cons.size(); ++i) {
        const LinCon& c = P.cons[i];
        if (c.rel == LinCon::Rel::eq) {
            eqs.push_back(c.a);
        } else if (c.rel == LinCon::Rel::le) {
            // Implicit equality iff the strict version is infeasible.
            auto cons = P.cons;
            cons[i].rel = LinCon::Rel::lt;
            if (!detail::fm_feasible(cons, P.dim)) eqs.push_back(c.a);
        }
    }
    return P.dim - detail::mat_rank(eqs);
}

HPolyhedron cone_sigma(const Point& u, const std::set<int>& J) {
    const int n = static_cast<int>(u.size());
    for (int j : J)
        if (j < 1 || j > n) throw std::invalid_argument("cone_sigma: bad index");
    if (static_cast<int>(J.size()) >= n)
        throw std::invalid_argument("cone_sigma: J must be a proper subset");
    HPolyhedron P;
    P.dim = n;
    for (int j = 1; j <= n; ++j) {
        LinCon c;
        c.rel = J.count(j) ? LinCon::Rel::le : LinCon::Rel::eq;
        c.a.assign(n, Rat(0));
        c.a[j - 1] = 1;
        c.b = u[j - 1];
        P.cons.push_back(std::move(c));
    }
    return P;
}

std::vector<std::set<int>> cone_cells(const TropCurve& C, std::size_t vertex) {
    const Point& u = C.vertices.at(vertex);
    const int n = C.dim;
    auto pieces = curve_pieces(C);
    std::vector<std::set<int>> out;
    // Proper nonempty subsets J of {1..n}: the relatively open cell has
    // x_j < u_j exactly on J.
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
        std::set<int> J;
        for (int j = 0; j < n; ++j)
            if (mask & (1u << j)) J.insert(j + 1);
        bool hit = false;
        for (const Piece& pc : pieces) {
            std::vector<LinCon> cons;  // one variable t
            for (int j = 0; j < n; ++j) {
                LinCon c;
                c.a = {Rat(pc.d[j])};
                c.b = u[j] - pc.p[j];
                c.rel = J.count(j + 1) ? LinCon::Rel::lt : LinCon::Rel::eq;
                cons.push_back(std::move(c));
            }
            Ival iv = piece_interval(pc);
            if (iv.lo) cons.push_back({LinCon::Rel::le, {Rat(-1)}, -*iv.lo});
            if (iv.hi) cons.push_back({LinCon::Rel::le, {Rat(1)}, *iv.hi});
            if (detail::fm_feasible(cons, 1)) { hit = true; break; }
        }
        for (const Point& p : C.isolated_points) {
            if (hit) break;
            bool in = true;
            for (int j = 0; j < n && in; ++j) {
                if (J.count(j + 1)) in = p[j] < u[j];
                else in = p[j] == u[j];
            }
            hit = in;
        }
        if (hit) out.push_back(std::move(J));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(),
                                            b.end());
    });
    return out;
}

std::vector<RegComponent> reg_components(const TropCurve& C) {
    TropCurve K = canonicalize(C);
    std::vector<RegComponent> out;
    for (const CurveEdge& e : K.edges) {
        auto [d, t] = primitive_of_diff(K.vertices[e.a], K.vertices[e.b]);
        out.push_back({RegComponent::Kind::segment, K.vertices[e.a],
                       K.vertices[e.b], d});
    }
    for (const CurveRay& r : K.rays)
        out.push_back({RegComponent::Kind::ray, K.vertices[r.vertex], {}, r.dir});
    for (const CurveLine& l : K.lines)
        out.push_back({RegComponent::Kind::line, l.point, {}, l.dir});
    return out;
}

std::vector<Point> skeleton0(const TropCurve& C) {
    return canonicalize(C).vertices;
}

namespace {

// P subset of Q, both as H-polyhedra over the same space (exact).
bool poly_subset(const HPolyhedron& P, const HPolyhedron& Q) {
    if (!feasible(P)) return true;
    for (const LinCon& c : Q.cons) {
        auto cons = P.cons;
        if (c.rel == LinCon::Rel::le || c.rel == LinCon::Rel::lt) {
            LinCon neg;  // violate: a.x > b  (or >= for lt)
            neg.rel = c.rel == LinCon::Rel::le ? LinCon::Rel::lt : LinCon::Rel::le;
            neg.a.resize(c.a.size());
            for (std::size_t i = 0; i < c.a.size(); ++i) neg.a[i] = -c.a[i];
            neg.b = -c.b;
            cons.push_back(std::move(neg));
            if (detail::fm_feasible(cons, P.dim)) return false;
        } else {
            for (int side = 0; side < 2; ++side) {
                auto cons2 = P.cons;
                LinCon neg;
                neg.rel = LinCon::Rel::lt;
                neg.a.resize(c.a.size());
                if (side == 0) {
                    neg.a = c.a;
                    neg.b = c.b;  // a.x < b
                } else {
                    for (std::size_t i = 0; i < c.a.size(); ++i)
                        neg.a[i] = -c.a[i];
                    neg.b = -c.b;  // a.x > b
                }
                cons2.push_back(std::move(neg));
                if (detail::fm_feasible(cons2, P.dim)) return false;
            }
        }
    }
    return true;
}

bool poly_equal(const HPolyhedron& P, const HPolyhedron& Q) {
    return poly_subset(P, Q) && poly_subset(Q, P);
}

// All nonempty faces of P (including P itself), as H-polyhedra.
std::vector<HPolyhedron> poly_faces(const HPolyhedron& P) {
    std::vector<std::size_t> ineq;
    for (std::size_t i = 0; i < P.cons.size(); ++i)
        if (P.cons[i].rel == LinCon::Rel::le) ineq.push_back(i);
    std::vector<HPolyhedron> faces;
    for (unsigned mask = 0; mask < (1u << ineq.size()); ++mask) {
        HPolyhedron F = P;
        for (std::size_t b = 0; b < ineq.size(); ++b)
            if (mask & (1u << b)) F.cons[ineq[b]].rel = LinCon::Rel::eq;
        if (!feasible(F)) continue;
        bool dup = false;
        for (const auto& G : faces)
            if (poly_equal(F, G)) { dup = true; break; }
        if (!dup) faces.push_back(std::move(F));
    }
    return faces;
}

}  // namespace

FpcReport fpc_validate(const std::vector<HPolyhedron>& cells) {
    FpcReport rep;
    if (cells.empty()) return rep;
    for (const auto& P : cells)
        for (const LinCon& c : P.cons)
            if (c.rel == LinCon::Rel::lt) {
                rep.valid = false;
                rep.message = "cells must be closed (no strict inequalities)";
                return rep;
            }
    // Face closure: every proper nonempty face of a cell is a listed cell.
    for (std::size_t i = 0; i < cells.size(); ++i) {
        for (const auto& F : poly_faces(cells[i])) {
            if (poly_equal(F, cells[i])) continue;  // the improper face
            bool present = false;
            for (const auto& Q : cells)
                if (poly_equal(F, Q)) { present = true; break; }
            if (!present) {
                rep.valid = false;
                rep.message = "missing face of cell " + std::to_string(i);
                rep.witness = {i, i};
                return rep;
            }
        }
    }
    // Pairwise intersections are common faces.
    for (std::size_t i = 0; i < cells.size(); ++i)
        for (std::size_t j = i + 1; j < cells.size(); ++j) {
            HPolyhedron R = cells[i];
            R.cons.insert(R.cons.end(), cells[j].cons.begin(),
                          cells[j].cons.end());
            if (!feasible(R)) continue;
            bool face_i = false, face_j = false;
            for (const auto& F : poly_faces(cells[i]))
                if (poly_equal(F, R)) { face_i = true; break; }
            for (const auto& F : poly_faces(cells[j]))
                if (poly_equal(F, R)) { face_j = true; break; }
            if (!face_i || !face_j) {
                rep.valid = false;
                rep.message = "intersection is not a common face";
                rep.witness = {i, j};
                return rep;
            }
        }
    return rep;
}

}  // namespace trop
