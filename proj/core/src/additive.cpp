/*
 * additive.cpp
 * ------------
 * Additivity criteria, spine extraction, closure sampling, the exact plane
 * decision, the semigroup partial order, and rooted metric trees.
 */
#include "trop/additive.hpp"

#include "geom_util.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>

namespace trop {

namespace {

bool nonneg(const Dir& d) {
    return std::all_of(d.begin(), d.end(), [](long long x) { return x >= 0; });
}
bool nonpos(const Dir& d) {
    return std::all_of(d.begin(), d.end(), [](long long x) { return x <= 0; });
}
bool strict_pos(const Dir& d) {
    return std::all_of(d.begin(), d.end(), [](long long x) { return x > 0; });
}
bool strict_neg(const Dir& d) {
    return std::all_of(d.begin(), d.end(), [](long long x) { return x < 0; });
}
bool sign_coherent_dir(const Dir& d) { return nonneg(d) || nonpos(d); }

Dir neg(Dir d) {
    for (auto& x : d) x = -x;
    return d;
}

// Outgoing primitive directions at every vertex of a canonical curve.
std::vector<std::vector<Dir>> outgoing_dirs(const TropCurve& C) {
    std::vector<std::vector<Dir>> out(C.vertices.size());
    for (const auto& e : C.edges) {
        Dir d(C.dim);
        std::vector<Rat> diff(C.dim);
        for (int i = 0; i < C.dim; ++i)
            diff[i] = C.vertices[e.b][i] - C.vertices[e.a][i];
        // clear denominators, then gcd-reduce
        Rat lcm(1);
        for (const auto& x : diff)
            if (x != 0) lcm *= boost::multiprecision::denominator(x);
        Dir v(C.dim);
        for (int i = 0; i < C.dim; ++i) {
            Rat scaled = diff[i] * lcm;
            v[i] = boost::multiprecision::numerator(scaled)
                       .convert_to<long long>();
        }
        v = primitive(v);
        out[e.a].push_back(v);
        out[e.b].push_back(neg(v));
    }
    for (const auto& r : C.rays) out[r.vertex].push_back(r.dir);
    return out;
}

std::set<int> j_set(const Dir& d) {
    std::set<int> J;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] < 0) J.insert(static_cast<int>(i) + 1);
    return J;
}

Point point_at(const Piece& pc, const Rat& t) {
    Point u(pc.p.size());
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = pc.p[i] + t * pc.d[i];
    return u;
}

// Deterministic covering samples: vertices, edge midpoints, ray points at
// parameters 1/2/4, line points at -2/0/2, isolated points.
std::vector<Point> covering_samples(const TropCurve& C) {
    std::vector<Point> out = C.vertices;
    for (const Piece& pc : curve_pieces(C)) {
        if (pc.kind == Piece::Kind::segment) {
            out.push_back(point_at(pc, pc.tmax / 2));
        } else if (pc.kind == Piece::Kind::ray) {
            out.push_back(point_at(pc, Rat(1)));
            out.push_back(point_at(pc, Rat(2)));
            out.push_back(point_at(pc, Rat(4)));
        } else {
            out.push_back(point_at(pc, Rat(-2)));
            out.push_back(point_at(pc, Rat(0)));
            out.push_back(point_at(pc, Rat(2)));
        }
    }
    out.insert(out.end(), C.isolated_points.begin(), C.isolated_points.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Point random_point(const TropCurve& C, const std::vector<Piece>& pieces,
                   std::mt19937_64& rng) {
    std::vector<Point> zero_dim = C.vertices;
    zero_dim.insert(zero_dim.end(), C.isolated_points.begin(),
                    C.isolated_points.end());
    if (pieces.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, zero_dim.size() - 1);
        return zero_dim[pick(rng)];
    }
    std::uniform_int_distribution<std::size_t> pick(
        0, pieces.size() + zero_dim.size() - 1);
    std::size_t k = pick(rng);
    if (k >= pieces.size()) return zero_dim[k - pieces.size()];
    const Piece& pc = pieces[k];
    std::uniform_int_distribution<int> num(0, 24), den(1, 5);
    Rat t;
    if (pc.kind == Piece::Kind::segment)
        t = Rat(num(rng), 24) * pc.tmax;
    else
        t = Rat(num(rng), den(rng));
    if (pc.kind == Piece::Kind::line && num(rng) % 2) t = -t;
    return point_at(pc, t);
}

Point coord_max(const Point& u, const Point& v) {
    Point w(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) w[i] = std::max(u[i], v[i]);
    return w;
}

// ---------------------------------------------------------------------------
// Piece clipping against linear constraints in the parameter t.

struct TInterval {
    std::optional<Rat> lo, hi;
    std::optional<Rat> fixed;  // equality-pinned value
    bool empty = false;

    void pin(const Rat& t) {
        if (fixed && *fixed != t) empty = true;
        fixed = t;
    }
    void bound_le(const Rat& t) {  // t <= value
        if (!hi || t < *hi) hi = t;
    }
    void bound_ge(const Rat& t) {
        if (!lo || t > *lo) lo = t;
    }
    // Resolve against the piece's own parameter range.
    void clamp_to(const Piece& pc) {
        if (pc.kind == Piece::Kind::segment) {
            bound_ge(Rat(0));
            bound_le(pc.tmax);
        } else if (pc.kind == Piece::Kind::ray) {
            bound_ge(Rat(0));
        }
    }
    void settle() {
        if (empty) return;
        if (fixed) {
            if ((lo && *fixed < *lo) || (hi && *fixed > *hi)) empty = true;
            return;
        }
        if (lo && hi && *lo > *hi) empty = true;
    }
};

// Append the clipped sub-piece (or point) to the curve under construction.
void emit_clip(TropCurve& out, const Piece& pc, const TInterval& iv) {
    if (iv.empty) return;
    auto add_vertex = [&](const Point& p) {
        out.vertices.push_back(p);
        return out.vertices.size() - 1;
    };
    if (iv.fixed) {
        out.isolated_points.push_back(point_at(pc, *iv.fixed));
        return;
    }
    if (iv.lo && iv.hi) {
        if (*iv.lo == *iv.hi) {
            out.isolated_points.push_back(point_at(pc, *iv.lo));
            return;
        }
        std::size_t a = add_vertex(point_at(pc, *iv.lo));
        std::size_t b = add_vertex(point_at(pc, *iv.hi));
        out.edges.push_back({a, b, pc.weight});
        return;
    }
    if (iv.lo) {
        std::size_t a = add_vertex(point_at(pc, *iv.lo));
        out.rays.push_back({a, pc.d, pc.weight});
        return;
    }
    if (iv.hi) {
        std::size_t a = add_vertex(point_at(pc, *iv.hi));
        out.rays.push_back({a, neg(pc.d), pc.weight});
        return;
    }
    out.lines.push_back({pc.p, primitive_signed(pc.d), pc.weight});
}

// Feasible t-values of a piece under "coordinate j (rel) c_j" constraints:
// rel = 0 means equality, rel = -1 means <=.
TInterval constrain_piece(const Piece& pc, const std::vector<int>& rel,
                          const Point& c) {
    TInterval iv;
    for (std::size_t j = 0; j < c.size() && !iv.empty; ++j) {
        if (rel[j] > 0) continue;  // unconstrained coordinate
        if (pc.d[j] == 0) {
            if (rel[j] == 0 && pc.p[j] != c[j]) iv.empty = true;
            if (rel[j] == -1 && pc.p[j] > c[j]) iv.empty = true;
            continue;
        }
        Rat t = (c[j] - pc.p[j]) / pc.d[j];
        if (rel[j] == 0)
            iv.pin(t);
        else if (pc.d[j] > 0)
            iv.bound_le(t);
        else
            iv.bound_ge(t);
    }
    iv.clamp_to(pc);
    iv.settle();
    return iv;
}

// Connected-component label per vertex / line / isolated point.
struct Components {
    std::vector<std::size_t> vertex_comp;  // per vertex
    std::size_t count = 0;
    bool acyclic = true;
    std::size_t line_base = 0, iso_base = 0;
};

Components components_of(const TropCurve& C) {
    Components out;
    std::vector<std::size_t> parent(C.vertices.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : C.edges) {
        std::size_t ra = find(e.a), rb = find(e.b);
        if (ra == rb) out.acyclic = false;
        else parent[ra] = rb;
    }
    std::map<std::size_t, std::size_t> label;
    out.vertex_comp.resize(C.vertices.size());
    for (std::size_t i = 0; i < C.vertices.size(); ++i) {
        std::size_t r = find(i);
        auto it = label.find(r);
        if (it == label.end()) it = label.emplace(r, label.size()).first;
        out.vertex_comp[i] = it->second;
    }
    out.line_base = label.size();
    out.iso_base = out.line_base + C.lines.size();
    out.count = out.iso_base + C.isolated_points.size();
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------

CriteriaChecklist check_criteria(const TropCurve& C) {
    TropCurve K = canonicalize(C);
    if (!balancing_check(K).balanced &&
        balancing_solve(K).status == BalancingSolution::Status::infeasible)
        throw std::invalid_argument(
            "check_criteria: input is not balanceable (not a set-curve)");
    CriteriaChecklist r;
    auto dirs = outgoing_dirs(K);

    // (i) sign coherence of every 1-cell direction
    r.sign_coherent = true;
    for (const auto& at : dirs)
        for (const auto& d : at)
            if (!sign_coherent_dir(d)) r.sign_coherent = false;
    for (const auto& l : K.lines)
        if (!sign_coherent_dir(l.dir)) r.sign_coherent = false;

    // (i) exactly one unbounded nonnegative end
    int pos_ends = 0;
    for (const auto& ray : K.rays)
        if (nonneg(ray.dir)) ++pos_ends;
    for (const auto& l : K.lines)
        if (nonneg(l.dir) || nonpos(l.dir)) ++pos_ends;  // one top end
    r.unique_positive_end = (pos_ends == 1);

    // (ii) vertex degrees by sign class
    r.vertex_degrees = true;
    for (const auto& at : dirs) {
        int up = 0, down = 0;
        for (const auto& d : at) {
            if (nonneg(d)) ++up;
            else if (strict_neg(d)) ++down;
        }
        if (up != 1 || down > 1) r.vertex_degrees = false;
    }

    // (iii) zero coordinates of the upward direction propagate
    r.zero_propagation = true;
    for (const auto& at : dirs)
        for (const auto& d : at) {
            if (!nonneg(d)) continue;
            for (std::size_t j = 0; j < d.size(); ++j) {
                if (d[j] != 0) continue;
                for (const auto& other : at)
                    if (other[j] != 0) r.zero_propagation = false;
            }
        }

    // (v) J-sets of downward edges: injective, closed under intersection
    r.j_sets = true;
    for (const auto& at : dirs) {
        std::vector<std::set<int>> js;
        for (const auto& d : at)
            if (nonpos(d) && !nonneg(d)) js.push_back(j_set(d));
        std::set<std::set<int>> uniq(js.begin(), js.end());
        if (uniq.size() != js.size()) r.j_sets = false;
        for (const auto& A : uniq)
            for (const auto& B : uniq) {
                std::set<int> I;
                std::set_intersection(A.begin(), A.end(), B.begin(), B.end(),
                                      std::inserter(I, I.begin()));
                if (!I.empty() && !uniq.count(I)) r.j_sets = false;
            }
    }
    return r;
}

OracleResult closure_oracle(const TropCurve& C, int samples,
                            std::uint64_t seed) {
    TropCurve K = canonicalize(C);
    OracleResult res;
    if (K.vertices.empty() && K.lines.empty() && K.isolated_points.empty())
        return res;
    auto fail = [&](const Point& u, const Point& v) {
        Point w = coord_max(u, v);
        if (on_curve(K, w)) return false;
        res.pass = false;
        res.witness = std::make_pair(u, v);
        return true;
    };
    auto base = covering_samples(K);
    for (std::size_t i = 0; i < base.size(); ++i)
        for (std::size_t j = i; j < base.size(); ++j) {
            ++res.pairs_checked;
            if (fail(base[i], base[j])) return res;
        }
    std::mt19937_64 rng(seed);
    auto pieces = curve_pieces(K);
    for (int i = 0; i < samples; ++i) {
        Point u = random_point(K, pieces, rng);
        Point v = random_point(K, pieces, rng);
        ++res.pairs_checked;
        if (fail(u, v)) return res;
    }
    return res;
}

AdditivityCertificate is_additive(const TropCurve& C) {
    TropCurve K = canonicalize(C);
    AdditivityCertificate cert;
    cert.criteria = check_criteria(K);
    const bool zero_dim_only =
        K.edges.empty() && K.rays.empty() && K.lines.empty();

    auto oracle_witness = [&]() {
        for (int samples : {64, 512, 4096}) {
            auto r = closure_oracle(K, samples, 0x5eed);
            if (!r.pass) return r.witness;
        }
        return std::optional<std::pair<Point, Point>>{};
    };
    auto not_additive = [&]() {
        cert.verdict = AdditivityCertificate::Verdict::not_additive;
        cert.witness = oracle_witness();
        return cert;
    };

    if (zero_dim_only) {
        // Finite point sets: exact closure check.
        std::vector<Point> pts = K.vertices;
        pts.insert(pts.end(), K.isolated_points.begin(),
                   K.isolated_points.end());
        for (const auto& u : pts)
            for (const auto& v : pts) {
                Point w = coord_max(u, v);
                if (std::find(pts.begin(), pts.end(), w) == pts.end()) {
                    cert.verdict =
                        AdditivityCertificate::Verdict::not_additive;
                    cert.witness = std::make_pair(u, v);
                    return cert;
                }
            }
        cert.verdict = AdditivityCertificate::Verdict::additive;
        return cert;
    }

    if (K.dim == 2 && K.vertices.empty() && K.isolated_points.empty() &&
        !K.lines.empty()) {
        // Lines only.  A union of parallel monotone lines is additive iff it
        // is a single line or the common direction has a zero coordinate
        // (axis-parallel families are closed under max; generic monotone
        // translates are not).
        bool shape = true;
        for (const auto& l : K.lines)
            if (l.dir != K.lines[0].dir || !nonneg(l.dir)) shape = false;
        if (shape && K.lines.size() > 1 &&
            std::find(K.lines[0].dir.begin(), K.lines[0].dir.end(), 0LL) ==
                K.lines[0].dir.end())
            shape = false;
        if (shape) {
            cert.verdict = AdditivityCertificate::Verdict::additive;
            return cert;
        }
        return not_additive();
    }

    if (!cert.criteria.all()) return not_additive();

    if (K.dim == 1) {
        // Subsets of Q^1 are always max-closed.
        cert.verdict = AdditivityCertificate::Verdict::additive;
        return cert;
    }

    if (K.dim == 2 && K.isolated_points.empty()) {
        // Exact decision: spine plus negatively-directed axis-parallel rays.
        bool shape = true;
        if (K.vertices.empty()) {
            shape = (K.lines.size() == 1) && nonneg(K.lines[0].dir);
        } else if (!K.lines.empty()) {
            shape = false;
        } else {
            Spine S;
            try {
                S = spine(K);
            } catch (const std::invalid_argument&) {
                shape = false;
            }
            if (shape) {
                // Every vertex on the spine; all non-spine rays axis-negative.
                std::set<Point> sv(S.vertices.begin(), S.vertices.end());
                for (const auto& v : K.vertices)
                    if (!sv.count(v)) shape = false;
                int top_rays = 0, bottom_rays = 0;
                for (const auto& ray : K.rays) {
                    if (strict_pos(ray.dir)) { ++top_rays; continue; }
                    if (strict_neg(ray.dir)) {
                        ++bottom_rays;
                        if (K.vertices[ray.vertex] != S.vertices.front())
                            shape = false;
                        continue;
                    }
                    if (ray.dir != Dir{-1, 0} && ray.dir != Dir{0, -1})
                        shape = false;
                }
                if (top_rays != 1 || bottom_rays > 1) shape = false;
            }
        }
        if (shape) {
            cert.verdict = AdditivityCertificate::Verdict::additive;
            return cert;
        }
        return not_additive();
    }

    // Space curves (and mixed inputs): criteria plus sampling oracle.
    auto r = closure_oracle(K, 256, 0xacc0);
    if (!r.pass) {
        cert.verdict = AdditivityCertificate::Verdict::not_additive;
        cert.witness = r.witness;
        return cert;
    }
    cert.verdict = AdditivityCertificate::Verdict::criteria_pass_oracle_pass;
    return cert;
}

Spine spine(const TropCurve& C) {
    TropCurve K = canonicalize(C);
    std::vector<Piece> pos_segments;
    std::vector<Piece> end_rays;  // strictly positive or strictly negative
    std::optional<Piece> pos_line;
    for (const Piece& pc : curve_pieces(K)) {
        if (pc.kind == Piece::Kind::segment) {
            if (strict_pos(pc.d)) {
                pos_segments.push_back(pc);
            } else if (strict_neg(pc.d)) {
                Piece q = pc;  // orient increasing
                q.p = point_at(pc, pc.tmax);
                q.d = neg(pc.d);
                pos_segments.push_back(q);
            }
        } else if (pc.kind == Piece::Kind::ray) {
            if (strict_pos(pc.d) || strict_neg(pc.d)) end_rays.push_back(pc);
        } else {
            if (strict_pos(pc.d)) pos_line = pc;
        }
    }
    if (pos_line) {
        if (!pos_segments.empty() || !end_rays.empty())
            throw std::invalid_argument("spine: disconnected positive part");
        return Spine{false, {}, {pos_line->d}};
    }
    if (pos_segments.empty() && end_rays.empty())
        throw std::invalid_argument("spine: no strictly positive edges");

    // Vertices of the monotone path, strictly increasing coordinate-wise.
    std::vector<Point> verts;
    for (const auto& pc : pos_segments) {
        verts.push_back(pc.p);
        verts.push_back(point_at(pc, pc.tmax));
    }
    for (const auto& pc : end_rays) verts.push_back(pc.p);
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    for (std::size_t i = 0; i + 1 < verts.size(); ++i)
        for (int j = 0; j < K.dim; ++j)
            if (verts[i][j] >= verts[i + 1][j])
                throw std::invalid_argument("spine: not a monotone path");

    // Match consecutive vertices to segments and classify the ends.
    std::vector<Dir> seg_dirs;
    for (std::size_t i = 0; i + 1 < verts.size(); ++i) {
        const Point &a = verts[i], &b = verts[i + 1];
        auto it = std::find_if(
            pos_segments.begin(), pos_segments.end(), [&](const Piece& pc) {
                return pc.p == a && point_at(pc, pc.tmax) == b;
            });
        if (it == pos_segments.end())
            throw std::invalid_argument("spine: gap in the monotone path");
        seg_dirs.push_back(it->d);
    }
    if (pos_segments.size() != seg_dirs.size())
        throw std::invalid_argument("spine: extra positive edges off the path");

    std::optional<Dir> top, bottom;
    for (const auto& pc : end_rays) {
        if (strict_pos(pc.d)) {
            if (pc.p != verts.back() || top)
                throw std::invalid_argument("spine: bad top ray");
            top = pc.d;
        } else {
            if (pc.p != verts.front() || bottom)
                throw std::invalid_argument("spine: bad bottom ray");
            bottom = neg(pc.d);
        }
    }
    if (!top) throw std::invalid_argument("spine: missing top ray");

    Spine S;
    S.terminal = !bottom.has_value();
    S.vertices = std::move(verts);
    if (bottom) S.dirs.push_back(*bottom);
    S.dirs.insert(S.dirs.end(), seg_dirs.begin(), seg_dirs.end());
    S.dirs.push_back(*top);
    return S;
}

TropCurve restrict_below(const TropCurve& C, std::size_t spine_index) {
    TropCurve K = canonicalize(C);
    Spine S = spine(K);
    if (spine_index >= S.vertices.size())
        throw std::out_of_range("restrict_below: spine index");
    const Point& u = S.vertices[spine_index];
    std::vector<int> rel(K.dim, -1);  // x_j <= u_j everywhere
    TropCurve out;
    out.dim = K.dim;
    for (const Piece& pc : curve_pieces(K))
        emit_clip(out, pc, constrain_piece(pc, rel, u));
    auto inside = [&](const Point& p) {
        for (int j = 0; j < K.dim; ++j)
            if (p[j] > u[j]) return false;
        return true;
    };
    for (const auto& v : K.vertices)
        if (inside(v)) out.isolated_points.push_back(v);
    for (const auto& p : K.isolated_points)
        if (inside(p)) out.isolated_points.push_back(p);
    return canonicalize(out);
}

std::vector<CutSet> cut_sets(const TropCurve& C, std::size_t spine_index) {
    TropCurve K = canonicalize(C);
    Spine S = spine(K);
    if (spine_index >= S.vertices.size())
        throw std::out_of_range("cut_sets: spine index");
    const Point& u = S.vertices[spine_index];
    std::size_t vidx = K.vertices.size();
    for (std::size_t i = 0; i < K.vertices.size(); ++i)
        if (K.vertices[i] == u) vidx = i;
    if (vidx == K.vertices.size())
        throw std::logic_error("cut_sets: spine vertex missing from curve");

    std::vector<CutSet> out;
    for (const auto& J : cone_cells(K, vidx)) {
        std::vector<int> rel(K.dim, 0);  // x_j = u_j off J, <= on J
        for (int j : J) rel[j - 1] = -1;
        TropCurve part;
        part.dim = K.dim;
        for (const Piece& pc : curve_pieces(K))
            emit_clip(part, pc, constrain_piece(pc, rel, u));
        part.isolated_points.push_back(u);  // apex is in every closed cell
        out.push_back({J, canonicalize(part)});
    }
    return out;
}

bool poset_leq(const Point& u, const Point& v, const TropCurve& C) {
    TropCurve K = canonicalize(C);
    if (!on_curve(K, u) || !on_curve(K, v))
        throw std::invalid_argument("poset_leq: point not on the curve");
    for (int j = 0; j < K.dim; ++j)
        if (v[j] < u[j]) return false;
    // Need a on C with max(a, u) = v:
    //   a_j = v_j where v_j > u_j; a_j <= v_j where v_j = u_j.
    std::vector<int> rel(K.dim);
    for (int j = 0; j < K.dim; ++j) rel[j] = (v[j] > u[j]) ? 0 : -1;
    auto admissible = [&](const Point& a) {
        for (int j = 0; j < K.dim; ++j) {
            if (rel[j] == 0 && a[j] != v[j]) return false;
            if (rel[j] == -1 && a[j] > v[j]) return false;
        }
        return true;
    };
    for (const auto& a : K.vertices)
        if (admissible(a)) return true;
    for (const auto& a : K.isolated_points)
        if (admissible(a)) return true;
    for (const Piece& pc : curve_pieces(K)) {
        // Pinned equalities must agree across coordinates; constrain_piece
        // folds that in.  Any surviving parameter value yields a witness a.
        if (!constrain_piece(pc, rel, v).empty) return true;
    }
    return false;
}

bool is_contractible(const TropCurve& C) {
    TropCurve K = canonicalize(C);
    if (K.vertices.empty() && K.lines.empty() && K.isolated_points.empty())
        return false;
    Components comp = components_of(K);
    return comp.acyclic && comp.count == 1;
}

ComponentCheckReport component_subsemigroup_check(const TropCurve& C,
                                                  int samples,
                                                  std::uint64_t seed) {
    TropCurve K = canonicalize(C);
    ComponentCheckReport rep;
    Components comp = components_of(K);
    if (comp.count == 0) return rep;

    auto all_pieces = curve_pieces(K);
    // Pieces in curve_pieces order: edges, rays, lines.
    std::vector<std::size_t> piece_comp;
    for (const auto& e : K.edges) piece_comp.push_back(comp.vertex_comp[e.a]);
    for (const auto& r : K.rays)
        piece_comp.push_back(comp.vertex_comp[r.vertex]);
    for (std::size_t i = 0; i < K.lines.size(); ++i)
        piece_comp.push_back(comp.line_base + i);

    auto component_of_point = [&](const Point& w) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < all_pieces.size(); ++i)
            if (on_piece(all_pieces[i], w)) return piece_comp[i];
        for (std::size_t i = 0; i < K.vertices.size(); ++i)
            if (K.vertices[i] == w) return comp.vertex_comp[i];
        for (std::size_t i = 0; i < K.isolated_points.size(); ++i)
            if (K.isolated_points[i] == w) return comp.iso_base + i;
        return std::nullopt;
    };

    // Per-component sample pools.
    std::vector<std::vector<Point>> pool(comp.count);
    for (std::size_t i = 0; i < K.vertices.size(); ++i)
        pool[comp.vertex_comp[i]].push_back(K.vertices[i]);
    for (std::size_t i = 0; i < all_pieces.size(); ++i) {
        const Piece& pc = all_pieces[i];
        auto& dst = pool[piece_comp[i]];
        if (pc.kind == Piece::Kind::segment) {
            dst.push_back(point_at(pc, pc.tmax / 2));
        } else if (pc.kind == Piece::Kind::ray) {
            dst.push_back(point_at(pc, Rat(1)));
            dst.push_back(point_at(pc, Rat(3)));
        } else {
            dst.push_back(point_at(pc, Rat(-2)));
            dst.push_back(point_at(pc, Rat(2)));
        }
    }
    for (std::size_t i = 0; i < K.isolated_points.size(); ++i)
        pool[comp.iso_base + i].push_back(K.isolated_points[i]);

    std::mt19937_64 rng(seed);
    auto try_pair = [&](std::size_t c, const Point& a, const Point& b) {
        ++rep.pairs_checked;
        Point w = coord_max(a, b);
        auto wc = component_of_point(w);
        if (wc && *wc == c) return true;
        rep.pass = false;
        rep.witness = std::make_pair(a, b);
        return false;
    };
    for (std::size_t c = 0; c < comp.count && rep.pass; ++c) {
        const auto& P = pool[c];
        for (std::size_t i = 0; i < P.size() && rep.pass; ++i)
            for (std::size_t j = i; j < P.size() && rep.pass; ++j)
                try_pair(c, P[i], P[j]);
        if (!rep.pass || P.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick(0, P.size() - 1);
        std::uniform_int_distribution<int> num(-20, 20), den(1, 4);
        for (int t = 0; t < samples && rep.pass; ++t) {
            // perturb along pieces of this component when available
            Point a = P[pick(rng)], b = P[pick(rng)];
            try_pair(c, a, b);
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Rooted metric trees.

namespace {

std::size_t tree_depth_steps(const RootedMetricTree& T, std::size_t node) {
    std::size_t d = 0, x = node;
    while (x != T.root) {
        x = T.parent.at(x);
        if (++d > T.parent.size())
            throw std::invalid_argument("tree: parent pointers have a cycle");
    }
    return d;
}

}  // namespace

TreePoint tree_point(const RootedMetricTree& T, std::size_t node, Rat offset) {
    if (node >= T.parent.size())
        throw std::invalid_argument("tree_point: node out of range");
    if (offset < 0) throw std::invalid_argument("tree_point: negative offset");
    if (node == T.root) {
        if (offset != 0)
            throw std::invalid_argument("tree_point: offset above the root");
        return {node, Rat(0)};
    }
    if (offset > T.edge_length.at(node))
        throw std::invalid_argument("tree_point: offset exceeds edge length");
    if (offset == T.edge_length.at(node)) return {T.parent[node], Rat(0)};
    return {node, std::move(offset)};
}

TreePoint tree_meet(const RootedMetricTree& T, const TreePoint& p,
                    const TreePoint& q) {
    TreePoint a = tree_point(T, p.node, p.offset);
    TreePoint b = tree_point(T, q.node, q.offset);
    if (a.node == b.node) return {a.node, std::max(a.offset, b.offset)};
    std::size_t da = tree_depth_steps(T, a.node);
    std::size_t db = tree_depth_steps(T, b.node);
    std::size_t x = a.node, y = b.node;
    bool a_lifted = false, b_lifted = false;
    while (da > db) { x = T.parent[x]; --da; a_lifted = true; }
    while (db > da) { y = T.parent[y]; --db; b_lifted = true; }
    while (x != y) {
        x = T.parent[x];
        y = T.parent[y];
        a_lifted = b_lifted = true;
    }
    // x == y is the LCA of the two base nodes.
    if (!a_lifted) return a;  // a.node is an ancestor of b.node: meet = a
    if (!b_lifted) return b;
    return {x, Rat(0)};
}

}  // namespace trop
