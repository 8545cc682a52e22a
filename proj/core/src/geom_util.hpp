/*
 * geom_util.hpp
 * -------------
 * Internal exact linear algebra and small-scale polyhedral utilities
 * shared by the newton / curve / additive / synth translation units:
 * rational Gaussian elimination, Fourier-Motzkin feasibility with strict
 * inequalities, and convex-position predicates (extreme points, facets,
 * face lattices) for point sets at desk scale.
 */
#pragma once

#include "trop/curve.hpp"
#include "trop/poly.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>

namespace trop::detail {

using Vec = std::vector<Rat>;
using Mat = std::vector<Vec>;

inline int mat_rank(Mat m) {
    if (m.empty()) return 0;
    const std::size_t cols = m[0].size();
    int r = 0;
    for (std::size_t c = 0; c < cols && r < static_cast<int>(m.size()); ++c) {
        std::size_t piv = r;
        while (piv < m.size() && m[piv][c] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[r], m[piv]);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (static_cast<int>(i) == r || m[i][c] == 0) continue;
            Rat k = m[i][c] / m[r][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= k * m[r][j];
        }
        ++r;
    }
    return r;
}

// Solve M x = rhs exactly; free variables set to 0; nullopt if inconsistent.
inline std::optional<Vec> lin_solve(Mat m, Vec rhs) {
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    std::vector<int> pivot_col(rows, -1);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[r], m[piv]);
        std::swap(rhs[r], rhs[piv]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rat k = m[i][c] / m[r][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] -= k * m[r][j];
            rhs[i] -= k * rhs[r];
        }
        pivot_col[r] = static_cast<int>(c);
        ++r;
    }
    for (std::size_t i = r; i < rows; ++i)
        if (rhs[i] != 0) return std::nullopt;
    Vec x(cols, Rat(0));
    for (std::size_t i = 0; i < r; ++i)
        x[pivot_col[i]] = rhs[i] / m[i][pivot_col[i]];
    return x;
}

// Basis of the nullspace of M (columns = variables), exact.
inline Mat nullspace(Mat m, std::size_t cols) {
    std::size_t rows = m.size();
    std::vector<int> pivot_of_col(cols, -1);
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && m[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(m[r], m[piv]);
        Rat d = m[r][c];
        for (std::size_t j = 0; j < cols; ++j) m[r][j] /= d;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rat k = m[i][c];
            for (std::size_t j = 0; j < cols; ++j) m[i][j] -= k * m[r][j];
        }
        pivot_of_col[c] = static_cast<int>(r);
        ++r;
    }
    Mat basis;
    for (std::size_t c = 0; c < cols; ++c) {
        if (pivot_of_col[c] != -1) continue;
        Vec v(cols, Rat(0));
        v[c] = 1;
        for (std::size_t c2 = 0; c2 < cols; ++c2)
            if (pivot_of_col[c2] != -1) v[c2] = -m[pivot_of_col[c2]][c];
        basis.push_back(std::move(v));
    }
    return basis;
}

// ---------------------------------------------------------------------------
// Fourier-Motzkin feasibility with strict inequalities and equalities.

inline bool fm_feasible(std::vector<LinCon> cons, int nvars) {
    // Equalities: substitute one variable at a time.
    std::vector<bool> active(nvars, true);
    for (;;) {
        int eq_idx = -1, var = -1;
        for (std::size_t i = 0; i < cons.size() && eq_idx < 0; ++i) {
            if (cons[i].rel != LinCon::Rel::eq) continue;
            for (int v = 0; v < nvars; ++v)
                if (active[v] && cons[i].a[v] != 0) {
                    eq_idx = static_cast<int>(i);
                    var = v;
                    break;
                }
        }
        if (eq_idx < 0) break;
        LinCon eq = cons[eq_idx];
        cons.erase(cons.begin() + eq_idx);
        // var = (b - sum_{j != var} a_j x_j) / a_var
        Rat av = eq.a[var];
        for (auto& c : cons) {
            if (c.a[var] == 0) continue;
            Rat k = c.a[var] / av;
            for (int j = 0; j < nvars; ++j) c.a[j] -= k * eq.a[j];
            c.b -= k * eq.b;
        }
        active[var] = false;
    }
    // Residual equalities have no active variables: 0 = b checks.
    std::vector<LinCon> ineq;
    for (auto& c : cons) {
        bool all_zero = true;
        for (int v = 0; v < nvars; ++v)
            if (active[v] && c.a[v] != 0) all_zero = false;
        if (all_zero) {
            if (c.rel == LinCon::Rel::eq && c.b != 0) return false;
            if (c.rel == LinCon::Rel::le && c.b < 0) return false;
            if (c.rel == LinCon::Rel::lt && c.b <= 0) return false;
        } else if (c.rel == LinCon::Rel::eq) {
            return false;  // unreachable: handled above
        } else {
            ineq.push_back(std::move(c));
        }
    }
    // Eliminate remaining variables pairwise.
    for (int v = 0; v < nvars; ++v) {
        if (!active[v]) continue;
        std::vector<LinCon> uppers, lowers, rest;
        for (auto& c : ineq) {
            if (c.a[v] > 0) uppers.push_back(std::move(c));
            else if (c.a[v] < 0) lowers.push_back(std::move(c));
            else rest.push_back(std::move(c));
        }
        for (const auto& lo : lowers)
            for (const auto& up : uppers) {
                // lo: a.x <= b with a_v < 0; up: a'.x <= b' with a'_v > 0.
                LinCon c;
                c.rel = (lo.rel == LinCon::Rel::lt || up.rel == LinCon::Rel::lt)
                            ? LinCon::Rel::lt
                            : LinCon::Rel::le;
                c.a.assign(nvars, Rat(0));
                Rat ku = -lo.a[v];  // > 0
                Rat kl = up.a[v];   // > 0
                for (int j = 0; j < nvars; ++j)
                    c.a[j] = kl * lo.a[j] + ku * up.a[j];
                c.b = kl * lo.b + ku * up.b;
                bool zero = true;
                for (int j = 0; j < nvars; ++j)
                    if (c.a[j] != 0) zero = false;
                if (zero) {
                    if (c.rel == LinCon::Rel::le && c.b < 0) return false;
                    if (c.rel == LinCon::Rel::lt && c.b <= 0) return false;
                } else {
                    rest.push_back(std::move(c));
                }
            }
        ineq = std::move(rest);
        active[v] = false;
    }
    for (const auto& c : ineq) {
        if (c.rel == LinCon::Rel::le && c.b < 0) return false;
        if (c.rel == LinCon::Rel::lt && c.b <= 0) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Convex position for small point sets in Q^e.

inline int affine_dim_points(const std::vector<Vec>& pts) {
    if (pts.empty()) return -1;
    Mat diffs;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        Vec d(pts[0].size());
        for (std::size_t j = 0; j < d.size(); ++j) d[j] = pts[i][j] - pts[0][j];
        diffs.push_back(std::move(d));
    }
    return mat_rank(diffs);
}

// Basis of the linear span of (pts - pts[0]).
inline Mat span_basis(const std::vector<Vec>& pts) {
    Mat rows;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        Vec d(pts[0].size());
        for (std::size_t j = 0; j < d.size(); ++j) d[j] = pts[i][j] - pts[0][j];
        rows.push_back(std::move(d));
    }
    // Row-reduce and keep nonzero rows.
    const std::size_t cols = pts[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && rows[piv][c] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] == 0) continue;
            Rat k = rows[i][c] / rows[r][c];
            for (std::size_t j = c; j < cols; ++j) rows[i][j] -= k * rows[r][j];
        }
        ++r;
    }
    rows.resize(r);
    return rows;
}

struct FacetInfo {
    std::vector<std::size_t> tight;  // indices into the point list
    Vec normal;                      // outward, within the affine span
    Rat offset;                      // normal . p == offset on the facet
};

// Facets of conv(pts) relative to its own affine hull, by exhaustive
// supporting-hyperplane enumeration.  Quadratic-ish; desk scale only.
inline std::vector<FacetInfo> facets_of(const std::vector<Vec>& pts) {
    std::vector<FacetInfo> out;
    int d = affine_dim_points(pts);
    if (d <= 0) return out;
    Mat L = span_basis(pts);  // d basis vectors of the span
    const std::size_t e = pts[0].size();
    std::set<std::vector<std::size_t>> seen;
    // Choose d-1 span constraints from (d)-subsets of points; the normal is
    // the vector in span(L) orthogonal to the subset's differences.
    std::vector<std::size_t> idx(pts.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<std::size_t> sub(d);
    std::vector<int> sel(pts.size(), 0);
    std::fill(sel.begin(), sel.begin() + d, 1);
    std::sort(sel.begin(), sel.end());
    // iterate over all d-subsets via std::prev_permutation on selector
    std::vector<int> mask(pts.size(), 0);
    std::fill(mask.begin(), mask.begin() + d, 1);
    std::sort(mask.rbegin(), mask.rend());
    do {
        sub.clear();
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (mask[i]) sub.push_back(i);
        // normal = sum_k y_k L_k with normal . (p - sub[0]) = 0 for p in sub
        Mat sys;  // (d-1) x d
        for (std::size_t s = 1; s < sub.size(); ++s) {
            Vec row(L.size());
            for (std::size_t k = 0; k < L.size(); ++k) {
                Rat dot = 0;
                for (std::size_t j = 0; j < e; ++j)
                    dot += L[k][j] * (pts[sub[s]][j] - pts[sub[0]][j]);
                row[k] = dot;
            }
            sys.push_back(std::move(row));
        }
        Mat ns = nullspace(sys, L.size());
        if (ns.size() != 1) continue;  // subset not (d-1)-dimensional
        Vec normal(e, Rat(0));
        for (std::size_t k = 0; k < L.size(); ++k)
            for (std::size_t j = 0; j < e; ++j)
                normal[j] += ns[0][k] * L[k][j];
        Rat offset = 0;
        for (std::size_t j = 0; j < e; ++j) offset += normal[j] * pts[sub[0]][j];
        int sign = 0;
        bool one_sided = true;
        std::vector<std::size_t> tight;
        for (std::size_t i = 0; i < pts.size() && one_sided; ++i) {
            Rat v = -offset;
            for (std::size_t j = 0; j < e; ++j) v += normal[j] * pts[i][j];
            if (v == 0) tight.push_back(i);
            else {
                int s = v > 0 ? 1 : -1;
                if (sign == 0) sign = s;
                else if (sign != s) one_sided = false;
            }
        }
        if (!one_sided || sign == 0) continue;
        if (sign > 0) {  // flip so the polytope satisfies normal.x <= offset
            for (auto& x : normal) x = -x;
            offset = -offset;
        }
        if (seen.insert(tight).second)
            out.push_back(FacetInfo{std::move(tight), std::move(normal),
                                    std::move(offset)});
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return out;
}

// Indices of the extreme points of conv(pts).
inline std::vector<std::size_t> extreme_points(const std::vector<Vec>& pts) {
    std::vector<std::size_t> out;
    int d = affine_dim_points(pts);
    if (d <= 0) {
        // all points coincide (or empty)
        if (!pts.empty()) out.push_back(0);
        return out;
    }
    // p is extreme iff it is extreme in every chain of facets; recurse.
    // Desk scale: a point is extreme iff it lies on >= d facets whose
    // normals span, or simply: iff it is not in the convex hull of the
    // others.  Recurse through the face lattice instead: extreme points of
    // a polytope are the union over facets of the facets' extreme points
    // when d >= 1 (every vertex lies on a facet).
    std::set<std::size_t> acc;
    for (const auto& f : facets_of(pts)) {
        std::vector<Vec> sub;
        for (auto i : f.tight) sub.push_back(pts[i]);
        for (auto k : extreme_points(sub)) acc.insert(f.tight[k]);
    }
    out.assign(acc.begin(), acc.end());
    return out;
}

inline Rat dot(const Vec& a, const Vec& b) {
    Rat s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Vec to_vec(const Point& p) { return p; }
inline Vec to_vec(const Exps& e) {
    Vec v(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) v[i] = e[i];
    return v;
}

}  // namespace trop::detail
