#include "trop/newton.hpp"

#include "geom_util.hpp"

#include <algorithm>
#include <set>

namespace trop {

using detail::Mat;
using detail::Vec;

namespace {

std::vector<Vec> exponent_points(const TropPolynomial& f) {
    std::vector<Vec> pts;
    for (const Monomial& m : f.monomials()) pts.push_back(detail::to_vec(m.exps));
    return pts;
}

Vec centroid(const std::vector<Vec>& pts, const std::vector<std::size_t>& idx) {
    Vec c(pts[0].size(), Rat(0));
    for (auto i : idx)
        for (std::size_t j = 0; j < c.size(); ++j) c[j] += pts[i][j];
    for (auto& x : c) x /= Rat(idx.size());
    return c;
}

Vec cross3(const Vec& a, const Vec& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

std::vector<Exps> newton_polytope(const TropPolynomial& f) {
    if (f.is_bottom())
        throw std::invalid_argument("newton_polytope: -inf polynomial");
    auto pts = exponent_points(f);
    std::vector<Exps> verts;
    for (auto i : detail::extreme_points(pts)) verts.push_back(f.monomials()[i].exps);
    std::sort(verts.begin(), verts.end());
    return verts;
}

NewtonSubdivision dual_subdivision(const TropPolynomial& f) {
    if (f.is_bottom())
        throw std::invalid_argument("dual_subdivision: -inf polynomial");
    const int n = f.nvars();
    if (n > 3) throw std::invalid_argument("dual_subdivision: n > 3 unsupported");
    if (f.monomials().size() > 32)
        throw std::invalid_argument("dual_subdivision: more than 32 monomials");

    NewtonSubdivision S;
    S.dim = n;
    for (const Monomial& m : f.monomials()) {
        S.points.push_back(m.exps);
        S.lifts.push_back(-m.coeff);
    }
    auto pts = exponent_points(f);
    const std::size_t N = pts.size();
    const int m = detail::affine_dim_points(pts);

    if (m == 0) {
        SubdivisionCell cell;
        cell.points = {0};
        cell.a.assign(n, Rat(0));
        cell.c = S.lifts[0];
        S.cells.push_back(std::move(cell));
        return S;
    }

    Mat L = detail::span_basis(pts);  // m span directions
    std::set<std::vector<std::size_t>> seen;
    // Every maximal cell contains m+1 affinely independent points, so
    // enumerating (m+1)-subsets and testing the fitted affine support
    // against all lifted points finds each maximal cell at least once.
    std::vector<int> mask(N, 0);
    std::fill(mask.begin(), mask.begin() + (m + 1), 1);
    std::sort(mask.rbegin(), mask.rend());
    do {
        std::vector<std::size_t> sub;
        for (std::size_t i = 0; i < N; ++i)
            if (mask[i]) sub.push_back(i);
        // Fit lift = <a, omega> + c with a constrained to span(L):
        // unknowns y (coordinates of a in L) and c.
        Mat sys;
        Vec rhs;
        for (auto i : sub) {
            Vec row(L.size() + 1);
            for (std::size_t k = 0; k < L.size(); ++k)
                row[k] = detail::dot(L[k], pts[i]);
            row[L.size()] = 1;
            sys.push_back(std::move(row));
            rhs.push_back(S.lifts[i]);
        }
        auto sol = detail::lin_solve(sys, rhs);
        if (!sol) continue;
        Vec a(n, Rat(0));
        for (std::size_t k = 0; k < L.size(); ++k)
            for (int j = 0; j < n; ++j) a[j] += (*sol)[k] * L[k][j];
        Rat c = (*sol)[L.size()];
        // Supporting from below?
        bool ok = true;
        std::vector<std::size_t> tight;
        for (std::size_t i = 0; i < N && ok; ++i) {
            Rat v = detail::dot(a, pts[i]) + c;
            if (v > S.lifts[i]) ok = false;
            else if (v == S.lifts[i]) tight.push_back(i);
        }
        if (!ok) continue;
        // Maximal cells have full affine dimension m.
        std::vector<Vec> tight_pts;
        for (auto i : tight) tight_pts.push_back(pts[i]);
        if (detail::affine_dim_points(tight_pts) != m) continue;
        if (seen.insert(tight).second) {
            SubdivisionCell cell;
            cell.points = tight;
            cell.a = std::move(a);
            cell.c = std::move(c);
            S.cells.push_back(std::move(cell));
        }
    } while (std::prev_permutation(mask.begin(), mask.end()));
    return S;
}

std::vector<std::size_t> essential_monomials_lp(const TropPolynomial& f) {
    if (f.is_bottom()) return {};
    const int n = f.nvars();
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < f.monomials().size(); ++i) {
        const Monomial& mi = f.monomials()[i];
        std::vector<LinCon> cons;
        for (std::size_t j = 0; j < f.monomials().size(); ++j) {
            if (j == i) continue;
            const Monomial& mj = f.monomials()[j];
            LinCon c;  // <u, wj - wi> < Ai - Aj
            c.rel = LinCon::Rel::lt;
            c.a.resize(n);
            for (int k = 0; k < n; ++k) c.a[k] = Rat(mj.exps[k] - mi.exps[k]);
            c.b = mi.coeff - mj.coeff;
            cons.push_back(std::move(c));
        }
        if (detail::fm_feasible(std::move(cons), n)) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> essential_monomials(const TropPolynomial& f) {
    if (f.is_bottom()) return {};
    if (f.nvars() > 3) return essential_monomials_lp(f);
    NewtonSubdivision S = dual_subdivision(f);
    auto pts = exponent_points(f);
    std::set<std::size_t> acc;
    for (const auto& cell : S.cells) {
        std::vector<Vec> cp;
        for (auto i : cell.points) cp.push_back(pts[i]);
        for (auto k : detail::extreme_points(cp)) acc.insert(cell.points[k]);
    }
    return {acc.begin(), acc.end()};
}

StokesReport verify_stokes(const NewtonSubdivision& S, int k) {
    const int n = S.dim;
    if ((n != 2 && n != 3) || k < 0 || k >= n - 1)
        return {false, "dimension out of range"};
    std::vector<Vec> pts;
    for (const auto& e : S.points) pts.push_back(detail::to_vec(e));
    const int d = n - k;  // cell dimension to check

    // Collect d-cells: the maximal cells if they have dimension d, else
    // their d-faces (deduplicated).
    std::set<std::vector<std::size_t>> cells;
    for (const auto& cell : S.cells) {
        std::vector<Vec> cp;
        for (auto i : cell.points) cp.push_back(pts[i]);
        int cd = detail::affine_dim_points(cp);
        if (cd == d) {
            cells.insert(cell.points);
        } else if (cd == d + 1) {
            for (const auto& fc : detail::facets_of(cp)) {
                std::vector<std::size_t> global;
                for (auto t : fc.tight) global.push_back(cell.points[t]);
                std::sort(global.begin(), global.end());
                cells.insert(global);
            }
        }
    }

    for (const auto& cell : cells) {
        std::vector<Vec> cp;
        for (auto i : cell) cp.push_back(pts[i]);
        auto cell_ext = detail::extreme_points(cp);
        Vec cc(cp[0].size(), Rat(0));
        for (auto i : cell_ext)
            for (std::size_t j = 0; j < cc.size(); ++j) cc[j] += cp[i][j];
        for (auto& x : cc) x /= Rat(cell_ext.size());

        Vec total(n, Rat(0));
        for (const auto& fc : detail::facets_of(cp)) {
            std::vector<Vec> fp;
            for (auto i : fc.tight) fp.push_back(cp[i]);
            auto f_ext = detail::extreme_points(fp);
            Vec fctr(n, Rat(0));
            for (auto i : f_ext)
                for (int j = 0; j < n; ++j) fctr[j] += fp[i][j];
            for (auto& x : fctr) x /= Rat(f_ext.size());

            Vec w(n, Rat(0));
            if (d == 2) {
                // Facet is a segment; its length times the outer in-plane
                // unit normal equals (cell-plane normal) x (edge vector) up
                // to a positive factor common to the whole cell.
                const Vec& p0 = fp[f_ext[0]];
                const Vec& p1 = fp[f_ext[1]];
                Vec v(n);
                for (int j = 0; j < n; ++j) v[j] = p1[j] - p0[j];
                if (n == 2) {
                    w = {-v[1], v[0]};
                } else {
                    // integer normal of the cell plane
                    Mat L = detail::span_basis(cp);
                    Vec N = cross3(L[0], L[1]);
                    w = cross3(N, v);
                }
            } else {  // d == 3: facet polygon vector area (doubled)
                // Order the facet boundary as a vertex cycle.
                auto edges = detail::facets_of(fp);
                std::map<std::size_t, std::vector<std::size_t>> adj;
                for (const auto& e : edges) {
                    std::vector<Vec> ep;
                    for (auto i : e.tight) ep.push_back(fp[i]);
                    auto ee = detail::extreme_points(ep);
                    if (ee.size() != 2) return {false, "bad facet edge"};
                    std::size_t a = e.tight[ee[0]], b = e.tight[ee[1]];
                    adj[a].push_back(b);
                    adj[b].push_back(a);
                }
                std::vector<std::size_t> cyc;
                std::size_t start = adj.begin()->first, prev = SIZE_MAX,
                            cur = start;
                do {
                    cyc.push_back(cur);
                    auto& nb = adj[cur];
                    std::size_t nxt = (nb[0] != prev) ? nb[0] : nb[1];
                    prev = cur;
                    cur = nxt;
                } while (cur != start);
                for (std::size_t i = 0; i < cyc.size(); ++i) {
                    const Vec& p = fp[cyc[i]];
                    const Vec& q = fp[cyc[(i + 1) % cyc.size()]];
                    Vec x = cross3(p, q);
                    for (int j = 0; j < n; ++j) w[j] += x[j];
                }
            }
            // Orient outward.
            Vec off(n);
            for (int j = 0; j < n; ++j) off[j] = fctr[j] - cc[j];
            Rat s = detail::dot(w, off);
            if (s == 0) return {false, "degenerate facet orientation"};
            if (s < 0)
                for (auto& x : w) x = -x;
            for (int j = 0; j < n; ++j) total[j] += w[j];
        }
        for (int j = 0; j < n; ++j)
            if (total[j] != 0) return {false, "Minkowski relation violated"};
    }
    return {true, ""};
}

}  // namespace trop
