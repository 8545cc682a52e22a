#include "trop/poly.hpp"

#include <algorithm>

namespace trop {

TropScalar trop_add(const TropScalar& a, const TropScalar& b) {
    return a < b ? b : a;
}

TropScalar trop_mul(const TropScalar& a, const TropScalar& b) {
    if (a.is_bottom() || b.is_bottom()) return TropScalar::bottom();
    return TropScalar(a.value() + b.value());
}

TropPolynomial::TropPolynomial(int nvars, std::vector<Monomial> monomials)
    : nvars_(nvars) {
    if (nvars < 1) throw std::invalid_argument("TropPolynomial: nvars < 1");
    if (monomials.empty())
        throw std::invalid_argument("TropPolynomial: no monomials");
    std::map<Exps, Rat> merged;
    for (auto& m : monomials) {
        if (static_cast<int>(m.exps.size()) != nvars)
            throw std::invalid_argument("TropPolynomial: exponent vector length != nvars");
        for (long long e : m.exps)
            if (e < 0) throw std::invalid_argument("TropPolynomial: negative exponent");
        auto [it, inserted] = merged.emplace(std::move(m.exps), m.coeff);
        if (!inserted && it->second < m.coeff) it->second = m.coeff;
    }
    monomials_.reserve(merged.size());
    for (auto& [e, c] : merged) monomials_.push_back(Monomial{c, e});
}

TropPolynomial TropPolynomial::bottom_constant(int nvars) {
    if (nvars < 1) throw std::invalid_argument("TropPolynomial: nvars < 1");
    return TropPolynomial(nvars);
}

EvalResult evaluate(const TropPolynomial& f, const Point& u) {
    if (static_cast<int>(u.size()) != f.nvars())
        throw std::invalid_argument("evaluate: point dimension != nvars");
    if (f.is_bottom()) return {TropScalar::bottom(), {}};
    EvalResult r;
    bool first = true;
    Rat best;
    for (std::size_t i = 0; i < f.monomials().size(); ++i) {
        const Monomial& m = f.monomials()[i];
        Rat v = m.coeff;
        for (int j = 0; j < f.nvars(); ++j)
            if (m.exps[j] != 0) v += u[j] * m.exps[j];
        if (first || best < v) {
            best = std::move(v);
            r.argmax.assign(1, i);
            first = false;
        } else if (v == best) {
            r.argmax.push_back(i);
        }
    }
    r.value = TropScalar(best);
    return r;
}

TropPolynomial poly_add(const TropPolynomial& f, const TropPolynomial& g) {
    if (f.nvars() != g.nvars())
        throw std::invalid_argument("poly_add: nvars mismatch");
    if (f.is_bottom()) return g;
    if (g.is_bottom()) return f;
    std::vector<Monomial> ms = f.monomials();
    ms.insert(ms.end(), g.monomials().begin(), g.monomials().end());
    return TropPolynomial(f.nvars(), std::move(ms));
}

TropPolynomial poly_mul(const TropPolynomial& f, const TropPolynomial& g) {
    if (f.nvars() != g.nvars())
        throw std::invalid_argument("poly_mul: nvars mismatch");
    if (f.is_bottom() || g.is_bottom())
        return TropPolynomial::bottom_constant(f.nvars());
    std::vector<Monomial> ms;
    ms.reserve(f.monomials().size() * g.monomials().size());
    for (const Monomial& a : f.monomials())
        for (const Monomial& b : g.monomials()) {
            Monomial m{a.coeff + b.coeff, a.exps};
            for (int j = 0; j < f.nvars(); ++j) m.exps[j] += b.exps[j];
            ms.push_back(std::move(m));
        }
    return TropPolynomial(f.nvars(), std::move(ms));
}

TropPolynomial poly_power(const TropPolynomial& f, int s) {
    if (s < 1) throw std::invalid_argument("poly_power: s < 1");
    TropPolynomial r = f;
    for (int i = 1; i < s; ++i) r = poly_mul(r, f);
    return r;
}

bool is_simple(const TropPolynomial& f) {
    for (const Monomial& m : f.monomials()) {
        int nonzero = 0;
        for (long long e : m.exps)
            if (e != 0) ++nonzero;
        if (nonzero > 1) return false;
    }
    return true;
}

bool is_simple(const Ideal& I) {
    return std::all_of(I.generators.begin(), I.generators.end(),
                       [](const TropPolynomial& f) { return is_simple(f); });
}

}  // namespace trop
