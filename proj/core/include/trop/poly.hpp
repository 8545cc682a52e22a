/*
 * poly.hpp
 * --------
 * Exact max-plus (tropical) scalars and polynomials.
 *
 * The semifield element is a rational number or the bottom element -inf:
 * a (+) b = max(a, b), a (*) b = a + b.  Bottom is neutral for (+) and
 * absorbing for (*).
 *
 * A tropical polynomial is a finite set of monomials, each a rational
 * coefficient together with a nonnegative integer exponent vector.  As a
 * function it is the piecewise linear convex function
 *     f(u) = max over monomials of ( <u, exps> + coeff ).
 * Duplicate exponent vectors are merged at construction by taking the
 * maximum coefficient, which preserves function semantics and gives a
 * canonical form.  Monomials are kept sorted lexicographically by exponent
 * vector, so monomial indices are stable and meaningful to callers.
 *
 * All values are immutable after construction and all operations are pure.
 */
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace trop {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

using Point = std::vector<Rat>;   // a point of Q^n
using Exps = std::vector<long long>;  // an exponent vector (nonnegative)

// A rational number or the bottom element -inf.
class TropScalar {
public:
    TropScalar() : bottom_(true) {}                 // -inf
    TropScalar(Rat v) : bottom_(false), value_(std::move(v)) {}
    TropScalar(int v) : TropScalar(Rat(v)) {}

    static TropScalar bottom() { return TropScalar(); }

    bool is_bottom() const { return bottom_; }
    // Finite value; callers must check is_bottom first.
    const Rat& value() const {
        if (bottom_) throw std::logic_error("TropScalar: value() on -inf");
        return value_;
    }

    friend bool operator==(const TropScalar& a, const TropScalar& b) {
        if (a.bottom_ != b.bottom_) return false;
        return a.bottom_ || a.value_ == b.value_;
    }
    // -inf is below every rational.
    friend bool operator<(const TropScalar& a, const TropScalar& b) {
        if (a.bottom_) return !b.bottom_;
        if (b.bottom_) return false;
        return a.value_ < b.value_;
    }
    friend bool operator<=(const TropScalar& a, const TropScalar& b) {
        return a < b || a == b;
    }

private:
    bool bottom_;
    Rat value_;
};

// a (+) b = max(a, b); bottom neutral.
TropScalar trop_add(const TropScalar& a, const TropScalar& b);
// a (*) b = a + b; bottom absorbing.
TropScalar trop_mul(const TropScalar& a, const TropScalar& b);

// One term: coeff (*) x1^e1 (*) ... (*) xn^en with a finite coefficient.
struct Monomial {
    Rat coeff;
    Exps exps;

    bool operator==(const Monomial&) const = default;
};

struct EvalResult {
    TropScalar value;
    std::vector<std::size_t> argmax;  // indices of all maximizing monomials
};

class TropPolynomial {
public:
    // Merges duplicate exponent vectors by coefficient max and sorts
    // monomials lexicographically by exponent vector.  Rejects negative
    // exponents and exponent vectors of the wrong length.
    TropPolynomial(int nvars, std::vector<Monomial> monomials);

    // The constant -inf polynomial (only ever produced by parsing).
    static TropPolynomial bottom_constant(int nvars);

    int nvars() const { return nvars_; }
    bool is_bottom() const { return monomials_.empty(); }
    const std::vector<Monomial>& monomials() const { return monomials_; }

    bool operator==(const TropPolynomial&) const = default;

private:
    TropPolynomial(int nvars) : nvars_(nvars) {}  // bottom constant
    int nvars_;
    std::vector<Monomial> monomials_;  // sorted lex by exps, pairwise distinct
};

struct Ideal {
    std::vector<TropPolynomial> generators;  // nonempty, equal nvars
};

// f(u) with the full set of maximizing monomial indices.
EvalResult evaluate(const TropPolynomial& f, const Point& u);

// (+) merges monomial sets (coefficient max on collisions).
TropPolynomial poly_add(const TropPolynomial& f, const TropPolynomial& g);
// (*) is max-plus convolution: sum exponents, add coefficients.
TropPolynomial poly_mul(const TropPolynomial& f, const TropPolynomial& g);
// f^s by repeated multiplication, s >= 1.
TropPolynomial poly_power(const TropPolynomial& f, int s);

// True iff every monomial is univariate or constant.
bool is_simple(const TropPolynomial& f);
bool is_simple(const Ideal& I);

}  // namespace trop
