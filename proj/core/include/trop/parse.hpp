/*
 * parse.hpp
 * ---------
 * Text grammar for tropical polynomials and ideals, canonical
 * serialization, and the JSON schema for curves.
 *
 * Grammar ("+" is tropical plus / max, "*" is tropical times / sum):
 *   poly   := term ("+" term)*
 *   term   := [coef "*"] factor ("*" factor)* | coef
 *   factor := "x" index ["^" nat]
 *   coef   := rational ("p" or "p/q", negatives allowed) | "-inf"
 * Whitespace is ignored; an omitted coefficient means 0 (the tropical
 * unit).  The unicode operators U+2295/U+2297/U+2299 are accepted as
 * aliases for "+" and "*".  Ideals are generators separated by ";" or
 * newlines.
 *
 * Canonical serialization sorts monomials lexicographically by exponent
 * vector and prints coefficients in lowest terms, so parse(serialize(x))
 * is a fixed point.  Curve JSON keeps rationals as "p/q" strings to avoid
 * float corruption.
 */
#pragma once

#include "trop/curve.hpp"
#include "trop/poly.hpp"

#include <string>
#include <string_view>

namespace trop {

struct SourceSpan {
    std::size_t start = 0, end = 0;  // byte offsets, start <= end
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, SourceSpan span)
        : std::runtime_error(std::move(msg)), span_(span) {}
    SourceSpan span() const { return span_; }

private:
    SourceSpan span_;
};

// nvars_hint forces the ambient dimension (must be >= max index used);
// 0 means "max variable index used, at least 1".
TropPolynomial parse_poly(std::string_view text, int nvars_hint = 0);
Ideal parse_ideal(std::string_view text, int nvars_hint = 0);

std::string serialize(const TropPolynomial& f);
std::string serialize(const Ideal& I);

std::string rat_to_string(const Rat& q);
Rat rat_from_string(std::string_view s);

std::string curve_to_json(const TropCurve& C);
TropCurve curve_from_json(std::string_view text);

}  // namespace trop
