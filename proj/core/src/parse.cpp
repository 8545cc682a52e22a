#include "trop/parse.hpp"

#include <json.hpp>

#include <cctype>
#include <sstream>

namespace trop {
namespace {

// Replace the unicode operator aliases by their ASCII forms, byte for byte
// (all three are 3-byte UTF-8 sequences, padded with a space to keep
// source spans aligned with the original text).
std::string asciify(std::string_view text) {
    std::string s;
    s.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        auto tri = text.substr(i, 3);
        if (tri == "⊕") { s += "+  "; i += 3; }
        else if (tri == "⊗" || tri == "⊙") { s += "*  "; i += 3; }
        else { s += text[i]; ++i; }
    }
    return s;
}

class Parser {
public:
    explicit Parser(std::string_view text) : s_(asciify(text)) {}

    TropPolynomial poly(int nvars_hint) {
        auto terms = poly_terms();
        skip_ws();
        if (pos_ != s_.size())
            throw ParseError("unexpected trailing input", {pos_, s_.size()});
        return build(std::move(terms), nvars_hint);
    }

    Ideal ideal(int nvars_hint) {
        // Split on ";" or newlines, aggregating per-generator errors.
        std::vector<std::vector<RawTerm>> gens;
        std::vector<std::string> errors;
        std::size_t gen_start = pos_;
        for (;;) {
            skip_ws_no_nl();
            gen_start = pos_;
            try {
                gens.push_back(poly_terms());
            } catch (const ParseError& e) {
                errors.push_back(std::string(e.what()) + " at bytes " +
                                 std::to_string(e.span().start) + ".." +
                                 std::to_string(e.span().end));
                // Resynchronize at the next separator.
                while (pos_ < s_.size() && s_[pos_] != ';' && s_[pos_] != '\n')
                    ++pos_;
            }
            skip_ws_no_nl();
            if (pos_ >= s_.size()) break;
            if (s_[pos_] == ';' || s_[pos_] == '\n') {
                ++pos_;
                skip_ws();
                if (pos_ >= s_.size()) break;  // trailing separator
            } else {
                throw ParseError("expected ';' or newline between generators",
                                 {pos_, pos_ + 1});
            }
        }
        if (!errors.empty()) {
            std::string msg = "ideal parse failed:";
            for (const auto& e : errors) msg += "\n  " + e;
            throw ParseError(msg, {gen_start, s_.size()});
        }
        if (gens.empty())
            throw ParseError("empty ideal", {0, s_.size()});
        int nvars = nvars_hint;
        for (const auto& g : gens)
            for (const auto& t : g)
                for (const auto& [idx, e] : t.factors)
                    nvars = std::max(nvars, idx);
        if (nvars < 1) nvars = 1;
        Ideal I;
        for (auto& g : gens) I.generators.push_back(build(std::move(g), nvars));
        return I;
    }

private:
    struct RawTerm {
        bool has_coef = false;
        bool is_bottom = false;
        Rat coef;
        std::vector<std::pair<int, long long>> factors;  // (index, exponent)
        SourceSpan span;
    };

    std::vector<RawTerm> poly_terms() {
        std::vector<RawTerm> terms;
        skip_ws_no_nl();
        terms.push_back(term());
        for (;;) {
            skip_ws_no_nl();
            if (pos_ < s_.size() && s_[pos_] == '+') {
                ++pos_;
                skip_ws_no_nl();
                terms.push_back(term());
            } else {
                break;
            }
        }
        return terms;
    }

    TropPolynomial build(std::vector<RawTerm> terms, int nvars_hint) {
        if (terms.size() == 1 && terms[0].is_bottom) {
            int n = nvars_hint < 1 ? 1 : nvars_hint;
            return TropPolynomial::bottom_constant(n);
        }
        int nvars = nvars_hint;
        for (const auto& t : terms) {
            if (t.is_bottom)
                throw ParseError("-inf is only allowed as the whole polynomial",
                                 t.span);
            for (const auto& [idx, e] : t.factors) nvars = std::max(nvars, idx);
        }
        if (nvars < 1) nvars = 1;
        std::vector<Monomial> ms;
        for (auto& t : terms) {
            Monomial m{t.has_coef ? t.coef : Rat(0), Exps(nvars, 0)};
            for (const auto& [idx, e] : t.factors) m.exps[idx - 1] += e;
            ms.push_back(std::move(m));
        }
        return TropPolynomial(nvars, std::move(ms));
    }

    RawTerm term() {
        RawTerm t;
        t.span.start = pos_;
        if (pos_ >= s_.size())
            throw ParseError("expected term", {pos_, pos_});
        char c = s_[pos_];
        if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
            if (s_.compare(pos_, 4, "-inf") == 0) {
                pos_ += 4;
                t.is_bottom = true;
                t.span.end = pos_;
                return t;
            }
            t.coef = rational();
            t.has_coef = true;
            skip_ws_no_nl();
            if (pos_ < s_.size() && s_[pos_] == '*') {
                ++pos_;
                skip_ws_no_nl();
                factor_list(t);
            }
        } else if (c == 'x') {
            factor_list(t);
        } else {
            throw ParseError("expected coefficient or variable", {pos_, pos_ + 1});
        }
        t.span.end = pos_;
        return t;
    }

    void factor_list(RawTerm& t) {
        t.factors.push_back(factor());
        for (;;) {
            skip_ws_no_nl();
            std::size_t save = pos_;
            if (pos_ < s_.size() && s_[pos_] == '*') {
                ++pos_;
                skip_ws_no_nl();
                if (pos_ < s_.size() && s_[pos_] == 'x') {
                    t.factors.push_back(factor());
                } else {
                    throw ParseError("expected variable after '*'",
                                     {save, pos_ + 1});
                }
            } else {
                break;
            }
        }
    }

    std::pair<int, long long> factor() {
        if (pos_ >= s_.size() || s_[pos_] != 'x')
            throw ParseError("expected variable", {pos_, pos_ + 1});
        std::size_t start = pos_++;
        long long idx = integer_digits("variable index");
        if (idx == 0)
            throw ParseError("variable index 0 is invalid", {start, pos_});
        long long exp = 1;
        skip_ws_no_nl();
        if (pos_ < s_.size() && s_[pos_] == '^') {
            ++pos_;
            skip_ws_no_nl();
            if (pos_ < s_.size() && s_[pos_] == '-')
                throw ParseError("negative exponent", {pos_, pos_ + 1});
            exp = integer_digits("exponent");
        }
        return {static_cast<int>(idx), exp};
    }

    Rat rational() {
        std::size_t start = pos_;
        bool neg = false;
        if (pos_ < s_.size() && s_[pos_] == '-') { neg = true; ++pos_; }
        BigInt num = big_digits("numerator");
        BigInt den = 1;
        skip_ws_no_nl();
        if (pos_ < s_.size() && s_[pos_] == '/') {
            ++pos_;
            skip_ws_no_nl();
            den = big_digits("denominator");
            if (den == 0)
                throw ParseError("zero denominator", {start, pos_});
        }
        Rat q(num, den);
        return neg ? Rat(-q) : q;
    }

    long long integer_digits(const char* what) {
        BigInt v = big_digits(what);
        if (v > std::numeric_limits<long long>::max())
            throw ParseError(std::string(what) + " too large", {pos_, pos_});
        return static_cast<long long>(v);
    }

    BigInt big_digits(const char* what) {
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (pos_ == start)
            throw ParseError(std::string("expected ") + what, {start, start + 1});
        return BigInt(s_.substr(start, pos_ - start));
    }

    void skip_ws() {
        while (pos_ < s_.size() &&
               std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    // Newlines separate ideal generators, so they are not plain whitespace
    // in that context.
    void skip_ws_no_nl() {
        while (pos_ < s_.size() && s_[pos_] != '\n' &&
               std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    std::string s_;
    std::size_t pos_ = 0;
};

}  // namespace

TropPolynomial parse_poly(std::string_view text, int nvars_hint) {
    if (text.empty()) throw ParseError("empty input", {0, 0});
    return Parser(text).poly(nvars_hint);
}

Ideal parse_ideal(std::string_view text, int nvars_hint) {
    if (text.empty()) throw ParseError("empty input", {0, 0});
    return Parser(text).ideal(nvars_hint);
}

std::string rat_to_string(const Rat& q) {
    std::ostringstream os;
    os << numerator(q);
    if (denominator(q) != 1) os << '/' << denominator(q);
    return os.str();
}

Rat rat_from_string(std::string_view s) {
    std::size_t slash = s.find('/');
    try {
        if (slash == std::string_view::npos) return Rat(BigInt(std::string(s)));
        BigInt num{std::string(s.substr(0, slash))};
        BigInt den{std::string(s.substr(slash + 1))};
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rat(num, den);
    } catch (const std::exception&) {
        throw ParseError("bad rational: " + std::string(s), {0, s.size()});
    }
}

std::string serialize(const TropPolynomial& f) {
    if (f.is_bottom()) return "-inf";
    std::string out;
    bool first_term = true;
    for (const Monomial& m : f.monomials()) {
        if (!first_term) out += " + ";
        first_term = false;
        bool constant = true;
        for (long long e : m.exps) constant &= (e == 0);
        if (constant) {
            out += rat_to_string(m.coeff);
            continue;
        }
        bool first_factor = true;
        if (m.coeff != 0) {
            out += rat_to_string(m.coeff);
            first_factor = false;
        }
        for (std::size_t j = 0; j < m.exps.size(); ++j) {
            if (m.exps[j] == 0) continue;
            if (!first_factor) out += "*";
            first_factor = false;
            out += "x" + std::to_string(j + 1);
            if (m.exps[j] != 1) out += "^" + std::to_string(m.exps[j]);
        }
    }
    return out;
}

std::string serialize(const Ideal& I) {
    std::string out;
    for (std::size_t i = 0; i < I.generators.size(); ++i) {
        if (i) out += " ; ";
        out += serialize(I.generators[i]);
    }
    return out;
}

namespace {

using nlohmann::json;

json point_to_json(const Point& p) {
    json a = json::array();
    for (const Rat& q : p) a.push_back(rat_to_string(q));
    return a;
}

Point point_from_json(const json& a, const std::string& path) {
    if (!a.is_array())
        throw ParseError("expected array of rationals at " + path, {});
    Point p;
    for (const auto& v : a) {
        if (!v.is_string())
            throw ParseError("rational must be a string at " + path, {});
        p.push_back(rat_from_string(v.get<std::string>()));
    }
    return p;
}

Dir dir_from_json(const json& a, const std::string& path, bool canonical_sign) {
    if (!a.is_array())
        throw ParseError("expected integer array at " + path, {});
    Dir d;
    for (const auto& v : a) {
        if (!v.is_number_integer())
            throw ParseError("direction entries must be integers at " + path, {});
        d.push_back(v.get<long long>());
    }
    Dir prim = canonical_sign ? primitive_signed(d) : primitive(d);
    if (prim != d)
        throw ParseError("direction not primitive at " + path, {});
    return d;
}

long long weight_from_json(const json& o, const std::string& path) {
    if (!o.contains("weight")) return 1;
    const auto& w = o["weight"];
    if (!w.is_number_integer() || w.get<long long>() < 1)
        throw ParseError("weight must be a positive integer at " + path, {});
    return w.get<long long>();
}

}  // namespace

std::string curve_to_json(const TropCurve& C) {
    json j;
    j["dim"] = C.dim;
    j["vertices"] = json::array();
    for (const Point& v : C.vertices) j["vertices"].push_back(point_to_json(v));
    j["edges"] = json::array();
    for (const CurveEdge& e : C.edges)
        j["edges"].push_back({{"ends", {e.a, e.b}}, {"weight", e.weight}});
    j["rays"] = json::array();
    for (const CurveRay& r : C.rays)
        j["rays"].push_back(
            {{"vertex", r.vertex}, {"dir", r.dir}, {"weight", r.weight}});
    j["lines"] = json::array();
    for (const CurveLine& l : C.lines)
        j["lines"].push_back({{"point", point_to_json(l.point)},
                              {"dir", l.dir},
                              {"weight", l.weight}});
    if (!C.isolated_points.empty()) {
        j["points"] = json::array();
        for (const Point& p : C.isolated_points)
            j["points"].push_back(point_to_json(p));
    }
    return j.dump(2);
}

TropCurve curve_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("bad JSON: ") + e.what(),
                         {0, text.size()});
    }
    if (!j.is_object() || !j.contains("dim") || !j["dim"].is_number_integer())
        throw ParseError("missing integer field: dim", {});
    TropCurve C;
    C.dim = j["dim"].get<int>();
    if (C.dim < 1) throw ParseError("dim must be >= 1 at dim", {});
    auto check_len = [&](std::size_t n, const std::string& path) {
        if (n != static_cast<std::size_t>(C.dim))
            throw ParseError("wrong dimension at " + path, {});
    };
    for (std::size_t i = 0; j.contains("vertices") && i < j["vertices"].size(); ++i) {
        auto path = "vertices[" + std::to_string(i) + "]";
        C.vertices.push_back(point_from_json(j["vertices"][i], path));
        check_len(C.vertices.back().size(), path);
    }
    for (std::size_t i = 0; j.contains("edges") && i < j["edges"].size(); ++i) {
        auto path = "edges[" + std::to_string(i) + "]";
        const auto& o = j["edges"][i];
        if (!o.is_object() || !o.contains("ends") || !o["ends"].is_array() ||
            o["ends"].size() != 2)
            throw ParseError("edge needs ends:[i,j] at " + path, {});
        CurveEdge e;
        e.a = o["ends"][0].get<std::size_t>();
        e.b = o["ends"][1].get<std::size_t>();
        if (e.a >= C.vertices.size() || e.b >= C.vertices.size() || e.a == e.b)
            throw ParseError("bad vertex index at " + path, {});
        e.weight = weight_from_json(o, path);
        C.edges.push_back(e);
    }
    for (std::size_t i = 0; j.contains("rays") && i < j["rays"].size(); ++i) {
        auto path = "rays[" + std::to_string(i) + "]";
        const auto& o = j["rays"][i];
        if (!o.is_object() || !o.contains("vertex") || !o.contains("dir"))
            throw ParseError("ray needs vertex and dir at " + path, {});
        CurveRay r;
        r.vertex = o["vertex"].get<std::size_t>();
        if (r.vertex >= C.vertices.size())
            throw ParseError("bad vertex index at " + path, {});
        r.dir = dir_from_json(o["dir"], path, false);
        check_len(r.dir.size(), path);
        r.weight = weight_from_json(o, path);
        C.rays.push_back(r);
    }
    for (std::size_t i = 0; j.contains("lines") && i < j["lines"].size(); ++i) {
        auto path = "lines[" + std::to_string(i) + "]";
        const auto& o = j["lines"][i];
        if (!o.is_object() || !o.contains("point") || !o.contains("dir"))
            throw ParseError("line needs point and dir at " + path, {});
        CurveLine l;
        l.point = point_from_json(o["point"], path);
        check_len(l.point.size(), path);
        l.dir = dir_from_json(o["dir"], path, true);
        check_len(l.dir.size(), path);
        l.weight = weight_from_json(o, path);
        C.lines.push_back(l);
    }
    for (std::size_t i = 0; j.contains("points") && i < j["points"].size(); ++i) {
        auto path = "points[" + std::to_string(i) + "]";
        C.isolated_points.push_back(point_from_json(j["points"][i], path));
        check_len(C.isolated_points.back().size(), path);
    }
    return C;
}

}  // namespace trop
