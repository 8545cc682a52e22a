/*
 * main.cpp
 * --------
 * tropgeo CLI: parse, analyze, synthesize, verify, and emit JSON/SVG.
 *
 * Subcommands: eval, curve, subdivision, additive, synth, verify, skeleton,
 * affine.  Machine-readable JSON on stdout, diagnostics on stderr.  Exit
 * codes: 0 success / verdict pass, 1 verdict fail, 2 usage, 3 computation
 * error.  Identical inputs and seed give byte-identical output.
 */
#include "trop/additive.hpp"
#include "trop/curve.hpp"
#include "trop/newton.hpp"
#include "trop/parse.hpp"
#include "trop/synth.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace trop;

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct VerdictFail : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string subcommand;
    std::optional<std::string> poly, ideal, curve, point, basis;
    std::optional<std::string> svg_path, json_path;
    std::uint64_t seed = 0;
    int samples = 600;
    long long cgap = 16;
    std::vector<std::string> inputs;  // raw strings hashed into metadata
};

const char* kUsage =
    "usage: tropgeo <subcommand> [flags]\n"
    "  subcommands: eval curve subdivision additive synth verify skeleton affine\n"
    "  flags: -f/--poly STR   --ideal STR|FILE   --curve JSON|FILE\n"
    "         -p/--point a,b,...   --basis \"a,b,..;c,d,..\"\n"
    "         --seed N (default 0)   --samples N (default 600)\n"
    "         --cgap N (default 16)  --svg FILE   --json FILE\n";

RunConfig parse_args(int argc, char** argv) {
    if (argc < 2) throw UsageError("missing subcommand");
    RunConfig cfg;
    cfg.subcommand = argv[1];
    auto need = [&](int& i) -> std::string {
        if (i + 1 >= argc)
            throw UsageError(std::string("flag ") + argv[i] + " needs a value");
        return argv[++i];
    };
    for (int i = 2; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "-f" || a == "--poly") cfg.poly = need(i);
        else if (a == "--ideal") cfg.ideal = need(i);
        else if (a == "--curve") cfg.curve = need(i);
        else if (a == "-p" || a == "--point") cfg.point = need(i);
        else if (a == "--basis") cfg.basis = need(i);
        else if (a == "--svg") cfg.svg_path = need(i);
        else if (a == "--json") cfg.json_path = need(i);
        else if (a == "--seed") cfg.seed = std::stoull(need(i));
        else if (a == "--samples") cfg.samples = std::stoi(need(i));
        else if (a == "--cgap") cfg.cgap = std::stoll(need(i));
        else throw UsageError("unknown flag: " + a);
    }
    return cfg;
}

// If the value names a readable file, use its contents; otherwise inline.
std::string load(const std::string& value) {
    std::ifstream in(value);
    if (!in.good()) return value;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::uint64_t fnv1a(const std::vector<std::string>& parts) {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& s : parts)
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ull;
        }
    return h;
}

std::string metadata(const RunConfig& cfg) {
    std::ostringstream os;
    os << "\"metadata\":{\"version\":\"" << kVersion << "\",\"seed\":"
       << cfg.seed << ",\"input_hash\":\"" << std::hex << fnv1a(cfg.inputs)
       << "\"}";
    return os.str();
}

void emit(const RunConfig& cfg, const std::string& body) {
    std::string out = "{" + metadata(cfg) + "," + body + "}\n";
    if (cfg.json_path) {
        std::ofstream f(*cfg.json_path);
        f << out;
    }
    std::cout << out;
}

Point parse_point(const std::string& s) {
    Point p;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) p.push_back(rat_from_string(tok));
    if (p.empty()) throw UsageError("empty point");
    return p;
}

std::string json_point(const Point& p) {
    std::string s = "[";
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) s += ",";
        s += "\"" + rat_to_string(p[i]) + "\"";
    }
    return s + "]";
}

// ---------- SVG ----------

double approx(const Rat& q) { return q.convert_to<double>(); }

void write_svg(const std::string& path, const TropCurve& C) {
    auto pieces = curve_pieces(C);
    double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
    bool first = true;
    auto feed = [&](double x, double y) {
        if (first || x < xlo) xlo = x;
        if (first || x > xhi) xhi = x;
        if (first || y < ylo) ylo = y;
        if (first || y > yhi) yhi = y;
        first = false;
    };
    for (const auto& v : C.vertices) feed(approx(v[0]), approx(v[1]));
    for (const auto& l : C.lines) feed(approx(l.point[0]), approx(l.point[1]));
    for (const auto& p : C.isolated_points) feed(approx(p[0]), approx(p[1]));
    if (first) feed(0, 0);
    double mx = std::max({xhi - xlo, yhi - ylo, 1.0});
    xlo -= 0.1 * mx + 1;
    xhi += 0.1 * mx + 1;
    ylo -= 0.1 * mx + 1;
    yhi += 0.1 * mx + 1;
    std::ofstream f(path);
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.3f "
                  "%.3f %.3f %.3f\">\n",
                  xlo, ylo, xhi - xlo, yhi - ylo);
    f << buf;
    // Flip y so the tropical "up" points up on screen.
    auto Y = [&](double y) { return ylo + yhi - y; };
    auto seg = [&](double x1, double y1, double x2, double y2, long long w) {
        std::snprintf(buf, sizeof buf,
                      "<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" "
                      "stroke=\"black\" stroke-width=\"%.3f\"/>\n",
                      x1, Y(y1), x2, Y(y2), 0.01 * mx * (1 + 0.5 * (w - 1)));
        f << buf;
        if (w > 1) {
            std::snprintf(buf, sizeof buf,
                          "<text x=\"%.3f\" y=\"%.3f\" font-size=\"%.3f\">%lld"
                          "</text>\n",
                          (x1 + x2) / 2, Y((y1 + y2) / 2), 0.05 * mx, w);
            f << buf;
        }
    };
    for (const Piece& pc : pieces) {
        double px = approx(pc.p[0]), py = approx(pc.p[1]);
        double dx = pc.d[0], dy = pc.d[1];
        double t0 = 0, t1 = 0;
        if (pc.kind == Piece::Kind::segment) {
            t1 = approx(pc.tmax);
        } else {
            // clip the unbounded directions at the view box
            double tmax = 4 * mx;
            t1 = tmax;
            if (pc.kind == Piece::Kind::line) t0 = -tmax;
        }
        seg(px + t0 * dx, py + t0 * dy, px + t1 * dx, py + t1 * dy, pc.weight);
    }
    for (const auto& v : C.vertices) {
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\"/>\n",
                      approx(v[0]), Y(approx(v[1])), 0.02 * mx);
        f << buf;
    }
    for (const auto& p : C.isolated_points) {
        std::snprintf(buf, sizeof buf,
                      "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"%.3f\" "
                      "fill=\"red\"/>\n",
                      approx(p[0]), Y(approx(p[1])), 0.02 * mx);
        f << buf;
    }
    f << "</svg>\n";
}

// ---------- subcommands ----------

int cmd_eval(RunConfig& cfg) {
    if (!cfg.poly || !cfg.point) throw UsageError("eval needs --poly and --point");
    TropPolynomial f = parse_poly(*cfg.poly);
    Point p = parse_point(*cfg.point);
    if (static_cast<int>(p.size()) != f.nvars())
        throw UsageError("point dimension differs from the polynomial");
    auto r = evaluate(f, p);
    std::ostringstream os;
    if (r.value.is_bottom())
        os << "\"value\":\"-inf\",\"argmax\":[]";
    else {
        os << "\"value\":\"" << rat_to_string(r.value.value())
           << "\",\"argmax\":[";
        for (std::size_t i = 0; i < r.argmax.size(); ++i)
            os << (i ? "," : "") << r.argmax[i];
        os << "],\"monomials\":\"" << serialize(f) << "\"";
    }
    emit(cfg, os.str());
    return 0;
}

int cmd_curve(RunConfig& cfg) {
    if (!cfg.poly) throw UsageError("curve needs --poly");
    TropCurve C = curve_from_poly2(parse_poly(*cfg.poly, 2));
    if (cfg.svg_path) write_svg(*cfg.svg_path, C);
    emit(cfg, "\"curve\":" + curve_to_json(C));
    return 0;
}

int cmd_subdivision(RunConfig& cfg) {
    if (!cfg.poly) throw UsageError("subdivision needs --poly");
    auto S = dual_subdivision(parse_poly(*cfg.poly));
    std::ostringstream os;
    os << "\"dim\":" << S.dim << ",\"points\":[";
    for (std::size_t i = 0; i < S.points.size(); ++i) {
        os << (i ? "," : "") << "[";
        for (std::size_t c = 0; c < S.points[i].size(); ++c)
            os << (c ? "," : "") << S.points[i][c];
        os << "]";
    }
    os << "],\"cells\":[";
    for (std::size_t k = 0; k < S.cells.size(); ++k) {
        os << (k ? "," : "") << "[";
        for (std::size_t i = 0; i < S.cells[k].points.size(); ++i)
            os << (i ? "," : "") << S.cells[k].points[i];
        os << "]";
    }
    os << "]";
    emit(cfg, os.str());
    return 0;
}

int cmd_additive(RunConfig& cfg) {
    if (!cfg.curve) throw UsageError("additive needs --curve");
    TropCurve C = curve_from_json(load(*cfg.curve));
    auto cert = is_additive(C);
    std::ostringstream os;
    const char* verdict =
        cert.verdict == AdditivityCertificate::Verdict::additive
            ? "additive"
        : cert.verdict == AdditivityCertificate::Verdict::not_additive
            ? "not-additive"
            : "criteria-pass-oracle-pass";
    os << "\"verdict\":\"" << verdict << "\"";
    if (cert.witness)
        os << ",\"witness\":[" << json_point(cert.witness->first) << ","
           << json_point(cert.witness->second) << "]";
    emit(cfg, os.str());
    return cert.verdict == AdditivityCertificate::Verdict::not_additive ? 1 : 0;
}

int cmd_synth(RunConfig& cfg) {
    if (!cfg.curve) throw UsageError("synth needs --curve");
    TropCurve C = curve_from_json(load(*cfg.curve));
    auto cert = is_additive(C);
    if (cert.verdict == AdditivityCertificate::Verdict::not_additive) {
        std::ostringstream os;
        os << "\"verdict\":\"not-additive\"";
        if (cert.witness)
            os << ",\"witness\":[" << json_point(cert.witness->first) << ","
               << json_point(cert.witness->second) << "]";
        emit(cfg, os.str());
        return 1;
    }
    Ideal I;
    if (C.dim == 2)
        I.generators.push_back(synthesize_plane(C));
    else if (C.dim == 3)
        I = synthesize_space_curve(C);
    else
        throw UsageError("synth supports dim 2 and 3");
    auto rep = verify_ideal(I, C, cfg.samples, cfg.seed);
    emit(cfg, "\"report\":" + report_to_json(rep));
    return rep.pass() ? 0 : 1;
}

int cmd_verify(RunConfig& cfg) {
    if (!cfg.ideal || !cfg.curve)
        throw UsageError("verify needs --ideal and --curve");
    TropCurve C = curve_from_json(load(*cfg.curve));
    Ideal I = parse_ideal(load(*cfg.ideal), C.dim);
    auto rep = verify_ideal(I, C, cfg.samples, cfg.seed);
    emit(cfg, "\"report\":" + report_to_json(rep));
    // The verdict is about Z(I) = C; simplicity is reported but a general
    // ideal (e.g. the paper's ray ideal) may verify without being simple.
    bool ok = rep.on_curve_pass == rep.on_curve_total &&
              rep.off_curve_pass == rep.off_curve_total &&
              (!rep.exact_equality || *rep.exact_equality);
    return ok ? 0 : 1;
}

int cmd_skeleton(RunConfig& cfg) {
    if (!cfg.curve) throw UsageError("skeleton needs --curve");
    TropCurve C = curve_from_json(load(*cfg.curve));
    auto sk = skeleton0(C);
    std::ostringstream os;
    os << "\"skeleton0\":[";
    for (std::size_t i = 0; i < sk.size(); ++i)
        os << (i ? "," : "") << json_point(sk[i]);
    os << "],\"contractible\":" << (is_contractible(C) ? "true" : "false");
    emit(cfg, os.str());
    return 0;
}

int cmd_affine(RunConfig& cfg) {
    if (!cfg.point) throw UsageError("affine needs --point (and --basis)");
    Point p = parse_point(*cfg.point);
    std::vector<Dir> basis;
    if (cfg.basis) {
        std::stringstream ss(*cfg.basis);
        std::string vec;
        while (std::getline(ss, vec, ';')) {
            Dir d;
            std::stringstream vs(vec);
            std::string tok;
            while (std::getline(vs, tok, ',')) d.push_back(std::stoll(tok));
            basis.push_back(std::move(d));
        }
    }
    Ideal I = synthesize_affine_subspace(p, basis);
    std::ostringstream os;
    os << "\"generators\":[";
    for (std::size_t i = 0; i < I.generators.size(); ++i)
        os << (i ? "," : "") << "\"" << serialize(I.generators[i]) << "\"";
    os << "]";
    emit(cfg, os.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    try {
        cfg = parse_args(argc, argv);
        for (const auto* s : {&cfg.poly, &cfg.ideal, &cfg.curve, &cfg.point,
                              &cfg.basis})
            if (*s) cfg.inputs.push_back(**s);
        cfg.inputs.push_back(std::to_string(cfg.seed));

        const std::map<std::string, int (*)(RunConfig&)> table{
            {"eval", cmd_eval},           {"curve", cmd_curve},
            {"subdivision", cmd_subdivision}, {"additive", cmd_additive},
            {"synth", cmd_synth},         {"verify", cmd_verify},
            {"skeleton", cmd_skeleton},   {"affine", cmd_affine}};
        auto it = table.find(cfg.subcommand);
        if (it == table.end())
            throw UsageError("unknown subcommand: " + cfg.subcommand);
        return it->second(cfg);
    } catch (const UsageError& ex) {
        std::cerr << "error: " << ex.what() << "\n" << kUsage;
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 3;
    }
}
