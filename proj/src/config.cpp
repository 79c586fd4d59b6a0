#include "hyperasym/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "hyperasym/heat_engine.hpp"

namespace hyperasym {

namespace {

class Reader {
public:
    explicit Reader(std::string source) : source_(std::move(source)) {}

    [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
        const YAML::Mark m = node.Mark();
        std::ostringstream os;
        os << source_;
        if (!m.is_null()) os << ':' << m.line + 1;
        os << ": " << msg;
        throw ConfigError(os.str());
    }

    void expect_map(const YAML::Node& node, const std::string& what) const {
        if (!node.IsMap()) fail(node, what + " must be a mapping");
    }

    void allow_keys(const YAML::Node& node, const std::set<std::string>& keys, const std::string& where) const {
        for (const auto& kv : node) {
            const std::string k = kv.first.as<std::string>();
            if (!keys.count(k)) fail(kv.first, "unknown key '" + k + "' in " + where);
        }
    }

    double real(const YAML::Node& node, const std::string& what) const {
        if (!node.IsScalar()) fail(node, what + " must be a number");
        try {
            const double v = node.as<double>();
            if (!std::isfinite(v)) fail(node, what + " must be finite");
            return v;
        } catch (const YAML::BadConversion&) {
            fail(node, what + " must be a number, got '" + node.Scalar() + "'");
        }
    }

    int integer(const YAML::Node& node, const std::string& what) const {
        if (!node.IsScalar()) fail(node, what + " must be an integer");
        try {
            return node.as<int>();
        } catch (const YAML::BadConversion&) {
            fail(node, what + " must be an integer, got '" + node.Scalar() + "'");
        }
    }

    // [re, im] or a plain real number
    cplx complex(const YAML::Node& node, const std::string& what) const {
        if (node.IsScalar()) return real(node, what);
        if (!node.IsSequence() || node.size() != 2) fail(node, what + " must be [re, im]");
        return {real(node[0], what + " (re)"), real(node[1], what + " (im)")};
    }

    std::string text(const YAML::Node& node, const std::string& what) const {
        if (!node.IsScalar()) fail(node, what + " must be a string");
        return node.Scalar();
    }

private:
    std::string source_;
};

void emit_complex(YAML::Emitter& out, cplx c) {
    out << YAML::Flow << YAML::BeginSeq << c.real() << c.imag() << YAML::EndSeq;
}

}  // namespace

AnalyticDatum ProblemConfig::datum() const { return AnalyticDatum(poles, polynomial, eps_tilde); }

Direction ProblemConfig::direction() const {
    const AnalyticDatum d = datum();
    if (heat) return Direction::heat(theta, delta, d);
    return BorelEngine::direction(equation, d, theta, delta);
}

EngineOptions ProblemConfig::engine_options() const {
    EngineOptions o;
    o.eps = eps;
    o.scan_cap_factor = tolerances.scan_cap;
    o.quad_rel_tol = tolerances.quadrature;
    return o;
}

std::unique_ptr<HyperEngine> ProblemConfig::make_engine() const {
    if (heat) return std::make_unique<HeatEngine>(datum(), direction(), engine_options());
    return std::make_unique<BorelEngine>(equation, datum(), direction(), engine_options());
}

ProblemConfig parse_config(const std::string& text, const std::string& source) {
    const Reader rd(source);
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        std::ostringstream os;
        os << source << ':' << e.mark.line + 1 << ": " << e.msg;
        throw ConfigError(os.str());
    }
    if (!root.IsMap()) rd.fail(root, "top level must be a mapping");
    rd.allow_keys(root,
                  {"datum", "equation", "theta", "delta", "t_grid", "z_points", "levels", "eps", "tolerances",
                   "verify", "output"},
                  "the top level");

    ProblemConfig c;

    const YAML::Node datum = root["datum"];
    if (!datum) rd.fail(root, "missing 'datum'");
    rd.expect_map(datum, "datum");
    rd.allow_keys(datum, {"poles", "polynomial", "eps_tilde"}, "datum");
    if (const YAML::Node poles = datum["poles"]) {
        if (!poles.IsSequence()) rd.fail(poles, "datum.poles must be a list");
        for (const YAML::Node& p : poles) {
            rd.expect_map(p, "pole");
            rd.allow_keys(p, {"a", "order", "c"}, "pole");
            if (!p["a"]) rd.fail(p, "pole needs a location 'a'");
            PoleTerm t;
            t.location = rd.complex(p["a"], "pole location");
            t.order = p["order"] ? rd.integer(p["order"], "pole order") : 1;
            if (t.order < 1) rd.fail(p["order"], "pole order must be >= 1");
            t.coefficient = p["c"] ? rd.complex(p["c"], "pole coefficient") : cplx(1.0);
            if (t.location == 0.0) rd.fail(p["a"], "pole at the origin: phi must be holomorphic at 0");
            if (t.coefficient == 0.0) rd.fail(p["c"], "pole coefficient must be nonzero");
            c.poles.push_back(t);
        }
    }
    if (const YAML::Node poly = datum["polynomial"]) {
        if (!poly.IsSequence()) rd.fail(poly, "datum.polynomial must be a list of coefficients");
        for (const YAML::Node& a : poly) c.polynomial.push_back(rd.complex(a, "polynomial coefficient"));
    }
    if (const YAML::Node et = datum["eps_tilde"]) {
        c.eps_tilde = rd.real(et, "datum.eps_tilde");
        if (*c.eps_tilde < 0.0) rd.fail(et, "datum.eps_tilde must be >= 0");
    }
    if (c.poles.empty() && c.polynomial.empty()) rd.fail(datum, "datum has neither poles nor a polynomial part");

    if (const YAML::Node eq = root["equation"]) {
        rd.expect_map(eq, "equation");
        rd.allow_keys(eq, {"kind", "lambda", "q", "beta"}, "equation");
        const std::string kind = eq["kind"] ? rd.text(eq["kind"], "equation.kind") : "heat";
        if (kind == "heat") {
            if (eq["lambda"] || eq["q"] || eq["beta"]) rd.fail(eq, "the heat equation takes no lambda, q or beta");
            c.heat = true;
        } else if (kind == "simple") {
            c.heat = false;
            if (eq["lambda"]) c.equation.lambda = rd.complex(eq["lambda"], "equation.lambda");
            if (eq["q"]) c.equation.q = rd.integer(eq["q"], "equation.q");
            if (eq["beta"]) c.equation.beta = rd.integer(eq["beta"], "equation.beta");
            if (c.equation.q < 2) rd.fail(eq["q"], "equation.q must be >= 2");
            if (c.equation.beta < 1) rd.fail(eq["beta"], "equation.beta must be >= 1");
            if (c.equation.lambda == 0.0) rd.fail(eq["lambda"], "equation.lambda must be nonzero");
        } else {
            rd.fail(eq["kind"], "equation.kind must be 'heat' or 'simple', got '" + kind + "'");
        }
    }

    if (!root["theta"]) rd.fail(root, "missing 'theta'");
    c.theta = rd.real(root["theta"], "theta");
    if (const YAML::Node d = root["delta"]) {
        c.delta = rd.real(d, "delta");
        if (!(c.delta > 0.0)) rd.fail(d, "delta must be positive");
    }

    const YAML::Node grid = root["t_grid"];
    if (!grid) rd.fail(root, "missing 't_grid'");
    if (!grid.IsSequence()) rd.fail(grid, "t_grid must be a list of |t| values");
    if (grid.size() == 0) rd.fail(grid, "t_grid is empty");
    for (const YAML::Node& t : grid) {
        c.t_grid.push_back(rd.real(t, "t_grid entry"));
        if (!(c.t_grid.back() > 0.0)) rd.fail(t, "t_grid entries must be positive");
    }

    if (const YAML::Node zs = root["z_points"]) {
        if (!zs.IsSequence() || zs.size() == 0) rd.fail(zs, "z_points must be a nonempty list of [re, im]");
        c.z_points.clear();
        for (const YAML::Node& z : zs) c.z_points.push_back(rd.complex(z, "z point"));
    }

    if (const YAML::Node lv = root["levels"]) {
        c.levels = rd.integer(lv, "levels");
        if (c.levels < 0) rd.fail(lv, "levels must be >= 0");
    }
    if (const YAML::Node e = root["eps"]) {
        c.eps = rd.real(e, "eps");
        if (!(*c.eps > 0.0)) rd.fail(e, "eps must be positive");
    }

    if (const YAML::Node tol = root["tolerances"]) {
        rd.expect_map(tol, "tolerances");
        rd.allow_keys(tol, {"quadrature", "series", "scan_cap"}, "tolerances");
        if (tol["quadrature"]) c.tolerances.quadrature = rd.real(tol["quadrature"], "tolerances.quadrature");
        if (tol["series"]) c.tolerances.series = rd.real(tol["series"], "tolerances.series");
        if (tol["scan_cap"]) c.tolerances.scan_cap = rd.real(tol["scan_cap"], "tolerances.scan_cap");
        if (!(c.tolerances.quadrature > 0.0)) rd.fail(tol["quadrature"], "tolerances.quadrature must be positive");
        if (!(c.tolerances.series > 0.0)) rd.fail(tol["series"], "tolerances.series must be positive");
        if (!(c.tolerances.scan_cap >= 1.0)) rd.fail(tol["scan_cap"], "tolerances.scan_cap must be >= 1");
    }

    if (const YAML::Node v = root["verify"]) {
        rd.expect_map(v, "verify");
        rd.allow_keys(v, {"c_q_override"}, "verify");
        if (v["c_q_override"]) {
            c.c_q_override = rd.real(v["c_q_override"], "verify.c_q_override");
            if (!(*c.c_q_override > 0.0)) rd.fail(v["c_q_override"], "verify.c_q_override must be positive");
        }
    }

    if (const YAML::Node out = root["output"]) {
        rd.expect_map(out, "output");
        rd.allow_keys(out, {"path", "format"}, "output");
        if (out["path"]) c.output_path = rd.text(out["path"], "output.path");
        if (out["format"]) {
            c.output_format = rd.text(out["format"], "output.format");
            if (c.output_format != "csv" && c.output_format != "json")
                rd.fail(out["format"], "output.format must be 'csv' or 'json'");
        }
    }

    // semantic checks that need the assembled problem
    const AnalyticDatum d = c.datum();
    if (!d.is_entire())
        for (std::size_t i = 0; i < c.z_points.size(); ++i)
            if (!(std::abs(c.z_points[i]) < d.eps_tilde()))
                rd.fail(root["z_points"] ? root["z_points"][i] : root,
                        "z point outside the disc |z| < eps_tilde = " + std::to_string(d.eps_tilde()));
    try {
        c.direction();
    } catch (const InputError& e) {
        rd.fail(root["theta"], e.what());
    }
    std::unique_ptr<HyperEngine> engine;
    try {
        engine = c.make_engine();
    } catch (const InputError& e) {
        rd.fail(root["eps"] ? root["eps"] : root, e.what());
    }
    for (std::size_t i = 0; i < c.t_grid.size(); ++i) {
        try {
            engine->level0_schedule(c.t_grid[i]);
        } catch (const InputError& e) {
            rd.fail(grid[i], std::string("|t| = ") + std::to_string(c.t_grid[i]) + ": " + e.what());
        }
    }
    return c;
}

ProblemConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

std::string dump_config(const ProblemConfig& c) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "datum" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "poles" << YAML::Value << YAML::BeginSeq;
    for (const PoleTerm& p : c.poles) {
        out << YAML::Flow << YAML::BeginMap;
        out << YAML::Key << "a" << YAML::Value;
        emit_complex(out, p.location);
        out << YAML::Key << "order" << YAML::Value << p.order;
        out << YAML::Key << "c" << YAML::Value;
        emit_complex(out, p.coefficient);
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    out << YAML::Key << "polynomial" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (cplx a : c.polynomial) emit_complex(out, a);
    out << YAML::EndSeq;
    if (c.eps_tilde) out << YAML::Key << "eps_tilde" << YAML::Value << *c.eps_tilde;
    out << YAML::EndMap;

    out << YAML::Key << "equation" << YAML::Value << YAML::BeginMap;
    if (c.heat) {
        out << YAML::Key << "kind" << YAML::Value << "heat";
    } else {
        out << YAML::Key << "kind" << YAML::Value << "simple";
        out << YAML::Key << "lambda" << YAML::Value;
        emit_complex(out, c.equation.lambda);
        out << YAML::Key << "q" << YAML::Value << c.equation.q;
        out << YAML::Key << "beta" << YAML::Value << c.equation.beta;
    }
    out << YAML::EndMap;

    out << YAML::Key << "theta" << YAML::Value << c.theta;
    out << YAML::Key << "delta" << YAML::Value << c.delta;
    out << YAML::Key << "t_grid" << YAML::Value << YAML::Flow << c.t_grid;
    out << YAML::Key << "z_points" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (cplx z : c.z_points) emit_complex(out, z);
    out << YAML::EndSeq;
    out << YAML::Key << "levels" << YAML::Value << c.levels;
    if (c.eps) out << YAML::Key << "eps" << YAML::Value << *c.eps;
    out << YAML::Key << "tolerances" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "quadrature" << YAML::Value << c.tolerances.quadrature;
    out << YAML::Key << "series" << YAML::Value << c.tolerances.series;
    out << YAML::Key << "scan_cap" << YAML::Value << c.tolerances.scan_cap;
    out << YAML::EndMap;
    if (c.c_q_override) {
        out << YAML::Key << "verify" << YAML::Value << YAML::BeginMap;
        out << YAML::Key << "c_q_override" << YAML::Value << *c.c_q_override;
        out << YAML::EndMap;
    }
    out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "path" << YAML::Value << c.output_path;
    out << YAML::Key << "format" << YAML::Value << c.output_format;
    out << YAML::EndMap;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace hyperasym
