#include "bkm/scenario.hpp"
#include "bkm/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace bkm {

using nlohmann::json;

std::vector<double> AxisSpec::nodes() const {
    std::vector<double> v(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i)
        v[static_cast<size_t>(i)] =
            min + (max - min) * static_cast<double>(i) / static_cast<double>(count - 1);
    return v;
}

void Scenario::validate() const {
    if (schema_version != 1)
        throw ConfigError("schema_version: unsupported version");
    if (name.empty())
        throw ConfigError("name: must not be empty");
    if (bkm.n < 1)
        throw ConfigError("bkm.n: must be a positive integer");
    if (bkm.m.is_zero())
        throw ConfigError("bkm.m: must not be the zero polynomial");
    if (bkm.m.degree() > bkm.n)
        throw ConfigError("bkm.m: degree exceeds component count n");
    if (reduction.N < 1)
        throw ConfigError("reduction.N: must be a positive integer");
    const int want = 2 * reduction.N + bkm.n;
    if (reduction.c.degree() != want)
        throw ConfigError("reduction.c: degree must be 2N+n = " + std::to_string(want) +
                          ", got " + std::to_string(reduction.c.degree()));
    if (std::abs(reduction.c.leading() - 1.0) > 1e-12)
        throw ConfigError("reduction.c: must be monic");
    if (start.w.size() != reduction.N || start.p.size() != reduction.N)
        throw ConfigError("start: w and p must each have N entries");
    if (!start.finite())
        throw ConfigError("start: entries must be finite");
    for (const auto* ax : {&t_axis, &x_axis}) {
        const char* label = (ax == &t_axis) ? "grid.t" : "grid.x";
        if (ax->count < 2)
            throw ConfigError(std::string(label) + ".count: need at least 2 nodes");
        if (!(ax->max > ax->min))
            throw ConfigError(std::string(label) + ": max must exceed min");
    }
    if (!(flow.rel_tol > 0.0) || !(flow.abs_tol > 0.0))
        throw ConfigError("flow: tolerances must be positive");
    if (!(flow.blowup_norm > 1.0))
        throw ConfigError("flow.blowup_norm: must exceed 1");
    if (!(flow.max_step > 0.0))
        throw ConfigError("flow.max_step: must be positive");
}

namespace {

json axis_to_json(const AxisSpec& a) {
    return json{{"min", a.min}, {"max", a.max}, {"count", a.count}};
}

AxisSpec axis_from_json(const json& j, const std::string& path) {
    AxisSpec a;
    try {
        a.min = j.at("min").get<double>();
        a.max = j.at("max").get<double>();
        a.count = j.at("count").get<int>();
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return a;
}

VectorXd vec_from_json(const json& j, const std::string& path) {
    if (!j.is_array())
        throw ConfigError(path + ": expected an array of numbers");
    VectorXd v(j.size());
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number())
            throw ConfigError(path + ": expected an array of numbers");
        v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    }
    return v;
}

Poly poly_from_json(const json& j, const std::string& path) {
    const VectorXd v = vec_from_json(j, path);
    return Poly(std::vector<double>(v.data(), v.data() + v.size()));
}

json poly_to_json(const Poly& p) { return json(p.coeffs()); }

} // namespace

Scenario scenario_from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: invalid JSON: ") + e.what());
    }
    Scenario s;
    try {
        s.schema_version = j.value("schema_version", 1);
        s.name = j.at("name").get<std::string>();

        const json& b = j.at("bkm");
        s.bkm.n = b.at("n").get<int>();
        s.bkm.m = poly_from_json(b.at("m"), "bkm.m");
        const json& lam = b.at("lambda");
        if (lam.is_string()) {
            if (lam.get<std::string>() != "inf")
                throw ConfigError("bkm.lambda: expected a number or \"inf\"");
            s.bkm.lambda = SpectralParam::infinity();
        } else {
            s.bkm.lambda = SpectralParam::finite(lam.get<double>());
        }
        const std::string chart = b.value("chart", "first-companion");
        if (chart == "first-companion")
            s.bkm.chart = Chart::FirstCompanion;
        else if (chart == "kb")
            s.bkm.chart = Chart::KbForm;
        else
            throw ConfigError("bkm.chart: expected \"first-companion\" or \"kb\"");

        const json& r = j.at("reduction");
        s.reduction.N = r.at("N").get<int>();
        s.reduction.c = poly_from_json(r.at("c"), "reduction.c");

        const json& st = j.at("start");
        s.start.w = vec_from_json(st.at("w"), "start.w");
        s.start.p = vec_from_json(st.at("p"), "start.p");

        const json& g = j.at("grid");
        s.t_axis = axis_from_json(g.at("t"), "grid.t");
        s.x_axis = axis_from_json(g.at("x"), "grid.x");

        if (j.contains("flow")) {
            const json& f = j.at("flow");
            s.flow.rel_tol = f.value("rel_tol", s.flow.rel_tol);
            s.flow.abs_tol = f.value("abs_tol", s.flow.abs_tol);
            s.flow.max_step = f.value("max_step", s.flow.max_step);
            s.flow.blowup_norm = f.value("blowup_norm", s.flow.blowup_norm);
            const std::string meth = f.value("method", "rk45");
            if (meth == "rk45")
                s.flow.method = FlowConfig::Method::AdaptiveRK45;
            else if (meth == "rk78")
                s.flow.method = FlowConfig::Method::AdaptiveRK78;
            else
                throw ConfigError("flow.method: expected \"rk45\" or \"rk78\"");
        }
        if (j.contains("outputs"))
            s.outputs = j.at("outputs").get<std::vector<std::string>>();
        if (j.contains("checks")) {
            const json& ch = j.at("checks");
            if (ch.contains("conservation")) s.checks.conservation = ch.at("conservation").get<double>();
            if (ch.contains("golden_kb")) s.checks.golden_kb = ch.at("golden_kb").get<double>();
            if (ch.contains("asymptotic_flatness"))
                s.checks.asymptotic_flatness = ch.at("asymptotic_flatness").get<double>();
            if (ch.contains("loop_closure")) s.checks.loop_closure = ch.at("loop_closure").get<double>();
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    s.validate();
    return s;
}

std::string scenario_to_json_text(const Scenario& s) {
    json j;
    j["schema_version"] = s.schema_version;
    j["name"] = s.name;
    j["bkm"]["n"] = s.bkm.n;
    j["bkm"]["m"] = poly_to_json(s.bkm.m);
    if (s.bkm.lambda.infinite)
        j["bkm"]["lambda"] = "inf";
    else
        j["bkm"]["lambda"] = s.bkm.lambda.value;
    j["bkm"]["chart"] = s.bkm.chart == Chart::FirstCompanion ? "first-companion" : "kb";
    j["reduction"]["N"] = s.reduction.N;
    j["reduction"]["c"] = poly_to_json(s.reduction.c);
    j["start"]["w"] = std::vector<double>(s.start.w.data(), s.start.w.data() + s.start.w.size());
    j["start"]["p"] = std::vector<double>(s.start.p.data(), s.start.p.data() + s.start.p.size());
    j["grid"]["t"] = axis_to_json(s.t_axis);
    j["grid"]["x"] = axis_to_json(s.x_axis);
    j["flow"]["rel_tol"] = s.flow.rel_tol;
    j["flow"]["abs_tol"] = s.flow.abs_tol;
    j["flow"]["max_step"] = s.flow.max_step;
    j["flow"]["blowup_norm"] = s.flow.blowup_norm;
    j["flow"]["method"] = s.flow.method == FlowConfig::Method::AdaptiveRK78 ? "rk78" : "rk45";
    j["outputs"] = s.outputs;
    json ch = json::object();
    if (s.checks.conservation) ch["conservation"] = *s.checks.conservation;
    if (s.checks.golden_kb) ch["golden_kb"] = *s.checks.golden_kb;
    if (s.checks.asymptotic_flatness) ch["asymptotic_flatness"] = *s.checks.asymptotic_flatness;
    if (s.checks.loop_closure) ch["loop_closure"] = *s.checks.loop_closure;
    if (!ch.empty())
        j["checks"] = ch;
    return j.dump(2) + "\n";
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open scenario file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return scenario_from_json_text(ss.str());
}

namespace {

VectorXd ev(std::initializer_list<double> xs) {
    VectorXd v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

// Exact soliton-type reference system; start is the collision point (0,0,0,0),
// already on the level surface, so the repair step is a no-op and the stored
// c is the effective one.
Scenario make_kb_exact() {
    Scenario s;
    s.name = "kb-exact";
    s.bkm = {2, Poly{1.0}, SpectralParam::infinity(), Chart::KbForm};
    s.reduction = {2, Poly{0.0, 0.0, 1.0, 0.0, -2.0, 0.0, 1.0}};  // mu^2 (mu^2-1)^2
    s.start = {ev({0.0, 0.0}), ev({0.0, 0.0})};
    s.t_axis = {-1.0, 1.0, 41};
    s.x_axis = {-3.0, 3.0, 101};
    s.checks.golden_kb = 1e-6;
    s.checks.conservation = 1e-7;
    return s;
}

// One-gap stationary profile; eigenvalue starts on the middle root of c
// with zero momentum, exactly on the level surface.
Scenario make_kdv_1gap() {
    Scenario s;
    s.name = "kdv-1gap";
    s.bkm = {1, Poly{1.0}, SpectralParam::infinity(), Chart::FirstCompanion};
    s.reduction = {1, Poly::from_roots({-1.0, 0.3, 0.7})};
    s.start = {ev({-0.3}), ev({0.0})};
    s.t_axis = {-0.5, 0.5, 11};
    s.x_axis = {-4.0, 4.0, 161};
    s.checks.conservation = 1e-7;
    return s;
}

// Five simple real roots; eigenvalues start on the 2nd and 4th roots
// (root values are implementer-chosen, not data from any source).
Scenario make_kdv_cnoidal() {
    Scenario s;
    s.name = "kdv-cnoidal";
    s.bkm = {1, Poly{1.0}, SpectralParam::infinity(), Chart::FirstCompanion};
    s.reduction = {2, Poly::from_roots({-1.1, -0.5, 0.1, 0.6, 0.9})};
    s.start = {ev({-(-0.5 + 0.6), -0.5 * 0.6}), ev({0.0, 0.0})};
    s.t_axis = {-1.0, 1.0, 21};
    s.x_axis = {-3.0, 3.0, 101};
    s.checks.conservation = 1e-7;
    return s;
}

// One simple root and two double roots, a + 2b + 2c = 0; eigenvalues start on
// the simple root and the upper double root. Root values implementer-chosen.
Scenario make_kdv_2soliton() {
    Scenario s;
    s.name = "kdv-2soliton";
    s.bkm = {1, Poly{1.0}, SpectralParam::infinity(), Chart::FirstCompanion};
    s.reduction = {2, Poly::from_roots({-0.2, -0.06, -0.06, 0.16, 0.16})};
    s.start = {ev({0.04, -0.032}), ev({0.0, 0.0})};
    s.t_axis = {-1.0, 1.0, 11};
    s.x_axis = {-15.0, 15.0, 301};
    s.checks.conservation = 1e-7;
    s.checks.asymptotic_flatness = 1e-3;
    return s;
}

// Two double roots enclosing two simple ones: both asymptotic values agree,
// so every t-slice of (u_1,u_2) is a closed loop.
Scenario make_bkm_n2_loop() {
    Scenario s;
    s.name = "bkm-n2-loop";
    s.bkm = {2, Poly{1.0}, SpectralParam::infinity(), Chart::KbForm};
    s.reduction = {2, Poly::from_roots({-0.8, -0.8, -0.2, 0.3, 0.75, 0.75})};
    s.start = {ev({-0.1, -0.06}), ev({0.0, 0.0})};
    s.t_axis = {-1.0, 1.0, 11};
    s.x_axis = {-15.0, 15.0, 301};
    s.checks.conservation = 1e-7;
    s.checks.asymptotic_flatness = 1e-3;
    s.checks.loop_closure = 1e-3;
    return s;
}

// n=2, N=3 quasi-periodic run: eight simple roots, eigenvalues on roots 2,4,6.
Scenario make_bkm_n2_cnoidal() {
    Scenario s;
    s.name = "bkm-n2-cnoidal";
    s.bkm = {2, Poly{1.0}, SpectralParam::infinity(), Chart::KbForm};
    s.reduction = {3, Poly::from_roots({-1.2, -0.9, -0.5, -0.1, 0.3, 0.6, 0.8, 1.0})};
    // eigenvalues (-0.9, -0.1, 0.6)
    s.start = {ev({0.4, -0.51, -0.054}), ev({0.0, 0.0, 0.0})};
    s.t_axis = {-0.5, 0.5, 11};
    s.x_axis = {-2.0, 2.0, 81};
    s.checks.conservation = 1e-7;
    return s;
}

// Finite-lambda smoke scenario (evolution with differential constraint);
// the start point is repaired onto the level surface by the pipeline.
Scenario make_bkm1_n1() {
    Scenario s;
    s.name = "bkm1-n1";
    s.bkm = {1, Poly{-0.5, 1.0}, SpectralParam::finite(2.5), Chart::FirstCompanion};
    s.reduction = {2, Poly{0.04, 0.08, -0.2, 0.3, 0.0, 1.0}};
    s.start = {ev({-1.7, -0.6}), ev({0.1, -0.05})};
    s.t_axis = {-0.08, 0.08, 9};
    s.x_axis = {-0.16, 0.16, 33};
    s.checks.conservation = 1e-7;
    return s;
}

} // namespace

std::vector<std::string> preset_names() {
    return {"kb-exact",     "kdv-1gap",       "kdv-cnoidal", "kdv-2soliton",
            "bkm-n2-loop",  "bkm-n2-cnoidal", "bkm1-n1"};
}

Scenario preset(const std::string& name) {
    Scenario s;
    if (name == "kb-exact") s = make_kb_exact();
    else if (name == "kdv-1gap") s = make_kdv_1gap();
    else if (name == "kdv-cnoidal") s = make_kdv_cnoidal();
    else if (name == "kdv-2soliton") s = make_kdv_2soliton();
    else if (name == "bkm-n2-loop") s = make_bkm_n2_loop();
    else if (name == "bkm-n2-cnoidal") s = make_bkm_n2_cnoidal();
    else if (name == "bkm1-n1") s = make_bkm1_n1();
    else throw ConfigError("unknown preset: " + name);
    s.validate();
    return s;
}

} // namespace bkm
