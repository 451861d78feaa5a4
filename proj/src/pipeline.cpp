#include "bkm/pipeline.hpp"
#include "bkm/errors.hpp"
#include "bkm/operators.hpp"
#include "bkm/stackel.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace bkm {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

namespace {

std::vector<double> default_mu_samples(const Poly& c) {
    double scale = 1.0;
    for (double ci : c.coeffs())
        scale = std::max(scale, std::abs(ci));
    return {-1.0 - 0.2 * scale, -0.5, 0.5, 1.0 + 0.2 * scale};
}

double solitonic_mu(const Scenario& s) {
    double mu = 2.0;
    if (!s.bkm.lambda.infinite && std::abs(mu - s.bkm.lambda.value) < 0.5)
        mu = s.bkm.lambda.value + 1.5;
    return mu;
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw Error("cannot write " + p.string());
    out << text;
}

std::string solution_csv(const SolutionGrid& sol) {
    std::ostringstream os;
    const int n = sol.spec.n;
    os << "t,x";
    for (int i = 1; i <= n; ++i)
        os << ",u_" << i;
    os << ",q\n";
    for (size_t it = 0; it < sol.t_nodes.size(); ++it)
        for (size_t jx = 0; jx < sol.x_nodes.size(); ++jx) {
            os << format_double(sol.t_nodes[it]) << ',' << format_double(sol.x_nodes[jx]);
            const VectorXd& u = sol.u_at(it, jx);
            for (int i = 0; i < n; ++i)
                os << ',' << format_double(u(i));
            os << ',' << format_double(sol.q_at(it, jx)) << '\n';
        }
    return os.str();
}

std::string phase_csv(const PhaseGrid& grid) {
    std::ostringstream os;
    const int N = grid.points.empty() ? 0 : grid.points.front().dim();
    os << "t,x";
    for (int i = 1; i <= N; ++i) os << ",w_" << i;
    for (int i = 1; i <= N; ++i) os << ",p_" << i;
    os << "\n";
    for (size_t it = 0; it < grid.t_nodes.size(); ++it)
        for (size_t jx = 0; jx < grid.x_nodes.size(); ++jx) {
            os << format_double(grid.t_nodes[it]) << ',' << format_double(grid.x_nodes[jx]);
            const PhasePoint& pt = grid.at(it, jx);
            for (int i = 0; i < N; ++i) os << ',' << format_double(pt.w(i));
            for (int i = 0; i < N; ++i) os << ',' << format_double(pt.p(i));
            os << '\n';
        }
    return os.str();
}

void append_report(std::ostringstream& os, const ResidualReport& r) {
    os << "report." << r.name << ".max_abs=" << format_double(r.max_abs) << '\n';
    os << "report." << r.name << ".rms=" << format_double(r.rms) << '\n';
    os << "report." << r.name << ".dt=" << format_double(r.dt) << '\n';
    os << "report." << r.name << ".dx=" << format_double(r.dx) << '\n';
    if (r.convergence_order)
        os << "report." << r.name << ".order=" << format_double(*r.convergence_order) << '\n';
    if (r.skipped_nodes)
        os << "report." << r.name << ".skipped=" << r.skipped_nodes << '\n';
    if (r.inconclusive)
        os << "report." << r.name << ".inconclusive=1\n";
}

std::string summary_text(const RunResult& res) {
    std::ostringstream os;
    os << "scenario=" << res.scenario.name << '\n';
    for (const auto& r : res.reports)
        append_report(os, r);
    for (const auto& [k, ok] : res.check_results)
        os << "check." << k << '=' << (ok ? "pass" : "fail") << '\n';
    os << "result=" << (res.passed ? "pass" : "fail") << '\n';
    return os.str();
}

void evaluate_checks(RunResult& res) {
    const Scenario& s = res.scenario;
    const SolutionGrid& sol = res.solution;
    const size_t nt = sol.t_nodes.size(), nx = sol.x_nodes.size();

    if (s.checks.conservation) {
        double worst = 0.0;
        for (const auto& d : res.phase.diagnostics)
            worst = std::max(worst, d.integral_drift);
        res.check_results["conservation"] = worst <= *s.checks.conservation;
    }
    if (s.checks.golden_kb) {
        double worst = 0.0;
        for (size_t it = 0; it < nt; ++it)
            for (size_t jx = 0; jx < nx; ++jx) {
                const auto cf = closed_form_kb(sol.t_nodes[it], sol.x_nodes[jx]);
                const VectorXd& u = sol.u_at(it, jx);
                worst = std::max({worst, std::abs(u(0) - cf.u1), std::abs(u(1) - cf.u2)});
            }
        res.check_results["golden_kb"] = worst <= *s.checks.golden_kb;
    }
    if (s.checks.asymptotic_flatness) {
        // |u(t, +-x_max) - u(0, x_max)| at 5 sampled t values
        const VectorXd ref = sol.u_at(nt / 2, nx - 1);
        double worst = 0.0;
        for (int k = 0; k < 5; ++k) {
            const size_t it = (nt - 1) * static_cast<size_t>(k) / 4;
            worst = std::max(worst, (sol.u_at(it, 0) - ref).lpNorm<Eigen::Infinity>());
            worst = std::max(worst, (sol.u_at(it, nx - 1) - ref).lpNorm<Eigen::Infinity>());
        }
        res.check_results["asymptotic_flatness"] = worst <= *s.checks.asymptotic_flatness;
    }
    if (s.checks.loop_closure) {
        double worst = 0.0;
        for (size_t it = 0; it < nt; ++it)
            worst = std::max(worst,
                             (sol.u_at(it, 0) - sol.u_at(it, nx - 1)).lpNorm<Eigen::Infinity>());
        res.check_results["loop_closure"] = worst <= *s.checks.loop_closure;
    }
    for (const auto& [k, ok] : res.check_results)
        res.passed = res.passed && ok;
}

} // namespace

RunResult run_scenario(const Scenario& s, bool parallel) {
    s.validate();
    RunResult res;
    res.scenario = s;

    // Step onto the level surface; rho and the map R are unaffected.
    const Poly c_new = repair_c(s.reduction.c, s.bkm.m, s.start);
    res.scenario.reduction.c = c_new;
    const ReductionSpec reduction{s.reduction.N, c_new};
    const Poly& m = s.bkm.m;

    const auto t_nodes = s.t_axis.nodes();
    const auto x_nodes = s.x_axis.nodes();

    // grid factory with a cache so the verification reuses the synthesis grid
    bool have_cached = false;
    GridFactory factory = [&](const std::vector<double>& tn, const std::vector<double>& xn,
                              SweepOrder order) {
        PhaseGrid g = build_grid(s.start, tn, xn, s.bkm.lambda, s.flow, c_new, m, order, parallel);
        if (!have_cached && order == SweepOrder::XThenT) {
            res.phase = g;
            have_cached = true;
        }
        return g;
    };

    if (s.bkm.lambda.infinite)
        res.solution = synthesize_infinite(factory, s.bkm, reduction, t_nodes, x_nodes, parallel);
    else
        res.solution = synthesize_finite(factory, s.bkm, reduction, t_nodes, x_nodes, parallel);
    if (!have_cached)
        res.phase = build_grid(s.start, t_nodes, x_nodes, s.bkm.lambda, s.flow, c_new, m,
                               SweepOrder::XThenT, parallel);

    // verification reports
    res.reports.push_back(conservation_report(res.phase, c_new, m));
    try {
        res.reports.push_back(residual_base(res.phase, default_mu_samples(c_new), c_new, m, parallel));
        res.reports.push_back(residual_solitonic(res.phase, solitonic_mu(s), s.bkm.lambda, parallel));
        const BkmResiduals br = s.bkm.lambda.infinite ? residual_bkm_infinite(res.solution, parallel)
                                                      : residual_bkm_finite(res.solution, parallel);
        res.reports.push_back(br.evolution);
        res.reports.push_back(br.constraint);
        res.reports.push_back(separation_oracle(res.phase, c_new, m));
    } catch (const GridTooCoarse&) {
        // scenario grids below stencil size still run; reports are just omitted
    }

    evaluate_checks(res);
    return res;
}

RunResult run_and_write(const Scenario& s, const std::string& out_dir, bool parallel) {
    RunResult res = run_scenario(s, parallel);
    const fs::path dir(out_dir);
    fs::create_directories(dir);

    bool want_frames = false;
    for (const auto& o : s.outputs)
        if (o == "frames") want_frames = true;
    // solution.csv, phase.csv and meta.json are always written; verify depends on them
    write_text(dir / "solution.csv", solution_csv(res.solution));
    write_text(dir / "phase.csv", phase_csv(res.phase));
    write_text(dir / "meta.json", scenario_to_json_text(res.scenario));
    write_text(dir / "summary.txt", summary_text(res));
    if (want_frames) {
        fs::create_directories(dir / "frames");
        for (size_t it = 0; it < res.solution.t_nodes.size(); ++it) {
            std::ostringstream os;
            const int n = res.solution.spec.n;
            os << "x";
            for (int i = 1; i <= n; ++i) os << ",u_" << i;
            os << ",q\n";
            for (size_t jx = 0; jx < res.solution.x_nodes.size(); ++jx) {
                os << format_double(res.solution.x_nodes[jx]);
                const VectorXd& u = res.solution.u_at(it, jx);
                for (int i = 0; i < n; ++i) os << ',' << format_double(u(i));
                os << ',' << format_double(res.solution.q_at(it, jx)) << '\n';
            }
            char name[32];
            std::snprintf(name, sizeof(name), "frame_%04zu.csv", it);
            write_text(dir / "frames" / name, os.str());
        }
    }
    return res;
}

namespace {

// minimal CSV reader for our own outputs
std::vector<std::vector<double>> read_csv(const fs::path& p, std::vector<std::string>& header) {
    std::ifstream in(p);
    if (!in)
        throw ConfigError("cannot open " + p.string());
    std::string line;
    std::getline(in, line);
    header.clear();
    {
        std::stringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ','))
            header.push_back(cell);
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::vector<double> row;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            row.push_back(std::stod(cell));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> unique_sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

} // namespace

VerifyResult verify_directory(const std::string& dir, bool parallel) {
    const fs::path d(dir);
    std::ifstream meta(d / "meta.json");
    if (!meta)
        throw ConfigError("verify: missing meta.json in " + dir);
    std::ostringstream ss;
    ss << meta.rdbuf();
    const Scenario s = scenario_from_json_text(ss.str());
    const Poly& c_new = s.reduction.c;
    const Poly& m = s.bkm.m;

    std::vector<std::string> header;
    const auto srows = read_csv(d / "solution.csv", header);
    const int n = s.bkm.n;

    SolutionGrid sol;
    sol.spec = s.bkm;
    sol.reduction = s.reduction;
    std::vector<double> ts, xs;
    for (const auto& r : srows) { ts.push_back(r[0]); xs.push_back(r[1]); }
    sol.t_nodes = unique_sorted(ts);
    sol.x_nodes = unique_sorted(xs);
    const size_t nt = sol.t_nodes.size(), nx = sol.x_nodes.size();
    if (srows.size() != nt * nx)
        throw ConfigError("verify: solution.csv is not a full rectangular grid");
    sol.u.assign(nt * nx, VectorXd(n));
    sol.q.assign(nt * nx, 0.0);
    for (const auto& r : srows) {
        const size_t it = static_cast<size_t>(
            std::lower_bound(sol.t_nodes.begin(), sol.t_nodes.end(), r[0]) - sol.t_nodes.begin());
        const size_t jx = static_cast<size_t>(
            std::lower_bound(sol.x_nodes.begin(), sol.x_nodes.end(), r[1]) - sol.x_nodes.begin());
        VectorXd u(n);
        for (int i = 0; i < n; ++i)
            u(i) = r[static_cast<size_t>(2 + i)];
        sol.u[it * nx + jx] = u;
        sol.q[it * nx + jx] = r[static_cast<size_t>(2 + n)];
    }
    if (!s.bkm.lambda.infinite)
        sol.a = std::sqrt(c_new.eval(s.bkm.lambda.value));

    PhaseGrid grid;
    {
        std::vector<std::string> ph;
        const auto prows = read_csv(d / "phase.csv", ph);
        const int N = s.reduction.N;
        std::vector<double> pts, pxs;
        for (const auto& r : prows) { pts.push_back(r[0]); pxs.push_back(r[1]); }
        grid.t_nodes = unique_sorted(pts);
        grid.x_nodes = unique_sorted(pxs);
        grid.points.assign(grid.t_nodes.size() * grid.x_nodes.size(), PhasePoint{});
        for (const auto& r : prows) {
            const size_t it = static_cast<size_t>(
                std::lower_bound(grid.t_nodes.begin(), grid.t_nodes.end(), r[0]) - grid.t_nodes.begin());
            const size_t jx = static_cast<size_t>(
                std::lower_bound(grid.x_nodes.begin(), grid.x_nodes.end(), r[1]) - grid.x_nodes.begin());
            PhasePoint pt{VectorXd(N), VectorXd(N)};
            for (int i = 0; i < N; ++i) {
                pt.w(i) = r[static_cast<size_t>(2 + i)];
                pt.p(i) = r[static_cast<size_t>(2 + N + i)];
            }
            grid.at(it, jx) = pt;
        }
        grid.diagnostics.resize(grid.points.size());
    }

    VerifyResult out;
    out.reports.push_back(conservation_report(grid, c_new, m));
    try {
        out.reports.push_back(residual_base(grid, default_mu_samples(c_new), c_new, m, parallel));
        out.reports.push_back(residual_solitonic(grid, solitonic_mu(s), s.bkm.lambda, parallel));
        const BkmResiduals br = s.bkm.lambda.infinite ? residual_bkm_infinite(sol, parallel)
                                                      : residual_bkm_finite(sol, parallel);
        out.reports.push_back(br.evolution);
        out.reports.push_back(br.constraint);
        out.reports.push_back(separation_oracle(grid, c_new, m));
    } catch (const GridTooCoarse&) {
    }

    if (s.checks.conservation) {
        const auto& cons = out.reports.front();
        out.check_results["conservation"] = cons.max_abs <= *s.checks.conservation;
    }
    for (const auto& [k, ok] : out.check_results)
        out.passed = out.passed && ok;

    std::ostringstream os;
    os << "scenario=" << s.name << '\n';
    for (const auto& r : out.reports)
        append_report(os, r);
    for (const auto& [k, ok] : out.check_results)
        os << "check." << k << '=' << (ok ? "pass" : "fail") << '\n';
    os << "result=" << (out.passed ? "pass" : "fail") << '\n';
    write_text(d / "summary.txt", os.str());
    return out;
}

void export_directory(const std::string& dir, const std::string& format,
                      const std::string& out_dir) {
    const fs::path d(dir);
    std::vector<std::string> header;
    const auto rows = read_csv(d / "solution.csv", header);
    const fs::path out(out_dir);
    fs::create_directories(out);

    if (format == "csv") {
        std::ostringstream os;
        for (size_t i = 0; i < header.size(); ++i)
            os << (i ? "," : "") << header[i];
        os << '\n';
        for (const auto& r : rows) {
            for (size_t i = 0; i < r.size(); ++i)
                os << (i ? "," : "") << format_double(r[i]);
            os << '\n';
        }
        write_text(out / "solution.csv", os.str());
        return;
    }
    if (format == "frames") {
        std::vector<double> ts;
        for (const auto& r : rows)
            ts.push_back(r[0]);
        ts = unique_sorted(ts);
        for (size_t it = 0; it < ts.size(); ++it) {
            std::ostringstream os;
            os << "x";
            for (size_t i = 2; i < header.size(); ++i)
                os << ',' << header[i];
            os << '\n';
            for (const auto& r : rows) {
                if (r[0] != ts[it])
                    continue;
                os << format_double(r[1]);
                for (size_t i = 2; i < r.size(); ++i)
                    os << ',' << format_double(r[i]);
                os << '\n';
            }
            char name[32];
            std::snprintf(name, sizeof(name), "frame_%04zu.csv", it);
            write_text(out / name, os.str());
        }
        return;
    }
    throw ConfigError("export: unknown format \"" + format + "\" (expected csv or frames)");
}

} // namespace bkm
