#include "bkm/errors.hpp"
#include "bkm/pipeline.hpp"

#include <CLI11.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include <cstdlib>
#include <filesystem>
#include <iostream>

namespace {

// exit codes: 0 pass, 1 numerical failure, 2 config error, 3 singularity abort
int classify(const std::exception& e) {
    if (dynamic_cast<const bkm::ConfigError*>(&e)) return 2;
    if (dynamic_cast<const bkm::SharedRoot*>(&e)) return 3;
    if (dynamic_cast<const bkm::SingularMmatrix*>(&e)) return 3;
    if (dynamic_cast<const bkm::SingularityHit*>(&e)) return 3;
    return 1;
}

bkm::Scenario resolve_scenario(const std::string& arg) {
    if (std::filesystem::exists(arg))
        return bkm::load_scenario_file(arg);
    const auto names = bkm::preset_names();
    for (const auto& n : names)
        if (n == arg)
            return bkm::preset(arg);
    throw bkm::ConfigError("no scenario file or preset named \"" + arg + "\"");
}

void print_reports(const std::vector<bkm::ResidualReport>& reports) {
    for (const auto& r : reports) {
        std::cout << "  " << r.name << ": max " << bkm::format_double(r.max_abs)
                  << ", rms " << bkm::format_double(r.rms);
        if (r.skipped_nodes)
            std::cout << ", skipped " << r.skipped_nodes;
        if (r.inconclusive)
            std::cout << " (inconclusive)";
        std::cout << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    if (const char* env = std::getenv("BKM_THREADS")) {
#ifdef _OPENMP
        omp_set_num_threads(std::atoi(env));
#else
        (void)env;
#endif
    }

    CLI::App app{"Finite-dimensional reduction pipeline for the BKM systems"};
    app.require_subcommand(1);

    std::string scenario_arg, out_dir = "out", dir_arg, format = "csv";
    bool serial = false;

    auto* run = app.add_subcommand("run", "execute a scenario and write artifacts");
    run->add_option("scenario", scenario_arg, "scenario file or preset name")->required();
    run->add_option("--out", out_dir, "output directory (default: out/<name>)");
    run->add_flag("--serial", serial, "disable the parallel kernels");

    auto* verify = app.add_subcommand("verify", "recompute residual reports for a solution directory");
    verify->add_option("dir", dir_arg, "solution directory")->required();
    verify->add_flag("--serial", serial, "disable the parallel kernels");

    auto* presets = app.add_subcommand("presets", "list or show built-in scenarios");
    std::string preset_name;
    auto* plist = presets->add_subcommand("list", "list preset names");
    auto* pshow = presets->add_subcommand("show", "print a preset as scenario JSON");
    pshow->add_option("name", preset_name, "preset name")->required();
    presets->require_subcommand(1);

    auto* exp = app.add_subcommand("export", "re-export a written solution");
    exp->add_option("dir", dir_arg, "solution directory")->required();
    exp->add_option("--format", format, "csv or frames")->required();
    exp->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const bkm::Scenario s = resolve_scenario(scenario_arg);
            std::string dir = out_dir;
            if (run->count("--out") == 0)
                dir = "out/" + s.name;
            const bkm::RunResult res = bkm::run_and_write(s, dir, !serial);
            std::cout << "scenario " << s.name << " -> " << dir << '\n';
            print_reports(res.reports);
            for (const auto& [k, ok] : res.check_results)
                std::cout << "  check " << k << ": " << (ok ? "pass" : "FAIL") << '\n';
            if (!res.passed) {
                std::cout << "result: FAIL\n";
                return 1;
            }
            std::cout << "result: pass\n";
            return 0;
        }
        if (*verify) {
            const bkm::VerifyResult res = bkm::verify_directory(dir_arg, !serial);
            print_reports(res.reports);
            for (const auto& [k, ok] : res.check_results)
                std::cout << "  check " << k << ": " << (ok ? "pass" : "FAIL") << '\n';
            std::cout << "result: " << (res.passed ? "pass" : "FAIL") << '\n';
            return res.passed ? 0 : 1;
        }
        if (*plist) {
            for (const auto& n : bkm::preset_names())
                std::cout << n << '\n';
            return 0;
        }
        if (*pshow) {
            std::cout << bkm::scenario_to_json_text(bkm::preset(preset_name));
            return 0;
        }
        if (*exp) {
            std::string dir = out_dir;
            if (exp->count("--out") == 0)
                dir = dir_arg + "/export";
            bkm::export_directory(dir_arg, format, dir);
            std::cout << "exported " << format << " to " << dir << '\n';
            return 0;
        }
    } catch (const bkm::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return classify(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
