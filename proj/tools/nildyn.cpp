// nildyn: batch experiment runner for the dynamics/number-theory lab.
//
// Exit codes: 0 pass, 2 assertion failure, 64 configuration/usage error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "nildyn/experiments.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitAssert = 2;
constexpr int kExitConfig = 64;

int write_outputs(const nildyn::exp::ExperimentResult& res, const std::string& out_dir) {
    namespace fs = std::filesystem;
    if (!out_dir.empty()) {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        if (ec) {
            std::cerr << "cannot create output directory: " << out_dir << "\n";
            return kExitConfig;
        }
        for (const auto& [name, content] : res.files) {
            std::ofstream out(fs::path(out_dir) / name, std::ios::binary);
            if (!out) {
                std::cerr << "cannot write: " << (fs::path(out_dir) / name).string() << "\n";
                return kExitConfig;
            }
            out << content;
        }
    }
    std::cout << res.summary << "\n";
    return res.exit_code == 0 ? kExitPass : kExitAssert;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"desk-scale experiments in torus and nilmanifold dynamics"};
    app.require_subcommand(1);

    // run <experiment> [--key value ...]
    auto* run = app.add_subcommand("run", "run one experiment");
    std::string exp_name;
    run->add_option("experiment", exp_name, "experiment name (see `list`)")->required();
    std::string out_dir;
    run->add_option("--out", out_dir, "directory for CSV/JSON artifacts");
    std::map<std::string, std::string> kv;
    std::string alpha, set_list, window;
    std::int64_t mmax = -1, N = -1, k = -1, horizon = -1, grid = -1, flen = -1, seed = -1,
                 count = -1, denmax = -1, scancap = -1, resolution = -1;
    double eps = -1, radius = -1;
    run->add_option("--alpha", alpha, "constant name or decimal");
    run->add_option("--set", set_list, "comma-separated integers");
    run->add_option("--window", window, "lo,hi on the torus");
    run->add_option("--eps", eps, "tolerance");
    run->add_option("--radius", radius, "ball radius");
    run->add_option("--mmax", mmax, "dilate bound");
    run->add_option("--N", N, "congruence modulus");
    run->add_option("--k", k, "progression length parameter");
    run->add_option("--horizon", horizon, "scan horizon");
    run->add_option("--grid", grid, "I,N grid bound");
    run->add_option("--flen", flen, "F length");
    run->add_option("--seed", seed, "RNG seed");
    run->add_option("--count", count, "sample count");
    run->add_option("--denmax", denmax, "max coefficient denominator");
    run->add_option("--scancap", scancap, "period scan cap");
    run->add_option("--resolution", resolution, "control grid resolution");

    auto* list = app.add_subcommand("list", "list experiments and their flags");

    auto* goldens = app.add_subcommand("check-goldens", "byte-compare against golden outputs");
    std::string golden_dir;
    goldens->add_option("dir", golden_dir, "goldens directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitPass : kExitConfig;
    }

    try {
        if (list->parsed()) {
            for (const auto& info : nildyn::exp::catalog())
                std::cout << info.name << "\n  " << info.description << "\n  " << info.schema
                          << "\n";
            return kExitPass;
        }
        if (goldens->parsed()) {
            int rc = nildyn::exp::check_goldens(golden_dir, std::cout);
            return rc == 0 ? kExitPass : kExitAssert;
        }

        nildyn::exp::Params params;
        if (!alpha.empty()) params.set("alpha", alpha);
        if (!set_list.empty()) params.set("set", set_list);
        if (!window.empty()) params.set("window", window);
        auto fmt_full = [](double v) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return std::string(buf);
        };
        if (eps >= 0) params.set("eps", fmt_full(eps));
        if (radius >= 0) params.set("radius", fmt_full(radius));
        auto set_int = [&](const char* key, std::int64_t v) {
            if (v >= 0) params.set(key, std::to_string(v));
        };
        set_int("mmax", mmax);
        set_int("N", N);
        set_int("k", k);
        set_int("horizon", horizon);
        set_int("grid", grid);
        set_int("flen", flen);
        set_int("seed", seed);
        set_int("count", count);
        set_int("denmax", denmax);
        set_int("scancap", scancap);
        set_int("resolution", resolution);

        nildyn::exp::ExperimentResult res = nildyn::exp::run_experiment(exp_name, params);
        return write_outputs(res, out_dir);
    } catch (const nildyn::exp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitAssert;
    }
}
