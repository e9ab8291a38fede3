// SPDX-License-Identifier: Apache-2.0
//
// bdris_sim: capacity sweeps and self-checks from the command line.
//
//   bdris_sim sweep-pos --config configs/desk.ini --out pos.csv
//   bdris_sim sweep-power --profile paper --trials 10 --dump-trials --out power.csv
//   bdris_sim gradcheck --seed 7
//
// Exit status: 0 success, 1 check failure, 2 configuration or I/O error.
#include "bdris/config.hpp"
#include "bdris/errors.hpp"
#include "bdris/experiment.hpp"
#include "bdris/self_check.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheck = 1;
constexpr int kExitConfig = 2;

struct CommonArgs {
    std::string profile = "desk";
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::string methods;
    std::string init;
    std::string out;
    bool dump_trials = false;
    bool serial = false;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--profile", a.profile, "Base profile: desk or paper")->check(CLI::IsMember({"desk", "paper"}));
    cmd->add_option("--config", a.config_path, "INI file overlaid on the profile");
    cmd->add_option("--seed", a.seed, "Base seed; trial t uses seed + t");
    cmd->add_option("--trials", a.trials, "Trials per sweep point");
    cmd->add_option("--methods", a.methods, "Comma-separated subset of bdris,diag_ris,low_complexity,random_diag,no_ris");
    cmd->add_option("--init", a.init, "BD-RIS initialization: identity, random, diag, low_complexity, best");
    cmd->add_option("--out", a.out, "Output CSV path (stdout when omitted)");
    cmd->add_flag("--dump-trials", a.dump_trials, "Also write per-trial records next to --out");
    cmd->add_flag("--serial", a.serial, "Use the single-threaded reference runner");
}

bdris::ExperimentConfig resolve(const CommonArgs& a) {
    bdris::ExperimentConfig cfg = bdris::profile_by_name(a.profile);
    if (!a.config_path.empty()) {
        cfg = bdris::load_config(a.config_path, cfg);
    }
    if (a.seed) {
        cfg.base_seed = *a.seed;
    }
    if (a.trials) {
        cfg.trials = *a.trials;
    }
    if (!a.methods.empty()) {
        cfg.methods = bdris::parse_methods(a.methods);
    }
    if (!a.init.empty()) {
        cfg.init = bdris::opt::parse_init_strategy(a.init);
    }
    cfg.validate();
    return cfg;
}

std::string trials_path(const std::string& out) {
    const std::string ext = ".csv";
    if (out.size() > ext.size() && out.compare(out.size() - ext.size(), ext.size(), ext) == 0) {
        return out.substr(0, out.size() - ext.size()) + ".trials.csv";
    }
    return out + ".trials.csv";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw bdris::ConfigError("cannot open output file '" + path + "'");
    }
    f << content;
    if (!f) {
        throw bdris::ConfigError("write failed for '" + path + "'");
    }
}

int run_sweep(const CommonArgs& a, bdris::exp::SweepKind kind) {
    using namespace bdris::exp;
    const bdris::ExperimentConfig cfg = resolve(a);
    if (a.dump_trials && a.out.empty()) {
        throw bdris::ConfigError("--dump-trials requires --out");
    }
    const SweepResult res = a.serial ? run_sweep_serial(cfg, kind) : run_sweep_parallel(cfg, kind, default_threads());

    std::ostringstream summary;
    if (kind == SweepKind::none) {
        write_trials_csv(summary, res);
    } else {
        write_summary_csv(summary, res, cfg.methods);
    }
    if (a.out.empty()) {
        std::cout << summary.str();
    } else {
        write_file(a.out, summary.str());
    }
    if (a.dump_trials && kind != SweepKind::none) {
        std::ostringstream trials;
        write_trials_csv(trials, res);
        write_file(trials_path(a.out), trials.str());
    }

    int failed = 0;
    for (const auto& r : res.records) {
        if (!r.ok()) {
            ++failed;
            std::cerr << "warning: " << to_string(r.method) << " trial " << r.trial << " at " << r.sweep_value << ": "
                      << r.error << '\n';
        }
    }
    return failed == 0 ? kExitOk : kExitCheck;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BD-RIS MIMO capacity simulator"};
    app.require_subcommand(1);

    CommonArgs run_args, pos_args, m_args, power_args;
    auto* run = app.add_subcommand("run", "Every method at the base scenario, one CSV row per trial");
    add_common(run, run_args);
    auto* pos = app.add_subcommand("sweep-pos", "Mean rate versus RIS x-position");
    add_common(pos, pos_args);
    auto* elems = app.add_subcommand("sweep-m", "Mean rate versus number of RIS elements");
    add_common(elems, m_args);
    auto* power = app.add_subcommand("sweep-power", "Mean rate and active streams versus transmit power");
    add_common(power, power_args);

    bdris::check::GradcheckOptions gc;
    bool flip = false;
    auto* grad = app.add_subcommand("gradcheck", "Finite-difference, minorizer, unitarity and Takagi checks");
    grad->add_option("--seed", gc.seed, "Seed for the random instances");
    grad->add_option("--sizes", gc.sizes, "RIS element counts")->delimiter(',');
    grad->add_option("--instances", gc.instances, "Random instances per check");
    grad->add_flag("--inject-sign-flip", flip)->group("");  // test hook

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        using bdris::exp::SweepKind;
        if (*run) return run_sweep(run_args, SweepKind::none);
        if (*pos) return run_sweep(pos_args, SweepKind::ris_x);
        if (*elems) return run_sweep(m_args, SweepKind::m_elements);
        if (*power) return run_sweep(power_args, SweepKind::tx_power_dbm);
        if (*grad) {
            gc.flip_gradient_sign = flip;
            const auto report = bdris::check::run_gradcheck(gc);
            std::cout << report.text();
            return report.passed() ? kExitOk : kExitCheck;
        }
    } catch (const bdris::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const bdris::ContractViolation& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCheck;
    }
    return kExitOk;
}
