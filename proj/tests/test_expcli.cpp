// SPDX-License-Identifier: Apache-2.0
#include "bdris/baselines.hpp"
#include "bdris/config.hpp"
#include "bdris/errors.hpp"
#include "bdris/experiment.hpp"
#include "bdris/self_check.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace bdris;
using namespace bdris::exp;
using Catch::Approx;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path.string();
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, sep)) out.push_back(cell);
    return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) rows.push_back(split(line));
    return rows;
}

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.scenario.m = 4;
    c.trials = 3;
    c.ris_x = {30.0, 70.0};
    c.m_elements = {2, 4};
    c.tx_power_dbm = {10.0, 20.0};
    c.base_seed = 17;
    return c;
}

}  // namespace

TEST_CASE("method lists", "[config]") {
    const auto m = parse_methods("no_ris, bdris,bdris");
    REQUIRE(m.size() == 2);
    CHECK(m[0] == Method::bdris);
    CHECK(m[1] == Method::no_ris);
    CHECK_THROWS_AS(parse_methods(""), ContractViolation);
    CHECK_THROWS_AS(parse_methods("bdris,optimal"), ContractViolation);
    for (Method x : kAllMethods) CHECK(parse_method(to_string(x)) == x);
}

TEST_CASE("profiles", "[config]") {
    const ExperimentConfig d = profile_by_name("desk");
    CHECK(d.scenario.n_t == 2);
    CHECK(d.scenario.m == 16);
    CHECK(d.trials == 20);
    const ExperimentConfig p = profile_by_name("paper");
    CHECK(p.scenario.n_t == 4);
    CHECK(p.scenario.n_r == 4);
    CHECK(p.scenario.m == 100);
    CHECK(p.trials == 100);
    CHECK(p.ris_x.front() == 10.0);
    CHECK(p.ris_x.back() == 100.0);
    CHECK_THROWS_AS(profile_by_name("huge"), ConfigError);
}

TEST_CASE("config files: overlay, lists, rejection of unknown keys", "[config]") {
    const std::string good = write_temp("bdris_good.ini",
                                        "; comment\n"
                                        "[scenario]\n"
                                        "n_t = 4\n"
                                        "ris_pos = 40, 5, 5\n"
                                        "tx_power_dbm = 30\n"
                                        "[sweep]\n"
                                        "ris_x = 10, 20.5\n"
                                        "m_elements = 8,16\n"
                                        "[run]\n"
                                        "trials = 7\n"
                                        "base_seed = 123\n"
                                        "methods = diag_ris,no_ris\n"
                                        "init = diag\n"
                                        "[optimizer]\n"
                                        "eps_capacity = 1e-5\n");
    const ExperimentConfig c = load_config(good);
    CHECK(c.scenario.n_t == 4);
    CHECK(c.scenario.n_r == 2);
    CHECK(c.scenario.ris_pos.x() == 40.0);
    CHECK(c.scenario.tx_power_mw == Approx(1000.0));
    CHECK(c.ris_x == std::vector<double>{10.0, 20.5});
    CHECK(c.m_elements == std::vector<int>{8, 16});
    CHECK(c.trials == 7);
    CHECK(c.base_seed == 123);
    CHECK(c.methods == std::vector<Method>{Method::diag_ris, Method::no_ris});
    CHECK(c.init == opt::InitStrategy::diag_ris);
    CHECK(c.optimizer.eps_capacity == 1e-5);

    CHECK_THROWS_AS(load_config(write_temp("bdris_bad1.ini", "[scenario]\nantennas = 2\n")), ConfigError);
    CHECK_THROWS_AS(load_config(write_temp("bdris_bad2.ini", "[extras]\nx = 1\n")), ConfigError);
    CHECK_THROWS_AS(load_config(write_temp("bdris_bad3.ini", "[run]\ntrials = many\n")), ConfigError);
    CHECK_THROWS_AS(load_config(write_temp("bdris_bad4.ini", "[run]\ntrials = 0\n")), ConfigError);
    CHECK_THROWS_AS(load_config(write_temp("bdris_bad5.ini", "[run]\nmethods = bdris,best\n")), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/bdris.ini"), ConfigError);
}

TEST_CASE("shipped config files load", "[config]") {
    const std::filesystem::path root = std::filesystem::path(__FILE__).parent_path().parent_path();
    const ExperimentConfig d = load_config((root / "configs" / "desk.ini").string());
    CHECK(d.trials == 20);
    const ExperimentConfig p = load_config((root / "configs" / "paper.ini").string(), paper_profile());
    CHECK(p.scenario.m == 100);
}

TEST_CASE("run_single: one record per method on one realization", "[expcli]") {
    ExperimentConfig c = small_config();
    c.methods = {Method::no_ris};
    const auto recs = run_single(c, SweepKind::none, 0.0, 2);
    REQUIRE(recs.size() == 1);
    const Scenario s = scenario_at(c, SweepKind::none, 0.0);
    const ChannelSet ch = channel::build_channels(s, 19);
    CHECK(recs[0].seed == 19);
    CHECK(recs[0].rate_bps_hz ==
          Approx(rate::nats_to_bps_hz(baselines::no_ris_capacity(ch, s.noise_mw(), s.tx_power_mw))));

    c.methods = {kAllMethods, kAllMethods + 5};
    const auto a = run_single(c, SweepKind::ris_x, 30.0, 1);
    const auto b = run_single(c, SweepKind::ris_x, 30.0, 1);
    REQUIRE(a.size() == 5);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].ok());
        CHECK(a[i].seed == a[0].seed);
        CHECK(a[i].rate_bps_hz == b[i].rate_bps_hz);
        CHECK(a[i].active_streams == b[i].active_streams);
        CHECK(a[i].active_streams >= 0);
        CHECK(a[i].active_streams <= 2);
        CHECK(a[i].rate_bps_hz >= 0.0);
    }
    CHECK(a[0].rate_bps_hz >= a[1].rate_bps_hz);  // bdris vs diag_ris
}

TEST_CASE("run_single: failures become error records", "[expcli]") {
    ExperimentConfig c = small_config();
    c.scenario.rice_factor = -1.0;  // invalid scenario: channel generation throws
    const auto recs = run_single(c, SweepKind::none, 0.0, 0);
    REQUIRE(recs.size() == 5);
    for (const auto& r : recs) {
        CHECK_FALSE(r.ok());
        CHECK(std::isnan(r.rate_bps_hz));
    }
}

TEST_CASE("sweep CSV: single row, minimal m, headers", "[expcli]") {
    ExperimentConfig c = small_config();
    c.ris_x = {50.0};
    c.trials = 1;
    c.methods = {Method::no_ris};
    const SweepResult r = run_sweep_serial(c, SweepKind::ris_x);
    const auto rows = parse_csv(summary_csv(r, c.methods));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"method", "ris_x_m", "mean_rate_bps_hz", "std_rate", "trials"});
    CHECK(rows[1][0] == "no_ris");
    CHECK(rows[1][1] == "50");
    CHECK(rows[1][4] == "1");

    ExperimentConfig c1 = small_config();
    c1.m_elements = {1};
    c1.trials = 2;
    const SweepResult r1 = run_sweep_serial(c1, SweepKind::m_elements);
    const auto rows1 = parse_csv(summary_csv(r1, c1.methods));
    REQUIRE(rows1.size() == 6);
    CHECK(rows1[0][1] == "m");
    for (std::size_t i = 1; i < rows1.size(); ++i) {
        CHECK(rows1[i][4] == "2");
        CHECK(std::stod(rows1[i][2]) > 0.0);
    }

    const SweepResult rp = run_sweep_serial(small_config(), SweepKind::tx_power_dbm);
    const auto rowsp = parse_csv(summary_csv(rp, small_config().methods));
    CHECK(rowsp[0] == std::vector<std::string>{"method", "tx_power_dbm", "mean_rate_bps_hz", "std_rate",
                                               "mean_active_streams", "trials"});
}

TEST_CASE("sweep CSV: serial and parallel runs are byte identical", "[expcli][determinism]") {
    const ExperimentConfig c = small_config();
    for (SweepKind kind : {SweepKind::ris_x, SweepKind::m_elements, SweepKind::tx_power_dbm}) {
        const SweepResult s1 = run_sweep_serial(c, kind);
        const SweepResult s2 = run_sweep_serial(c, kind);
        const SweepResult p4 = run_sweep_parallel(c, kind, 4);
        const SweepResult p3 = run_sweep_parallel(c, kind, 3);
        const std::string ref = summary_csv(s1, c.methods);
        CHECK(summary_csv(s2, c.methods) == ref);
        CHECK(summary_csv(p4, c.methods) == ref);
        CHECK(summary_csv(p3, c.methods) == ref);
        REQUIRE(s1.records.size() == p4.records.size());
        for (std::size_t i = 0; i < s1.records.size(); ++i) {
            CHECK(s1.records[i].rate_bps_hz == p4.records[i].rate_bps_hz);
            CHECK(s1.records[i].trial == p4.records[i].trial);
            CHECK(s1.records[i].method == p4.records[i].method);
        }
    }
}

TEST_CASE("aggregates are recomputable from the per-trial dump", "[expcli]") {
    const ExperimentConfig c = small_config();
    const SweepResult r = run_sweep_serial(c, SweepKind::tx_power_dbm);
    std::ostringstream dump;
    write_trials_csv(dump, r);
    const auto trial_rows = parse_csv(dump.str());
    CHECK(trial_rows[0] == std::vector<std::string>{"method", "tx_power_dbm", "trial", "seed", "rate_bps_hz",
                                                    "active_streams", "outer_iterations", "wall_ms", "status"});
    std::map<std::pair<std::string, std::string>, std::vector<double>> rates, streams;
    for (std::size_t i = 1; i < trial_rows.size(); ++i) {
        const auto& row = trial_rows[i];
        CHECK(row[8] == "ok");
        CHECK(std::stoull(row[3]) == c.base_seed + std::stoull(row[2]));
        rates[{row[0], row[1]}].push_back(std::stod(row[4]));
        streams[{row[0], row[1]}].push_back(std::stod(row[5]));
    }
    const auto summary = parse_csv(summary_csv(r, c.methods));
    REQUIRE(summary.size() == 1 + 2 * 5);
    for (std::size_t i = 1; i < summary.size(); ++i) {
        const auto& xs = rates[{summary[i][0], summary[i][1]}];
        REQUIRE(xs.size() == 3);
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= xs.size();
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        const double sd = std::sqrt(ss / (xs.size() - 1));
        CHECK(std::abs(std::stod(summary[i][2]) - mean) <= 1e-8 * mean);
        CHECK(std::abs(std::stod(summary[i][3]) - sd) <= 1e-8 * std::max(sd, 1.0));
        double ms = 0.0;
        for (double x : streams[{summary[i][0], summary[i][1]}]) ms += x;
        CHECK(std::stod(summary[i][4]) == Approx(ms / 3.0));
    }

    // In-memory aggregation is exact against the records.
    for (const auto& row : aggregate(r, c.methods)) {
        double sum = 0.0;
        int n = 0;
        for (const auto& rec : r.records) {
            if (rec.method == row.method && rec.sweep_value == row.sweep_value) {
                sum += rec.rate_bps_hz;
                ++n;
            }
        }
        CHECK(std::abs(row.mean_rate - sum / n) <= 1e-12 * row.mean_rate);
    }
}

TEST_CASE("gradcheck: passes, detects a flipped gradient, deterministic text", "[expcli][gradcheck]") {
    check::GradcheckOptions o;
    o.seed = 5;
    const auto a = check::run_gradcheck(o);
    CHECK(a.passed());
    CHECK(a.text() == check::run_gradcheck(o).text());
    o.flip_gradient_sign = true;
    const auto b = check::run_gradcheck(o);
    CHECK_FALSE(b.passed());
    CHECK(b.text().find("gradient_fd") != std::string::npos);
}
