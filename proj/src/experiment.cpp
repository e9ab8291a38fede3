// SPDX-License-Identifier: Apache-2.0
#include "bdris/experiment.hpp"

#include "bdris/baselines.hpp"
#include "bdris/errors.hpp"

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace bdris::exp {

namespace {

using Clock = std::chrono::steady_clock;

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

const char* sweep_column(SweepKind kind) {
    switch (kind) {
        case SweepKind::ris_x: return "ris_x_m";
        case SweepKind::m_elements: return "m";
        case SweepKind::tx_power_dbm: return "tx_power_dbm";
        case SweepKind::none: return "sweep_value";
    }
    return "sweep_value";
}

// Per-trial cache so the default BD-RIS initialization can reuse the
// baselines that were already computed for the same realization.
struct TrialContext {
    const ChannelSet& channels;
    double noise_mw;
    double power;
    const opt::OptimizerConfig& cfg;
    std::optional<baselines::DiagResult> diag;
    std::optional<baselines::LowComplexityResult> low;

    const baselines::DiagResult& diag_result() {
        if (!diag) {
            diag = baselines::optimize_diag_ris(channels, noise_mw, power, cfg);
        }
        return *diag;
    }
    const baselines::LowComplexityResult& low_result() {
        if (!low) {
            low = baselines::low_complexity_bdris(channels, noise_mw, power);
        }
        return *low;
    }
};

void evaluate(Method method, const ExperimentConfig& config, TrialContext& ctx, ResultRecord& rec) {
    const double P = ctx.power;
    switch (method) {
        case Method::no_ris: {
            const TxCovariance cov = rate::optimize_covariance(ctx.channels.H, P, ctx.noise_mw);
            rec.rate_bps_hz = rate::nats_to_bps_hz(rate::capacity_nats(ctx.channels.H, cov, ctx.noise_mw));
            rec.active_streams = static_cast<int>(rate::active_streams(cov.p, P));
            return;
        }
        case Method::random_diag: {
            Rng rng(derive_seed(ctx.channels.seed, 0x7a11));
            const auto ris = baselines::random_diag(rng, static_cast<int>(ctx.channels.F.cols()));
            const ComplexMatrix H_eq =
                rate::equivalent_channel(ctx.channels.H, ctx.channels.F, ctx.channels.G, ris.theta());
            const TxCovariance cov = rate::optimize_covariance(H_eq, P, ctx.noise_mw);
            rec.rate_bps_hz = rate::nats_to_bps_hz(rate::capacity_nats(H_eq, cov, ctx.noise_mw));
            rec.active_streams = static_cast<int>(rate::active_streams(cov.p, P));
            return;
        }
        case Method::diag_ris: {
            const auto& r = ctx.diag_result();
            rec.rate_bps_hz = rate::nats_to_bps_hz(r.capacity_nats);
            rec.active_streams = static_cast<int>(rate::active_streams(r.cov.p, P));
            rec.outer_iterations = r.outer_iterations;
            return;
        }
        case Method::low_complexity: {
            const auto& r = ctx.low_result();
            rec.rate_bps_hz = rate::nats_to_bps_hz(r.capacity_nats);
            rec.active_streams = static_cast<int>(rate::active_streams(r.cov.p, P));
            rec.outer_iterations = 1;
            return;
        }
        case Method::bdris: {
            opt::InitHints hints;
            const bool wants_diag = config.init == opt::InitStrategy::best || config.init == opt::InitStrategy::diag_ris;
            const bool wants_low =
                config.init == opt::InitStrategy::best || config.init == opt::InitStrategy::low_complexity;
            if (wants_diag) {
                hints.diag_phases = ctx.diag_result().ris.phases;
            }
            if (wants_low) {
                hints.low_complexity = ctx.low_result().ris;
            }
            const BdRis init = opt::make_initialization(ctx.channels, ctx.noise_mw, P, config.init,
                                                        ctx.channels.seed, ctx.cfg, hints);
            const auto r = opt::maximize_capacity(ctx.channels, ctx.noise_mw, P, init, ctx.cfg);
            rec.rate_bps_hz = r.rate_bps_hz;
            rec.active_streams = static_cast<int>(rate::active_streams(r.cov.p, P));
            rec.outer_iterations = r.trace.outer_iterations;
            return;
        }
    }
}

}  // namespace

Scenario scenario_at(const ExperimentConfig& config, SweepKind kind, double value) {
    Scenario s = config.scenario;
    switch (kind) {
        case SweepKind::ris_x:
            s.ris_pos = Eigen::Vector3d(value, 5.0, 5.0);
            break;
        case SweepKind::m_elements:
            s.m = static_cast<int>(value);
            s.ris_pos = Eigen::Vector3d(50.0, 5.0, 5.0);
            break;
        case SweepKind::tx_power_dbm:
            s.tx_power_mw = channel::dbm_to_mw(value);
            break;
        case SweepKind::none:
            break;
    }
    return s;
}

std::vector<ResultRecord> run_single(const ExperimentConfig& config, SweepKind kind, double sweep_value, int trial) {
    const Scenario scenario = scenario_at(config, kind, sweep_value);
    const std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(trial);
    std::vector<ResultRecord> out;
    out.reserve(config.methods.size());

    std::optional<ChannelSet> channels;
    std::string setup_error;
    try {
        channels = channel::build_channels(scenario, seed);
    } catch (const std::exception& e) {
        setup_error = e.what();
    }

    std::optional<TrialContext> ctx;
    if (channels) {
        ctx.emplace(TrialContext{*channels, scenario.noise_mw(), scenario.tx_power_mw, config.optimizer, {}, {}});
    }
    for (Method method : config.methods) {
        ResultRecord rec;
        rec.method = method;
        rec.sweep_value = sweep_value;
        rec.trial = trial;
        rec.seed = seed;
        const auto t0 = Clock::now();
        if (!ctx) {
            rec.error = setup_error;
        } else {
            try {
                evaluate(method, config, *ctx, rec);
            } catch (const std::exception& e) {
                rec.error = e.what();
            }
        }
        if (!rec.ok()) {
            rec.rate_bps_hz = std::numeric_limits<double>::quiet_NaN();
            rec.active_streams = 0;
        }
        rec.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<double> sweep_values(const ExperimentConfig& config, SweepKind kind) {
    switch (kind) {
        case SweepKind::ris_x: return config.ris_x;
        case SweepKind::m_elements: return {config.m_elements.begin(), config.m_elements.end()};
        case SweepKind::tx_power_dbm: return config.tx_power_dbm;
        case SweepKind::none: return {config.scenario.ris_pos.x()};
    }
    return {};
}

SweepResult run_sweep_serial(const ExperimentConfig& config, SweepKind kind) {
    config.validate();
    SweepResult res{kind, sweep_values(config, kind), {}};
    for (double v : res.values) {
        for (int t = 0; t < config.trials; ++t) {
            auto recs = run_single(config, kind, v, t);
            res.records.insert(res.records.end(), recs.begin(), recs.end());
        }
    }
    return res;
}

SweepResult run_sweep_parallel(const ExperimentConfig& config, SweepKind kind, int threads) {
    config.validate();
    SweepResult res{kind, sweep_values(config, kind), {}};
    const int n_values = static_cast<int>(res.values.size());
    const int n_jobs = n_values * config.trials;
    std::vector<std::vector<ResultRecord>> slots(static_cast<std::size_t>(n_jobs));

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads > 0 ? threads : 1)
    for (int job = 0; job < n_jobs; ++job) {
        const int vi = job / config.trials;
        const int t = job % config.trials;
        slots[static_cast<std::size_t>(job)] = run_single(config, kind, res.values[static_cast<std::size_t>(vi)], t);
    }

    for (auto& s : slots) {
        res.records.insert(res.records.end(), s.begin(), s.end());
    }
    return res;
}

int default_threads() {
    if (const char* env = std::getenv("BDRIS_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) {
            return n;
        }
    }
    return omp_get_max_threads();
}

std::vector<SummaryRow> aggregate(const SweepResult& result, const std::vector<Method>& methods) {
    std::vector<SummaryRow> rows;
    for (double v : result.values) {
        for (Method m : methods) {
            SummaryRow row;
            row.method = m;
            row.sweep_value = v;
            double sum = 0.0;
            double streams = 0.0;
            std::vector<double> rates;
            for (const auto& r : result.records) {
                if (r.method == m && r.sweep_value == v && r.ok()) {
                    rates.push_back(r.rate_bps_hz);
                    sum += r.rate_bps_hz;
                    streams += r.active_streams;
                }
            }
            row.trials = static_cast<int>(rates.size());
            if (row.trials > 0) {
                row.mean_rate = sum / row.trials;
                row.mean_streams = streams / row.trials;
                double ss = 0.0;
                for (double x : rates) {
                    ss += (x - row.mean_rate) * (x - row.mean_rate);
                }
                row.std_rate = row.trials > 1 ? std::sqrt(ss / (row.trials - 1)) : 0.0;
            } else {
                row.mean_rate = std::numeric_limits<double>::quiet_NaN();
                row.std_rate = std::numeric_limits<double>::quiet_NaN();
                row.mean_streams = std::numeric_limits<double>::quiet_NaN();
            }
            rows.push_back(row);
        }
    }
    return rows;
}

void write_summary_csv(std::ostream& os, const SweepResult& result, const std::vector<Method>& methods) {
    const bool with_streams = result.kind == SweepKind::tx_power_dbm;
    os << "method," << sweep_column(result.kind) << ",mean_rate_bps_hz,std_rate";
    if (with_streams) {
        os << ",mean_active_streams";
    }
    os << ",trials\n";
    for (const auto& row : aggregate(result, methods)) {
        os << to_string(row.method) << ',' << fmt_double(row.sweep_value) << ',' << fmt_double(row.mean_rate) << ','
           << fmt_double(row.std_rate);
        if (with_streams) {
            os << ',' << fmt_double(row.mean_streams);
        }
        os << ',' << row.trials << '\n';
    }
}

void write_trials_csv(std::ostream& os, const SweepResult& result) {
    os << "method," << sweep_column(result.kind)
       << ",trial,seed,rate_bps_hz,active_streams,outer_iterations,wall_ms,status\n";
    for (const auto& r : result.records) {
        std::string err = r.ok() ? "ok" : "error: " + r.error;
        for (char& c : err) {
            if (c == ',' || c == '\n') {
                c = ';';
            }
        }
        os << to_string(r.method) << ',' << fmt_double(r.sweep_value) << ',' << r.trial << ',' << r.seed << ','
           << fmt_double(r.rate_bps_hz) << ',' << r.active_streams << ',' << r.outer_iterations << ','
           << fmt_double(r.wall_ms) << ',' << err << '\n';
    }
}

std::string summary_csv(const SweepResult& result, const std::vector<Method>& methods) {
    std::ostringstream os;
    write_summary_csv(os, result, methods);
    return os.str();
}

}  // namespace bdris::exp
