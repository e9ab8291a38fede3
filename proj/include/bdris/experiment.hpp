// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo sweeps over RIS position, element count and transmit power.
//
// Trials are independent: trial t always uses channel seed base_seed + t and
// every method sees the same realization. The serial runner is the
// reference; the OpenMP runner distributes (sweep point, trial) pairs over
// threads and writes each result into its own slot, so both produce the same
// records in the same (sweep value, trial, method) order.
#pragma once

#include "bdris/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace bdris::exp {

enum class SweepKind { none, ris_x, m_elements, tx_power_dbm };

struct ResultRecord {
    Method method = Method::bdris;
    double sweep_value = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    double rate_bps_hz = 0.0;
    int active_streams = 0;
    int outer_iterations = 0;
    double wall_ms = 0.0;
    std::string error;  // empty on success

    bool ok() const { return error.empty(); }
};

/// Scenario for one sweep point: RIS at (x, 5, 5), m elements, or the given
/// transmit power in dBm. SweepKind::none returns the base scenario.
Scenario scenario_at(const ExperimentConfig& config, SweepKind kind, double value);

/// Runs every configured method on the realization with seed
/// base_seed + trial. A method that throws yields an error record; the
/// remaining methods still run.
std::vector<ResultRecord> run_single(const ExperimentConfig& config, SweepKind kind, double sweep_value, int trial);

struct SweepResult {
    SweepKind kind = SweepKind::none;
    std::vector<double> values;
    std::vector<ResultRecord> records;  // ordered by (value, trial, method)
};

std::vector<double> sweep_values(const ExperimentConfig& config, SweepKind kind);

SweepResult run_sweep_serial(const ExperimentConfig& config, SweepKind kind);
SweepResult run_sweep_parallel(const ExperimentConfig& config, SweepKind kind, int threads);

/// Thread count from BDRIS_THREADS when set, else the OpenMP default.
int default_threads();

struct SummaryRow {
    Method method = Method::bdris;
    double sweep_value = 0.0;
    double mean_rate = 0.0;
    double std_rate = 0.0;  // sample standard deviation, 0 for a single trial
    double mean_streams = 0.0;
    int trials = 0;  // successful trials
};

/// Per (value, method) means in record order; error records are skipped.
std::vector<SummaryRow> aggregate(const SweepResult& result, const std::vector<Method>& methods);

/// Summary CSV with the column set of the sweep kind.
void write_summary_csv(std::ostream& os, const SweepResult& result, const std::vector<Method>& methods);
/// One row per record, including timing and error text.
void write_trials_csv(std::ostream& os, const SweepResult& result);

std::string summary_csv(const SweepResult& result, const std::vector<Method>& methods);

}  // namespace bdris::exp
