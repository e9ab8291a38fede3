// SPDX-License-Identifier: Apache-2.0
#include "bdris/channel.hpp"

#include "bdris/errors.hpp"

#include <cmath>
#include <numbers>

namespace bdris {

void Scenario::validate() const {
    if (n_t < 1 || n_r < 1 || m < 1) {
        throw ContractViolation("scenario: antenna and element counts must be >= 1");
    }
    if (!(bandwidth_hz > 0.0) || !(carrier_hz > 0.0) || !(tx_power_mw > 0.0)) {
        throw ContractViolation("scenario: bandwidth, carrier and power must be positive");
    }
    if (!(rice_factor >= 0.0)) {
        throw ContractViolation("scenario: rice factor must be nonnegative");
    }
    if ((tx_pos - rx_pos).norm() <= 0.0 || (tx_pos - ris_pos).norm() <= 0.0 ||
        (ris_pos - rx_pos).norm() <= 0.0) {
        throw ContractViolation("scenario: node positions must be distinct");
    }
}

double Scenario::noise_mw() const {
    return channel::dbm_to_mw(channel::noise_power_dbm(bandwidth_hz, noise_psd_dbm_per_hz));
}

namespace channel {

double path_loss_db(double distance_m, double alpha, double pl0_db) {
    if (!(distance_m > 0.0)) {
        throw ContractViolation("path_loss_db: distance must be positive");
    }
    return pl0_db - alpha * 10.0 * std::log10(distance_m);
}

double amplitude_gain(double pl_db) {
    return std::pow(10.0, pl_db / 20.0);
}

double noise_power_dbm(double bandwidth_hz, double psd_dbm_per_hz) {
    if (!(bandwidth_hz > 0.0)) {
        throw ContractViolation("noise_power_dbm: bandwidth must be positive");
    }
    return psd_dbm_per_hz + 10.0 * std::log10(bandwidth_hz);
}

double dbm_to_mw(double dbm) {
    return std::pow(10.0, dbm / 10.0);
}

double mw_to_dbm(double mw) {
    return 10.0 * std::log10(mw);
}

ComplexMatrix steering_vector(int n, double sin_angle) {
    if (n < 1) {
        throw ContractViolation("steering_vector: n must be >= 1");
    }
    ComplexMatrix a(n, 1);
    for (int k = 0; k < n; ++k) {
        a(k, 0) = std::polar(1.0, std::numbers::pi * k * sin_angle);
    }
    return a;
}

ComplexMatrix draw_rayleigh(Rng& rng, int rows, int cols, double amplitude_scale) {
    if (!(amplitude_scale >= 0.0)) {
        throw ContractViolation("draw_rayleigh: scale must be nonnegative");
    }
    ComplexMatrix out(rows, cols);
    // Row-major fill so the sample order does not depend on storage order.
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            out(i, j) = amplitude_scale * rng.complex_normal();
        }
    }
    return out;
}

ComplexMatrix draw_rician(Rng& rng, int rows, int cols, double rice_factor, const ComplexMatrix& los,
                          double amplitude_scale) {
    if (!(rice_factor >= 0.0)) {
        throw ContractViolation("draw_rician: rice factor must be nonnegative");
    }
    if (los.rows() != rows || los.cols() != cols) {
        throw ContractViolation("draw_rician: LOS matrix dimensions do not match");
    }
    const double los_weight = std::sqrt(rice_factor / (1.0 + rice_factor));
    const double nlos_weight = std::sqrt(1.0 / (1.0 + rice_factor));
    const ComplexMatrix scatter = draw_rayleigh(rng, rows, cols, 1.0);
    return amplitude_scale * (los_weight * los + nlos_weight * scatter);
}

namespace {

double axis_cosine(const Eigen::Vector3d& from, const Eigen::Vector3d& to) {
    const Eigen::Vector3d d = to - from;
    return d.x() / d.norm();
}

}  // namespace

ComplexMatrix los_tx_ris(const Scenario& s) {
    const ComplexMatrix a_tx = steering_vector(s.n_t, axis_cosine(s.tx_pos, s.ris_pos));
    const ComplexMatrix a_ris = steering_vector(s.m, axis_cosine(s.ris_pos, s.tx_pos));
    return a_tx * a_ris.adjoint();
}

ComplexMatrix los_ris_rx(const Scenario& s) {
    const ComplexMatrix a_rx = steering_vector(s.n_r, axis_cosine(s.rx_pos, s.ris_pos));
    const ComplexMatrix a_ris = steering_vector(s.m, axis_cosine(s.ris_pos, s.rx_pos));
    return a_rx * a_ris.adjoint();
}

ChannelSet build_channels(const Scenario& scenario, std::uint64_t seed) {
    scenario.validate();
    const double d_direct = (scenario.rx_pos - scenario.tx_pos).norm();
    const double d_tx_ris = (scenario.ris_pos - scenario.tx_pos).norm();
    const double d_ris_rx = (scenario.rx_pos - scenario.ris_pos).norm();

    const double amp_h = amplitude_gain(path_loss_db(d_direct, scenario.alpha_direct, scenario.pl0_db));
    const double amp_g = amplitude_gain(path_loss_db(d_tx_ris, scenario.alpha_ris, scenario.pl0_db));
    const double amp_f = amplitude_gain(path_loss_db(d_ris_rx, scenario.alpha_ris, scenario.pl0_db));

    Rng rng(seed);
    ChannelSet out;
    out.scenario = scenario;
    out.seed = seed;
    out.H = draw_rayleigh(rng, scenario.n_r, scenario.n_t, amp_h);
    out.G = draw_rician(rng, scenario.n_t, scenario.m, scenario.rice_factor, los_tx_ris(scenario), amp_g);
    out.F = draw_rician(rng, scenario.n_r, scenario.m, scenario.rice_factor, los_ris_rx(scenario), amp_f);
    return out;
}

}  // namespace channel
}  // namespace bdris
