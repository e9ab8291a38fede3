// SPDX-License-Identifier: Apache-2.0
//
// Link geometry, large-scale path loss and small-scale fading for the
// transmitter -> RIS -> receiver scenario.
#pragma once

#include "bdris/matkit.hpp"
#include "bdris/rng.hpp"

#include <Eigen/Core>

#include <cstdint>

namespace bdris {

struct Scenario {
    Eigen::Vector3d tx_pos{0.0, 0.0, 1.5};
    Eigen::Vector3d rx_pos{50.0, 0.0, 1.5};
    Eigen::Vector3d ris_pos{50.0, 5.0, 5.0};
    int n_t = 2;
    int n_r = 2;
    int m = 16;
    double carrier_hz = 2.4e9;  // informational: arrays use half-wavelength spacing
    double bandwidth_hz = 20e6;
    double pl0_db = -28.0;
    double alpha_direct = 3.75;
    double alpha_ris = 2.0;
    double rice_factor = 3.0;  // linear
    double tx_power_mw = 100.0;
    double noise_psd_dbm_per_hz = -174.0;

    /// Throws ContractViolation on nonpositive counts, rates, powers or
    /// coincident node positions.
    void validate() const;

    double noise_mw() const;
    int streams() const { return n_t < n_r ? n_t : n_r; }
};

/// One fading realization. H is n_r x n_t (direct), G is n_t x m
/// (transmitter to RIS), F is n_r x m (RIS to receiver), so the composite
/// channel reads H + F Theta G^H.
struct ChannelSet {
    ComplexMatrix H;
    ComplexMatrix G;
    ComplexMatrix F;
    Scenario scenario;
    std::uint64_t seed = 0;
};

namespace channel {

/// PL0 - 10 alpha log10(d) in dB.
double path_loss_db(double distance_m, double alpha, double pl0_db);

/// Amplitude multiplier 10^(PL/20) for a path loss in dB.
double amplitude_gain(double path_loss_db);

/// Noise power in dBm over the given bandwidth.
double noise_power_dbm(double bandwidth_hz, double psd_dbm_per_hz);

double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

/// Half-wavelength ULA response, entries e^{i pi k sin_angle}.
ComplexMatrix steering_vector(int n, double sin_angle);

/// i.i.d. CN(0, amplitude_scale^2) entries.
ComplexMatrix draw_rayleigh(Rng& rng, int rows, int cols, double amplitude_scale);

/// amplitude_scale * (sqrt(k/(1+k)) los + sqrt(1/(1+k)) rayleigh).
ComplexMatrix draw_rician(Rng& rng, int rows, int cols, double rice_factor,
                          const ComplexMatrix& los, double amplitude_scale);

/// Line-of-sight components of G and F implied by the scenario geometry.
/// Arrays lie along the x-axis; the steering argument is the direction
/// cosine of the link with that axis.
ComplexMatrix los_tx_ris(const Scenario& s);
ComplexMatrix los_ris_rx(const Scenario& s);

/// Draws (H, G, F) for the scenario. Deterministic in (scenario, seed); the
/// draw order is H, then G, then F.
ChannelSet build_channels(const Scenario& scenario, std::uint64_t seed);

}  // namespace channel
}  // namespace bdris
