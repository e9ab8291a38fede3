// SPDX-License-Identifier: Apache-2.0
//
// Composite channel assembly, log-det capacity and the water-filling
// transmit covariance.
#pragma once

#include "bdris/matkit.hpp"

#include <cstddef>

namespace bdris {

/// Transmit covariance R = V diag(p) V^H with orthonormal V (n_t x d) and
/// per-stream powers p in mW.
struct TxCovariance {
    ComplexMatrix V;
    RealVector p;

    ComplexMatrix matrix() const;
    double total_power() const { return p.sum(); }
    /// H V diag(sqrt(p)): the channel seen by unit-power streams.
    ComplexMatrix shaped(const ComplexMatrix& H) const;
};

/// Fully connected RIS parametrized by its unitary Takagi factor Q, so the
/// scattering matrix Theta = Q Q^T is symmetric and unitary.
struct BdRis {
    ComplexMatrix Q;

    /// Q Q^T with the lower triangle mirrored from the upper one, so
    /// Theta == Theta^T holds bit for bit.
    ComplexMatrix theta() const;

    /// Takagi factor of a symmetric unitary Theta.
    static BdRis from_theta(const ComplexMatrix& theta);
};

namespace rate {

/// H + F Theta G^H.
ComplexMatrix equivalent_channel(const ComplexMatrix& H, const ComplexMatrix& F, const ComplexMatrix& G,
                                 const ComplexMatrix& theta);

/// log det(I + M M^H / noise) in nats, evaluated as sum(log1p(s_i^2 / noise))
/// over the singular values of M.
double log_det_capacity(const ComplexMatrix& M, double noise_mw);

/// log det(I + H_eq R H_eq^H / noise) in nats.
double capacity_nats(const ComplexMatrix& H_eq, const TxCovariance& cov, double noise_mw);

double nats_to_bps_hz(double nats);

/// Exact water-filling: p_i = max(0, mu - noise / g_i), sum(p) = total_power.
/// The water level comes from active-set enumeration over the gains sorted
/// in descending order. Zero gains never receive power.
RealVector water_fill(const RealVector& gains, double total_power, double noise_mw);

/// Capacity-optimal covariance for a fixed channel: right singular vectors
/// of H_eq with water-filled powers. A zero channel yields uniform power
/// over the first d coordinate directions.
TxCovariance optimize_covariance(const ComplexMatrix& H_eq, double total_power, double noise_mw);

/// Uniform power over the first d coordinate directions.
TxCovariance uniform_covariance(int n_t, int d, double total_power);

/// Streams carrying more than 1e-6 of the total power.
std::size_t active_streams(const RealVector& p, double total_power);

}  // namespace rate
}  // namespace bdris
