// SPDX-License-Identifier: Apache-2.0
//
// Reference schemes the fully connected RIS is compared against.
#pragma once

#include "bdris/bdris_opt.hpp"
#include "bdris/channel.hpp"
#include "bdris/rate.hpp"

#include <vector>

namespace bdris::baselines {

/// Conventional (single-connected) RIS: Theta = diag(e^{i phases}).
struct DiagRis {
    RealVector phases;

    ComplexMatrix theta() const;
};

struct DiagResult {
    DiagRis ris;
    TxCovariance cov;
    std::vector<double> capacity_trace;  // after every accepted phase update and covariance update
    double capacity_nats = 0.0;
    int outer_iterations = 0;
};

/// Alternates water-filling with cyclic per-element phase updates. Each
/// element's phase is searched on a 64-point grid, then refined by
/// golden-section search within one grid step of the best point; the new
/// phase is kept only if it does not lower the capacity.
DiagResult optimize_diag_ris(const ChannelSet& channels, double noise_mw, double total_power,
                             const opt::OptimizerConfig& cfg);

struct LowComplexityResult {
    BdRis ris;
    ComplexMatrix theta;
    TxCovariance cov;
    double capacity_nats = 0.0;
};

/// Symmetric-unitary matrix obtained from the Takagi factor of the
/// symmetric part of X: Q Q^T where (X + X^T)/2 = Q diag(sigma) Q^T.
BdRis project_symmetric_unitary(const ComplexMatrix& X);

/// Closed-form scheme: the unitary maximizer of Re tr(G^H H^H F Theta)
/// (the cross term of ||H + F Theta G^H||_F^2), projected onto symmetric
/// unitary matrices, followed by one water-filling pass. Falls back to
/// Theta = I when that cross term vanishes.
LowComplexityResult low_complexity_bdris(const ChannelSet& channels, double noise_mw, double total_power);

/// i.i.d. uniform phases on [0, 2 pi).
DiagRis random_diag(Rng& rng, int m);

/// Water-filling capacity of the direct link alone.
double no_ris_capacity(const ChannelSet& channels, double noise_mw, double total_power);

}  // namespace bdris::baselines
