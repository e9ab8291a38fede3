// SPDX-License-Identifier: Apache-2.0
//
// Capacity maximization for a fully connected (beyond-diagonal) RIS.
//
// The outer loop alternates two block updates:
//   * transmit covariance for a fixed scattering matrix (water-filling), and
//   * scattering matrix for a fixed covariance, by minorize-maximize: each
//     round builds a concave quadratic lower bound J of the capacity that is
//     tight at the current Theta, then maximizes J(Q Q^T) over the unitary
//     group with projected-gradient steps along geodesics Q exp(mu S).
//
// Writing Theta = Q Q^T with Q unitary keeps Theta symmetric and unitary
// for every iterate, so no projection onto the feasible set is needed.
#pragma once

#include "bdris/channel.hpp"
#include "bdris/matkit.hpp"
#include "bdris/rate.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace bdris::opt {

struct OptimizerConfig {
    double step_init = 1.0;
    double step_grow = 2.0;
    double step_shrink = 0.5;
    int max_backtracks = 30;
    double eps_capacity = 1e-6;   // relative capacity improvement (outer and MM loops)
    double eps_surrogate = 1e-6;  // relative surrogate improvement (geodesic loop)
    int max_outer = 100;
    int max_mm = 200;
    int max_inner = 500;
    int reunitarize_every = 50;

    /// Throws ContractViolation unless every field is positive and
    /// step_shrink < 1 < step_grow.
    void validate() const;
};

/// Frozen quantities of one lower bound, expanded at Theta_t:
///   J(Theta) = 2 Re tr(A Theta) - ||F_t Theta Gbar^H||_F^2,
///   C(Theta) >= constant + J(Theta), with equality at Theta_t.
struct MinorizerState {
    ComplexMatrix H_t;  // n_r x d, shaped composite channel at Theta_t
    ComplexMatrix R_t;  // n_r x n_r, (1/s2) I - (s2 I + H_t H_t^H)^{-1}
    ComplexMatrix F_t;  // n_r x m, R_t^{1/2} F
    ComplexMatrix Z_t;  // d x n_r, (1/s2) H_t^H - Hbar^H R_t
    ComplexMatrix A;    // m x m, Gbar^H Z_t F
    double constant = 0.0;
    double capacity_at_expansion = 0.0;  // C(Theta_t)
};

struct IterationTrace {
    /// Capacity (nats) after every block update of the alternating loop,
    /// starting with the first covariance update.
    std::vector<double> capacity;
    /// For every scattering update: C(Theta_t) at the start of each MM round
    /// followed by the capacity after the last round.
    std::vector<std::vector<double>> mm_capacity;
    /// For every MM round: the surrogate value after each accepted step,
    /// starting with the value at the expansion point.
    std::vector<std::vector<double>> surrogate;
    std::vector<double> steps;         // accepted geodesic step sizes
    std::vector<double> stationarity;  // ||S_skew|| / ||grad|| at each geodesic-loop exit
    int outer_iterations = 0;
    int geodesic_steps = 0;
    bool stalled = false;
    double covariance_ms = 0.0;
    double scattering_ms = 0.0;
};

/// Hbar = H V P^{1/2} and Gbar = P^{1/2} V^H G: the covariance folded into
/// the channels so the capacity reads log det(I + Hbar_eq Hbar_eq^H / s2).
struct AbsorbedChannels {
    ComplexMatrix Hbar;  // n_r x d
    ComplexMatrix Gbar;  // d x m
};

AbsorbedChannels absorb_covariance(const ComplexMatrix& H, const ComplexMatrix& G, const TxCovariance& cov);

MinorizerState build_minorizer(const ComplexMatrix& Hbar, const ComplexMatrix& F, const ComplexMatrix& Gbar,
                               const ComplexMatrix& theta_t, double noise_mw);

/// J evaluated at an arbitrary m x m Theta (not necessarily feasible).
double surrogate_at(const MinorizerState& state, const ComplexMatrix& F, const ComplexMatrix& Gbar,
                    const ComplexMatrix& theta);

/// J(Q Q^T). Requires Q unitary to 1e-6.
double surrogate_value(const MinorizerState& state, const ComplexMatrix& F, const ComplexMatrix& Gbar,
                       const ComplexMatrix& Q);

/// Wirtinger gradient dJ/dQ* of J(Q Q^T), normalized so that
/// dJ = 2 Re tr(grad^H dQ) for any perturbation dQ:
///   grad = (N + N^T) Q*,  N = A^H - (F_t^H F_t) Q Q^T (Gbar^H Gbar).
ComplexMatrix surrogate_gradient(const MinorizerState& state, const ComplexMatrix& F, const ComplexMatrix& Gbar,
                                 const ComplexMatrix& Q);

/// Riemannian ascent direction: the skew-Hermitian S for which Q S is the
/// projection of grad onto the tangent space at Q,
///   S = (Q^H grad - grad^H Q) / 2.
ComplexMatrix tangent_project(const ComplexMatrix& Q, const ComplexMatrix& grad);

/// Q exp(mu S).
ComplexMatrix geodesic_step(const ComplexMatrix& Q, const ComplexMatrix& S, double mu);

struct SurrogateResult {
    ComplexMatrix Q;
    double value = 0.0;
    std::vector<double> values;  // after every accepted step, initial value first
    std::vector<double> steps;
    double final_step = 1.0;
    double stationarity = 0.0;
    int iterations = 0;
    bool stalled = false;  // no ascent step found at the very first iterate
};

/// Maximizes J(Q Q^T) over the unitary group starting from Q0. Step sizes
/// adapt by backtracking: grow after every accepted step, shrink on every
/// rejected trial. `step` overrides cfg.step_init when given.
SurrogateResult maximize_surrogate(const MinorizerState& state, const ComplexMatrix& F, const ComplexMatrix& Gbar,
                                   const ComplexMatrix& Q0, const OptimizerConfig& cfg,
                                   std::optional<double> step = std::nullopt);

struct ScatteringResult {
    BdRis ris;
    double capacity = 0.0;  // nats, with the covariance folded into Hbar/Gbar
    std::vector<double> capacity_trace;
    std::vector<std::vector<double>> surrogate_trace;
    std::vector<double> steps;
    std::vector<double> stationarity;
    double final_step = 1.0;
    int rounds = 0;
    bool stalled = false;
};

/// MM loop for a fixed covariance.
ScatteringResult optimize_scattering(const ComplexMatrix& Hbar, const ComplexMatrix& F, const ComplexMatrix& Gbar,
                                     const ComplexMatrix& Q0, double noise_mw, const OptimizerConfig& cfg,
                                     std::optional<double> step = std::nullopt);

struct CapacityResult {
    BdRis ris;
    TxCovariance cov;
    IterationTrace trace;
    double capacity_nats = 0.0;
    double rate_bps_hz = 0.0;
};

/// Alternating optimization from the given initial Takagi factor.
CapacityResult maximize_capacity(const ChannelSet& channels, double noise_mw, double total_power,
                                 const BdRis& init, const OptimizerConfig& cfg);

enum class InitStrategy {
    identity,
    random_unitary,
    diag_ris,
    low_complexity,
    best,  // first maximizer of the water-filled capacity among {diag_ris, low_complexity}
};

InitStrategy parse_init_strategy(std::string_view name);
std::string_view to_string(InitStrategy s);

/// Haar-distributed unitary from the QR factorization of a Ginibre matrix.
ComplexMatrix random_unitary(Rng& rng, int m);

/// Scattering matrices already computed elsewhere that an initialization may
/// reuse instead of recomputing.
struct InitHints {
    std::optional<RealVector> diag_phases;
    std::optional<BdRis> low_complexity;
};

/// Water-filled capacity (nats) of the link for a fixed scattering matrix.
double capacity_for_theta(const ChannelSet& channels, const ComplexMatrix& theta, double noise_mw,
                          double total_power);

/// Index of the first candidate with the largest water-filled capacity.
std::size_t best_candidate(const ChannelSet& channels, std::span<const ComplexMatrix> thetas, double noise_mw,
                           double total_power);

BdRis make_initialization(const ChannelSet& channels, double noise_mw, double total_power, InitStrategy strategy,
                          std::uint64_t seed, const OptimizerConfig& cfg, const InitHints& hints = {});

/// Convenience overload: builds the initialization, then optimizes.
CapacityResult maximize_capacity(const ChannelSet& channels, double noise_mw, double total_power,
                                 InitStrategy strategy, std::uint64_t seed, const OptimizerConfig& cfg);

}  // namespace bdris::opt
