// SPDX-License-Identifier: Apache-2.0
#include "bdris/bdris_opt.hpp"

#include "bdris/baselines.hpp"
#include "bdris/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

namespace bdris::opt {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

constexpr double kTiny = std::numeric_limits<double>::min();

bool improved_enough(double before, double after, double rel_tol) {
    return after - before > rel_tol * std::max(std::abs(before), kTiny);
}

ComplexMatrix symmetric_theta(const ComplexMatrix& Q) {
    return BdRis{Q}.theta();
}

// ||F_t Theta Gbar^H||_F^2 and its building block F_t Theta Gbar^H.
ComplexMatrix quadratic_core(const MinorizerState& s, const ComplexMatrix& Gbar, const ComplexMatrix& theta) {
    return (s.F_t * theta) * Gbar.adjoint();
}

}  // namespace

void OptimizerConfig::validate() const {
    const bool positive = step_init > 0.0 && step_grow > 0.0 && step_shrink > 0.0 && max_backtracks > 0 &&
                          eps_capacity > 0.0 && eps_surrogate > 0.0 && max_outer > 0 && max_mm > 0 &&
                          max_inner > 0 && reunitarize_every > 0;
    if (!positive || !(step_shrink < 1.0) || !(step_grow > 1.0)) {
        throw ContractViolation("optimizer config: fields must be positive with step_shrink < 1 < step_grow");
    }
}

AbsorbedChannels absorb_covariance(const ComplexMatrix& H, const ComplexMatrix& G, const TxCovariance& cov) {
    if (H.cols() != cov.V.rows() || G.rows() != cov.V.rows() || cov.V.cols() != cov.p.size()) {
        throw ContractViolation("absorb_covariance: dimension mismatch");
    }
    return {cov.shaped(H), cov.shaped(G.adjoint()).adjoint()};
}

MinorizerState build_minorizer(const ComplexMatrix& Hbar, const ComplexMatrix& F, const ComplexMatrix& Gbar,
                               const ComplexMatrix& theta_t, double noise_mw) {
    const Eigen::Index m = F.cols();
    if (!(noise_mw > 0.0)) {
        throw ContractViolation("build_minorizer: noise power must be positive");
    }
    if (F.rows() != Hbar.rows() || Gbar.rows() != Hbar.cols() || Gbar.cols() != m || theta_t.rows() != m ||
        theta_t.cols() != m) {
        throw ContractViolation("build_minorizer: dimension mismatch");
    }
    const double feas_tol = 1e-8 * std::sqrt(static_cast<double>(m));
    if (matkit::unitarity_error(theta_t) > feas_tol || matkit::symmetry_error(theta_t) > feas_tol) {
        throw ContractViolation("build_minorizer: expansion point is not symmetric unitary");
    }

    MinorizerState s;
    s.H_t = Hbar + F * theta_t * Gbar.adjoint();

    // R_t = (1/s2) I - (s2 I + H_t H_t^H)^{-1} has eigenvalues
    // l / (s2 (s2 + l)) on the eigenbasis of H_t H_t^H; evaluating it there
    // avoids cancelling two O(1/s2) terms.
    const matkit::Eigh e = matkit::eigh(s.H_t * s.H_t.adjoint());
    const RealVector lam = e.lambda.cwiseMax(0.0);
    RealVector r(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        r(i) = lam(i) / (noise_mw * (noise_mw + lam(i)));
    }
    s.R_t = e.W * r.cast<Complex>().asDiagonal() * e.W.adjoint();
    const ComplexMatrix R_half = e.W * r.cwiseSqrt().cast<Complex>().asDiagonal() * e.W.adjoint();
    s.F_t = R_half * F;
    s.Z_t = s.H_t.adjoint() / noise_mw - Hbar.adjoint() * s.R_t;
    s.A = Gbar.adjoint() * s.Z_t * F;

    s.capacity_at_expansion = rate::log_det_capacity(s.H_t, noise_mw);
    s.constant = s.capacity_at_expansion - surrogate_at(s, F, Gbar, theta_t);
    if (!std::isfinite(s.constant)) {
        throw NumericFailure("build_minorizer: non-finite bound constant");
    }
    return s;
}

double surrogate_at(const MinorizerState& state, const ComplexMatrix& /*F*/, const ComplexMatrix& Gbar,
                    const ComplexMatrix& theta) {
    // tr(A Theta) = sum_ij A_ij Theta_ji
    const Complex linear = state.A.cwiseProduct(theta.transpose()).sum();
    return 2.0 * linear.real() - quadratic_core(state, Gbar, theta).squaredNorm();
}

double surrogate_value(const MinorizerState& state, const ComplexMatrix& F, const ComplexMatrix& Gbar,
                       const ComplexMatrix& Q) {
    if (matkit::unitarity_error(Q) > 1e-6) {
        throw ContractViolation("surrogate_value: Q is not unitary");
    }
    return surrogate_at(state, F, Gbar, symmetric_theta(Q));
}

ComplexMatrix surrogate_gradient(const MinorizerState& state, const ComplexMatrix& /*F*/, const ComplexMatrix& Gbar,
                                 const ComplexMatrix& Q) {
    const ComplexMatrix theta = symmetric_theta(Q);
    // (F_t^H F_t) Theta (Gbar^H Gbar) grouped to stay O(m^2 n).
    const ComplexMatrix quad = state.F_t.adjoint() * quadratic_core(state, Gbar, theta) * Gbar;
    const ComplexMatrix N = state.A.adjoint() - quad;
    return (N + N.transpose()) * Q.conjugate();
}

ComplexMatrix tangent_project(const ComplexMatrix& Q, const ComplexMatrix& grad) {
    const ComplexMatrix X = Q.adjoint() * grad;
    return 0.5 * (X - X.adjoint());
}

ComplexMatrix geodesic_step(const ComplexMatrix& Q, const ComplexMatrix& S, double mu) {
    if (mu == 0.0) {
        return Q;
    }
    return Q * matkit::expm_skew(mu * S);
}

SurrogateResult maximize_surrogate(const MinorizerState& state, const ComplexMatrix& F, const ComplexMatrix& Gbar,
                                   const ComplexMatrix& Q0, const OptimizerConfig& cfg, std::optional<double> step) {
    cfg.validate();
    if (matkit::unitarity_error(Q0) > 1e-6) {
        throw ContractViolation("maximize_surrogate: Q0 is not unitary");
    }
    SurrogateResult res;
    res.Q = Q0;
    res.value = surrogate_at(state, F, Gbar, symmetric_theta(Q0));
    res.values.push_back(res.value);
    double mu = step.value_or(cfg.step_init);
    int accepted = 0;

    for (int it = 0; it < cfg.max_inner; ++it) {
        const ComplexMatrix grad = surrogate_gradient(state, F, Gbar, res.Q);
        const ComplexMatrix S = tangent_project(res.Q, grad);
        const double snorm = S.norm();
        if (snorm == 0.0 || snorm <= 1e-15 * grad.norm()) {
            break;
        }
        const matkit::SkewExponential expS(S);

        bool found = false;
        ComplexMatrix Q_next;
        double J_next = res.value;
        for (int b = 0; b <= cfg.max_backtracks; ++b) {
            Q_next = res.Q * expS(mu);
            J_next = surrogate_at(state, F, Gbar, symmetric_theta(Q_next));
            if (J_next > res.value) {
                found = true;
                break;
            }
            mu *= cfg.step_shrink;
        }
        res.iterations = it + 1;
        if (!found) {
            if (it == 0) {
                res.stalled = true;
                res.Q = Q0;
            }
            break;
        }

        const double previous = res.value;
        res.Q = std::move(Q_next);
        res.value = J_next;
        res.steps.push_back(mu);
        mu *= cfg.step_grow;
        ++accepted;
        if (accepted % cfg.reunitarize_every == 0) {
            res.Q = matkit::nearest_unitary(res.Q);
            res.value = surrogate_at(state, F, Gbar, symmetric_theta(res.Q));
        }
        res.values.push_back(res.value);
        if (!improved_enough(previous, res.value, cfg.eps_surrogate)) {
            break;
        }
    }

    const ComplexMatrix grad = surrogate_gradient(state, F, Gbar, res.Q);
    const double gnorm = grad.norm();
    res.stationarity = gnorm > 0.0 ? tangent_project(res.Q, grad).norm() / gnorm : 0.0;
    res.final_step = mu;
    return res;
}

ScatteringResult optimize_scattering(const ComplexMatrix& Hbar, const ComplexMatrix& F, const ComplexMatrix& Gbar,
                                     const ComplexMatrix& Q0, double noise_mw, const OptimizerConfig& cfg,
                                     std::optional<double> step) {
    cfg.validate();
    ScatteringResult res;
    ComplexMatrix Q = Q0;
    ComplexMatrix theta = symmetric_theta(Q);
    double capacity = rate::log_det_capacity(Hbar + F * theta * Gbar.adjoint(), noise_mw);
    res.capacity_trace.push_back(capacity);
    double mu = step.value_or(cfg.step_init);

    for (int round = 0; round < cfg.max_mm; ++round) {
        const MinorizerState state = build_minorizer(Hbar, F, Gbar, theta, noise_mw);
        SurrogateResult sr = maximize_surrogate(state, F, Gbar, Q, cfg, mu);
        mu = sr.final_step;
        res.stalled = res.stalled || (round == 0 && sr.stalled);
        res.steps.insert(res.steps.end(), sr.steps.begin(), sr.steps.end());
        res.stationarity.push_back(sr.stationarity);
        res.surrogate_trace.push_back(std::move(sr.values));

        Q = std::move(sr.Q);
        theta = symmetric_theta(Q);
        const double next = rate::log_det_capacity(Hbar + F * theta * Gbar.adjoint(), noise_mw);
        res.capacity_trace.push_back(next);
        res.rounds = round + 1;
        const double previous = capacity;
        capacity = next;
        if (!improved_enough(previous, next, cfg.eps_capacity)) {
            break;
        }
    }
    res.ris = BdRis{Q};
    res.capacity = capacity;
    res.final_step = mu;
    return res;
}

CapacityResult maximize_capacity(const ChannelSet& channels, double noise_mw, double total_power,
                                 const BdRis& init, const OptimizerConfig& cfg) {
    cfg.validate();
    const ComplexMatrix& H = channels.H;
    const ComplexMatrix& G = channels.G;
    const ComplexMatrix& F = channels.F;
    if (init.Q.rows() != F.cols() || matkit::unitarity_error(init.Q) > 1e-8 * std::sqrt(double(F.cols()))) {
        throw ContractViolation("maximize_capacity: initial factor must be an m x m unitary");
    }

    CapacityResult out;
    IterationTrace& trace = out.trace;
    ComplexMatrix Q = init.Q;
    double mu = cfg.step_init;
    double previous = -std::numeric_limits<double>::infinity();

    for (int outer = 0; outer < cfg.max_outer; ++outer) {
        auto t0 = Clock::now();
        const ComplexMatrix H_eq = rate::equivalent_channel(H, F, G, BdRis{Q}.theta());
        out.cov = rate::optimize_covariance(H_eq, total_power, noise_mw);
        trace.capacity.push_back(rate::capacity_nats(H_eq, out.cov, noise_mw));
        trace.covariance_ms += elapsed_ms(t0);

        t0 = Clock::now();
        const AbsorbedChannels ab = absorb_covariance(H, G, out.cov);
        ScatteringResult sr = optimize_scattering(ab.Hbar, F, ab.Gbar, Q, noise_mw, cfg, mu);
        trace.scattering_ms += elapsed_ms(t0);
        mu = sr.final_step;
        Q = sr.ris.Q;
        trace.capacity.push_back(sr.capacity);
        trace.mm_capacity.push_back(std::move(sr.capacity_trace));
        for (auto& s : sr.surrogate_trace) {
            trace.geodesic_steps += static_cast<int>(s.size()) - 1;
            trace.surrogate.push_back(std::move(s));
        }
        trace.steps.insert(trace.steps.end(), sr.steps.begin(), sr.steps.end());
        trace.stationarity.insert(trace.stationarity.end(), sr.stationarity.begin(), sr.stationarity.end());
        trace.stalled = trace.stalled || sr.stalled;
        trace.outer_iterations = outer + 1;

        const double current = sr.capacity;
        const bool keep_going = outer == 0 || improved_enough(previous, current, cfg.eps_capacity);
        previous = current;
        if (!keep_going) {
            break;
        }
    }

    // Final covariance matched to the final scattering matrix.
    const auto t0 = Clock::now();
    out.ris = BdRis{Q};
    const ComplexMatrix H_eq = rate::equivalent_channel(H, F, G, out.ris.theta());
    out.cov = rate::optimize_covariance(H_eq, total_power, noise_mw);
    out.capacity_nats = rate::capacity_nats(H_eq, out.cov, noise_mw);
    trace.capacity.push_back(out.capacity_nats);
    trace.covariance_ms += elapsed_ms(t0);
    out.rate_bps_hz = rate::nats_to_bps_hz(out.capacity_nats);
    return out;
}

InitStrategy parse_init_strategy(std::string_view name) {
    if (name == "identity") return InitStrategy::identity;
    if (name == "random") return InitStrategy::random_unitary;
    if (name == "diag") return InitStrategy::diag_ris;
    if (name == "low_complexity") return InitStrategy::low_complexity;
    if (name == "best") return InitStrategy::best;
    throw ContractViolation("unknown initialization strategy '" + std::string(name) + "'");
}

std::string_view to_string(InitStrategy s) {
    switch (s) {
        case InitStrategy::identity: return "identity";
        case InitStrategy::random_unitary: return "random";
        case InitStrategy::diag_ris: return "diag";
        case InitStrategy::low_complexity: return "low_complexity";
        case InitStrategy::best: return "best";
    }
    return "best";
}

ComplexMatrix random_unitary(Rng& rng, int m) {
    ComplexMatrix Z(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            Z(i, j) = rng.complex_normal();
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(Z);
    ComplexMatrix Q = qr.householderQ() * ComplexMatrix::Identity(m, m);
    const ComplexMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase of R's diagonal so Q is Haar distributed.
    for (int j = 0; j < m; ++j) {
        const double a = std::abs(R(j, j));
        if (a > 0.0) {
            Q.col(j) *= R(j, j) / a;
        }
    }
    return Q;
}

double capacity_for_theta(const ChannelSet& channels, const ComplexMatrix& theta, double noise_mw,
                          double total_power) {
    const ComplexMatrix H_eq = rate::equivalent_channel(channels.H, channels.F, channels.G, theta);
    return rate::capacity_nats(H_eq, rate::optimize_covariance(H_eq, total_power, noise_mw), noise_mw);
}

std::size_t best_candidate(const ChannelSet& channels, std::span<const ComplexMatrix> thetas, double noise_mw,
                           double total_power) {
    if (thetas.empty()) {
        throw ContractViolation("best_candidate: no candidates");
    }
    std::size_t best = 0;
    double best_cap = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        const double c = capacity_for_theta(channels, thetas[i], noise_mw, total_power);
        if (c > best_cap) {
            best_cap = c;
            best = i;
        }
    }
    return best;
}

namespace {

BdRis diag_factor(const RealVector& phases) {
    Eigen::VectorXcd half(phases.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) {
        half(k) = std::polar(1.0, 0.5 * phases(k));
    }
    return BdRis{half.asDiagonal().toDenseMatrix()};
}

}  // namespace

BdRis make_initialization(const ChannelSet& channels, double noise_mw, double total_power, InitStrategy strategy,
                          std::uint64_t seed, const OptimizerConfig& cfg, const InitHints& hints) {
    const int m = static_cast<int>(channels.F.cols());
    auto diag = [&] {
        if (hints.diag_phases) {
            return diag_factor(*hints.diag_phases);
        }
        return diag_factor(baselines::optimize_diag_ris(channels, noise_mw, total_power, cfg).ris.phases);
    };
    auto low = [&] {
        if (hints.low_complexity) {
            return *hints.low_complexity;
        }
        return baselines::low_complexity_bdris(channels, noise_mw, total_power).ris;
    };

    switch (strategy) {
        case InitStrategy::identity:
            return BdRis{ComplexMatrix::Identity(m, m)};
        case InitStrategy::random_unitary: {
            Rng rng(derive_seed(seed, 0x1417));
            return BdRis{random_unitary(rng, m)};
        }
        case InitStrategy::diag_ris:
            return diag();
        case InitStrategy::low_complexity:
            return low();
        case InitStrategy::best: {
            const BdRis candidates[] = {diag(), low()};
            const ComplexMatrix thetas[] = {candidates[0].theta(), candidates[1].theta()};
            return candidates[best_candidate(channels, thetas, noise_mw, total_power)];
        }
    }
    return BdRis{ComplexMatrix::Identity(m, m)};
}

CapacityResult maximize_capacity(const ChannelSet& channels, double noise_mw, double total_power,
                                 InitStrategy strategy, std::uint64_t seed, const OptimizerConfig& cfg) {
    const BdRis init = make_initialization(channels, noise_mw, total_power, strategy, seed, cfg);
    return maximize_capacity(channels, noise_mw, total_power, init, cfg);
}

}  // namespace bdris::opt
