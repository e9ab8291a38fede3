// SPDX-License-Identifier: Apache-2.0
#include "bdris/baselines.hpp"

#include "bdris/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace bdris::baselines {

namespace {

constexpr int kPhaseGrid = 64;
constexpr double kGoldenTol = 1e-10;
constexpr int kGoldenMaxIter = 80;

// log det(I + M^H M / noise) through a Cholesky factor of the d x d Gram
// matrix; used inside the per-element phase search where it is evaluated
// thousands of times per sweep.
double gram_log_det(const ComplexMatrix& M, double noise_mw) {
    ComplexMatrix gram = M.adjoint() * M / noise_mw;
    gram.diagonal().array() += 1.0;
    Eigen::LLT<ComplexMatrix> llt(gram);
    if (llt.info() != Eigen::Success) {
        return rate::log_det_capacity(M, noise_mw);
    }
    return 2.0 * llt.matrixLLT().diagonal().real().array().log().sum();
}

template <class Objective>
double golden_section_max(Objective&& f, double lo, double hi) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int it = 0; it < kGoldenMaxIter && b - a > kGoldenTol; ++it) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc >= fd ? c : d;
}

double wrap_phase(double phi) {
    const double two_pi = 2.0 * std::numbers::pi;
    phi = std::fmod(phi, two_pi);
    return phi < 0.0 ? phi + two_pi : phi;
}

}  // namespace

ComplexMatrix DiagRis::theta() const {
    Eigen::VectorXcd d(phases.size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) {
        d(k) = std::polar(1.0, phases(k));
    }
    return d.asDiagonal().toDenseMatrix();
}

DiagResult optimize_diag_ris(const ChannelSet& channels, double noise_mw, double total_power,
                             const opt::OptimizerConfig& cfg) {
    cfg.validate();
    const ComplexMatrix& H = channels.H;
    const ComplexMatrix& G = channels.G;
    const ComplexMatrix& F = channels.F;
    const Eigen::Index m = F.cols();
    const double grid_step = 2.0 * std::numbers::pi / kPhaseGrid;

    DiagResult out;
    out.ris.phases = RealVector::Zero(m);
    double previous = -std::numeric_limits<double>::infinity();

    for (int outer = 0; outer < cfg.max_outer; ++outer) {
        const ComplexMatrix H_eq = rate::equivalent_channel(H, F, G, out.ris.theta());
        out.cov = rate::optimize_covariance(H_eq, total_power, noise_mw);
        out.capacity_trace.push_back(rate::capacity_nats(H_eq, out.cov, noise_mw));

        // With the covariance folded in, element k contributes
        // e^{i phi_k} f_k r_k to the shaped channel M (r_k = row k of G^H V P^{1/2}).
        const ComplexMatrix Hs = out.cov.shaped(H);
        const ComplexMatrix Gs = out.cov.shaped(G.adjoint());
        double current = 0.0;
        for (int sweep = 0; sweep < cfg.max_mm; ++sweep) {
            ComplexMatrix M = Hs;
            for (Eigen::Index k = 0; k < m; ++k) {
                M += std::polar(1.0, out.ris.phases(k)) * F.col(k) * Gs.row(k);
            }
            current = gram_log_det(M, noise_mw);
            const double sweep_start = current;

            for (Eigen::Index k = 0; k < m; ++k) {
                const ComplexMatrix rank_one = F.col(k) * Gs.row(k);
                const ComplexMatrix rest = M - std::polar(1.0, out.ris.phases(k)) * rank_one;
                auto objective = [&](double phi) {
                    return gram_log_det(rest + std::polar(1.0, phi) * rank_one, noise_mw);
                };

                double best_phi = 0.0;
                double best_val = -std::numeric_limits<double>::infinity();
                for (int j = 0; j < kPhaseGrid; ++j) {
                    const double phi = grid_step * j;
                    const double v = objective(phi);
                    if (v > best_val) {
                        best_val = v;
                        best_phi = phi;
                    }
                }
                const double refined = golden_section_max(objective, best_phi - grid_step, best_phi + grid_step);
                const double refined_val = objective(refined);
                if (refined_val > best_val) {
                    best_val = refined_val;
                    best_phi = refined;
                }
                if (best_val > current) {
                    out.ris.phases(k) = wrap_phase(best_phi);
                    M = rest + std::polar(1.0, out.ris.phases(k)) * rank_one;
                    current = best_val;
                    out.capacity_trace.push_back(current);
                }
            }
            if (!(current - sweep_start > cfg.eps_capacity * std::max(std::abs(sweep_start), 1e-300))) {
                break;
            }
        }

        out.outer_iterations = outer + 1;
        const bool keep_going = outer == 0 || current - previous > cfg.eps_capacity * std::abs(previous);
        previous = current;
        if (!keep_going) {
            break;
        }
    }

    const ComplexMatrix H_eq = rate::equivalent_channel(H, F, G, out.ris.theta());
    out.cov = rate::optimize_covariance(H_eq, total_power, noise_mw);
    out.capacity_nats = rate::capacity_nats(H_eq, out.cov, noise_mw);
    out.capacity_trace.push_back(out.capacity_nats);
    return out;
}

BdRis project_symmetric_unitary(const ComplexMatrix& X) {
    if (X.rows() != X.cols()) {
        throw ContractViolation("project_symmetric_unitary: matrix is not square");
    }
    const ComplexMatrix sym = 0.5 * (X + X.transpose());
    return BdRis{matkit::takagi(sym).Q};
}

LowComplexityResult low_complexity_bdris(const ChannelSet& channels, double noise_mw, double total_power) {
    const ComplexMatrix& H = channels.H;
    const ComplexMatrix& G = channels.G;
    const ComplexMatrix& F = channels.F;
    const Eigen::Index m = F.cols();

    LowComplexityResult out;
    const ComplexMatrix T = G.adjoint() * H.adjoint() * F;
    const double scale = G.norm() * H.norm() * F.norm();
    if (scale == 0.0 || T.norm() <= 1e-14 * scale) {
        out.ris = BdRis{ComplexMatrix::Identity(m, m)};
    } else {
        const matkit::Svd d = matkit::svd(T);
        const ComplexMatrix relaxed = d.V * d.U.adjoint();
        out.ris = project_symmetric_unitary(relaxed);
    }
    out.theta = out.ris.theta();
    const ComplexMatrix H_eq = rate::equivalent_channel(H, F, G, out.theta);
    out.cov = rate::optimize_covariance(H_eq, total_power, noise_mw);
    out.capacity_nats = rate::capacity_nats(H_eq, out.cov, noise_mw);
    return out;
}

DiagRis random_diag(Rng& rng, int m) {
    if (m < 1) {
        throw ContractViolation("random_diag: m must be >= 1");
    }
    DiagRis out{RealVector(m)};
    for (int k = 0; k < m; ++k) {
        out.phases(k) = 2.0 * std::numbers::pi * rng.uniform();
    }
    return out;
}

double no_ris_capacity(const ChannelSet& channels, double noise_mw, double total_power) {
    const TxCovariance cov = rate::optimize_covariance(channels.H, total_power, noise_mw);
    return rate::capacity_nats(channels.H, cov, noise_mw);
}

}  // namespace bdris::baselines
