// SPDX-License-Identifier: Apache-2.0
#include "bdris/rate.hpp"

#include "bdris/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace bdris {

ComplexMatrix TxCovariance::matrix() const {
    return V * p.cast<Complex>().asDiagonal() * V.adjoint();
}

ComplexMatrix TxCovariance::shaped(const ComplexMatrix& H) const {
    return H * V * p.cwiseMax(0.0).cwiseSqrt().cast<Complex>().asDiagonal();
}

ComplexMatrix BdRis::theta() const {
    ComplexMatrix t = Q * Q.transpose();
    for (Eigen::Index j = 0; j < t.cols(); ++j) {
        for (Eigen::Index i = j + 1; i < t.rows(); ++i) {
            t(i, j) = t(j, i);
        }
    }
    return t;
}

BdRis BdRis::from_theta(const ComplexMatrix& theta) {
    return BdRis{matkit::takagi(theta).Q};
}

namespace rate {

ComplexMatrix equivalent_channel(const ComplexMatrix& H, const ComplexMatrix& F, const ComplexMatrix& G,
                                 const ComplexMatrix& theta) {
    if (F.rows() != H.rows() || G.rows() != H.cols() || theta.rows() != F.cols() ||
        theta.cols() != G.cols()) {
        throw ContractViolation("equivalent_channel: dimension mismatch");
    }
    return H + F * theta * G.adjoint();
}

double log_det_capacity(const ComplexMatrix& M, double noise_mw) {
    if (!(noise_mw > 0.0)) {
        throw ContractViolation("capacity: noise power must be positive");
    }
    if (M.size() == 0 || M.norm() == 0.0) {
        return 0.0;
    }
    const RealVector s = matkit::svd(M).s;
    double c = 0.0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        c += std::log1p(s(i) * s(i) / noise_mw);
    }
    if (!std::isfinite(c)) {
        throw NumericFailure("capacity evaluated to a non-finite value");
    }
    return c;
}

double capacity_nats(const ComplexMatrix& H_eq, const TxCovariance& cov, double noise_mw) {
    if (cov.V.rows() != H_eq.cols()) {
        throw ContractViolation("capacity_nats: covariance does not match channel width");
    }
    return log_det_capacity(cov.shaped(H_eq), noise_mw);
}

double nats_to_bps_hz(double nats) {
    return nats / std::numbers::ln2;
}

RealVector water_fill(const RealVector& gains, double total_power, double noise_mw) {
    if (gains.size() == 0) {
        throw ContractViolation("water_fill: empty gain vector");
    }
    if (!(total_power > 0.0) || !(noise_mw > 0.0)) {
        throw ContractViolation("water_fill: power and noise must be positive");
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(gains.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return gains(a) > gains(b); });
    if (!(gains(order.front()) > 0.0)) {
        throw ContractViolation("water_fill: no positive gain");
    }

    // Largest k such that the k strongest modes all sit below the water level.
    std::size_t positive = 0;
    while (positive < order.size() && gains(order[positive]) > 0.0) {
        ++positive;
    }
    std::vector<double> floor(positive);
    for (std::size_t i = 0; i < positive; ++i) {
        floor[i] = noise_mw / gains(order[i]);
    }
    double level = 0.0;
    std::size_t active = 0;
    double prefix = 0.0;
    for (std::size_t k = 1; k <= positive; ++k) {
        prefix += floor[k - 1];
        const double mu = (total_power + prefix) / static_cast<double>(k);
        if (mu > floor[k - 1]) {
            level = mu;
            active = k;
        } else {
            break;
        }
    }

    RealVector p = RealVector::Zero(gains.size());
    for (std::size_t i = 0; i < active; ++i) {
        p(order[i]) = level - floor[i];
    }
    return p;
}

TxCovariance uniform_covariance(int n_t, int d, double total_power) {
    return {ComplexMatrix::Identity(n_t, d), RealVector::Constant(d, total_power / d)};
}

TxCovariance optimize_covariance(const ComplexMatrix& H_eq, double total_power, double noise_mw) {
    const int n_t = static_cast<int>(H_eq.cols());
    const int d = static_cast<int>(std::min(H_eq.rows(), H_eq.cols()));
    if (H_eq.norm() == 0.0) {
        return uniform_covariance(n_t, d, total_power);
    }
    const matkit::Svd dec = matkit::svd(H_eq);
    const RealVector gains = dec.s.cwiseAbs2();
    return {dec.V, water_fill(gains, total_power, noise_mw)};
}

std::size_t active_streams(const RealVector& p, double total_power) {
    const double threshold = 1e-6 * total_power;
    return static_cast<std::size_t>((p.array() > threshold).count());
}

}  // namespace rate
}  // namespace bdris
