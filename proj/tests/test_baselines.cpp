// SPDX-License-Identifier: Apache-2.0
#include "bdris/baselines.hpp"
#include "bdris/errors.hpp"
#include "test_support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

using namespace bdris;
using namespace bdris::baselines;
using Catch::Approx;
using testing_support::ginibre;
using testing_support::haar_unitary;

namespace {

ChannelSet random_link(std::mt19937_64& gen, int nr, int nt, int m) {
    ChannelSet c;
    c.H = ginibre(gen, nr, nt);
    c.G = ginibre(gen, nt, m);
    c.F = ginibre(gen, nr, m);
    return c;
}

double water_filled(const ChannelSet& c, const ComplexMatrix& theta, double noise, double P) {
    return opt::capacity_for_theta(c, theta, noise, P);
}

}  // namespace

TEST_CASE("diag RIS: scalar link aligns direct and cascaded paths", "[baselines][diag]") {
    std::mt19937_64 gen(51);
    for (int i = 0; i < 10; ++i) {
        const ChannelSet c = random_link(gen, 1, 1, 1);
        const double noise = 0.2;
        const double P = 1.5;
        const DiagResult r = optimize_diag_ris(c, noise, P, opt::OptimizerConfig{});
        const double amp = std::abs(c.H(0, 0)) + std::abs(c.F(0, 0)) * std::abs(c.G(0, 0));
        CHECK(r.capacity_nats == Approx(std::log1p(P * amp * amp / noise)).margin(1e-4));
    }
}

TEST_CASE("diag RIS: blocked RIS equals the direct link", "[baselines][diag]") {
    std::mt19937_64 gen(52);
    ChannelSet c = random_link(gen, 2, 2, 4);
    c.F.setZero();
    const DiagResult r = optimize_diag_ris(c, 0.5, 2.0, opt::OptimizerConfig{});
    CHECK(r.capacity_nats == Approx(no_ris_capacity(c, 0.5, 2.0)).epsilon(1e-12));
}

TEST_CASE("diag RIS: beats 10^4 random phase vectors, monotone, feasible", "[baselines][diag]") {
    std::mt19937_64 gen(53);
    const ChannelSet c = random_link(gen, 2, 2, 4);
    const double noise = 0.3;
    const double P = 1.0;
    const DiagResult r = optimize_diag_ris(c, noise, P, opt::OptimizerConfig{});
    for (std::size_t i = 1; i < r.capacity_trace.size(); ++i) {
        CHECK(r.capacity_trace[i] >= r.capacity_trace[i - 1] - 1e-9);
    }
    const ComplexMatrix th = r.ris.theta();
    CHECK(th == th.transpose());
    CHECK(matkit::unitarity_error(th) < 1e-12);

    Rng rng(54);
    double best_random = 0.0;
    for (int k = 0; k < 10000; ++k) {
        best_random = std::max(best_random, water_filled(c, random_diag(rng, 4).theta(), noise, P));
    }
    CHECK(r.capacity_nats >= best_random);
}

TEST_CASE("low complexity: zero direct link falls back to identity", "[baselines][lc]") {
    std::mt19937_64 gen(55);
    ChannelSet c = random_link(gen, 2, 2, 3);
    c.H.setZero();
    const LowComplexityResult r = low_complexity_bdris(c, 1.0, 1.0);
    CHECK(r.theta == ComplexMatrix::Identity(3, 3));
    CHECK(r.capacity_nats == Approx(water_filled(c, ComplexMatrix::Identity(3, 3), 1.0, 1.0)));
}

TEST_CASE("low complexity: projection is idempotent and exact on feasible input", "[baselines][lc]") {
    std::mt19937_64 gen(56);
    for (int i = 0; i < 20; ++i) {
        const int m = 1 + i % 8;
        const ComplexMatrix Q = haar_unitary(gen, m);
        const ComplexMatrix theta = Q * Q.transpose();
        CHECK((project_symmetric_unitary(theta).theta() - theta).norm() < 1e-8);

        const ComplexMatrix X = ginibre(gen, m, m);
        const ComplexMatrix once = project_symmetric_unitary(X).theta();
        const ComplexMatrix twice = project_symmetric_unitary(once).theta();
        CHECK((once - twice).norm() < 1e-8);
        CHECK(matkit::unitarity_error(once) < 1e-8);
        CHECK(once == once.transpose());
    }
}

TEST_CASE("low complexity: relaxed solution maximizes the linear term", "[baselines][lc]") {
    std::mt19937_64 gen(57);
    const ChannelSet c = random_link(gen, 2, 2, 5);
    const ComplexMatrix T = c.G.adjoint() * c.H.adjoint() * c.F;
    const matkit::Svd d = matkit::svd(T);
    const double optimum = (T * d.V * d.U.adjoint()).trace().real();
    CHECK(optimum == Approx(d.s.sum()));
    for (int k = 0; k < 1000; ++k) {
        CHECK((T * haar_unitary(gen, 5)).trace().real() <= optimum + 1e-12);
    }
}

TEST_CASE("low complexity sits between random phases and the full optimizer", "[baselines][lc]") {
    Scenario sc;
    sc.m = 8;
    const double noise = sc.noise_mw();
    const double P = sc.tx_power_mw;
    double lc_sum = 0.0;
    double random_sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const ChannelSet c = channel::build_channels(sc, seed);
        const LowComplexityResult lc = low_complexity_bdris(c, noise, P);
        CHECK(matkit::unitarity_error(lc.theta) < 1e-8);
        CHECK(lc.theta == lc.theta.transpose());
        const auto full = opt::maximize_capacity(c, noise, P, opt::InitStrategy::best, seed, opt::OptimizerConfig{});
        CHECK(lc.capacity_nats <= full.capacity_nats);
        Rng rng(derive_seed(seed, 99));
        lc_sum += lc.capacity_nats;
        random_sum += water_filled(c, random_diag(rng, sc.m).theta(), noise, P);
    }
    CHECK(lc_sum > random_sum);
}

TEST_CASE("random diagonal phases", "[baselines][random]") {
    Rng a(61), b(61);
    CHECK(random_diag(a, 5).phases == random_diag(b, 5).phases);
    CHECK(random_diag(a, 1).phases.size() == 1);
    CHECK_THROWS_AS(random_diag(a, 0), ContractViolation);

    Rng r(62);
    const DiagRis big = random_diag(r, 100000);
    CHECK(big.phases.mean() == Approx(std::numbers::pi).margin(0.02));
    CHECK(big.phases.minCoeff() >= 0.0);
    CHECK(big.phases.maxCoeff() < 2.0 * std::numbers::pi);
}

TEST_CASE("no-RIS capacity", "[baselines][noris]") {
    ChannelSet c;
    c.H = ComplexMatrix::Zero(2, 2);
    c.G = ComplexMatrix::Zero(2, 1);
    c.F = ComplexMatrix::Zero(2, 1);
    CHECK(no_ris_capacity(c, 1.0, 2.0) == 0.0);
    c.H = ComplexMatrix::Identity(2, 2);
    CHECK(no_ris_capacity(c, 1.0, 2.0) == Approx(2.0 * std::log(2.0)));

    std::mt19937_64 gen(63);
    ChannelSet d = random_link(gen, 3, 2, 4);
    d.F.setZero();
    const auto full = opt::maximize_capacity(d, 0.4, 1.0, opt::InitStrategy::identity, 1, opt::OptimizerConfig{});
    CHECK(no_ris_capacity(d, 0.4, 1.0) == Approx(full.capacity_nats).epsilon(1e-12));
}
