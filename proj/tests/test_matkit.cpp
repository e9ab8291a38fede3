// SPDX-License-Identifier: Apache-2.0
#include "bdris/errors.hpp"
#include "bdris/matkit.hpp"
#include "test_support.hpp"

#include <catch_amalgamated.hpp>

#include <numbers>

using namespace bdris;
using namespace bdris::matkit;
using Catch::Approx;
using testing_support::ginibre;
using testing_support::haar_unitary;

namespace {

ComplexMatrix reconstruct(const Svd& d) {
    return d.U * d.s.cast<Complex>().asDiagonal() * d.V.adjoint();
}

}  // namespace

TEST_CASE("svd: identity and rank-one diagonal", "[matkit][svd]") {
    const Svd a = svd(ComplexMatrix::Identity(2, 2));
    CHECK(a.s(0) == Approx(1.0));
    CHECK(a.s(1) == Approx(1.0));

    ComplexMatrix D = ComplexMatrix::Zero(2, 2);
    D(0, 0) = 3.0;
    const Svd b = svd(D);
    CHECK(b.s(0) == Approx(3.0));
    CHECK(std::abs(b.s(1)) < 1e-15);
    CHECK((reconstruct(b) - D).norm() < 1e-14);
    CHECK(std::abs(b.U(0, 0)) == Approx(1.0));
    CHECK(std::abs(b.V(0, 0)) == Approx(1.0));
}

TEST_CASE("svd: random round trip, orthonormal factors, sorted values", "[matkit][svd]") {
    std::mt19937_64 gen(11);
    for (auto [r, c] : {std::pair{4, 3}, std::pair{3, 5}, std::pair{60, 50}}) {
        const ComplexMatrix A = ginibre(gen, r, c);
        const Svd d = svd(A);
        CHECK((reconstruct(d) - A).norm() <= 1e-12 * A.norm());
        CHECK(unitarity_error(d.U) < 1e-12);
        CHECK(unitarity_error(d.V) < 1e-12);
        for (Eigen::Index k = 1; k < d.s.size(); ++k) {
            CHECK(d.s(k) <= d.s(k - 1));
        }
    }
}

TEST_CASE("svd: non-finite input is rejected", "[matkit][svd]") {
    ComplexMatrix A = ComplexMatrix::Identity(2, 2);
    A(1, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(svd(A), ContractViolation);
}

TEST_CASE("eigh: analytic spectra", "[matkit][eigh]") {
    const Eigh a = eigh(ComplexMatrix::Identity(3, 3));
    CHECK((a.lambda - RealVector::Ones(3)).norm() < 1e-15);

    ComplexMatrix X(2, 2);
    X << 0.0, 1.0, 1.0, 0.0;
    const Eigh b = eigh(X);
    CHECK(b.lambda(0) == Approx(-1.0));
    CHECK(b.lambda(1) == Approx(1.0));
}

TEST_CASE("eigh: random Hermitian round trip", "[matkit][eigh]") {
    std::mt19937_64 gen(12);
    const ComplexMatrix A = testing_support::random_hermitian(gen, 5);
    const Eigh e = eigh(A);
    const ComplexMatrix R = e.W * e.lambda.cast<Complex>().asDiagonal() * e.W.adjoint();
    CHECK((R - A).norm() <= 1e-12 * A.norm());
    CHECK(unitarity_error(e.W) < 1e-12);
    for (Eigen::Index k = 1; k < e.lambda.size(); ++k) {
        CHECK(e.lambda(k) >= e.lambda(k - 1));
    }
}

TEST_CASE("eigh: non-Hermitian input is a contract violation", "[matkit][eigh]") {
    ComplexMatrix A(2, 2);
    A << 1.0, 2.0, 0.0, 1.0;
    CHECK_THROWS_AS(eigh(A), ContractViolation);
}

TEST_CASE("expm_skew: analytic cases", "[matkit][expm]") {
    CHECK(expm_skew(ComplexMatrix::Zero(3, 3)) == ComplexMatrix::Identity(3, 3));

    const double t1 = 0.3;
    const double t2 = -1.7;
    ComplexMatrix S = ComplexMatrix::Zero(2, 2);
    S(0, 0) = Complex(0.0, t1);
    S(1, 1) = Complex(0.0, t2);
    const ComplexMatrix E = expm_skew(S);
    CHECK(std::abs(E(0, 0) - std::polar(1.0, t1)) < 1e-14);
    CHECK(std::abs(E(1, 1) - std::polar(1.0, t2)) < 1e-14);
    CHECK(std::abs(E(0, 1)) < 1e-14);

    const double th = std::numbers::pi / 2;
    ComplexMatrix R(2, 2);
    R << 0.0, -th, th, 0.0;
    ComplexMatrix expected(2, 2);
    expected << 0.0, -1.0, 1.0, 0.0;
    CHECK((expm_skew(R) - expected).norm() < 1e-14);
}

TEST_CASE("expm_skew: exp(S) exp(-S) = I up to m = 100", "[matkit][expm]") {
    std::mt19937_64 gen(13);
    for (int m : {1, 5, 30, 100}) {
        const ComplexMatrix S = testing_support::random_skew(gen, m);
        const ComplexMatrix E = expm_skew(S);
        CHECK((E * expm_skew(-S) - ComplexMatrix::Identity(m, m)).norm() < 1e-10);
        CHECK(unitarity_error(E) < 1e-12 * std::max(1.0, std::sqrt(double(m))));
    }
}

TEST_CASE("expm_skew: agrees with a Taylor series on a small-norm input", "[matkit][expm]") {
    std::mt19937_64 gen(14);
    const ComplexMatrix S = 0.3 * testing_support::random_skew(gen, 4);
    ComplexMatrix term = ComplexMatrix::Identity(4, 4);
    ComplexMatrix sum = term;
    for (int k = 1; k < 40; ++k) {
        term = term * S / double(k);
        sum += term;
    }
    CHECK((expm_skew(S) - sum).norm() < 1e-13);
    const SkewExponential cached(S);
    CHECK((cached(2.0) - expm_skew(2.0 * S)).norm() < 1e-12);
}

TEST_CASE("expm_skew: non-skew input is rejected", "[matkit][expm]") {
    CHECK_THROWS_AS(expm_skew(ComplexMatrix::Identity(2, 2)), ContractViolation);
}

TEST_CASE("takagi: identity and diagonal phases", "[matkit][takagi]") {
    const Takagi a = takagi(ComplexMatrix::Identity(4, 4));
    CHECK((a.Q * a.Q.transpose() - ComplexMatrix::Identity(4, 4)).norm() < 1e-12);
    CHECK(unitarity_error(a.Q) < 1e-12);

    Eigen::VectorXcd d(3);
    d << std::polar(1.0, 0.4), std::polar(1.0, -2.9), std::polar(1.0, 3.1);
    const ComplexMatrix D = d.asDiagonal();
    const Takagi b = takagi(D);
    CHECK((b.Q * b.Q.transpose() - D).norm() < 1e-12);
}

TEST_CASE("takagi: symmetric unitary round trip, 100 instances", "[matkit][takagi]") {
    std::mt19937_64 gen(15);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const int m = 1 + i % 12;
        const ComplexMatrix Q0 = haar_unitary(gen, m);
        const ComplexMatrix A = Q0 * Q0.transpose();
        const Takagi t = takagi(A);
        worst = std::max(worst, (t.Q * t.Q.transpose() - A).norm() / A.norm());
        CHECK(unitarity_error(t.Q) < 1e-10);
        CHECK((t.sigma - RealVector::Ones(m)).norm() < 1e-10);
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("takagi: general symmetric, distinct and repeated singular values", "[matkit][takagi]") {
    std::mt19937_64 gen(16);
    for (int i = 0; i < 100; ++i) {
        const int m = 2 + i % 7;
        ComplexMatrix A;
        if (i % 2 == 0) {
            const ComplexMatrix X = ginibre(gen, m, m);
            A = X + X.transpose();
        } else {
            // Singular values {2, 2, ..., 0.5, 0.5, ...}: clusters of size > 1.
            RealVector s(m);
            for (int k = 0; k < m; ++k) {
                s(k) = k < (m + 1) / 2 ? 2.0 : 0.5;
            }
            const ComplexMatrix U = haar_unitary(gen, m);
            A = U * s.cast<Complex>().asDiagonal() * U.transpose();
        }
        const Takagi t = takagi(A);
        const ComplexMatrix R = t.Q * t.sigma.cast<Complex>().asDiagonal() * t.Q.transpose();
        CHECK((R - A).norm() <= 1e-8 * A.norm());
        CHECK(unitarity_error(t.Q) < 1e-10);
    }
}

TEST_CASE("takagi: rank-deficient symmetric input", "[matkit][takagi]") {
    std::mt19937_64 gen(17);
    const ComplexMatrix v = ginibre(gen, 5, 2);
    const ComplexMatrix A = v * v.transpose();
    const Takagi t = takagi(A);
    const ComplexMatrix R = t.Q * t.sigma.cast<Complex>().asDiagonal() * t.Q.transpose();
    CHECK((R - A).norm() <= 1e-8 * A.norm());
    CHECK(unitarity_error(t.Q) < 1e-10);
}

TEST_CASE("takagi: asymmetric input is rejected", "[matkit][takagi]") {
    ComplexMatrix A(2, 2);
    A << 1.0, 1.0, 0.0, 1.0;
    CHECK_THROWS_AS(takagi(A), ContractViolation);
}

TEST_CASE("nearest_unitary: fixed points, scaling, optimality", "[matkit][polar]") {
    std::mt19937_64 gen(18);
    const ComplexMatrix U = haar_unitary(gen, 4);
    CHECK((nearest_unitary(U) - U).norm() < 1e-12);
    CHECK((nearest_unitary(2.0 * ComplexMatrix::Identity(3, 3)) - ComplexMatrix::Identity(3, 3)).norm() < 1e-14);

    const ComplexMatrix A = ginibre(gen, 4, 4);
    const ComplexMatrix P = nearest_unitary(A);
    CHECK(unitarity_error(P) < 1e-12);
    CHECK((nearest_unitary(P) - P).norm() < 1e-12);
    const double best = (A - P).norm();
    for (int k = 0; k < 100; ++k) {
        CHECK(best <= (A - haar_unitary(gen, 4)).norm());
    }
}

TEST_CASE("nearest_unitary: rank-deficient input fails", "[matkit][polar]") {
    ComplexMatrix A = ComplexMatrix::Zero(2, 2);
    A(0, 0) = 1.0;
    CHECK_THROWS_AS(nearest_unitary(A), DecompositionFailure);
}
