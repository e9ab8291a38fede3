// SPDX-License-Identifier: Apache-2.0
//
// Dense complex linear algebra used throughout the optimizer: thin wrappers
// around Eigen's SVD and Hermitian eigensolver that enforce input contracts,
// plus the unitary-structured matrix functions (skew-Hermitian exponential,
// Takagi factorization, polar projection) that Eigen does not provide.
#pragma once

#include <Eigen/Dense>

#include <complex>

namespace bdris {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

namespace matkit {

struct Svd {
    ComplexMatrix U;  // rows x k, orthonormal columns
    RealVector s;     // k = min(rows, cols), descending
    ComplexMatrix V;  // cols x k, orthonormal columns
};

struct Eigh {
    ComplexMatrix W;  // unitary
    RealVector lambda;  // ascending
};

struct Takagi {
    ComplexMatrix Q;  // unitary
    RealVector sigma; // descending, A = Q diag(sigma) Q^T
};

/// Thin SVD, A = U diag(s) V^H.
Svd svd(const ComplexMatrix& A);

/// Full SVD (square U and V). Needed where the null-space basis matters.
Svd svd_full(const ComplexMatrix& A);

/// Eigendecomposition of a Hermitian matrix. Throws ContractViolation when
/// ||A - A^H||_F exceeds 1e-10 ||A||_F.
Eigh eigh(const ComplexMatrix& A);

/// exp(S) for skew-Hermitian S, evaluated spectrally so the result is unitary
/// to rounding. exp(0) is returned as the exact identity.
ComplexMatrix expm_skew(const ComplexMatrix& S);

/// Caches the spectral decomposition of a skew-Hermitian S so exp(mu * S) can
/// be formed for many step sizes at the cost of one eigendecomposition.
class SkewExponential {
public:
    explicit SkewExponential(const ComplexMatrix& S);

    ComplexMatrix operator()(double mu) const;

private:
    ComplexMatrix W_;
    RealVector omega_;  // S = W diag(i * omega) W^H
    bool zero_ = false;
};

/// Autonne-Takagi factorization of a complex symmetric matrix,
/// A = Q diag(sigma) Q^T. Repeated singular values are grouped into clusters
/// (relative tolerance 1e-8) and treated blockwise.
Takagi takagi(const ComplexMatrix& A);

/// Frobenius-nearest unitary matrix (the polar factor U V^H).
ComplexMatrix nearest_unitary(const ComplexMatrix& A);

/// Hermitian PSD square root, negative eigenvalues from rounding clamped to 0.
ComplexMatrix sqrt_psd(const ComplexMatrix& A);

// Residual helpers shared by tests and the self-check.
double unitarity_error(const ComplexMatrix& Q);  // ||Q^H Q - I||_F
double hermitian_error(const ComplexMatrix& A);  // ||A - A^H||_F
double skew_error(const ComplexMatrix& S);       // ||S + S^H||_F
double symmetry_error(const ComplexMatrix& A);   // ||A - A^T||_F
bool all_finite(const ComplexMatrix& A);

}  // namespace matkit
}  // namespace bdris
