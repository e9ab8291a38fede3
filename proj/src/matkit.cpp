// SPDX-License-Identifier: Apache-2.0
#include "bdris/matkit.hpp"

#include "bdris/errors.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

namespace bdris::matkit {

namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kSymmetricTol = 1e-8;
constexpr double kClusterTol = 1e-8;
// Past this size the divide-and-conquer SVD is markedly faster than one-sided Jacobi.
constexpr Eigen::Index kJacobiLimit = 48;

template <class Solver>
Svd unpack(const Solver& solver, const ComplexMatrix& A) {
    if (solver.info() != Eigen::Success) {
        throw DecompositionFailure("svd did not converge", A.rows(), A.cols());
    }
    return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

Svd svd_with(const ComplexMatrix& A, unsigned int options) {
    if (!all_finite(A)) {
        throw ContractViolation("svd: input has non-finite entries");
    }
    if (A.size() == 0) {
        throw ContractViolation("svd: empty matrix");
    }
    if (std::max(A.rows(), A.cols()) <= kJacobiLimit) {
        Eigen::JacobiSVD<ComplexMatrix> solver(A, options);
        return unpack(solver, A);
    }
    Eigen::BDCSVD<ComplexMatrix> solver(A, options);
    return unpack(solver, A);
}

// Symmetric square root of a complex symmetric unitary W. Its real and
// imaginary parts are commuting real symmetric matrices, so a real orthogonal
// O diagonalizes W: W = O diag(e^{i phi}) O^T. O is taken from a generic real
// combination X + cY; a few values of c guard against accidental eigenvalue
// collisions between distinct phases.
ComplexMatrix symmetric_unitary_sqrt(const ComplexMatrix& W) {
    const Eigen::Index k = W.rows();
    const Eigen::MatrixXd X = W.real();
    const Eigen::MatrixXd Y = W.imag();
    static constexpr std::array<double, 4> kMix = {0.5772156649015329, 1.6180339887498949,
                                                   -2.718281828459045, 0.3183098861837907};

    double best_off = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd best_O;
    Eigen::VectorXcd best_d;
    for (double c : kMix) {
        Eigen::MatrixXd M = X + c * Y;
        M = (0.5 * (M + M.transpose())).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
        if (es.info() != Eigen::Success) {
            continue;
        }
        const Eigen::MatrixXd& O = es.eigenvectors();
        ComplexMatrix D = O.transpose().cast<Complex>() * W * O.cast<Complex>();
        const Eigen::VectorXcd d = D.diagonal();
        D.diagonal().setZero();
        const double off = D.norm();
        if (off < best_off) {
            best_off = off;
            best_O = O;
            best_d = d;
        }
        if (off <= 1e-12 * std::sqrt(static_cast<double>(k))) {
            break;
        }
    }
    if (!(best_off <= 1e-6)) {
        throw DecompositionFailure("takagi: cluster phase matrix could not be diagonalized", k, k);
    }
    Eigen::VectorXcd half(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        half(j) = std::polar(1.0, 0.5 * std::arg(best_d(j)));
    }
    const ComplexMatrix Oc = best_O.cast<Complex>();
    return Oc * half.asDiagonal() * Oc.transpose();
}

}  // namespace

bool all_finite(const ComplexMatrix& A) {
    return A.allFinite();
}

double unitarity_error(const ComplexMatrix& Q) {
    return (Q.adjoint() * Q - ComplexMatrix::Identity(Q.cols(), Q.cols())).norm();
}

double hermitian_error(const ComplexMatrix& A) {
    return (A - A.adjoint()).norm();
}

double skew_error(const ComplexMatrix& S) {
    return (S + S.adjoint()).norm();
}

double symmetry_error(const ComplexMatrix& A) {
    return (A - A.transpose()).norm();
}

Svd svd(const ComplexMatrix& A) {
    return svd_with(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

Svd svd_full(const ComplexMatrix& A) {
    return svd_with(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

Eigh eigh(const ComplexMatrix& A) {
    if (A.rows() != A.cols()) {
        throw ContractViolation("eigh: matrix is not square");
    }
    if (!all_finite(A)) {
        throw ContractViolation("eigh: input has non-finite entries");
    }
    if (hermitian_error(A) > kHermitianTol * A.norm()) {
        throw ContractViolation("eigh: matrix is not Hermitian");
    }
    const ComplexMatrix Ah = 0.5 * (A + A.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(Ah);
    if (es.info() != Eigen::Success) {
        throw DecompositionFailure("eigh did not converge", A.rows(), A.cols());
    }
    return {es.eigenvectors(), es.eigenvalues()};
}

SkewExponential::SkewExponential(const ComplexMatrix& S) {
    if (S.rows() != S.cols()) {
        throw ContractViolation("expm_skew: matrix is not square");
    }
    const double scale = S.norm();
    if (scale == 0.0) {
        zero_ = true;
        W_ = ComplexMatrix::Identity(S.rows(), S.cols());
        return;
    }
    if (skew_error(S) > kHermitianTol * scale) {
        throw ContractViolation("expm_skew: matrix is not skew-Hermitian");
    }
    // -iS is Hermitian; S = W diag(i omega) W^H.
    const ComplexMatrix H = Complex(0.0, -1.0) * S;
    Eigh e = eigh(0.5 * (H + H.adjoint()));
    W_ = std::move(e.W);
    omega_ = std::move(e.lambda);
}

ComplexMatrix SkewExponential::operator()(double mu) const {
    if (zero_ || mu == 0.0) {
        return ComplexMatrix::Identity(W_.rows(), W_.cols());
    }
    Eigen::VectorXcd phase(omega_.size());
    for (Eigen::Index j = 0; j < omega_.size(); ++j) {
        phase(j) = std::polar(1.0, mu * omega_(j));
    }
    return W_ * phase.asDiagonal() * W_.adjoint();
}

ComplexMatrix expm_skew(const ComplexMatrix& S) {
    return SkewExponential(S)(1.0);
}

Takagi takagi(const ComplexMatrix& A) {
    if (A.rows() != A.cols()) {
        throw ContractViolation("takagi: matrix is not square");
    }
    const Eigen::Index n = A.rows();
    const double scale = A.norm();
    if (symmetry_error(A) > kSymmetricTol * scale) {
        throw ContractViolation("takagi: matrix is not symmetric");
    }
    if (scale == 0.0) {
        return {ComplexMatrix::Identity(n, n), RealVector::Zero(n)};
    }

    const ComplexMatrix As = 0.5 * (A + A.transpose());
    const Svd d = svd_full(As);
    const double tol = kClusterTol * d.s(0);

    ComplexMatrix Q(n, n);
    Eigen::Index begin = 0;
    while (begin < n) {
        Eigen::Index end = begin + 1;
        while (end < n && d.s(end - 1) - d.s(end) <= tol) {
            ++end;
        }
        const Eigen::Index k = end - begin;
        const auto Uc = d.U.middleCols(begin, k);
        if (d.s(begin) <= tol) {
            // Null space: any unitary completion works.
            Q.middleCols(begin, k) = Uc;
        } else {
            ComplexMatrix Wc = Uc.adjoint() * d.V.middleCols(begin, k).conjugate();
            Wc = (0.5 * (Wc + Wc.transpose())).eval();
            Q.middleCols(begin, k) = Uc * symmetric_unitary_sqrt(Wc);
        }
        begin = end;
    }
    return {Q, d.s};
}

ComplexMatrix nearest_unitary(const ComplexMatrix& A) {
    if (A.rows() != A.cols()) {
        throw ContractViolation("nearest_unitary: matrix is not square");
    }
    const Svd d = svd(A);
    const double smax = d.s(0);
    const double smin = d.s(d.s.size() - 1);
    if (smax == 0.0 || smin <= static_cast<double>(A.rows()) * std::numeric_limits<double>::epsilon() * smax) {
        throw DecompositionFailure("nearest_unitary: matrix is rank deficient", A.rows(), A.cols());
    }
    return d.U * d.V.adjoint();
}

ComplexMatrix sqrt_psd(const ComplexMatrix& A) {
    const Eigh e = eigh(A);
    const RealVector root = e.lambda.cwiseMax(0.0).cwiseSqrt();
    return e.W * root.cast<Complex>().asDiagonal() * e.W.adjoint();
}

}  // namespace bdris::matkit
