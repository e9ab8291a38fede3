// SPDX-License-Identifier: Apache-2.0
#include "bdris/self_check.hpp"

#include "bdris/bdris_opt.hpp"
#include "bdris/errors.hpp"
#include "bdris/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace bdris::check {

namespace {

constexpr double kGradTol = 1e-5;
constexpr double kBoundTol = 1e-8;
constexpr double kUnitaryTol = 1e-8;
constexpr double kTakagiTol = 1e-8;
constexpr int kNt = 2;
constexpr int kNr = 2;

ComplexMatrix ginibre(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    ComplexMatrix out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            out(i, j) = rng.complex_normal();
        }
    }
    return out;
}

struct Instance {
    ComplexMatrix Hbar, F, Gbar;
    ComplexMatrix theta_t;
    opt::MinorizerState state;
    double noise = 1.0;
};

Instance random_instance(Rng& rng, int m) {
    Instance in;
    in.Hbar = ginibre(rng, kNr, kNt);
    in.F = ginibre(rng, kNr, m);
    in.Gbar = ginibre(rng, kNt, m);
    in.noise = 0.5 + rng.uniform();
    const ComplexMatrix Qt = opt::random_unitary(rng, m);
    in.theta_t = BdRis{Qt}.theta();
    in.state = opt::build_minorizer(in.Hbar, in.F, in.Gbar, in.theta_t, in.noise);
    return in;
}

double capacity_at(const Instance& in, const ComplexMatrix& theta) {
    return rate::log_det_capacity(in.Hbar + in.F * theta * in.Gbar.adjoint(), in.noise);
}

void record(CheckResult& r, double err) {
    ++r.cases;
    r.max_error = std::max(r.max_error, err);
    if (!(err <= r.tolerance)) {
        ++r.failures;
    }
}

int size_for(const GradcheckOptions& o, int i) {
    return o.sizes[static_cast<std::size_t>(i) % o.sizes.size()];
}

CheckResult gradient_check(const GradcheckOptions& o) {
    CheckResult r{"gradient_fd", 0, 0, 0.0, kGradTol};
    Rng rng(derive_seed(o.seed, 1));
    const double h = o.fd_step;
    for (int i = 0; i < o.instances; ++i) {
        const int m = size_for(o, i);
        const Instance in = random_instance(rng, m);
        const ComplexMatrix Q = opt::random_unitary(rng, m);
        const ComplexMatrix dQ = ginibre(rng, m, m);
        ComplexMatrix grad = opt::surrogate_gradient(in.state, in.F, in.Gbar, Q);
        if (o.flip_gradient_sign) {
            grad = -grad;
        }
        const auto J = [&](const ComplexMatrix& X) {
            return opt::surrogate_at(in.state, in.F, in.Gbar, X * X.transpose());
        };
        const double fd = (J(Q + h * dQ) - J(Q - h * dQ)) / (2.0 * h);
        const double analytic = 2.0 * (grad.adjoint() * dQ).trace().real();
        const double scale = std::max({std::abs(fd), std::abs(analytic), 1e-12});
        record(r, std::abs(fd - analytic) / scale);
    }
    return r;
}

void bound_checks(const GradcheckOptions& o, CheckResult& tangency, CheckResult& lower) {
    Rng rng(derive_seed(o.seed, 2));
    for (int i = 0; i < o.instances; ++i) {
        const int m = size_for(o, i);
        const Instance in = random_instance(rng, m);
        const double at_t = in.state.constant + opt::surrogate_at(in.state, in.F, in.Gbar, in.theta_t);
        record(tangency, std::abs(at_t - capacity_at(in, in.theta_t)));
        for (int k = 0; k < o.lower_bound_samples; ++k) {
            const ComplexMatrix theta = BdRis{opt::random_unitary(rng, m)}.theta();
            const double bound = in.state.constant + opt::surrogate_at(in.state, in.F, in.Gbar, theta);
            record(lower, std::max(0.0, bound - capacity_at(in, theta)));
        }
    }
}

CheckResult unitarity_check(const GradcheckOptions& o) {
    CheckResult r{"geodesic_unitarity", 0, 0, 0.0, kUnitaryTol};
    Rng rng(derive_seed(o.seed, 3));
    opt::OptimizerConfig cfg;
    cfg.eps_surrogate = 1e-300;  // run the full step budget
    cfg.max_inner = 200;
    for (std::size_t i = 0; i < o.sizes.size(); ++i) {
        const int m = o.sizes[i];
        const Instance in = random_instance(rng, m);
        const auto res = opt::maximize_surrogate(in.state, in.F, in.Gbar, opt::random_unitary(rng, m), cfg);
        const ComplexMatrix theta = BdRis{res.Q}.theta();
        double err = std::max(matkit::unitarity_error(res.Q), matkit::unitarity_error(theta));
        if (matkit::symmetry_error(theta) != 0.0) {
            err = std::max(err, 1.0);
        }
        record(r, err);
    }
    return r;
}

CheckResult takagi_check(const GradcheckOptions& o) {
    CheckResult r{"takagi_roundtrip", 0, 0, 0.0, kTakagiTol};
    Rng rng(derive_seed(o.seed, 4));
    for (int i = 0; i < o.instances; ++i) {
        const int m = size_for(o, i);
        const ComplexMatrix Q0 = opt::random_unitary(rng, m);
        const ComplexMatrix A = Q0 * Q0.transpose();
        const ComplexMatrix Q = matkit::takagi(A).Q;
        record(r, (Q * Q.transpose() - A).norm() / A.norm());
    }
    return r;
}

}  // namespace

bool GradcheckReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed(); });
}

std::string GradcheckReport::text() const {
    std::ostringstream os;
    for (const auto& c : checks) {
        char line[160];
        std::snprintf(line, sizeof line, "%-22s %s  cases=%d failures=%d max_error=%.3e tol=%.1e\n", c.name.c_str(),
                      c.passed() ? "PASS" : "FAIL", c.cases, c.failures, c.max_error, c.tolerance);
        os << line;
    }
    os << (passed() ? "gradcheck: all checks passed\n" : "gradcheck: FAILED\n");
    return os.str();
}

GradcheckReport run_gradcheck(const GradcheckOptions& o) {
    if (o.sizes.empty() || o.instances < 1 || o.lower_bound_samples < 1 || !(o.fd_step > 0.0)) {
        throw ContractViolation("gradcheck: invalid options");
    }
    for (int m : o.sizes) {
        if (m < 1) {
            throw ContractViolation("gradcheck: sizes must be >= 1");
        }
    }
    GradcheckReport rep;
    rep.checks.push_back(gradient_check(o));
    CheckResult tangency{"minorizer_tangency", 0, 0, 0.0, kBoundTol};
    CheckResult lower{"minorizer_lower_bound", 0, 0, 0.0, kBoundTol};
    bound_checks(o, tangency, lower);
    rep.checks.push_back(tangency);
    rep.checks.push_back(lower);
    rep.checks.push_back(unitarity_check(o));
    rep.checks.push_back(takagi_check(o));
    return rep;
}

}  // namespace bdris::check
