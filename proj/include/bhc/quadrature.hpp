#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "bhc/errors.hpp"

namespace bhc::quad {

// One-dimensional quadrature rule: integral ~ sum_i w[i] * f(x[i]).
struct Rule1D {
    std::vector<double> x;
    std::vector<double> w;

    std::size_t size() const { return x.size(); }

    template <class F>
    double apply(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) acc += w[i] * f(x[i]);
        return acc;
    }
};

// Gauss rule for the Jacobi weight (1-x)^alpha (1+x)^beta on [-1, 1],
// computed with the Golub-Welsch algorithm. Recurrence coefficients are
// the standard monic-Jacobi ones; nodes are eigenvalues of the symmetric
// tridiagonal Jacobi matrix, weights mu0 * (first eigenvector component)^2.
inline Rule1D gauss_jacobi(int n, double alpha, double beta) {
    if (n < 1) throw DomainError("gauss_jacobi: need n >= 1");
    if (alpha <= -1.0 || beta <= -1.0)
        throw DomainError("gauss_jacobi: weight exponents must exceed -1");

    const double ab = alpha + beta;
    Eigen::VectorXd diag(n), sub(std::max(n - 1, 0));
    diag[0] = (beta - alpha) / (ab + 2.0);
    for (int k = 1; k < n; ++k) {
        const double t = 2.0 * k + ab;
        diag[k] = (beta * beta - alpha * alpha) / (t * (t + 2.0));
        double bk;
        if (k == 1) {
            bk = 4.0 * (alpha + 1.0) * (beta + 1.0) /
                 ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
        } else {
            bk = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
                 (t * t * (t + 1.0) * (t - 1.0));
        }
        sub[k - 1] = std::sqrt(bk);
    }

    const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) *
                       std::tgamma(beta + 1.0) / std::tgamma(ab + 2.0);

    Rule1D rule;
    rule.x.resize(n);
    rule.w.resize(n);
    if (n == 1) {
        rule.x[0] = diag[0];
        rule.w[0] = mu0;
        return rule;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    for (int i = 0; i < n; ++i) {
        rule.x[i] = es.eigenvalues()[i];
        const double v0 = es.eigenvectors()(0, i);
        rule.w[i] = mu0 * v0 * v0;
    }
    return rule;
}

inline Rule1D gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

// Affine image of a [-1,1] rule on [a, b].
inline Rule1D mapped(const Rule1D& base, double a, double b) {
    Rule1D r;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    r.x.reserve(base.size());
    r.w.reserve(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        r.x.push_back(mid + half * base.x[i]);
        r.w.push_back(half * base.w[i]);
    }
    return r;
}

// Composite Gauss-Legendre rule on [a, b] with panels of length at most
// `panel`, `per_panel` nodes each.
inline Rule1D composite_legendre(double a, double b, double panel, int per_panel) {
    if (!(b > a)) throw DomainError("composite_legendre: need b > a");
    const Rule1D base = gauss_legendre(per_panel);
    const int npanels = std::max(1, static_cast<int>(std::ceil((b - a) / panel)));
    const double h = (b - a) / npanels;
    Rule1D r;
    r.x.reserve(static_cast<std::size_t>(npanels) * base.size());
    r.w.reserve(static_cast<std::size_t>(npanels) * base.size());
    for (int p = 0; p < npanels; ++p) {
        const Rule1D m = mapped(base, a + p * h, a + (p + 1) * h);
        r.x.insert(r.x.end(), m.x.begin(), m.x.end());
        r.w.insert(r.w.end(), m.w.begin(), m.w.end());
    }
    return r;
}

} // namespace bhc::quad
