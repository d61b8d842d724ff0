#pragma once

// Finite-dimensional Phillips functional calculus: f(A) built from the
// semigroup e^{-tA} of a symmetric positive-semidefinite generator,
//   f(A) u = a u + b A u + \int (u - e^{-tA} u) dmu(t),
// with the integral discretized by the same node scheme the bernstein
// module uses for scalar Levy integrals. On an eigenvector A u = lambda u
// this reduces to f(lambda) u, which is the tested transfer property.

#include <cmath>

#include <Eigen/Dense>

#include "bhc/bernstein.hpp"
#include "bhc/errors.hpp"

namespace bhc::subordination {

class MatrixGenerator {
public:
    explicit MatrixGenerator(Eigen::MatrixXd a) : a_(std::move(a)) {
        if (a_.rows() != a_.cols() || a_.rows() == 0)
            throw DomainError("MatrixGenerator: matrix must be square and nonempty");
        if ((a_ - a_.transpose()).norm() > 1e-12)
            throw DomainError("MatrixGenerator: matrix must be symmetric");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a_);
        if (es.info() != Eigen::Success)
            throw DomainError("MatrixGenerator: eigendecomposition failed");
        lambda_ = es.eigenvalues();
        vectors_ = es.eigenvectors();
        if (lambda_.minCoeff() < -1e-12)
            throw DomainError("MatrixGenerator: matrix must be positive semidefinite");
        const Eigen::MatrixXd rec =
            vectors_ * lambda_.asDiagonal() * vectors_.transpose();
        if ((rec - a_).norm() > 1e-10 * std::max(1.0, a_.norm()))
            throw DomainError("MatrixGenerator: spectral reconstruction check failed");
    }

    Eigen::Index dim() const { return a_.rows(); }
    const Eigen::MatrixXd& matrix() const { return a_; }
    const Eigen::VectorXd& eigenvalues() const { return lambda_; }
    const Eigen::MatrixXd& eigenvectors() const { return vectors_; }

private:
    Eigen::MatrixXd a_;
    Eigen::VectorXd lambda_;
    Eigen::MatrixXd vectors_;
};

// e^{-tA} = V diag(e^{-t lambda_i}) V^T.
inline Eigen::MatrixXd semigroup(const MatrixGenerator& gen, double t) {
    if (t < 0.0) throw DomainError("semigroup: t must be >= 0");
    const Eigen::VectorXd decay = (-t * gen.eigenvalues().array()).exp().matrix();
    return gen.eigenvectors() * decay.asDiagonal() * gen.eigenvectors().transpose();
}

// Phillips form of f(A) applied to u, with the Levy integral as the
// discrete node sum of the function's triple. Large nodes underflow the
// semigroup factors to 0, which is the correct t -> infinity limit.
inline Eigen::VectorXd phillips_apply(const MatrixGenerator& gen,
                                      const bernstein::BernsteinFn& f,
                                      const Eigen::VectorXd& u) {
    if (!f.triple)
        throw DomainError("phillips_apply: function must carry a Levy triple");
    if (u.size() != gen.dim())
        throw DomainError("phillips_apply: vector size mismatch");
    if (u.norm() == 0.0) throw DomainError("phillips_apply: u must be nonzero");

    const auto& triple = *f.triple;
    const Eigen::ArrayXd lam = gen.eigenvalues().array();
    const Eigen::ArrayXd y = (gen.eigenvectors().transpose() * u).array();

    Eigen::ArrayXd acc = triple.a() * y + triple.b() * (lam * y);
    for (const auto& node : triple.nodes()) {
        // u - e^{-tA}u in eigencoordinates: (1 - e^{-t lambda_i}) y_i
        acc += node.w * (1.0 - (-node.t * lam).exp()) * y;
    }
    return gen.eigenvectors() * acc.matrix();
}

struct TransferReport {
    double residual = 0.0;   // ||f(A)u - f(1)u|| / ||u|| on the unit eigenvector
    Eigen::Index eigen_index = -1;
    double f1 = 0.0;
};

// Locates an eigenvalue 1, applies f(A) to its eigenvector through the
// Phillips quadrature, and reports the deviation from f(1) u.
inline TransferReport eigen_transfer_check(const MatrixGenerator& gen,
                                           const bernstein::BernsteinFn& f) {
    Eigen::Index idx = -1;
    for (Eigen::Index i = 0; i < gen.dim(); ++i) {
        if (std::abs(gen.eigenvalues()[i] - 1.0) <= 1e-12) {
            idx = i;
            break;
        }
    }
    if (idx < 0)
        throw NoUnitEigenvalue("eigen_transfer_check: spectrum has no eigenvalue 1");
    const Eigen::VectorXd u = gen.eigenvectors().col(idx);
    const Eigen::VectorXd fu = phillips_apply(gen, f, u);
    TransferReport rep;
    rep.eigen_index = idx;
    rep.f1 = f.f1;
    rep.residual = (fu - f.f1 * u).norm() / u.norm();
    return rep;
}

} // namespace bhc::subordination
