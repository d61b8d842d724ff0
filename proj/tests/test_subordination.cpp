#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "bhc/subordination.hpp"

using namespace bhc;
using namespace bhc::subordination;
using bernstein::make_affine;
using bernstein::make_fractional;
using bernstein::make_log1p;

namespace {

// Test-side matrix exponential by scaling and squaring with a long Taylor
// tail; independent of the spectral route used by the library.
Eigen::MatrixXd expm_oracle(const Eigen::MatrixXd& m) {
    int squarings = 0;
    Eigen::MatrixXd scaled = m;
    while (scaled.norm() > 0.5) {
        scaled /= 2.0;
        ++squarings;
    }
    Eigen::MatrixXd term = Eigen::MatrixXd::Identity(m.rows(), m.cols());
    Eigen::MatrixXd sum = term;
    for (int k = 1; k <= 24; ++k) {
        term = (term * scaled) / static_cast<double>(k);
        sum += term;
    }
    for (int k = 0; k < squarings; ++k) sum = sum * sum;
    return sum;
}

Eigen::MatrixXd random_psd(Eigen::Index m, unsigned seed, bool pin_unit_eigenvalue,
                           double max_eig = 20.0) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    Eigen::MatrixXd raw(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j) raw(i, j) = g(rng);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
    const Eigen::MatrixXd v = qr.householderQ();
    std::uniform_real_distribution<double> eig(0.0, max_eig);
    Eigen::VectorXd lam(m);
    for (Eigen::Index i = 0; i < m; ++i) lam[i] = eig(rng);
    if (pin_unit_eigenvalue) lam[0] = 1.0;
    Eigen::MatrixXd a = v * lam.asDiagonal() * v.transpose();
    return 0.5 * (a + a.transpose());
}

} // namespace

TEST_CASE("generator validation", "[subordination]") {
    SECTION("asymmetric matrices are rejected") {
        Eigen::MatrixXd a(2, 2);
        a << 1.0, 2.0, 0.0, 1.0;
        CHECK_THROWS_AS(MatrixGenerator(a), DomainError);
    }
    SECTION("negative eigenvalues are rejected") {
        Eigen::MatrixXd a = -Eigen::MatrixXd::Identity(3, 3);
        CHECK_THROWS_AS(MatrixGenerator(a), DomainError);
    }
}

TEST_CASE("semigroup", "[subordination]") {
    SECTION("t = 0 is the identity") {
        const MatrixGenerator gen(random_psd(5, 1, false));
        CHECK((semigroup(gen, 0.0) - Eigen::MatrixXd::Identity(5, 5)).norm() < 1e-12);
    }
    SECTION("1x1 closed form") {
        Eigen::MatrixXd a(1, 1);
        a << 1.0;
        const MatrixGenerator gen(a);
        CHECK(semigroup(gen, 1.0)(0, 0) ==
              Catch::Approx(std::exp(-1.0)).epsilon(1e-14));
    }
    SECTION("matches the scaling-and-squaring oracle") {
        const Eigen::MatrixXd a = random_psd(5, 2, false, 4.0);
        const MatrixGenerator gen(a);
        const double t = 0.3;
        CHECK((semigroup(gen, t) - expm_oracle(-t * a)).norm() <= 1e-9);
    }
    SECTION("semigroup property") {
        const MatrixGenerator gen(random_psd(6, 3, false));
        for (double t : {0.1, 0.7}) {
            for (double s : {0.2, 1.5}) {
                const Eigen::MatrixXd lhs = semigroup(gen, t) * semigroup(gen, s);
                CHECK((lhs - semigroup(gen, t + s)).norm() <= 1e-10);
            }
        }
        CHECK_THROWS_AS(semigroup(gen, -0.1), DomainError);
    }
}

TEST_CASE("phillips_apply", "[subordination]") {
    SECTION("identity generator gives f(1) u") {
        const MatrixGenerator gen(Eigen::MatrixXd::Identity(4, 4));
        std::mt19937 rng(7);
        std::normal_distribution<double> g;
        Eigen::VectorXd u(4);
        for (auto& x : u.reshaped()) x = g(rng);
        for (const auto& f : bernstein::catalogue()) {
            if (!f.triple) continue;
            const Eigen::VectorXd got = phillips_apply(gen, f, u);
            INFO(f.name);
            CHECK((got - f.f1 * u).norm() <= 1e-8 * u.norm());
        }
    }
    SECTION("pure constant part acts as c u exactly") {
        const MatrixGenerator gen(random_psd(5, 9, false));
        Eigen::VectorXd u = Eigen::VectorXd::LinSpaced(5, 1.0, 5.0);
        const auto f = make_affine(2.5, 0.0);
        const Eigen::VectorXd got = phillips_apply(gen, f, u);
        CHECK((got - 2.5 * u).norm() <= 1e-13 * u.norm());
    }
    SECTION("diag(4,1) with fractional(1/2) maps e1 to 2 e1") {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
        a(0, 0) = 4.0;
        a(1, 1) = 1.0;
        const MatrixGenerator gen(a);
        const Eigen::VectorXd got =
            phillips_apply(gen, make_fractional(0.5), Eigen::Vector2d(1.0, 0.0));
        CHECK(got[0] == Catch::Approx(2.0).epsilon(1e-8));
        CHECK(std::abs(got[1]) < 1e-12);
    }
    SECTION("gates") {
        const MatrixGenerator gen(Eigen::MatrixXd::Identity(2, 2));
        CHECK_THROWS_AS(
            phillips_apply(gen, bernstein::make_sqrt_tanh_sqrt(), Eigen::Vector2d(1, 0)),
            DomainError);
        CHECK_THROWS_AS(
            phillips_apply(gen, make_log1p(), Eigen::Vector2d(0, 0)), DomainError);
    }
}

TEST_CASE("spectral equivalence on random generators", "[subordination][property]") {
    for (unsigned trial = 0; trial < 6; ++trial) {
        const Eigen::Index m = 4 + 2 * (trial % 3); // up to 16 with the +8 below
        const Eigen::MatrixXd a = random_psd(m + 8, 100 + trial, true);
        const MatrixGenerator gen(a);
        std::mt19937 rng(200 + trial);
        std::normal_distribution<double> g;
        Eigen::VectorXd u(gen.dim());
        for (auto& x : u.reshaped()) x = g(rng);
        for (const auto& f : bernstein::catalogue()) {
            if (!f.triple) continue;
            // oracle: spectral functional calculus with the closed form
            Eigen::VectorXd fl(gen.dim());
            for (Eigen::Index i = 0; i < gen.dim(); ++i)
                fl[i] = f.closed_eval(std::max(0.0, gen.eigenvalues()[i]));
            const Eigen::VectorXd want = gen.eigenvectors() * fl.asDiagonal() *
                                         gen.eigenvectors().transpose() * u;
            const Eigen::VectorXd got = phillips_apply(gen, f, u);
            INFO(f.name << " trial " << trial);
            CHECK((got - want).norm() <= 1e-8 * std::max(1.0, want.norm()));
        }
    }
}

TEST_CASE("operator norms on eigenvectors are monotone in the eigenvalue",
          "[subordination][property]") {
    const Eigen::MatrixXd a = random_psd(8, 42, true);
    const MatrixGenerator gen(a);
    for (const auto& f : bernstein::catalogue()) {
        if (!f.triple) continue;
        double prev = -1.0;
        for (Eigen::Index i = 0; i < gen.dim(); ++i) { // eigenvalues ascend
            const Eigen::VectorXd u = gen.eigenvectors().col(i);
            const double nrm = phillips_apply(gen, f, u).norm();
            CHECK(nrm >= prev - 1e-10);
            prev = nrm;
        }
    }
}

TEST_CASE("f(A) is linear", "[subordination][property]") {
    const MatrixGenerator gen(random_psd(7, 77, false));
    const auto f = make_fractional(0.5);
    std::mt19937 rng(5);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd u(7), v(7);
        for (auto& x : u.reshaped()) x = g(rng);
        for (auto& x : v.reshaped()) x = g(rng);
        const double al = g(rng), be = g(rng);
        const Eigen::VectorXd lhs = phillips_apply(gen, f, al * u + be * v);
        const Eigen::VectorXd rhs =
            al * phillips_apply(gen, f, u) + be * phillips_apply(gen, f, v);
        CHECK((lhs - rhs).norm() <= 1e-10 * std::max(1.0, lhs.norm()));
    }
}

TEST_CASE("eigen_transfer_check", "[subordination]") {
    SECTION("identity with log1p") {
        const MatrixGenerator gen(Eigen::MatrixXd::Identity(3, 3));
        const auto rep = eigen_transfer_check(gen, make_log1p());
        CHECK(rep.residual <= 1e-8);
        CHECK(rep.f1 == Catch::Approx(std::log(2.0)).epsilon(1e-14));
    }
    SECTION("diag(1, 2, 5) with fractional(1/2)") {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
        a.diagonal() << 1.0, 2.0, 5.0;
        const auto rep = eigen_transfer_check(MatrixGenerator(a), make_fractional(0.5));
        CHECK(rep.residual <= 1e-8);
    }
    SECTION("spectrum without 1 is rejected") {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2, 2);
        a.diagonal() << 2.0, 3.0;
        CHECK_THROWS_AS(eigen_transfer_check(MatrixGenerator(a), make_log1p()),
                        NoUnitEigenvalue);
    }
}
