#pragma once

// Annulus bump profiles, test functions whose Fourier transforms vanish
// identically near the origin, and grid checks for the smoothness and
// seminorm bounds of x |-> f(|x|^2) phi_hat(x).
//
// Membership in the vanishing-at-zero class is enforced constructively:
// only Fourier-side fields supported in an annulus 0 < r0 <= |x| <= r1 are
// admitted, so every derivative vanishes at 0 by support alone.

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "bhc/bernstein.hpp"
#include "bhc/errors.hpp"
#include "bhc/geometry.hpp"
#include "bhc/multiplier.hpp"

namespace bhc::testfn {

// ---------------------------------------------------------------------------
// BumpProfile
// ---------------------------------------------------------------------------

// Smooth radial window: 0 outside (r0, r1), 1 on the middle-half plateau,
// exp(-1/x) smoothstep glue in between. BumpProfile(eps) is the annulus
// around |x| = 1 with plateau [1 - eps/4, 1 + eps/4] and support
// (1 - eps/2, 1 + eps/2).
class BumpProfile {
public:
    explicit BumpProfile(double eps) {
        if (!(eps > 0.0 && eps < 1.0))
            throw DomainError("BumpProfile: eps must lie in (0, 1)");
        eps_ = eps;
        r0_ = 1.0 - eps / 2.0;
        r1_ = 1.0 + eps / 2.0;
        p0_ = 1.0 - eps / 4.0;
        p1_ = 1.0 + eps / 4.0;
    }

    static BumpProfile annulus(double r0, double r1) {
        if (!(0.0 < r0 && r0 < r1))
            throw DomainError("BumpProfile: need 0 < r0 < r1");
        BumpProfile b(0.5);
        b.r0_ = r0;
        b.r1_ = r1;
        const double w = (r1 - r0) / 4.0;
        b.p0_ = r0 + w;
        b.p1_ = r1 - w;
        b.eps_ = r1 - r0;
        return b;
    }

    double operator()(double r) const {
        if (r <= r0_ || r >= r1_) return 0.0;
        if (r >= p0_ && r <= p1_) return 1.0;
        if (r < p0_) return smoothstep((r - r0_) / (p0_ - r0_));
        return smoothstep((r1_ - r) / (r1_ - p1_));
    }

    double eps() const { return eps_; }
    double support_inner() const { return r0_; }
    double support_outer() const { return r1_; }
    double plateau_inner() const { return p0_; }
    double plateau_outer() const { return p1_; }
    double transition_width() const { return p0_ - r0_; }

private:
    static double smoothstep(double x) {
        if (x <= 0.0) return 0.0;
        if (x >= 1.0) return 1.0;
        const double g0 = std::exp(-1.0 / x);
        const double g1 = std::exp(-1.0 / (1.0 - x));
        return g0 / (g0 + g1);
    }

    double eps_, r0_, r1_, p0_, p1_;
};

// ---------------------------------------------------------------------------
// ZTestFunction
// ---------------------------------------------------------------------------

// Fourier-side field phi_hat(x) = amplitude * window(|x|) * smooth(x),
// supported in the window's annulus.
class ZTestFunction {
public:
    ZTestFunction(int dims, BumpProfile window,
                  std::function<double(const Point&)> smooth_factor = {})
        : d_(dims), window_(window), smooth_(std::move(smooth_factor)) {
        if (dims < 1 || dims > 3)
            throw DomainError("ZTestFunction: dims must be 1, 2 or 3");
    }

    int dims() const { return d_; }
    double r0() const { return window_.support_inner(); }
    double r1() const { return window_.support_outer(); }
    const BumpProfile& window() const { return window_; }
    double amplitude() const { return amplitude_; }

    double fourier_side(const Point& x) const {
        return amplitude_ * profile_part(x);
    }

    // Window times smooth factor without the amplitude. Derivative and
    // seminorm code works on this and scales results by |amplitude| at the
    // end, so amplitude scaling is exactly linear (no per-sample rounding
    // amplified through stencil cancellation).
    double profile_part(const Point& x) const {
        const double w = window_(norm(x));
        if (w == 0.0) return 0.0;
        return w * (smooth_ ? smooth_(x) : 1.0);
    }

    ZTestFunction scaled(double c) const {
        ZTestFunction out = *this;
        out.amplitude_ = amplitude_ * c;
        return out;
    }

private:
    int d_;
    BumpProfile window_;
    std::function<double(const Point&)> smooth_;
    double amplitude_ = 1.0;
};

// ---------------------------------------------------------------------------
// Finite differences of scalar fields (tensor-product central stencils)
// ---------------------------------------------------------------------------

using MultiIndex = std::array<int, 3>;

inline int order(const MultiIndex& a) { return a[0] + a[1] + a[2]; }

namespace detail {

struct Stencil {
    std::vector<double> coeff; // centered, offsets -(len-1)/2 .. +(len-1)/2
    int accuracy;
};

// Central stencils for the m-th derivative: 4th-order for m <= 4,
// 2nd-order for m = 5, 6.
inline const Stencil& stencil(int m) {
    static const std::vector<Stencil> table = {
        {{1.0}, 0},
        {{1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12, -1.0 / 12}, 4},
        {{-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12}, 4},
        {{1.0 / 8, -1.0, 13.0 / 8, 0.0, -13.0 / 8, 1.0, -1.0 / 8}, 4},
        {{-1.0 / 6, 2.0, -13.0 / 2, 28.0 / 3, -13.0 / 2, 2.0, -1.0 / 6}, 4},
        {{-0.5, 2.0, -2.5, 0.0, 2.5, -2.0, 0.5}, 2},
        {{1.0, -6.0, 15.0, -20.0, 15.0, -6.0, 1.0}, 2},
    };
    if (m < 0 || m > 6)
        throw DomainError("stencil: derivative order must be 0..6");
    return table[static_cast<std::size_t>(m)];
}

// Step size balancing truncation against roundoff for the m-th derivative,
// relative to the feature scale of the field.
inline double fd_step(int m, double feature_scale) {
    static constexpr double expo[7] = {0, 1.0 / 5, 1.0 / 6, 1.0 / 7, 1.0 / 8,
                                       1.0 / 7, 1.0 / 8};
    if (m == 0) return 0.0;
    return feature_scale * std::pow(2.2e-16, expo[m]);
}

template <class F>
double fd_partial_impl(const F& f, Point x, const MultiIndex& beta, int axis,
                       const std::array<double, 3>& steps) {
    while (axis < 3 && beta[static_cast<std::size_t>(axis)] == 0) ++axis;
    if (axis == 3) return f(x);
    const int m = beta[static_cast<std::size_t>(axis)];
    const Stencil& st = stencil(m);
    const int half = static_cast<int>(st.coeff.size() - 1) / 2;
    const double h = steps[static_cast<std::size_t>(axis)];
    MultiIndex rest = beta;
    rest[static_cast<std::size_t>(axis)] = 0;
    double acc = 0.0;
    for (int k = -half; k <= half; ++k) {
        const double c = st.coeff[static_cast<std::size_t>(k + half)];
        if (c == 0.0) continue;
        Point xs = x;
        xs[static_cast<std::size_t>(axis)] += k * h;
        acc += c * fd_partial_impl(f, xs, rest, axis + 1, steps);
    }
    return acc / std::pow(h, m);
}

} // namespace detail

// Mixed partial d^beta f at x by tensor-product central differences; the
// step is tied to the feature scale (window transition width by default).
template <class F>
double fd_partial(const F& f, const Point& x, const MultiIndex& beta,
                  double feature_scale) {
    std::array<double, 3> steps{};
    for (int a = 0; a < 3; ++a)
        steps[static_cast<std::size_t>(a)] =
            detail::fd_step(beta[static_cast<std::size_t>(a)], feature_scale);
    return detail::fd_partial_impl(f, x, beta, 0, steps);
}

// All d-dimensional multi-indices with |alpha| == total.
inline std::vector<MultiIndex> multi_indices_of_order(int d, int total) {
    std::vector<MultiIndex> out;
    if (d == 1) {
        out.push_back({total, 0, 0});
        return out;
    }
    for (int a = 0; a <= total; ++a) {
        if (d == 2) {
            out.push_back({a, total - a, 0});
        } else {
            for (int b = 0; b <= total - a; ++b)
                out.push_back({a, b, total - a - b});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// C_N = max_{|alpha| = N} sup_{|y| <= 1} |d^alpha phi_hat(y)|, by grid search
// with central differences. A grid max is a lower bound on the true sup; the
// resolution default is chosen so doubling moves the result < 5%.
inline double taylor_constant(const ZTestFunction& phi, int N,
                              int grid_per_axis = 48) {
    if (N < 1 || N > 6)
        throw DomainError("taylor_constant: N must be 1..6");
    const int d = phi.dims();
    const auto alphas = multi_indices_of_order(d, N);
    const double fs = phi.window().transition_width();
    const auto field = [&](const Point& x) { return phi.profile_part(x); };

    double best = 0.0;
    const double lo = -1.0, hi = 1.0;
    const int g = grid_per_axis;
    std::array<int, 3> counts{g, d >= 2 ? g : 1, d >= 3 ? g : 1};
    for (int i = 0; i < counts[0]; ++i)
        for (int j = 0; j < counts[1]; ++j)
            for (int k = 0; k < counts[2]; ++k) {
                Point x{lo + (hi - lo) * (i + 0.5) / counts[0],
                        d >= 2 ? lo + (hi - lo) * (j + 0.5) / counts[1] : 0.0,
                        d >= 3 ? lo + (hi - lo) * (k + 0.5) / counts[2] : 0.0};
                if (norm(x) > 1.0) continue;
                // skip points whose whole stencil lies outside the support
                const double r = norm(x), pad = 8.0 * detail::fd_step(N, fs);
                if (r + pad < phi.r0() || r - pad > phi.r1()) continue;
                for (const auto& alpha : alphas)
                    best = std::max(best, std::abs(fd_partial(field, x, alpha, fs)));
            }
    return std::abs(phi.amplitude()) * best;
}

// One row of the decay table produced by smooth_extension_check.
struct DecayRow {
    double radius = 0.0; // |x| = 2^{-k}
    double value = 0.0;  // |d^beta (f(|x|^2) phi_hat(x))|
    double slope = 0.0;  // local decay exponent vs the next row (0 if n/a)
};

// Samples |d^beta (f(|x|^2) phi_hat(x))| at |x| = 2^{-k}, k = 1..k_max along
// the first axis. Inside |x| < r0 the field vanishes identically, so rows
// there are exactly zero.
inline std::vector<DecayRow> smooth_extension_check(const bernstein::BernsteinFn& f,
                                                    const ZTestFunction& phi,
                                                    const MultiIndex& beta,
                                                    int k_max = 20) {
    if (order(beta) > 3)
        throw DomainError("smooth_extension_check: |beta| <= 3");
    if (f.constant() || !f.triple)
        throw DomainError("smooth_extension_check: need a non-constant f with a triple");
    const auto field = [&](const Point& x) {
        const double w = phi.profile_part(x);
        return w == 0.0 ? 0.0 : f.closed_eval(dot(x, x)) * w;
    };
    const double amp = std::abs(phi.amplitude());
    const double fs = std::min(phi.window().transition_width(), 0.25);
    std::vector<DecayRow> rows;
    rows.reserve(static_cast<std::size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) {
        DecayRow row;
        row.radius = std::pow(2.0, -k);
        const Point x{row.radius, 0.0, 0.0};
        row.value = amp * (order(beta) == 0
                               ? std::abs(field(x))
                               : std::abs(fd_partial(field, x, beta, fs)));
        rows.push_back(row);
    }
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        if (rows[i].value > 0.0 && rows[i + 1].value > 0.0)
            rows[i].slope = std::log2(rows[i].value / rows[i + 1].value);
    }
    return rows;
}

struct SeminormReport {
    MultiIndex alpha{0, 0, 0};
    MultiIndex beta{0, 0, 0};
    double value = 0.0;
    int resolution = 0;
};

namespace detail {

template <class F>
double seminorm_grid_max(const F& field, const ZTestFunction& phi,
                         const MultiIndex& alpha, const MultiIndex& beta,
                         int resolution) {
    const int d = phi.dims();
    const double r_cut = phi.r1() + 0.1;
    const double fs = std::min(phi.window().transition_width(), 0.25);
    const double pad = 8.0 * fd_step(std::max({beta[0], beta[1], beta[2]}), fs);
    double best = 0.0;
    std::array<int, 3> counts{resolution, d >= 2 ? resolution : 1,
                              d >= 3 ? resolution : 1};
    for (int i = 0; i < counts[0]; ++i)
        for (int j = 0; j < counts[1]; ++j)
            for (int k = 0; k < counts[2]; ++k) {
                Point x{-r_cut + 2.0 * r_cut * (i + 0.5) / counts[0],
                        d >= 2 ? -r_cut + 2.0 * r_cut * (j + 0.5) / counts[1] : 0.0,
                        d >= 3 ? -r_cut + 2.0 * r_cut * (k + 0.5) / counts[2] : 0.0};
                const double r = norm(x);
                if (r + pad < phi.r0() || r - pad > phi.r1()) continue;
                const double D = order(beta) == 0
                                     ? field(x)
                                     : fd_partial(field, x, beta, fs);
                double mono = 1.0;
                for (int a = 0; a < d; ++a)
                    for (int p = 0; p < alpha[static_cast<std::size_t>(a)]; ++p)
                        mono *= x[static_cast<std::size_t>(a)];
                best = std::max(best, std::abs(mono * D));
            }
    return best;
}

} // namespace detail

// Grid maximum of |x^alpha d^beta (f(|x|^2) phi_hat(x))| over |x| <= r1 + 0.1.
// Beyond the window support the field is identically zero, so the truncation
// is exact.
inline SeminormReport seminorm(const bernstein::BernsteinFn& f,
                               const ZTestFunction& phi, const MultiIndex& alpha,
                               const MultiIndex& beta, int resolution = 256) {
    if (order(alpha) > 3 || order(beta) > 3)
        throw DomainError("seminorm: |alpha|, |beta| <= 3");
    const auto field = [&](const Point& x) {
        const double w = phi.profile_part(x);
        return w == 0.0 ? 0.0 : f.closed_eval(dot(x, x)) * w;
    };
    SeminormReport rep;
    rep.alpha = alpha;
    rep.beta = beta;
    rep.resolution = resolution;
    rep.value = std::abs(phi.amplitude()) *
                detail::seminorm_grid_max(field, phi, alpha, beta, resolution);
    return rep;
}

// All seminorms with |alpha|, |beta| <= max_order in one pass per beta.
inline std::vector<SeminormReport> seminorm_table(const bernstein::BernsteinFn& f,
                                                  const ZTestFunction& phi,
                                                  int max_order,
                                                  int resolution = 256) {
    if (max_order > 3) throw DomainError("seminorm_table: max_order <= 3");
    std::vector<MultiIndex> alphas, betas;
    for (int t = 0; t <= max_order; ++t) {
        for (const auto& a : multi_indices_of_order(phi.dims(), t)) {
            alphas.push_back(a);
            betas.push_back(a);
        }
    }
    const auto field = [&](const Point& x) {
        const double w = phi.profile_part(x);
        return w == 0.0 ? 0.0 : f.closed_eval(dot(x, x)) * w;
    };
    const double amp = std::abs(phi.amplitude());

    const int d = phi.dims();
    const double r_cut = phi.r1() + 0.1;
    const double fs = std::min(phi.window().transition_width(), 0.25);
    std::vector<SeminormReport> out;
    for (const auto& beta : betas) {
        std::vector<double> best(alphas.size(), 0.0);
        const double pad =
            8.0 * detail::fd_step(std::max({beta[0], beta[1], beta[2]}), fs);
        std::array<int, 3> counts{resolution, d >= 2 ? resolution : 1,
                                  d >= 3 ? resolution : 1};
        for (int i = 0; i < counts[0]; ++i)
            for (int j = 0; j < counts[1]; ++j)
                for (int k = 0; k < counts[2]; ++k) {
                    Point x{-r_cut + 2.0 * r_cut * (i + 0.5) / counts[0],
                            d >= 2 ? -r_cut + 2.0 * r_cut * (j + 0.5) / counts[1] : 0.0,
                            d >= 3 ? -r_cut + 2.0 * r_cut * (k + 0.5) / counts[2] : 0.0};
                    const double r = norm(x);
                    if (r + pad < phi.r0() || r - pad > phi.r1()) continue;
                    const double D = order(beta) == 0
                                         ? field(x)
                                         : fd_partial(field, x, beta, fs);
                    if (D == 0.0) continue;
                    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
                        double mono = 1.0;
                        for (int a = 0; a < d; ++a)
                            for (int p = 0; p < alphas[ai][static_cast<std::size_t>(a)]; ++p)
                                mono *= x[static_cast<std::size_t>(a)];
                        best[ai] = std::max(best[ai], std::abs(mono * D));
                    }
                }
        for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
            SeminormReport rep;
            rep.alpha = alphas[ai];
            rep.beta = beta;
            rep.value = amp * best[ai];
            rep.resolution = resolution;
            out.push_back(rep);
        }
    }
    return out;
}

// Samples phi_hat on a periodic grid (coordinates wrapped to the centered
// box [-box/2, box/2)) so test functions can ride the GridFunction file
// format for pipeline handoff. box must cover the support annulus.
inline multiplier::GridFunction sample_to_grid(const ZTestFunction& phi,
                                               std::size_t n, double box) {
    if (box <= 2.0 * phi.r1())
        throw DomainError("sample_to_grid: box must exceed the support diameter");
    multiplier::GridFunction g(phi.dims(), n, box);
    for (std::size_t flat = 0; flat < g.size(); ++flat) {
        const auto idx = g.unravel(flat);
        Point x{0.0, 0.0, 0.0};
        for (int a = 0; a < phi.dims(); ++a) {
            double c = box * static_cast<double>(idx[static_cast<std::size_t>(a)]) /
                       static_cast<double>(n);
            if (c >= box / 2.0) c -= box;
            x[static_cast<std::size_t>(a)] = c;
        }
        g[flat] = phi.fourier_side(x);
    }
    return g;
}

} // namespace bhc::testfn
