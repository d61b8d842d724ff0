#pragma once

// Quadrature on S^{d-1}, synthesis of Herglotz waves u(x) = <T, e_x> from
// densities on the unit sphere (point masses, smooth densities, finite
// harmonic expansions), layer distributions of order k <= 2, and the
// B* norm profile g(R) = (1/R) \int_{|x|<R} |u|^2 dx.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <utility>
#include <variant>
#include <vector>

#include "bhc/bernstein.hpp"
#include "bhc/errors.hpp"
#include "bhc/geometry.hpp"
#include "bhc/quadrature.hpp"
#include "bhc/testfn.hpp"

namespace bhc::sphere {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338328;
inline constexpr int kMaxHarmonicOrder = 64;
inline constexpr int kMaxQuadratureDegree = 200;
inline constexpr double kNodeCap = 5e7; // budget for bstar_norm work estimate

// ---------------------------------------------------------------------------
// Quadrature on the sphere
// ---------------------------------------------------------------------------

struct SphereQuadrature {
    int d = 2;
    int degree = 0;
    std::vector<Point> nodes;    // unit vectors
    std::vector<double> weights; // positive, summing to sigma(S^{d-1})
};

// d = 2: uniform angles (trapezoid rule, exact for trigonometric polynomials
// of order < node count). d = 3: Gauss-Legendre in cos(theta) x uniform
// longitude, exact for spherical polynomials up to `degree`.
inline SphereQuadrature make_quadrature(int d, int degree) {
    if (d != 2 && d != 3)
        throw DomainError("make_quadrature: d must be 2 or 3");
    if (degree < 0 || degree > kMaxQuadratureDegree)
        throw DomainError("make_quadrature: degree must be 0..200");
    SphereQuadrature q;
    q.d = d;
    q.degree = degree;
    if (d == 2) {
        const int m = std::max(degree + 1, 4);
        q.nodes.reserve(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            const double th = 2.0 * kPi * i / m;
            q.nodes.push_back({std::cos(th), std::sin(th), 0.0});
            q.weights.push_back(2.0 * kPi / m);
        }
    } else {
        const int npolar = degree / 2 + 1;
        const int naz = std::max(degree + 1, 4);
        const quad::Rule1D gl = quad::gauss_legendre(npolar);
        for (int i = 0; i < npolar; ++i) {
            const double c = gl.x[static_cast<std::size_t>(i)]; // cos(theta)
            const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
            for (int j = 0; j < naz; ++j) {
                const double ph = 2.0 * kPi * j / naz;
                q.nodes.push_back({s * std::cos(ph), s * std::sin(ph), c});
                q.weights.push_back(gl.w[static_cast<std::size_t>(i)] * 2.0 * kPi / naz);
            }
        }
    }
    return q;
}

// ---------------------------------------------------------------------------
// Densities on the sphere
// ---------------------------------------------------------------------------

struct PointMasses {
    std::vector<std::pair<Point, cplx>> masses; // (unit node, charge)
};

struct SmoothDensity {
    std::function<cplx(const Point&)> value;
};

// d = 2: Fourier coefficients c_m, m = -order..order (flat index m + order),
// for Phi(theta) = sum c_m e^{i m theta}.
// d = 3: real orthonormal spherical-harmonic coefficients, flat index
// l(l+1)+m for l = 0..order, m = -l..l.
struct HarmonicCoeffs {
    int order = 0;
    std::vector<cplx> coeffs;
};

namespace detail {

// Associated Legendre P_l^m (Condon-Shortley phase) by upward recurrence.
inline double assoc_legendre(int l, int m, double x) {
    double pmm = 1.0;
    if (m > 0) {
        const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
        double fact = 1.0;
        for (int i = 1; i <= m; ++i) {
            pmm *= -fact * s;
            fact += 2.0;
        }
    }
    if (l == m) return pmm;
    double pm1 = x * (2.0 * m + 1.0) * pmm;
    if (l == m + 1) return pm1;
    double pl = 0.0;
    for (int ll = m + 2; ll <= l; ++ll) {
        pl = ((2.0 * ll - 1.0) * x * pm1 - (ll + m - 1.0) * pmm) / (ll - m);
        pmm = pm1;
        pm1 = pl;
    }
    return pl;
}

// Real orthonormal spherical harmonic Y_{l,m} on S^2.
inline double real_sph_harmonic(int l, int m, const Point& xi) {
    const double ct = xi[2];
    const double phi = std::atan2(xi[1], xi[0]);
    const int am = std::abs(m);
    double lognum = 0.0;
    for (int i = l - am + 1; i <= l + am; ++i) lognum += std::log(static_cast<double>(i));
    const double norm =
        std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * std::exp(-lognum));
    const double p = assoc_legendre(l, am, ct);
    if (m == 0) return norm * p;
    const double base = std::sqrt(2.0) * norm * p;
    return m > 0 ? base * std::cos(am * phi) : base * std::sin(am * phi);
}

} // namespace detail

class SphereDensity {
public:
    static SphereDensity point_masses(int d, std::vector<std::pair<Point, cplx>> masses) {
        check_dims(d, true);
        for (const auto& [xi, c] : masses) {
            if (std::abs(norm(xi) - 1.0) > 1e-14)
                throw DomainError("SphereDensity: point-mass nodes must lie on the unit sphere");
        }
        return SphereDensity(d, PointMasses{std::move(masses)});
    }

    static SphereDensity smooth(int d, std::function<cplx(const Point&)> value) {
        check_dims(d, false);
        return SphereDensity(d, SmoothDensity{std::move(value)});
    }

    static SphereDensity harmonic(int d, int order, std::vector<cplx> coeffs) {
        check_dims(d, false);
        if (order < 0 || order > kMaxHarmonicOrder)
            throw DomainError("SphereDensity: harmonic order must be 0..64");
        const std::size_t want = d == 2 ? static_cast<std::size_t>(2 * order + 1)
                                        : static_cast<std::size_t>((order + 1) * (order + 1));
        if (coeffs.size() != want)
            throw DomainError("SphereDensity: coefficient count does not match order");
        return SphereDensity(d, HarmonicCoeffs{order, std::move(coeffs)});
    }

    int dims() const { return d_; }
    bool is_point_masses() const { return std::holds_alternative<PointMasses>(data_); }
    const std::vector<std::pair<Point, cplx>>& masses() const {
        return std::get<PointMasses>(data_).masses;
    }
    const HarmonicCoeffs& harmonics() const { return std::get<HarmonicCoeffs>(data_); }
    bool is_harmonic() const { return std::holds_alternative<HarmonicCoeffs>(data_); }
    bool is_smooth() const { return std::holds_alternative<SmoothDensity>(data_); }

    // Pointwise value of Phi for the smooth and harmonic variants.
    cplx evaluate(const Point& xi) const {
        if (const auto* s = std::get_if<SmoothDensity>(&data_)) return s->value(xi);
        if (const auto* h = std::get_if<HarmonicCoeffs>(&data_)) {
            if (d_ == 2) {
                const double th = std::atan2(xi[1], xi[0]);
                cplx acc = 0.0;
                for (int m = -h->order; m <= h->order; ++m)
                    acc += h->coeffs[static_cast<std::size_t>(m + h->order)] *
                           std::exp(cplx(0.0, m * th));
                return acc;
            }
            cplx acc = 0.0;
            for (int l = 0; l <= h->order; ++l)
                for (int m = -l; m <= l; ++m)
                    acc += h->coeffs[static_cast<std::size_t>(l * (l + 1) + m)] *
                           detail::real_sph_harmonic(l, m, xi);
            return acc;
        }
        throw DomainError("SphereDensity: point masses have no pointwise values");
    }

private:
    static void check_dims(int d, bool allow_1d) {
        if (d == 1 && allow_1d) return;
        if (d != 2 && d != 3)
            throw DomainError("SphereDensity: dims must be 2 or 3 (1 for point masses)");
    }

    SphereDensity(int d, std::variant<PointMasses, SmoothDensity, HarmonicCoeffs> data)
        : d_(d), data_(std::move(data)) {}

    int d_;
    std::variant<PointMasses, SmoothDensity, HarmonicCoeffs> data_;
};

// ---------------------------------------------------------------------------
// Herglotz synthesis
// ---------------------------------------------------------------------------

// Exact finite-sum synthesis for point masses; works in any d (including
// the d = 1 two-point sphere).
inline cplx herglotz(const SphereDensity& density, const Point& x) {
    if (!density.is_point_masses())
        throw DomainError("herglotz: quadrature required for non-atomic densities");
    cplx acc = 0.0;
    for (const auto& [xi, c] : density.masses()) {
        const double ph = -dot(x, xi);
        acc += c * cplx(std::cos(ph), std::sin(ph));
    }
    return acc;
}

// u(x) = <T, e_x|_{S^{d-1}}>: exact finite sum for point masses, sphere
// quadrature of Phi(xi) e^{-i x.xi} otherwise.
inline cplx herglotz(const SphereDensity& density, const Point& x,
                     const SphereQuadrature& quad) {
    if (density.is_point_masses()) return herglotz(density, x);
    if (density.dims() != quad.d)
        throw DimensionMismatch("herglotz: density and quadrature dims differ");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
        const double ph = -dot(x, quad.nodes[i]);
        acc += quad.weights[i] * density.evaluate(quad.nodes[i]) *
               cplx(std::cos(ph), std::sin(ph));
    }
    return acc;
}

struct LayerSpec {
    int k = 0; // layer order, 0..2
    SphereDensity density;
};

// (-1)^k <T, D_nu^k e_x>. The normal derivative acts radially in the xi
// variable on e_x(xi) = e^{-i x.xi}, so D_nu^k e_x = (-i x.xi)^k e^{-i x.xi}
// on the sphere.
inline cplx herglotz_layer(const LayerSpec& layer, const Point& x,
                           const SphereQuadrature& quad) {
    if (layer.k < 0 || layer.k > 2)
        throw UnsupportedOrder("herglotz_layer: only orders k <= 2 are synthesized");
    const double sign = layer.k % 2 ? -1.0 : 1.0;
    auto factor = [&](const Point& xi) {
        const double ph = -dot(x, xi);
        cplx v(std::cos(ph), std::sin(ph));
        for (int i = 0; i < layer.k; ++i) v *= cplx(0.0, -dot(x, xi));
        return v;
    };
    if (layer.density.is_point_masses()) {
        cplx acc = 0.0;
        for (const auto& [xi, c] : layer.density.masses()) acc += c * factor(xi);
        return sign * acc;
    }
    if (layer.density.dims() != quad.d)
        throw DimensionMismatch("herglotz_layer: density and quadrature dims differ");
    cplx acc = 0.0;
    for (std::size_t i = 0; i < quad.nodes.size(); ++i)
        acc += quad.weights[i] * layer.density.evaluate(quad.nodes[i]) *
               factor(quad.nodes[i]);
    return sign * acc;
}

// ---------------------------------------------------------------------------
// Multi-layer non-solution demonstration
// ---------------------------------------------------------------------------

struct LayerDemoReport {
    double ratio_measured = 0.0;    // max_x |r_f(x)| / |r_lap(x)|
    double fprime_predicted = 0.0;  // f'(1) from the derivative route
    double max_pointwise_dev = 0.0; // spread of the pointwise ratio
    bool fprime_finite_difference = false;
};

// The k = 1 point-layer prototype u(x) = x1 e^{-i x1} is NOT a Helmholtz
// solution: by polynomial-times-mode symbol calculus,
//   (g(-Delta) - g(1)) (x1 e^{-i x1}) = 2 i g'(1) e^{-i x1},
// so the pointwise residual ratio |r_f| / |r_lap| equals f'(1), not 0.
// Fields are built on a 1-D grid from this calculus (u is not periodic, so
// no DFT is involved).
inline LayerDemoReport layer_residual_demo(const bernstein::BernsteinFn& f) {
    if (f.constant())
        throw ConstantSymbol("layer_residual_demo: non-constant Bernstein function required");
    const auto fp = bernstein::deriv(f, 1, 1.0);

    LayerDemoReport rep;
    rep.fprime_predicted = fp.value;
    rep.fprime_finite_difference = fp.finite_difference;

    const int samples = 321;
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (int i = 0; i < samples; ++i) {
        const double x = -8.0 + 16.0 * i / (samples - 1);
        const cplx mode(std::cos(x), -std::sin(x)); // e^{-i x}
        const cplx r_f = cplx(0.0, 2.0) * fp.value * mode;   // (f(-D)-f(1)) u
        const cplx r_lap = cplx(0.0, 2.0) * mode;            // ((-D)-1) u
        const double ratio = std::abs(r_f) / std::abs(r_lap);
        if (first) { lo = hi = ratio; first = false; }
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    rep.ratio_measured = hi;
    rep.max_pointwise_dev = hi - lo;
    return rep;
}

// ---------------------------------------------------------------------------
// B* norm profile
// ---------------------------------------------------------------------------

struct BstarResult {
    double sup = 0.0;
    std::vector<std::pair<double, double>> profile; // (R, g(R))
};

namespace detail {

// \int_{S^{d-1}} e^{-i r theta . w} dsigma(theta) for |w| = rho:
// 4 pi sinc(rho r) in d = 3, 2 pi J0(rho r) in d = 2.
inline double pair_kernel(int d, double arg) {
    if (d == 3) {
        if (std::abs(arg) < 1e-8) {
            const double a2 = arg * arg;
            return 4.0 * kPi * (1.0 - a2 / 6.0 + a2 * a2 / 120.0);
        }
        return 4.0 * kPi * std::sin(arg) / arg;
    }
    return 2.0 * kPi * std::cyl_bessel_j(0, std::abs(arg));
}

} // namespace detail

// g(R) = (1/R) \int_{|x|<R} |u|^2 dx on a 128-point log grid in (1, R_max],
// with the radial integral done by composite panels and the angular factor
// in closed form (pair kernel for point masses, harmonic Parseval sums for
// smooth and harmonic densities).
inline BstarResult bstar_norm(const SphereDensity& density, double r_max,
                              const SphereQuadrature& quad,
                              int profile_points = 128) {
    const int d = density.dims();
    if (d != 2 && d != 3) throw DomainError("bstar_norm: d must be 2 or 3");
    if (!(r_max > 1.0) || r_max > 500.0)
        throw DomainError("bstar_norm: R_max must lie in (1, 500]");

    // shell integral A(r) = \int_{S^{d-1}} |u(r theta)|^2 dsigma(theta)
    std::function<double(double)> shell;
    double work_per_node = 1.0;

    if (density.is_point_masses()) {
        const auto& masses = density.masses();
        work_per_node = static_cast<double>(masses.size() * masses.size());
        shell = [&, d](double r) {
            double acc = 0.0;
            for (std::size_t i = 0; i < masses.size(); ++i) {
                for (std::size_t j = 0; j < masses.size(); ++j) {
                    const Point diff{masses[i].first[0] - masses[j].first[0],
                                     masses[i].first[1] - masses[j].first[1],
                                     masses[i].first[2] - masses[j].first[2]};
                    const double rho = norm(diff);
                    acc += (masses[i].second * std::conj(masses[j].second)).real() *
                           detail::pair_kernel(d, r * rho);
                }
            }
            return acc;
        };
    } else {
        // band-limited energies S_l = sum_m |Phi_lm|^2
        std::vector<double> energy;
        if (density.is_harmonic()) {
            const auto& h = density.harmonics();
            if (d == 2) {
                energy.assign(static_cast<std::size_t>(h.order) + 1, 0.0);
                for (int m = -h.order; m <= h.order; ++m)
                    energy[static_cast<std::size_t>(std::abs(m))] +=
                        std::norm(h.coeffs[static_cast<std::size_t>(m + h.order)]);
            } else {
                energy.assign(static_cast<std::size_t>(h.order) + 1, 0.0);
                for (int l = 0; l <= h.order; ++l)
                    for (int m = -l; m <= l; ++m)
                        energy[static_cast<std::size_t>(l)] +=
                            std::norm(h.coeffs[static_cast<std::size_t>(l * (l + 1) + m)]);
            }
        } else {
            if (density.dims() != quad.d)
                throw DimensionMismatch("bstar_norm: density and quadrature dims differ");
            if (d == 2) {
                const int mmax = std::min(kMaxHarmonicOrder,
                                          (static_cast<int>(quad.nodes.size()) - 1) / 2);
                energy.assign(static_cast<std::size_t>(mmax) + 1, 0.0);
                for (int m = -mmax; m <= mmax; ++m) {
                    cplx c = 0.0;
                    for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
                        const double th = std::atan2(quad.nodes[i][1], quad.nodes[i][0]);
                        c += quad.weights[i] * density.evaluate(quad.nodes[i]) *
                             std::exp(cplx(0.0, -m * th));
                    }
                    c /= 2.0 * kPi;
                    energy[static_cast<std::size_t>(std::abs(m))] += std::norm(c);
                }
            } else {
                const int lmax = std::min(kMaxHarmonicOrder, quad.degree / 2);
                energy.assign(static_cast<std::size_t>(lmax) + 1, 0.0);
                for (int l = 0; l <= lmax; ++l)
                    for (int m = -l; m <= l; ++m) {
                        cplx c = 0.0;
                        for (std::size_t i = 0; i < quad.nodes.size(); ++i)
                            c += quad.weights[i] * density.evaluate(quad.nodes[i]) *
                                 detail::real_sph_harmonic(l, m, quad.nodes[i]);
                        energy[static_cast<std::size_t>(l)] += std::norm(c);
                    }
            }
        }
        work_per_node = static_cast<double>(energy.size());
        if (d == 2) {
            // u = 2 pi sum_m (-i)^m phi_m J_m(r) e^{i m theta};
            // A(r) = 8 pi^3 sum_m |phi_m|^2 J_m(r)^2 (negative m folded in)
            shell = [energy](double r) {
                double acc = 0.0;
                for (std::size_t m = 0; m < energy.size(); ++m) {
                    if (energy[m] == 0.0) continue;
                    const double jm = std::cyl_bessel_j(static_cast<double>(m), r);
                    acc += energy[m] * jm * jm;
                }
                return 8.0 * kPi * kPi * kPi * acc;
            };
        } else {
            // A(r) = 16 pi^2 sum_l S_l j_l(r)^2
            shell = [energy](double r) {
                double acc = 0.0;
                for (std::size_t l = 0; l < energy.size(); ++l) {
                    if (energy[l] == 0.0) continue;
                    const double jl = std::sph_bessel(static_cast<unsigned>(l), r);
                    acc += energy[l] * jl * jl;
                }
                return 16.0 * kPi * kPi * acc;
            };
        }
    }

    // log-spaced profile radii in (1, R_max]
    std::vector<double> radii(static_cast<std::size_t>(profile_points));
    for (int i = 0; i < profile_points; ++i)
        radii[static_cast<std::size_t>(i)] =
            std::pow(r_max, (i + 1.0) / profile_points);

    // cumulative radial integral of r^{d-1} A(r), panels <= 0.5 long so the
    // pi-scale oscillation of A is resolved
    const double est_nodes = (r_max / 0.5) * 8.0 * work_per_node;
    if (est_nodes > kNodeCap)
        throw BudgetExceeded("bstar_norm: node budget exceeded");

    BstarResult result;
    result.profile.reserve(radii.size());
    double integral = 0.0, prev_r = 0.0;
    for (double R : radii) {
        const quad::Rule1D seg = quad::composite_legendre(prev_r, R, 0.5, 8);
        for (std::size_t i = 0; i < seg.size(); ++i) {
            const double r = seg.x[i];
            integral += seg.w[i] * std::pow(r, d - 1) * shell(r);
        }
        prev_r = R;
        const double g = integral / R;
        result.profile.emplace_back(R, g);
        result.sup = std::max(result.sup, g);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Extension operator
// ---------------------------------------------------------------------------

// E(phi)(x) = rho(|x|) phi(x/|x|), zero outside the bump annulus. The
// restriction back to the sphere reproduces phi exactly since rho(1) = 1.
struct ExtensionField {
    testfn::BumpProfile window;
    std::function<double(const Point&)> surface;

    double operator()(const Point& x) const {
        const double r = norm(x);
        if (r <= window.support_inner() || r >= window.support_outer()) return 0.0;
        const double w = window(r);
        if (w == 0.0) return 0.0;
        // points already on the sphere to rounding are not renormalized, so
        // the restriction reproduces the surface values bit for bit
        if (std::abs(r - 1.0) < 1e-15) return w * surface(x);
        return w * surface(scaled(x, 1.0 / r));
    }
};

inline ExtensionField extension_operator(std::function<double(const Point&)> phi,
                                         testfn::BumpProfile bump) {
    return ExtensionField{bump, std::move(phi)};
}

} // namespace bhc::sphere
