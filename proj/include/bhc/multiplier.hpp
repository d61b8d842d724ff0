#pragma once

// f(-Delta) as a discrete Fourier multiplier on periodic boxes.
//
// Fields live on [0, box)^d sampled n times per axis (n a power of two);
// the frequency lattice is xi = 2*pi*m/box for integer m. With box = 2*pi*L
// this is Z^d / L, and L = 1 puts integer-norm modes on the unit sphere.
// The DFT is unitary (symmetric 1/sqrt(N)), so Parseval holds literally and
// residual norms can be taken on either side of the transform.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bhc/bernstein.hpp"
#include "bhc/errors.hpp"

namespace bhc::multiplier {

using cplx = std::complex<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Energy fraction tolerated in the xi = 0 bin by helmholtz_residual.
inline constexpr double kZeroModeTol = 1e-14;

// ---------------------------------------------------------------------------
// GridFunction
// ---------------------------------------------------------------------------

class GridFunction {
public:
    GridFunction(int d, std::size_t n, double box)
        : d_(d), n_(n), box_(box) {
        if (d < 1 || d > 3) throw DomainError("GridFunction: dims must be 1, 2 or 3");
        if (n == 0 || (n & (n - 1)) != 0)
            throw SizeError("GridFunction: samples per axis must be a power of two");
        if (!(box > 0.0)) throw DomainError("GridFunction: box length must be > 0");
        std::size_t total = 1;
        for (int a = 0; a < d; ++a) total *= n;
        values_.assign(total, cplx(0.0, 0.0));
    }

    int dims() const { return d_; }
    std::size_t n() const { return n_; }
    double box() const { return box_; }
    std::size_t size() const { return values_.size(); }

    std::vector<cplx>& values() { return values_; }
    const std::vector<cplx>& values() const { return values_; }

    cplx& operator[](std::size_t i) { return values_[i]; }
    const cplx& operator[](std::size_t i) const { return values_[i]; }

    double norm2() const {
        double acc = 0.0;
        for (const cplx& v : values_) acc += std::norm(v);
        return std::sqrt(acc);
    }

    // Integer frequency for axis index k in [0, n): 0..n/2-1, then negative.
    long freq_of_index(std::size_t k) const {
        return k < n_ / 2 ? static_cast<long>(k)
                          : static_cast<long>(k) - static_cast<long>(n_);
    }

    // Decompose a flat index (row-major, last axis contiguous).
    std::array<std::size_t, 3> unravel(std::size_t flat) const {
        std::array<std::size_t, 3> idx{0, 0, 0};
        for (int a = d_ - 1; a >= 0; --a) {
            idx[static_cast<std::size_t>(a)] = flat % n_;
            flat /= n_;
        }
        return idx;
    }

    // |xi|^2 of the lattice point behind a flat frequency-side index.
    double xi_norm2(std::size_t flat) const {
        const double step = kTwoPi / box_;
        const auto idx = unravel(flat);
        double acc = 0.0;
        for (int a = 0; a < d_; ++a) {
            const double c = step * static_cast<double>(freq_of_index(idx[static_cast<std::size_t>(a)]));
            acc += c * c;
        }
        return acc;
    }

private:
    int d_;
    std::size_t n_;
    double box_;
    std::vector<cplx> values_;
};

// ---------------------------------------------------------------------------
// Unitary DFT (radix-2, grids are power-of-two by construction)
// ---------------------------------------------------------------------------

namespace detail {

// In-place radix-2 transform of a contiguous line. twiddles[k] = e^{-2 pi i k/n};
// inverse transforms conjugate on the fly. No normalization here.
inline void fft_line(cplx* a, std::size_t n, bool inverse,
                     const std::vector<cplx>& twiddles) {
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1;
        const std::size_t step = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                cplx w = twiddles[k * step];
                if (inverse) w = std::conj(w);
                const cplx u = a[start + k];
                const cplx v = a[start + k + half] * w;
                a[start + k] = u + v;
                a[start + k + half] = u - v;
            }
        }
    }
}

inline std::vector<cplx> make_twiddles(std::size_t n) {
    std::vector<cplx> tw(std::max<std::size_t>(n / 2, 1));
    for (std::size_t k = 0; k < tw.size(); ++k) {
        const double ang = -kTwoPi * static_cast<double>(k) / static_cast<double>(n);
        tw[k] = cplx(std::cos(ang), std::sin(ang));
    }
    return tw;
}

inline GridFunction transform(const GridFunction& u, bool inverse) {
    GridFunction out = u;
    const std::size_t n = u.n();
    const int d = u.dims();
    const auto twiddles = make_twiddles(n);
    std::vector<cplx> line(n);
    auto& vals = out.values();

    // stride of axis a in the row-major layout
    std::size_t stride = 1;
    for (int a = d - 1; a >= 0; --a) {
        const std::size_t nlines = vals.size() / n;
        for (std::size_t l = 0; l < nlines; ++l) {
            // base offset of the l-th line along this axis
            const std::size_t block = l / stride;
            const std::size_t rem = l % stride;
            const std::size_t base = block * stride * n + rem;
            for (std::size_t k = 0; k < n; ++k) line[k] = vals[base + k * stride];
            fft_line(line.data(), n, inverse, twiddles);
            for (std::size_t k = 0; k < n; ++k) vals[base + k * stride] = line[k];
        }
        stride *= n;
    }
    const double scale = std::pow(static_cast<double>(vals.size()), -0.5);
    for (cplx& v : vals) v *= scale;
    return out;
}

} // namespace detail

inline GridFunction forward_transform(const GridFunction& u) {
    return detail::transform(u, false);
}

inline GridFunction inverse_transform(const GridFunction& u) {
    return detail::transform(u, true);
}

// ---------------------------------------------------------------------------
// Mode synthesis
// ---------------------------------------------------------------------------

// Integer lattice vector (unused trailing components zero).
using LatticeVector = std::array<long, 3>;

// Sample sum_j c_j e^{-i x . xi_j} with xi_j = 2 pi m_j / box. Phases are
// reduced to integers mod n before sin/cos, so lattice modes are sampled to
// within an ulp regardless of position.
inline GridFunction synthesize_modes(
    int d, std::size_t n, double box,
    const std::vector<std::pair<LatticeVector, cplx>>& modes) {
    GridFunction u(d, n, box);
    const long ln = static_cast<long>(n);
    for (std::size_t flat = 0; flat < u.size(); ++flat) {
        const auto idx = u.unravel(flat);
        cplx acc = 0.0;
        for (const auto& [m, c] : modes) {
            long p = 0;
            for (int a = 0; a < d; ++a)
                p += static_cast<long>(idx[static_cast<std::size_t>(a)]) *
                     m[static_cast<std::size_t>(a)];
            p = ((p % ln) + ln) % ln;
            const double ang = -kTwoPi * static_cast<double>(p) / static_cast<double>(n);
            acc += c * cplx(std::cos(ang), std::sin(ang));
        }
        u[flat] = acc;
    }
    return u;
}

// The on-sphere integer modes |m| = 1: (+-1, 0, ..), (0, +-1, ..), ...
inline std::vector<LatticeVector> unit_sphere_modes(int d) {
    std::vector<LatticeVector> out;
    for (int a = 0; a < d; ++a) {
        LatticeVector plus{0, 0, 0}, minus{0, 0, 0};
        plus[static_cast<std::size_t>(a)] = 1;
        minus[static_cast<std::size_t>(a)] = -1;
        out.push_back(plus);
        out.push_back(minus);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Symbol application
// ---------------------------------------------------------------------------

// Radial multiplier f(|xi|^2), optionally shifted by a constant (f(1) for
// the residual form).
struct MultiplierSymbol {
    bernstein::BernsteinFn f;
    std::optional<double> shift;

    double operator()(double xi2) const {
        return f.closed_eval(xi2) - shift.value_or(0.0);
    }
};

inline GridFunction apply_symbol(const GridFunction& u, const MultiplierSymbol& sym) {
    if (sym.shift && sym.f.constant())
        throw ConstantSymbol("apply_symbol: shifted symbol of a constant function");
    GridFunction hat = forward_transform(u);
    for (std::size_t i = 0; i < hat.size(); ++i) hat[i] *= sym(hat.xi_norm2(i));
    return inverse_transform(hat);
}

// ---------------------------------------------------------------------------
// Residuals
// ---------------------------------------------------------------------------

struct ResidualReport {
    double res_f = 0.0;                    // ||f(-Delta)u - f(1)u|| / ||u||
    double res_lap = 0.0;                  // ||(-Delta)u - u|| / ||u||
    std::optional<double> ratio;           // res_f / res_lap when res_lap > 1e-14
    double spectral_offsphere_energy = 0.0; // energy fraction with ||xi|-1| >= delta
};

inline ResidualReport helmholtz_residual(const GridFunction& u,
                                         const bernstein::BernsteinFn& f,
                                         double delta = 0.1) {
    if (f.constant())
        throw ConstantSymbol("helmholtz_residual: non-constant Bernstein function required");
    const GridFunction hat = forward_transform(u);

    double energy = 0.0;
    for (std::size_t i = 0; i < hat.size(); ++i) energy += std::norm(hat[i]);
    if (energy <= 0.0) throw DomainError("helmholtz_residual: u must be nonzero");
    if (std::norm(hat[0]) > kZeroModeTol * energy)
        throw ZeroModeEnergy("helmholtz_residual: energy at xi = 0 exceeds tolerance");

    double acc_f = 0.0, acc_lap = 0.0, off = 0.0;
    for (std::size_t i = 0; i < hat.size(); ++i) {
        const double e = std::norm(hat[i]);
        if (e == 0.0) continue;
        const double xi2 = hat.xi_norm2(i);
        const double sf = f.closed_eval(xi2) - f.f1;
        const double sl = xi2 - 1.0;
        acc_f += sf * sf * e;
        acc_lap += sl * sl * e;
        if (std::abs(std::sqrt(xi2) - 1.0) >= delta) off += e;
    }
    ResidualReport rep;
    rep.res_f = std::sqrt(acc_f / energy);
    rep.res_lap = std::sqrt(acc_lap / energy);
    if (rep.res_lap > 1e-14) rep.ratio = rep.res_f / rep.res_lap;
    rep.spectral_offsphere_energy = off / energy;
    return rep;
}

inline double spectral_support(const GridFunction& u, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw DomainError("spectral_support: delta must lie in (0, 1)");
    const GridFunction hat = forward_transform(u);
    double energy = 0.0, off = 0.0;
    for (std::size_t i = 0; i < hat.size(); ++i) {
        const double e = std::norm(hat[i]);
        energy += e;
        if (std::abs(std::sqrt(hat.xi_norm2(i)) - 1.0) >= delta) off += e;
    }
    if (energy <= 0.0) throw DomainError("spectral_support: u must be nonzero");
    return off / energy;
}

// ---------------------------------------------------------------------------
// Lattice reachability and the omega-ratio sweep
// ---------------------------------------------------------------------------

struct LatticeMode {
    LatticeVector m{0, 0, 0};
    long box_multiple = 1;  // box = 2 pi L
    double lambda = 0.0;    // realized |xi|^2 = |m|^2 / L^2
};

inline constexpr long kMaxBoxMultiple = 32;

// Find integer m and box multiple L <= L_max with | |m|^2/L^2 - lambda |
// within tolerance. Plane waves are periodic only on compatible boxes.
inline LatticeMode find_lattice_mode(int d, double lambda,
                                     long l_max = kMaxBoxMultiple) {
    if (!(lambda > 0.0)) throw DomainError("find_lattice_mode: lambda must be > 0");
    const double tol = 1e-12 * std::max(1.0, lambda);
    for (long L = 1; L <= l_max; ++L) {
        const double target = lambda * static_cast<double>(L) * static_cast<double>(L);
        const long near = std::llround(target);
        if (near <= 0 || std::abs(target - static_cast<double>(near)) > tol) continue;
        const long rmax = static_cast<long>(std::sqrt(static_cast<double>(near))) + 1;
        if (d == 1) {
            for (long m1 = 0; m1 <= rmax; ++m1)
                if (m1 * m1 == near)
                    return {{m1, 0, 0}, L, static_cast<double>(near) / static_cast<double>(L * L)};
        } else if (d == 2) {
            for (long m1 = 0; m1 <= rmax; ++m1) {
                const long rest = near - m1 * m1;
                if (rest < 0) break;
                const long m2 = static_cast<long>(std::sqrt(static_cast<double>(rest)) + 0.5);
                if (m2 * m2 == rest)
                    return {{m1, m2, 0}, L, static_cast<double>(near) / static_cast<double>(L * L)};
            }
        } else {
            for (long m1 = 0; m1 <= rmax; ++m1) {
                for (long m2 = m1; m1 * m1 + m2 * m2 <= near; ++m2) {
                    const long rest = near - m1 * m1 - m2 * m2;
                    const long m3 = static_cast<long>(std::sqrt(static_cast<double>(rest)) + 0.5);
                    if (m3 * m3 == rest)
                        return {{m1, m2, m3}, L, static_cast<double>(near) / static_cast<double>(L * L)};
                }
            }
        }
    }
    throw LatticeUnreachable("find_lattice_mode: no lattice realizes lambda within bounds");
}

struct SweepRow {
    double lambda = 0.0;
    double res_f = 0.0;
    double res_lap = 0.0;
    std::optional<double> ratio;
    double omega_pred = 0.0;
    std::string note;
};

// Single-mode certificate of the ratio identity: for u = e^{-i x . xi0},
// res_f / res_lap = |f(|xi0|^2) - f(1)| / ||xi0|^2 - 1| = omega(|xi0|^2).
inline std::vector<SweepRow> omega_ratio_sweep(const bernstein::BernsteinFn& f,
                                               const std::vector<double>& lambdas,
                                               int d = 2, std::size_t n_min = 64) {
    if (f.constant())
        throw ConstantSymbol("omega_ratio_sweep: non-constant Bernstein function required");
    std::vector<SweepRow> rows;
    rows.reserve(lambdas.size());
    for (double lam : lambdas) {
        SweepRow row;
        row.lambda = lam;
        row.omega_pred = bernstein::omega(f, lam);
        if (std::abs(lam - 1.0) <= 1e-12) {
            row.note = "eigen: ratio undefined";
            rows.push_back(row);
            continue;
        }
        const LatticeMode mode = find_lattice_mode(d, lam);
        long maxcomp = 0;
        for (long c : mode.m) maxcomp = std::max(maxcomp, std::labs(c));
        std::size_t n = n_min;
        while (static_cast<long>(n / 2) <= 2 * maxcomp) n *= 2;
        const GridFunction u = synthesize_modes(
            d, n, kTwoPi * static_cast<double>(mode.box_multiple), {{mode.m, cplx(1.0, 0.0)}});
        const ResidualReport rep = helmholtz_residual(u, f);
        row.lambda = mode.lambda;
        row.res_f = rep.res_f;
        row.res_lap = rep.res_lap;
        row.ratio = rep.ratio;
        row.omega_pred = bernstein::omega(f, mode.lambda);
        rows.push_back(row);
    }
    return rows;
}

} // namespace bhc::multiplier
