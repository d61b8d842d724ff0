#pragma once

// Bernstein functions f(lambda) = a + b*lambda + ∫ (1 - e^{-lambda t}) dmu(t),
// their derivatives f^{(n)}(lambda) = (-1)^{n-1} ∫ t^n e^{-lambda t} dmu(t),
// and the quotient symbol omega(lambda) = (f(lambda) - f(1)) / (lambda - 1).
//
// Levy measures are carried either as closed-form families (fractional
// subordinator density, gamma subordinator density) or as explicit
// quadrature nodes. Closed families are discretized once, at construction:
//   (0, t0]   Gauss-Jacobi rule with weight t^{-sigma}   (t0 = 1e-4)
//   [t0, 1]   composite Gauss-Legendre in s = log t
//   [1, e^S]  composite Gauss-Legendre in s = log t, S family-specific
// so that one fixed node set integrates every h with h(0) = 0 and
// h(t)/t smooth (h = 1 - e^{-lambda t} and h = t^n e^{-lambda t}) to
// ~1e-12 relative accuracy for lambda in [1e-8, ~1e4].

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <cstdio>
#include <string>
#include <variant>
#include <vector>

#include "bhc/errors.hpp"
#include "bhc/quadrature.hpp"

namespace bhc::bernstein {

// ---------------------------------------------------------------------------
// Measures
// ---------------------------------------------------------------------------

// Discrete surrogate for mu: ∫ h dmu ~ Σ w_k h(t_k), valid for integrands
// with h(0) = 0 and h(t)/t smooth.
struct MeasureNode {
    double t;
    double w;
};

// Closed-form Levy density dmu/dt = density(t), behaving like
// C * t^{-1-sigma} as t -> 0 and negligible beyond t = e^{log_cutoff}.
struct ClosedFamily {
    std::string family;                     // "fractional" | "gamma"
    double sigma = 0.0;                     // small-t singularity exponent, in [0, 1)
    std::function<double(double)> density;  // dmu/dt on (0, inf)
    double log_cutoff = 5.0;                // support truncation at t = e^{log_cutoff}
};

// Explicit nodes: strictly increasing t_k > 0, weights w_k >= 0.
struct QuadratureNodes {
    std::vector<double> t;
    std::vector<double> w;
};

// monostate = zero measure.
using MeasureSpec = std::variant<std::monostate, ClosedFamily, QuadratureNodes>;

// Gate for the discretized integrability sum Σ (1 ∧ t_k) w_k.
inline constexpr double kIntegrabilityCap = 1e12;

namespace detail {

inline std::vector<MeasureNode> discretize(const ClosedFamily& fam) {
    constexpr double t0 = 1e-4;       // Jacobi panel upper edge
    constexpr int jacobi_nodes = 24;
    constexpr int per_panel = 16;
    constexpr double panel_len = 1.0; // in s = log t

    std::vector<MeasureNode> nodes;

    // Singular panel (0, t0]: ∫ h dmu = ∫ [h(t)/t * density(t) t^{1+sigma}] t^{-sigma} dt.
    // Gauss-Jacobi with weight (1+x)^{-sigma} on [-1,1], mapped by t = t0 (1+x)/2.
    {
        const quad::Rule1D gj = quad::gauss_jacobi(jacobi_nodes, 0.0, -fam.sigma);
        const double scale = std::pow(t0 / 2.0, 1.0 - fam.sigma);
        for (std::size_t i = 0; i < gj.size(); ++i) {
            const double t = t0 * (1.0 + gj.x[i]) / 2.0;
            if (t <= 0.0) continue;
            const double w = scale * gj.w[i] * fam.density(t) * std::pow(t, fam.sigma);
            nodes.push_back({t, w});
        }
    }

    // Smooth remainder [t0, e^S]: substitute t = e^s, dmu = density(e^s) e^s ds.
    {
        const double s_lo = std::log(t0);
        const double s_hi = fam.log_cutoff;
        const quad::Rule1D gl = quad::composite_legendre(s_lo, s_hi, panel_len, per_panel);
        for (std::size_t i = 0; i < gl.size(); ++i) {
            const double t = std::exp(gl.x[i]);
            nodes.push_back({t, gl.w[i] * fam.density(t) * t});
        }
    }
    return nodes;
}

} // namespace detail

// (a, b, mu) with a, b >= 0; the measure is discretized once at construction.
class LevyTriple {
public:
    LevyTriple() = default;

    LevyTriple(double a, double b, MeasureSpec measure)
        : a_(a), b_(b), measure_(std::move(measure)) {
        if (a_ < 0.0 || b_ < 0.0)
            throw DomainError("LevyTriple: constant and drift parts must be >= 0");
        if (const auto* fam = std::get_if<ClosedFamily>(&measure_)) {
            if (fam->sigma < 0.0 || fam->sigma >= 1.0)
                throw DomainError("LevyTriple: family singularity exponent must lie in [0,1)");
            nodes_ = detail::discretize(*fam);
        } else if (const auto* qn = std::get_if<QuadratureNodes>(&measure_)) {
            if (qn->t.size() != qn->w.size())
                throw DomainError("LevyTriple: node/weight count mismatch");
            double prev = 0.0;
            nodes_.reserve(qn->t.size());
            for (std::size_t i = 0; i < qn->t.size(); ++i) {
                if (!(qn->t[i] > prev))
                    throw DomainError("LevyTriple: nodes must be strictly increasing and positive");
                if (qn->w[i] < 0.0)
                    throw DomainError("LevyTriple: weights must be >= 0");
                prev = qn->t[i];
                nodes_.push_back({qn->t[i], qn->w[i]});
            }
        }
        mass_ = 0.0;
        for (const auto& nd : nodes_) mass_ += std::min(1.0, nd.t) * nd.w;
        if (!std::isfinite(mass_) || mass_ > kIntegrabilityCap)
            throw NonIntegrableMeasure("LevyTriple: discretized (1 ∧ t) mass exceeds cap");
    }

    double a() const { return a_; }
    double b() const { return b_; }
    const MeasureSpec& measure() const { return measure_; }
    const std::vector<MeasureNode>& nodes() const { return nodes_; }
    bool has_measure() const { return !nodes_.empty(); }

    // Σ (1 ∧ t_k) w_k, the discrete version of ∫ (1 ∧ t) dmu.
    double integrability_mass() const { return mass_; }

private:
    double a_ = 0.0;
    double b_ = 0.0;
    MeasureSpec measure_;
    std::vector<MeasureNode> nodes_;
    double mass_ = 0.0;
};

// ---------------------------------------------------------------------------
// Levy-representation evaluation
// ---------------------------------------------------------------------------

// f(lambda) = a + b lambda + Σ w_k (1 - e^{-lambda t_k}).
inline double eval_from_triple(const LevyTriple& triple, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("eval_from_triple: lambda must be > 0");
    double acc = triple.a() + triple.b() * lambda;
    for (const auto& nd : triple.nodes())
        acc += nd.w * (-std::expm1(-lambda * nd.t));
    return acc;
}

namespace detail {

// ∫ t^n e^{-lambda t} dmu, evaluated in log space to dodge overflow at the
// far nodes (t up to e^{160} for small sigma).
inline double moment_integral(const LevyTriple& triple, int n, double lambda) {
    double acc = 0.0;
    for (const auto& nd : triple.nodes()) {
        const double logterm = n * std::log(nd.t) - lambda * nd.t;
        if (logterm < -745.0) continue; // exp underflows to 0
        acc += nd.w * std::exp(logterm);
    }
    return acc;
}

// Central finite differences of 4th order for n = 1..4, used when no
// triple is available. Step scaled to lambda and to the derivative order.
inline double central_fd(const std::function<double(double)>& f, int n, double lambda) {
    const double scale = std::max(lambda, 0.25);
    static constexpr double kStep[5] = {0.0, 6.0e-4, 2.2e-3, 5.2e-3, 1.0e-2};
    double h = scale * kStep[n];
    if (3.0 * h >= lambda) h = lambda / 4.0;
    const auto F = [&](double k) { return f(lambda + k * h); };
    switch (n) {
        case 1:
            return (F(-2) - 8.0 * F(-1) + 8.0 * F(1) - F(2)) / (12.0 * h);
        case 2:
            return (-F(-2) + 16.0 * F(-1) - 30.0 * F(0) + 16.0 * F(1) - F(2)) / (12.0 * h * h);
        case 3:
            return (F(-3) - 8.0 * F(-2) + 13.0 * F(-1) - 13.0 * F(1) + 8.0 * F(2) - F(3)) /
                   (8.0 * h * h * h);
        case 4:
            return (-F(-3) + 12.0 * F(-2) - 39.0 * F(-1) + 56.0 * F(0) - 39.0 * F(1) +
                    12.0 * F(2) - F(3)) / (6.0 * h * h * h * h);
        default:
            throw DomainError("central_fd: derivative order must be 1..4");
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// BernsteinFn
// ---------------------------------------------------------------------------

// Catalogue entry: closed-form evaluation plus (optionally) the Levy triple.
// f(1), f'(1), f''(1), f'''(1) are cached at construction; the higher two
// feed the Taylor branch of omega.
struct BernsteinFn {
    std::string name;
    std::function<double(double)> closed_eval; // lambda -> f(lambda), valid on [0, inf)
    std::optional<LevyTriple> triple;
    double f1 = 0.0;
    double fprime1 = 0.0;
    double fpp1 = 0.0;
    double fppp1 = 0.0;

    bool constant() const { return fprime1 <= 1e-14; }
};

struct DerivResult {
    double value = 0.0;
    bool finite_difference = false; // true when no triple backed the computation
    operator double() const { return value; }
};

// f^{(n)}(lambda). With a triple: b [n=1] + (-1)^{n-1} ∫ t^n e^{-lambda t} dmu.
// Without: 4th-order central differences of closed_eval, flagged as such.
inline DerivResult deriv(const BernsteinFn& f, int n, double lambda) {
    if (n < 1) throw DomainError("deriv: order must be >= 1");
    if (!(lambda > 0.0)) throw DomainError("deriv: lambda must be > 0");
    if (f.triple) {
        const LevyTriple& tr = *f.triple;
        double v = detail::moment_integral(tr, n, lambda);
        if (n % 2 == 0) v = -v;
        if (n == 1) v += tr.b();
        return {v, false};
    }
    if (n > 4) throw DomainError("deriv: finite-difference fallback supports n <= 4");
    return {detail::central_fd(f.closed_eval, n, lambda), true};
}

// Taylor seam half-width for omega around lambda = 1.
inline constexpr double kOmegaSeam = 1e-4;

// Positivity gate for 1/omega.
inline constexpr double kZeroTol = 1e-12;

// omega(lambda) = (f(lambda) - f(1)) / (lambda - 1), with the removable
// singularity at 1 filled by the 3-term Taylor value around f'(1).
inline double omega(const BernsteinFn& f, double lambda) {
    if (!(lambda > 0.0)) throw DomainError("omega: lambda must be > 0");
    const double h = lambda - 1.0;
    if (std::abs(h) < kOmegaSeam)
        return f.fprime1 + f.fpp1 * h / 2.0 + f.fppp1 * h * h / 6.0;
    return (f.closed_eval(lambda) - f.f1) / h;
}

inline double inv_omega(const BernsteinFn& f, double lambda) {
    const double w = omega(f, lambda);
    if (w <= kZeroTol)
        throw NearZeroSymbol("inv_omega: omega(lambda) <= zero tolerance");
    return 1.0 / w;
}

// max over a log grid lambda in (1e-8, 1) of |lambda^n f^{(n)}(lambda)|.
// For n = 0 this is sup |f| = f(1^-) since f is nondecreasing.
inline double lambda_pow_deriv_bound(const BernsteinFn& f, int n, int grid_points = 240) {
    if (n < 0) throw DomainError("lambda_pow_deriv_bound: order must be >= 0");
    if (n > 0 && !f.triple)
        throw DomainError("lambda_pow_deriv_bound: requires a Levy triple");
    const double lo = 1e-8, hi = 1.0 - 1e-9;
    double best = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double s = static_cast<double>(i) / (grid_points - 1);
        const double lam = lo * std::pow(hi / lo, s);
        const double v = (n == 0) ? f.closed_eval(lam)
                                  : std::pow(lam, n) * static_cast<double>(deriv(f, n, lam));
        best = std::max(best, std::abs(v));
    }
    return best;
}

// ---------------------------------------------------------------------------
// Catalogue
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_param(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

inline void fill_caches(BernsteinFn& f) {
    f.f1 = f.closed_eval(1.0);
    if (f.triple) {
        f.fprime1 = deriv(f, 1, 1.0).value;
        f.fpp1 = deriv(f, 2, 1.0).value;
        f.fppp1 = deriv(f, 3, 1.0).value;
    } else {
        f.fprime1 = central_fd(f.closed_eval, 1, 1.0);
        f.fpp1 = central_fd(f.closed_eval, 2, 1.0);
        f.fppp1 = central_fd(f.closed_eval, 3, 1.0);
    }
}

} // namespace detail

// Fractional power lambda^sigma, sigma in (0, 1]. The subordinator measure
// is (sigma / Gamma(1-sigma)) t^{-1-sigma} dt; sigma = 1 degenerates to the
// pure drift (0, 1, 0).
inline BernsteinFn make_fractional(double sigma) {
    if (!(sigma > 0.0) || sigma > 1.0)
        throw DomainError("make_fractional: sigma must lie in (0, 1]");
    BernsteinFn f;
    f.name = "fractional:" + detail::format_param(sigma);
    f.closed_eval = [sigma](double lam) { return std::pow(lam, sigma); };
    if (sigma == 1.0) {
        f.triple = LevyTriple(0.0, 1.0, std::monostate{});
    } else {
        const double c = sigma / std::tgamma(1.0 - sigma);
        ClosedFamily fam;
        fam.family = "fractional";
        fam.sigma = sigma;
        fam.density = [c, sigma](double t) { return c * std::pow(t, -1.0 - sigma); };
        fam.log_cutoff = std::max(41.5 / sigma, 30.0);
        f.triple = LevyTriple(0.0, 0.0, std::move(fam));
    }
    detail::fill_caches(f);
    return f;
}

// log(1 + lambda), the gamma-subordinator symbol with density e^{-t}/t
// (Frullani integral).
inline BernsteinFn make_log1p() {
    BernsteinFn f;
    f.name = "log1p";
    f.closed_eval = [](double lam) { return std::log1p(lam); };
    ClosedFamily fam;
    fam.family = "gamma";
    fam.sigma = 0.0;
    fam.density = [](double t) { return std::exp(-t) / t; };
    fam.log_cutoff = 4.5;
    f.triple = LevyTriple(0.0, 0.0, std::move(fam));
    detail::fill_caches(f);
    return f;
}

// sqrt(lambda) * tanh(sqrt(lambda)). Closed form only: no measure is
// shipped for it, so derivatives fall back to finite differences.
inline BernsteinFn make_sqrt_tanh_sqrt() {
    BernsteinFn f;
    f.name = "sqrt-tanh-sqrt";
    f.closed_eval = [](double lam) {
        const double s = std::sqrt(lam);
        return s * std::tanh(s);
    };
    detail::fill_caches(f);
    return f;
}

// a + b lambda with mu = 0.
inline BernsteinFn make_affine(double a, double b) {
    BernsteinFn f;
    f.name = "affine:" + detail::format_param(a) + "," + detail::format_param(b);
    f.closed_eval = [a, b](double lam) { return a + b * lam; };
    f.triple = LevyTriple(a, b, std::monostate{});
    detail::fill_caches(f);
    return f;
}

// Parse a catalogue id: "fractional:<sigma>", "log1p", "sqrt-tanh-sqrt",
// "affine:<a>,<b>".
inline BernsteinFn make_function(const std::string& id) {
    const auto colon = id.find(':');
    const std::string head = id.substr(0, colon);
    const std::string args = colon == std::string::npos ? "" : id.substr(colon + 1);
    try {
        if (head == "fractional") {
            if (args.empty()) throw ParseError("fractional needs an exponent");
            return make_fractional(std::stod(args));
        }
        if (head == "log1p") return make_log1p();
        if (head == "sqrt-tanh-sqrt") return make_sqrt_tanh_sqrt();
        if (head == "affine") {
            const auto comma = args.find(',');
            if (comma == std::string::npos)
                throw ParseError("affine needs two parameters a,b");
            return make_affine(std::stod(args.substr(0, comma)),
                               std::stod(args.substr(comma + 1)));
        }
    } catch (const std::invalid_argument&) {
        throw ParseError("make_function: bad numeric parameter in id '" + id + "'");
    } catch (const std::out_of_range&) {
        throw ParseError("make_function: parameter out of range in id '" + id + "'");
    }
    throw ParseError("make_function: unknown function id '" + id + "'");
}

// Default roster used by the verification suites.
inline std::vector<BernsteinFn> catalogue() {
    std::vector<BernsteinFn> cat;
    cat.push_back(make_fractional(0.25));
    cat.push_back(make_fractional(0.5));
    cat.push_back(make_fractional(0.75));
    cat.push_back(make_fractional(1.0));
    cat.push_back(make_log1p());
    cat.push_back(make_sqrt_tanh_sqrt());
    cat.push_back(make_affine(0.0, 1.0));
    return cat;
}

} // namespace bhc::bernstein
