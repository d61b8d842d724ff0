// bhc command-line front end.
//
// Commands: catalogue, bernstein-eval, verify-helmholtz, synth-herglotz,
// bstar, subordinate. Exit codes: 0 all assertions pass, 1 numeric assertion
// failure, 2 usage/config error, 3 internal numeric failure.
//
// Options may come from a JSON config file (--config); explicit flags win on
// conflict. All randomness is driven by --seed (default 0), so identical
// config + seed produces byte-identical CSV/JSON output.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bhc/bernstein.hpp"
#include "bhc/io.hpp"
#include "bhc/multiplier.hpp"
#include "bhc/sphere.hpp"
#include "bhc/subordination.hpp"

namespace {

using bhc::io::format_double;
using bhc::io::json;

constexpr int kExitPass = 0;
constexpr int kExitAssertFail = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

std::vector<double> parse_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stod(item));
    }
    if (out.empty()) throw bhc::ParseError("empty numeric list");
    return out;
}

void write_text(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(out_path);
    if (!os) throw bhc::ParseError("cannot open output file '" + out_path + "'");
    os << text;
}

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream is(path);
    if (!is) throw bhc::ParseError("cannot open config file '" + path + "'");
    try {
        json j;
        is >> j;
        if (!j.is_object()) throw bhc::ParseError("config must be a JSON object");
        return j;
    } catch (const json::exception& e) {
        throw bhc::ParseError(std::string("config parse: ") + e.what());
    }
}

// Fill `var` from the config file unless the flag appeared on the command
// line (flags win on conflict). Keys the subcommand does not define are
// ignored.
template <class T>
void cfg(CLI::App* cmd, const json& conf, const std::string& name, T& var) {
    const CLI::Option* opt = cmd->get_option_no_throw("--" + name);
    if (!opt || opt->count() > 0) return;
    if (!conf.contains(name)) return;
    var = conf.at(name).get<T>();
}

struct Assertion {
    std::string name;
    std::string ref;
    double measured = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

json to_json(const Assertion& a) {
    return json{{"name", a.name},
                {"paper_ref", a.ref},
                {"measured", a.measured},
                {"threshold", a.threshold},
                {"pass", a.pass}};
}

// ---------------------------------------------------------------------------

int run_catalogue(const std::string& out) {
    std::string csv = "id,f1,fprime1,has_triple\n";
    for (const auto& f : bhc::bernstein::catalogue()) {
        csv += f.name + "," + format_double(f.f1) + "," + format_double(f.fprime1) +
               "," + (f.triple ? "1" : "0") + "\n";
    }
    write_text(out, csv);
    return kExitPass;
}

int run_bernstein_eval(const std::string& fn_id, const std::vector<double>& lambdas,
                       const std::string& out) {
    const auto f = bhc::bernstein::make_function(fn_id);
    std::string csv = "lambda,f,f1,fprime,omega\n";
    for (double lam : lambdas) {
        const double fv = f.closed_eval(lam);
        const double fp = bhc::bernstein::deriv(f, 1, lam);
        const double om = bhc::bernstein::omega(f, lam);
        csv += format_double(lam) + "," + format_double(fv) + "," +
               format_double(f.f1) + "," + format_double(fp) + "," +
               format_double(om) + "\n";
    }
    write_text(out, csv);
    return kExitPass;
}

int run_verify_helmholtz(const std::string& fn_id, int d, std::size_t n, double box,
                         const std::vector<double>& lambdas, double delta,
                         double tol_eigen, double tol_ratio, const std::string& out) {
    const auto f = bhc::bernstein::make_function(fn_id);
    if (f.constant())
        throw bhc::ConstantSymbol("non-constant Bernstein function required");

    std::vector<Assertion> assertions;
    json sweep_rows = json::array();

    // forward eigen certificate: on-sphere superposition has zero residual
    const double lreal = box / bhc::multiplier::kTwoPi;
    const long L = std::lround(lreal);
    if (L < 1 || std::abs(lreal - static_cast<double>(L)) > 1e-9)
        throw bhc::DomainError("box must be an integer multiple of 2*pi");
    std::vector<std::pair<bhc::multiplier::LatticeVector, bhc::multiplier::cplx>> modes;
    for (auto m : bhc::multiplier::unit_sphere_modes(d)) {
        for (auto& c : m) c *= L; // |xi| = |m|/L = 1
        modes.push_back({m, bhc::multiplier::cplx(1.0, 0.0)});
    }
    const auto u = bhc::multiplier::synthesize_modes(d, n, box, modes);
    const auto rep = bhc::multiplier::helmholtz_residual(u, f, delta);
    Assertion eig{"on_sphere_res_f", "eigen-certificate", rep.res_f, tol_eigen,
                  rep.res_f <= tol_eigen};
    assertions.push_back(eig);
    Assertion off{"on_sphere_offsphere_energy", "support-lemma",
                  rep.spectral_offsphere_energy, tol_eigen,
                  rep.spectral_offsphere_energy <= tol_eigen};
    assertions.push_back(off);

    // equivalence certificate: single-mode ratio equals omega(lambda)
    for (const auto& row : bhc::multiplier::omega_ratio_sweep(f, lambdas, d)) {
        json jrow{{"lambda", row.lambda},
                  {"res_f", row.res_f},
                  {"res_lap", row.res_lap},
                  {"omega_pred", row.omega_pred}};
        if (row.ratio) {
            jrow["ratio"] = *row.ratio;
            const double dev = std::abs(*row.ratio - row.omega_pred);
            const double thr = tol_ratio * std::abs(row.omega_pred);
            assertions.push_back({"ratio_lambda_" + format_double(row.lambda),
                                  "omega-ratio-identity", dev, thr, dev <= thr});
        } else {
            jrow["note"] = row.note;
        }
        sweep_rows.push_back(jrow);
    }

    bool all_pass = true;
    json jassert = json::array();
    for (const auto& a : assertions) {
        all_pass = all_pass && a.pass;
        jassert.push_back(to_json(a));
    }
    const json report{{"command", "verify-helmholtz"}, {"fn", fn_id},
                      {"d", d},       {"n", n},
                      {"box", box},   {"assertions", jassert},
                      {"sweep", sweep_rows}, {"pass", all_pass}};
    write_text(out, report.dump(2) + "\n");
    return all_pass ? kExitPass : kExitAssertFail;
}

int run_synth_herglotz(const std::string& density_path, std::size_t n, double box,
                       int degree, const std::string& out,
                       const std::string& ray_out, double ray_rmax, int ray_count) {
    const auto density = bhc::io::load_density(density_path);
    const int d = density.dims() == 1 ? 1 : density.dims();
    const auto quad = density.is_point_masses()
                          ? bhc::sphere::SphereQuadrature{}
                          : bhc::sphere::make_quadrature(d, degree);

    auto value_at = [&](const bhc::Point& x) {
        return density.is_point_masses() ? bhc::sphere::herglotz(density, x)
                                         : bhc::sphere::herglotz(density, x, quad);
    };

    if (!out.empty() && d >= 1 && d <= 3) {
        bhc::multiplier::GridFunction grid(d, n, box);
        for (std::size_t flat = 0; flat < grid.size(); ++flat) {
            const auto idx = grid.unravel(flat);
            bhc::Point x{0.0, 0.0, 0.0};
            for (int a = 0; a < d; ++a)
                x[static_cast<std::size_t>(a)] =
                    box * static_cast<double>(idx[static_cast<std::size_t>(a)]) /
                    static_cast<double>(n);
            grid[flat] = value_at(x);
        }
        bhc::io::save_grid(grid, out);
    }

    std::string csv = "r,re_u,im_u,abs_u\n";
    for (int i = 0; i < ray_count; ++i) {
        const double r = ray_rmax * static_cast<double>(i) / (ray_count - 1);
        const auto v = value_at({r, 0.0, 0.0});
        csv += format_double(r) + "," + format_double(v.real()) + "," +
               format_double(v.imag()) + "," + format_double(std::abs(v)) + "\n";
    }
    write_text(ray_out, csv);
    return kExitPass;
}

int run_bstar(const std::string& density_path, double rmax, int degree,
              const std::string& out, std::optional<double> check_min,
              std::optional<double> check_max) {
    const auto density = bhc::io::load_density(density_path);
    const auto quad = bhc::sphere::make_quadrature(density.dims(), degree);
    const auto res = bhc::sphere::bstar_norm(density, rmax, quad);
    std::string csv = "R,g_R\n";
    for (const auto& [r, g] : res.profile)
        csv += format_double(r) + "," + format_double(g) + "\n";
    write_text(out, csv);
    std::cerr << "sup g(R) over (1, " << format_double(rmax)
              << "] = " << format_double(res.sup) << "\n";
    if ((check_min && res.sup < *check_min) || (check_max && res.sup > *check_max))
        return kExitAssertFail;
    return kExitPass;
}

int run_subordinate(const std::string& matrix_path, Eigen::Index identity_dim,
                    const std::string& fn_id, double tol, unsigned long seed,
                    const std::string& out) {
    const auto f = bhc::bernstein::make_function(fn_id);
    if (!f.triple)
        throw bhc::DomainError("subordinate requires a function with a Levy triple");
    const Eigen::MatrixXd a =
        matrix_path.empty()
            ? Eigen::MatrixXd(Eigen::MatrixXd::Identity(identity_dim, identity_dim))
            : bhc::io::load_matrix(matrix_path);
    const bhc::subordination::MatrixGenerator gen(a);

    std::vector<Assertion> assertions;
    const auto transfer = bhc::subordination::eigen_transfer_check(gen, f);
    assertions.push_back({"eigen_transfer_residual", "eigen-transfer",
                          transfer.residual, tol, transfer.residual <= tol});

    // Phillips quadrature against the spectral functional calculus on the
    // eigenvectors and on seeded random vectors.
    double worst = 0.0;
    auto spectral = [&](const Eigen::VectorXd& u) {
        Eigen::VectorXd fl(gen.dim());
        for (Eigen::Index i = 0; i < gen.dim(); ++i)
            fl[i] = f.closed_eval(std::max(0.0, gen.eigenvalues()[i]));
        return Eigen::VectorXd(gen.eigenvectors() * fl.asDiagonal() *
                               gen.eigenvectors().transpose() * u);
    };
    for (Eigen::Index i = 0; i < gen.dim(); ++i) {
        const Eigen::VectorXd u = gen.eigenvectors().col(i);
        worst = std::max(worst,
                         (bhc::subordination::phillips_apply(gen, f, u) - spectral(u)).norm());
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 8; ++trial) {
        Eigen::VectorXd u(gen.dim());
        for (Eigen::Index i = 0; i < gen.dim(); ++i) u[i] = g(rng);
        const double nrm = u.norm();
        worst = std::max(worst, (bhc::subordination::phillips_apply(gen, f, u) -
                                 spectral(u)).norm() / nrm);
    }
    assertions.push_back(
        {"spectral_equivalence", "phillips-spectral-agreement", worst, tol, worst <= tol});

    bool all_pass = true;
    json jassert = json::array();
    for (const auto& a : assertions) {
        all_pass = all_pass && a.pass;
        jassert.push_back(to_json(a));
    }
    const json report{{"command", "subordinate"},
                      {"fn", fn_id},
                      {"dim", gen.dim()},
                      {"f1", f.f1},
                      {"assertions", jassert},
                      {"pass", all_pass}};
    write_text(out, report.dump(2) + "\n");
    return all_pass ? kExitPass : kExitAssertFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bernstein-function operator calculus f(-Delta): verification suites"};
    app.require_subcommand(1);

    std::string config_path, fn_id, out, density_path, matrix_path, ray_out;
    std::string lambdas_csv = "2,4,5,9";
    int d = 2, degree = 40, ray_count = 101;
    std::size_t n = 128;
    double box = bhc::multiplier::kTwoPi, delta = 0.1, tol = 1e-8;
    double tol_eigen = 1e-12, tol_ratio = 1e-10;
    double rmax = 200.0, ray_rmax = 5.0;
    unsigned long seed = 0;
    Eigen::Index identity_dim = 3;
    std::optional<double> check_min, check_max;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file; flags win");
        cmd->add_option("--out", out, "output path (default stdout)");
        cmd->add_option("--seed", seed, "seed for any randomness");
    };

    auto* cat = app.add_subcommand("catalogue", "list the function catalogue");
    add_common(cat);

    auto* be = app.add_subcommand("bernstein-eval", "evaluate f, f', omega on a grid");
    add_common(be);
    be->add_option("--fn", fn_id, "function id, e.g. fractional:0.5")->required();
    be->add_option("--lambdas", lambdas_csv, "comma-separated lambda list");

    auto* vh = app.add_subcommand("verify-helmholtz",
                                  "eigen certificate + omega-ratio sweep");
    add_common(vh);
    vh->add_option("--fn", fn_id)->required();
    vh->add_option("--d", d);
    vh->add_option("--n", n);
    vh->add_option("--box", box);
    vh->add_option("--lambdas", lambdas_csv);
    vh->add_option("--delta", delta);
    vh->add_option("--tol-eigen", tol_eigen);
    vh->add_option("--tol-ratio", tol_ratio);

    auto* sh = app.add_subcommand("synth-herglotz", "sample a Herglotz wave");
    add_common(sh);
    sh->add_option("--density", density_path, "density JSON file")->required();
    sh->add_option("--n", n);
    sh->add_option("--box", box);
    sh->add_option("--degree", degree);
    sh->add_option("--ray-out", ray_out, "CSV of u along the first axis");
    sh->add_option("--ray-rmax", ray_rmax);
    sh->add_option("--ray-count", ray_count);

    auto* bs = app.add_subcommand("bstar", "B* norm profile g(R)");
    add_common(bs);
    bs->add_option("--density", density_path)->required();
    bs->add_option("--rmax", rmax);
    bs->add_option("--degree", degree);
    bs->add_option("--check-sup-min", check_min, "fail (exit 1) if sup below");
    bs->add_option("--check-sup-max", check_max, "fail (exit 1) if sup above");

    auto* su = app.add_subcommand("subordinate", "Phillips calculus transfer checks");
    add_common(su);
    su->add_option("--fn", fn_id)->required();
    su->add_option("--matrix", matrix_path, "text matrix file (default: identity)");
    su->add_option("--m", identity_dim, "identity dimension when no matrix given");
    su->add_option("--tol", tol);

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* cmd = app.get_subcommands().front();
        const json conf = load_config(config_path);
        cfg(cmd, conf, "fn", fn_id);
        cfg(cmd, conf, "out", out);
        cfg(cmd, conf, "lambdas", lambdas_csv);
        cfg(cmd, conf, "d", d);
        cfg(cmd, conf, "n", n);
        cfg(cmd, conf, "box", box);
        cfg(cmd, conf, "degree", degree);
        cfg(cmd, conf, "delta", delta);
        cfg(cmd, conf, "tol", tol);
        cfg(cmd, conf, "tol-eigen", tol_eigen);
        cfg(cmd, conf, "tol-ratio", tol_ratio);
        cfg(cmd, conf, "density", density_path);
        cfg(cmd, conf, "matrix", matrix_path);
        cfg(cmd, conf, "rmax", rmax);
        cfg(cmd, conf, "seed", seed);

        if (cat->parsed()) return run_catalogue(out);
        if (be->parsed()) return run_bernstein_eval(fn_id, parse_list(lambdas_csv), out);
        if (vh->parsed())
            return run_verify_helmholtz(fn_id, d, n, box, parse_list(lambdas_csv),
                                        delta, tol_eigen, tol_ratio, out);
        if (sh->parsed())
            return run_synth_herglotz(density_path, n, box, degree, out, ray_out,
                                      ray_rmax, ray_count);
        if (bs->parsed())
            return run_bstar(density_path, rmax, degree, out, check_min, check_max);
        if (su->parsed())
            return run_subordinate(matrix_path, identity_dim, fn_id, tol, seed, out);
        std::cerr << "no command\n";
        return kExitConfig;
    } catch (const bhc::NoUnitEigenvalue& e) {
        std::cerr << "assertion failure: " << e.what() << "\n";
        return kExitAssertFail;
    } catch (const bhc::ConstantSymbol&) {
        std::cerr << "error: non-constant Bernstein function required\n";
        return kExitConfig;
    } catch (const bhc::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const bhc::DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const bhc::LatticeUnreachable& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const bhc::Error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}
