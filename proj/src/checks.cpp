#include "dnls/checks.hpp"

#include "dnls/diffpoly.hpp"
#include "dnls/errors.hpp"
#include "dnls/evolve.hpp"
#include "dnls/hierarchy.hpp"
#include "dnls/resolvent.hpp"
#include "dnls/scattering.hpp"
#include "dnls/sobolev.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

namespace dnls {

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt(double x)
{
    std::ostringstream os;
    os.precision(4);
    os << x;
    return os.str();
}

CheckResult timed(std::string name, std::string anchor, const std::function<void(CheckResult&)>& body)
{
    CheckResult r;
    r.name = std::move(name);
    r.anchor = std::move(anchor);
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(r);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<double> geometric(double lo, double hi, int n)
{
    std::vector<double> v;
    for (int i = 0; i < n; ++i)
        v.push_back(lo * std::pow(hi / lo, double(i) / double(n - 1)));
    return v;
}

double rel(cplx a, cplx b)
{
    return std::abs(a - b) / std::abs(b);
}

} // namespace

CheckOptions quick_options()
{
    CheckOptions o;
    o.grid = 1024;
    o.modes = 512;
    o.t_final = 2.0;
    o.long_time = 10.0;
    o.random_trials = 10;
    return o;
}

GridFunction scattering_gaussian(Eigen::Index n, double length)
{
    return gaussian(n, length, 1.0, 1.0, 0.5);
}

GridFunction scattering_two_bump(Eigen::Index n, double length)
{
    return two_bump(n, length, 0.8, 0.7, 3.0, 0.5);
}

GridFunction evolution_gaussian(Eigen::Index n, double length)
{
    return gaussian(n, length, 0.5, 6.0, 0.5);
}

GridFunction rough_profile(Eigen::Index n, double length, double amplitude, double alpha, double wavenumber)
{
    Eigen::VectorXd k = wavenumbers(n, length);
    double cutoff = 0.5 * k.maxCoeff();
    Eigen::VectorXcd h(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double z = k[i] - wavenumber;
        h[i] = amplitude * std::pow(1.0 + z * z, -alpha) * std::exp(-std::pow(z / cutoff, 8));
    }
    return inverse_transform(h, length);
}

GridFunction random_profile(Eigen::Index n, double length, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(0.2, 1.2), width(0.6, 2.0), center(-4.0, 4.0), wave(-1.5, 1.5);
    std::uniform_int_distribution<int> bumps(1, 3);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
    int count = bumps(rng);
    for (int b = 0; b < count; ++b) {
        double a = amp(rng), w = width(rng), c = center(rng), k = wave(rng);
        v += gaussian(n, length, a, w, k, c).values();
    }
    return GridFunction(std::move(v), length);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    double n = double(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

cplx p_integral_quadrature(const std::vector<cplx>& coeffs, int j, double theta)
{
    // p = tan(phi) e^{-i theta}, phi in (-pi/2, pi/2)
    cplx dir = std::polar(1.0, -theta);
    auto integrand = [&](double phi) {
        double t = std::tan(phi);
        double jac = 1.0 + t * t;
        cplx p = t * dir;
        cplx num = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
            num = num * p + *it;
        return num / std::pow(p * p - 1.0, j + 1) * dir * jac;
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    double lim = 0.5 * pi;
    double re = GK::integrate([&](double s) { return integrand(s).real(); }, -lim, lim, 30, 1e-14);
    double im = GK::integrate([&](double s) { return integrand(s).imag(); }, -lim, lim, 30, 1e-14);
    return {re, im};
}

CheckResult check_golden_energies()
{
    return timed("golden_energies", "E_0 = -(i/2) M, E_1 = (i/4) P, E_2 = -(i/8) E", [](CheckResult& r) {
        bool e0 = functionals_equal(energy(0).density, mass_density() * ExactComplex(0, Rational(-1, 2)));
        bool e1 = functionals_equal(energy(1).density, momentum_density() * ExactComplex(0, Rational(1, 4)));
        bool e2 = functionals_equal(energy(2).density, energy_density() * ExactComplex(0, Rational(-1, 8)));
        r.pass = e0 && e1 && e2;
        r.detail = std::string("E0 ") + (e0 ? "ok" : "mismatch") + ", E1 " + (e1 ? "ok" : "mismatch") + ", E2 "
            + (e2 ? "ok" : "mismatch");
    });
}

CheckResult check_mu12()
{
    return timed("mu_1_2", "mu_{1,2}(u) = (i/8) ||u||_{L^4}^4", [](CheckResult& r) {
        DiffPolynomial quartic = mass_density() * mass_density() * ExactComplex(0, Rational(1, 8));
        MuCoefficient mu = mu_jm(1, 2);
        r.pass = functionals_equal(mu.density, quartic);
        r.detail = "mu_{1,2} density: " + to_string(mu.density);
    });
}

CheckResult check_resolvent_structure(int kmax)
{
    return timed("resolvent_structure",
                 "homogeneous decomposition of the resolvent coefficients and the telescoping identities",
                 [kmax](CheckResult& r) {
                     auto& rx = shared_resolvent();
                     int parts = 0;
                     for (int k = 0; k <= kmax; ++k)
                         for (auto kind : {SymbolKind::diagonal, SymbolKind::antidiagonal}) {
                             const MatrixSymbol& full = kind == SymbolKind::diagonal ? rx.diagonal(k)
                                                                                     : rx.antidiagonal(k);
                             MatrixSymbol sum;
                             sum.denom_power = full.denom_power;
                             for (const auto& part : rx.homogeneous_parts(k, kind)) {
                                 ++parts;
                                 auto rep = verify_structure(part);
                                 if (!rep.pass) {
                                     r.detail = "k = " + std::to_string(k) + ", r = " + std::to_string(part.r) + ": "
                                         + rep.violation;
                                     return;
                                 }
                                 if (kind == SymbolKind::diagonal && k >= 1 && (part.r < 1 || part.r > k)) {
                                     r.detail = "diagonal part index out of range at k = " + std::to_string(k);
                                     return;
                                 }
                                 sum = sum + part.symbol;
                             }
                             if (!(sum == full)) {
                                 r.detail = "parts do not sum to the symbol at k = " + std::to_string(k);
                                 return;
                             }
                         }
                     rx.truncation_residual(kmax);
                     r.pass = true;
                     r.metrics["parts"] = parts;
                     r.detail = std::to_string(parts) + " homogeneous parts verified, brackets vanish through k = "
                         + std::to_string(kmax);
                 });
}

CheckResult check_scaling_weights(int jmax)
{
    return timed("scaling_weights", "E_j(u_mu) = mu^j E_j(u)", [jmax](CheckResult& r) {
        for (int j = 0; j <= jmax; ++j) {
            auto w = scaling_weight(energy(j).density);
            if (!w || *w != j) {
                r.detail = "E_" + std::to_string(j) + " has weight " + (w ? to_string(*w) : "INHOMOGENEOUS");
                return;
            }
            for (int m = 2; m <= j + 1; ++m) {
                auto mu = mu_jm(j, m);
                auto wm = scaling_weight(mu.density);
                auto degs = mu.density.degrees();
                if (!wm || *wm != j || degs != std::vector<int>{2 * m}) {
                    r.detail = "mu_{" + std::to_string(j) + "," + std::to_string(m) + "} has wrong weight or degree";
                    return;
                }
            }
        }
        r.pass = true;
        r.detail = "weights equal j for all E_j and mu_{j,m}, j <= " + std::to_string(jmax);
    });
}

CheckResult check_orientation_anchor(int jmax)
{
    return timed("orientation_anchor", "quadratic coefficients mu_{j,1} from the trace of T^2", [jmax](CheckResult& r) {
        for (int j = 0; j <= jmax; ++j)
            if (!functionals_equal(mu_from_resolvent(j, 1, shared_resolvent()).density, mu_j1(j).density)) {
                r.detail = "resolvent route disagrees with the quadratic formula at j = " + std::to_string(j);
                return;
            }
        r.pass = true;
        r.detail = "resolvent m = 1 column matches mu_{j,1} for j <= " + std::to_string(jmax);
    });
}

CheckResult check_telescope_fault()
{
    return timed("telescope_fault_injection", "telescoping identities detect a corrupted recursion", [](CheckResult& r) {
        ResolventExpansion bad(4, RecursionFault::flipped_diagonal_sign);
        try {
            bad.truncation_residual(3);
            r.detail = "corrupted recursion was not detected";
        } catch (const TelescopeFailure& e) {
            r.pass = e.k == 1;
            r.detail = "failure reported at k = " + std::to_string(e.k);
        }
    });
}

CheckResult check_p_integral(int jmax)
{
    return timed("p_integral_quadrature", "residue evaluation of the p-integrals, independent of arg lambda^2",
                 [jmax](CheckResult& r) {
                     double worst = 0.0;
                     int count = 0;
                     auto& rx = shared_resolvent();
                     for (int j = 0; j <= jmax; ++j)
                         for (const auto& entry : rx.antidiagonal(j).entries)
                             for (const auto& [f, poly] : entry) {
                                 std::vector<cplx> c;
                                 for (const auto& x : poly.coefficients())
                                     c.push_back(x.value());
                                 cplx exact = p_integral(poly, j).value();
                                 for (double theta : {pi / 4, pi / 2}) {
                                     cplx q = p_integral_quadrature(c, j, theta);
                                     double scale = std::max(std::abs(exact), 1e-300);
                                     worst = std::max(worst, std::abs(q - exact) / scale);
                                 }
                                 ++count;
                             }
                     r.metrics["worst_relative_error"] = worst;
                     r.metrics["integrals"] = count;
                     r.pass = worst < 1e-10;
                     r.detail = std::to_string(count) + " integrals, worst relative error " + fmt(worst);
                 });
}

CheckResult check_energy_scaling_numeric(int jmax)
{
    return timed("energy_scaling_numeric", "E_j(u_mu) = mu^j E_j(u)", [jmax](CheckResult& r) {
        GridFunction u = gaussian(1024, 40.0, 0.9, 1.2, 0.4);
        double worst = 0.0;
        for (double mu : {0.5, 2.0}) {
            GridFunction v = spatial_rescale(u, mu);
            for (int j = 0; j <= jmax; ++j) {
                cplx a = evaluate(energy(j).density, v);
                cplx b = std::pow(mu, j) * evaluate(energy(j).density, u);
                worst = std::max(worst, rel(a, b));
            }
        }
        r.metrics["worst_relative_error"] = worst;
        r.pass = worst < 1e-6;
        r.detail = "worst relative deviation " + fmt(worst);
    });
}

CheckResult check_two_route(const CheckOptions& opt)
{
    return timed("two_route_transmission", "a_u(lambda)^2 = det(I - T_u(lambda)^2)", [&opt](CheckResult& r) {
        std::vector<std::pair<std::string, GridFunction>> profiles{
            {"gaussian", scattering_gaussian(opt.grid, opt.domain)},
            {"two_bump", scattering_two_bump(opt.grid, opt.domain)}};
        double worst = 0.0;
        int points = 0;
        std::ostringstream os;
        for (const auto& [name, u] : profiles) {
            double r0 = series_threshold_R0(u);
            std::vector<cplx> grid;
            for (double mod : geometric(r0, 100.0 * r0, 4))
                for (double arg : {pi / 4, pi / 2, 3 * pi / 4})
                    grid.push_back(std::polar(mod, arg));
            for (auto z : opt.lambda_sq)
                grid.push_back(z);
            for (auto z : grid) {
                auto lam = SpectralParameter::from_lambda_sq(z);
                cplx a = jost_transmission(u, lam);
                cplx d = perturbation_determinant(u, lam, opt.modes);
                double e = rel(d, a * a);
                worst = std::max(worst, e);
                ++points;
            }
            os << name << ": R0 = " << fmt(r0) << "; ";
            r.metrics["R0_" + name] = r0;
        }
        r.metrics["worst_relative_error"] = worst;
        r.metrics["points"] = points;
        r.pass = worst < 1e-5;
        os << points << " points, worst relative error " << fmt(worst);
        r.detail = os.str();
    });
}

CheckResult check_large_lambda_limit(const CheckOptions& opt)
{
    return timed("large_lambda_limit", "a_u(lambda) -> exp(-i ||u||^2 / 2) as |lambda| grows", [&opt](CheckResult& r) {
        GridFunction u = scattering_gaussian(opt.grid, opt.domain);
        double mass = u.values().squaredNorm() * u.dx();
        cplx limit = std::polar(1.0, -0.5 * mass);
        std::vector<double> dist;
        std::ostringstream os;
        for (double rho : {1e2, 1e3, 1e4}) {
            cplx a = jost_transmission(u, SpectralParameter::on_imaginary_axis(rho));
            dist.push_back(std::abs(a - limit));
            os << "rho " << rho << ": " << fmt(dist.back()) << "; ";
        }
        r.pass = dist[1] < dist[0] && dist[2] < dist[1];
        r.metrics["distance_1e2"] = dist[0];
        r.metrics["distance_1e4"] = dist[2];
        r.detail = os.str();
    });
}

CheckResult check_hilbert_schmidt(const CheckOptions& opt)
{
    return timed("hilbert_schmidt", "||T_u(lambda)||_2^2 = |lambda|^2 / Im(lambda^2) ||u||_{L^2}^2", [&opt](CheckResult& r) {
        GridFunction u = scattering_gaussian(opt.grid, opt.domain);
        double mass = u.values().squaredNorm() * u.dx();
        double worst = 0.0;
        for (cplx z : {cplx(0, 1), std::polar(2.0, pi / 4), std::polar(2.0, 3 * pi / 4)}) {
            auto lam = SpectralParameter::from_lambda_sq(z);
            double hs = build_T_matrix(u, lam, opt.modes).hilbert_schmidt_norm_sq();
            double expected = std::norm(lam.lambda) / z.imag() * mass;
            worst = std::max(worst, std::abs(hs / expected - 1.0));
        }
        r.metrics["worst_relative_error"] = worst;
        r.pass = worst < 0.01;
        r.detail = "worst relative deviation " + fmt(worst) + " at M = " + std::to_string(opt.modes);
    });
}

CheckResult check_series_coefficients(const CheckOptions& opt)
{
    return timed("series_coefficients", "-tr(T^{2k}) / 2k = sum_j mu_{j,k} / lambda^{2j}", [&opt](CheckResult& r) {
        GridFunction u = scattering_gaussian(opt.grid, opt.domain);
        std::vector<double> rhos = geometric(1e2, 1e4, 9);
        std::map<std::pair<int, int>, cplx> mu;
        for (int k = 1; k <= 2; ++k)
            for (int j = k - 1; j <= 4; ++j)
                mu[{j, k}] = evaluate(k == 1 ? mu_j1(j).density : mu_jm(j, k).density, u);
        struct Case {
            int k, J;
        };
        std::ostringstream os;
        bool ok = true;
        for (Case c : {Case{1, 1}, Case{1, 2}, Case{2, 1}, Case{2, 2}, Case{2, 3}}) {
            std::vector<double> res;
            for (double rho : rhos) {
                auto lam = SpectralParameter::on_imaginary_axis(rho);
                cplx f = c.k == 1 ? -trace_T2(u, lam) / 2.0 : -trace_T4(u, lam) / 4.0;
                for (int j = c.k - 1; j <= c.J; ++j)
                    f -= mu[{j, c.k}] / std::pow(lam.lambda_sq, j);
                res.push_back(std::abs(f));
            }
            double slope = loglog_slope(rhos, res);
            double target = -(c.J + 1);
            bool good = std::abs(slope - target) < 0.2;
            ok = ok && good;
            std::string key = "slope_k" + std::to_string(c.k) + "_J" + std::to_string(c.J);
            r.metrics[key] = slope;
            os << "k=" << c.k << " J=" << c.J << ": slope " << fmt(slope) << " (want " << target << "); ";
        }
        r.pass = ok;
        r.detail = os.str();
    });
}

CheckResult check_scaling_covariance(const CheckOptions& opt)
{
    return timed("scaling_covariance", "a_{u_mu}(lambda) = a_u(lambda / sqrt(mu))", [&opt](CheckResult& r) {
        GridFunction u = scattering_gaussian(opt.grid, opt.domain);
        double worst = 0.0;
        for (double mu : {0.5, 2.0})
            for (cplx z : {cplx(0, 4), std::polar(3.0, pi / 4), std::polar(3.0, 3 * pi / 4)}) {
                auto lam = SpectralParameter::from_lambda_sq(z);
                cplx a = jost_transmission(spatial_rescale(u, mu), lam);
                cplx b = jost_transmission(u, SpectralParameter::from_lambda(lam.lambda / std::sqrt(mu)));
                worst = std::max(worst, rel(a, b));
            }
        r.metrics["worst_relative_error"] = worst;
        r.pass = worst < 1e-6;
        r.detail = "worst relative deviation " + fmt(worst);
    });
}

CheckResult check_log_series_vs_jost(const CheckOptions& opt)
{
    return timed("log_series_vs_jost", "ln a_u = -sum_k tr(T^{2k}) / 2k", [&opt](CheckResult& r) {
        GridFunction u = scattering_gaussian(opt.grid, opt.domain);
        auto lam = SpectralParameter::from_lambda_sq({0.0, 4.0});
        cplx series = log_a_series(u, lam, 10, std::min(opt.modes, 256));
        cplx direct = log_transmission(u, lam);
        double err = std::abs(series - direct);
        r.metrics["abs_error"] = err;
        r.pass = err < 1e-8;
        r.detail = "|series - ln a| = " + fmt(err);
    });
}

CheckResult check_plane_wave(const CheckOptions&)
{
    return timed("plane_wave", "omega = k^2 + A^2 k for u = A e^{i(kx - omega t)}", [](CheckResult& r) {
        const double amp = 1.0, length = 2 * pi;
        const int mode = 3;
        const double omega = mode * mode + amp * amp * mode;
        auto phase_error = [&](double dt, double t_end) {
            GridFunction u = plane_wave(64, length, amp, mode);
            DnlsStepper stepper(64, length, dt);
            Eigen::VectorXcd v = stepper.filtered(fft(u.values()));
            auto steps = std::llround(t_end / dt);
            for (long long n = 0; n < steps; ++n)
                stepper.advance(v);
            Eigen::VectorXcd w = ifft(v);
            cplx overlap = (u.values().conjugate().array() * w.array()).sum();
            return std::abs(std::arg(overlap * std::polar(1.0, omega * double(steps) * dt)));
        };
        double per_unit = phase_error(1e-3, 2 * pi / omega * 10) / (2 * pi / omega * 10);
        std::vector<double> dts{0.02, 0.01, 0.005, 0.0025}, errs;
        for (double dt : dts)
            errs.push_back(phase_error(dt, 1.0));
        double slope = loglog_slope(dts, errs);
        r.metrics["phase_error_per_unit_time"] = per_unit;
        r.metrics["order"] = slope;
        r.pass = per_unit < 1e-8 && std::abs(slope - 4.0) < 0.3;
        r.detail = "phase error per unit time " + fmt(per_unit) + " at dt = 1e-3, convergence order " + fmt(slope);
    });
}

std::vector<CheckResult> check_conservation(const CheckOptions& opt)
{
    std::vector<CheckResult> out;
    MonitorSeries series;
    double r0 = 1.0;
    auto run = timed("conservation_run", "DNLS evolution of the Gaussian benchmark", [&](CheckResult& r) {
        GridFunction u0 = evolution_gaussian(1024, 200.0);
        r0 = series_threshold_R0(u0);
        EvolutionConfig cfg;
        cfg.dt = opt.dt;
        cfg.t_final = opt.t_final;
        cfg.dealias = opt.dealias;
        cfg.monitor_stride = std::max(1, int(std::lround(1.0 / opt.dt)));
        std::vector<Monitor> monitors{mass_monitor(), momentum_monitor(), energy_monitor()};
        for (int j = 2; j <= 4; ++j)
            monitors.push_back(hierarchy_monitor(j));
        for (cplx z : {cplx(0, 4), std::polar(3.0, pi / 4), std::polar(3.0, 3 * pi / 4)})
            monitors.push_back(transmission_monitor(z));
        std::vector<double> rhos{r0, 1.5 * r0, 2.0 * r0};
        for (double rho : opt.rho)
            rhos.push_back(rho);
        for (double rho : rhos)
            monitors.push_back(phi_monitor(rho, 1));
        series = evolve(u0, cfg, monitors);
        r.pass = true;
        r.metrics["R0"] = r0;
        r.detail = std::to_string(series.times.size()) + " monitor samples to t = " + fmt(opt.t_final)
            + ", R0 = " + fmt(r0);
    });
    out.push_back(run);
    if (!run.pass)
        return out;
    auto add = [&](const std::string& label, const std::string& prefix, double tol, const std::string& anchor) {
        CheckResult r;
        r.name = "drift_" + label;
        r.anchor = anchor;
        double worst = 0.0;
        for (const auto& n : series.names)
            if (n == prefix || (prefix.back() == '(' && n.rfind(prefix, 0) == 0))
                worst = std::max(worst, series.relative_drift(n));
        r.metrics["relative_drift"] = worst;
        r.pass = worst < tol;
        r.detail = "relative drift " + fmt(worst) + " (tolerance " + fmt(tol) + ")";
        out.push_back(r);
    };
    add("M", "M", 1e-9, "M(u) is conserved");
    add("P", "P", 1e-6, "P(u) is conserved");
    add("E", "E", 1e-6, "E(u) is conserved");
    add("E2", "E2", 1e-6, "E_j(u) are conservation laws");
    add("E3", "E3", 1e-6, "E_j(u) are conservation laws");
    add("E4", "E4", 1e-5, "E_j(u) are conservation laws");
    add("a_u", "a(", 1e-5, "a_u(lambda) is time-independent");
    add("phi_1", "phi1(", 1e-5, "phi_L(u, rho) is time-independent");
    return out;
}

CheckResult check_hs_boundedness(const CheckOptions& opt)
{
    return timed("hs_boundedness", "sup_t ||u(t)||_{H^s} bounded by a multiple of its initial value", [&opt](CheckResult& r) {
        GridFunction u0 = evolution_gaussian(1024, 200.0);
        EvolutionConfig cfg;
        cfg.dt = opt.dt;
        cfg.t_final = opt.long_time;
        cfg.dealias = opt.dealias;
        cfg.monitor_stride = std::max(1, int(std::lround(0.5 / opt.dt)));
        std::vector<Monitor> monitors;
        for (double s : {0.5, 1.5, 2.5})
            monitors.push_back(sobolev_monitor(s));
        MonitorSeries series = evolve(u0, cfg, monitors);
        bool ok = true;
        std::ostringstream os;
        for (const auto& n : series.names) {
            const auto& v = series[n];
            double sup = 0.0;
            for (auto x : v)
                sup = std::max(sup, x.real());
            double factor = sup / v.front().real();
            r.metrics["growth_" + n] = factor;
            ok = ok && factor <= 3.0;
            os << n << ": sup/initial " << fmt(factor) << "; ";
        }
        r.pass = ok;
        r.detail = os.str();
    });
}

CheckResult check_sobolev_identity(const CheckOptions&)
{
    return timed("sobolev_identity", "int_0^inf rho^{2s-1} |phi_{[s],0}| = 4^{-(s+1)} ||f_{s-[s]}||_{L^1} ||u||^2_{Hdot^s}",
                 [](CheckResult& r) {
                     std::vector<GridFunction> profiles{gaussian(1024, 40.0, 1.0, 1.0, 0.5),
                                                        two_bump(1024, 40.0, 0.8, 0.7, 3.0, 0.5)};
                     double worst = 0.0;
                     for (const auto& u : profiles)
                         for (double s : {0.3, 0.7, 1.5, 2.5}) {
                             auto rep = compare_hs(u, s, 0.0);
                             worst = std::max(worst, std::abs(rep.ratio / rep.expected_ratio - 1.0));
                         }
                     r.metrics["worst_relative_error"] = worst;
                     r.pass = worst < 1e-4;
                     r.detail = "worst relative deviation " + fmt(worst);
                 });
}

CheckResult check_comparison_inequalities(const CheckOptions& opt)
{
    return timed("comparison_inequalities", "two-sided comparison of Hdot^s with the rho-integral of phi_{[s],0}",
                 [&opt](CheckResult& r) {
                     std::mt19937_64 rng(opt.seed);
                     std::uniform_real_distribution<double> sd(0.05, 3.0), rd(0.0, 10.0);
                     int failures = 0;
                     for (int t = 0; t < opt.random_trials; ++t) {
                         GridFunction u = random_profile(1024, 40.0, rng());
                         double s = sd(rng);
                         if (s == std::floor(s))
                             s += 0.5;
                         auto rep = compare_hs(u, s, rd(rng));
                         if (!rep.pass)
                             ++failures;
                     }
                     r.metrics["failures"] = failures;
                     r.pass = failures == 0;
                     r.detail = std::to_string(opt.random_trials) + " random trials, " + std::to_string(failures)
                         + " counterexamples";
                 });
}

CheckResult check_phi0_tau1(const CheckOptions&)
{
    return timed("phi0_tau1", "phi_{L,0}(u, rho) = Im tau_L^1(u, sqrt(i rho))", [](CheckResult& r) {
        GridFunction u = gaussian(2048, 20.0, 1.0, 1.0, 0.5);
        double worst_formula = 0.0, worst_trace = 0.0;
        for (int L = 0; L <= 2; ++L) {
            for (double rho : {0.5, 1.0, 10.0, 100.0}) {
                double p = phi0(u, rho, L);
                double t = tau1(u, cplx(0, rho), L).imag();
                worst_formula = std::max(worst_formula, std::abs(p - t) / std::abs(p));
            }
            for (double rho : {0.5, 1.0, 2.0}) {
                auto lam = SpectralParameter::on_imaginary_axis(rho);
                cplx rem = -trace_T2(u, lam) / 2.0;
                for (int j = 0; j <= 2 * L + 1; ++j)
                    rem -= evaluate(mu_j1(j).density, u) / std::pow(lam.lambda_sq, j);
                double p = phi0(u, rho, L);
                worst_trace = std::max(worst_trace, std::abs(rem.imag() - p) / std::abs(p));
            }
        }
        r.metrics["formula_relative_error"] = worst_formula;
        r.metrics["trace_relative_error"] = worst_trace;
        r.pass = worst_formula < 1e-10 && worst_trace < 1e-9;
        r.detail = "closed form vs remainder integral " + fmt(worst_formula) + ", vs trace minus series "
            + fmt(worst_trace);
    });
}

CheckResult check_comparison_monotone(const CheckOptions&)
{
    return timed("comparison_monotone", "the rho-integral is nonincreasing in its lower limit", [](CheckResult& r) {
        GridFunction u = gaussian(1024, 40.0, 1.0, 1.0, 0.5);
        bool ok = true;
        for (double s : {0.3, 1.5}) {
            double prev = std::numeric_limits<double>::infinity();
            for (double R : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0}) {
                double v = comparison_integral(u, s, R);
                ok = ok && v <= prev;
                prev = v;
            }
        }
        r.pass = ok;
        r.detail = ok ? "nonincreasing on the sampled R" : "increase detected";
    });
}

CheckResult check_remainder_decay(const CheckOptions& opt)
{
    return timed("remainder_decay", "|phi_[s] - phi_[s],0| <= C rho^{-(s + [s] + 1)}, s = 3/2", [&opt](CheckResult& r) {
        const double s = 1.5;
        const int L = 1;
        const double target = -(s + std::floor(s) + 1.0);
        auto fit = [&](const GridFunction& u, const std::string& tag) {
            double r0 = series_threshold_R0(u);
            std::vector<double> rhos = geometric(r0, 100.0 * r0, 9), diffs;
            for (double rho : rhos)
                diffs.push_back(std::abs(phi(u, rho, L) - phi0(u, rho, L)));
            double slope = loglog_slope(rhos, diffs);
            std::vector<double> tx(rhos.end() - 4, rhos.end()), ty(diffs.end() - 4, diffs.end());
            r.metrics["R0_" + tag] = r0;
            r.metrics["slope_" + tag] = slope;
            r.metrics["tail_slope_" + tag] = loglog_slope(tx, ty);
            r.metrics["fitted_constant_" + tag] = diffs.front() * std::pow(rhos.front(), -target);
            return slope;
        };
        double slope = fit(scattering_gaussian(opt.grid, opt.domain), "gaussian");
        // barely above H^{3/2}; shows whether limited smoothness moves the exponent
        double rough = fit(rough_profile(4096, 60.0, 1.0, 1.05, 0.5), "rough");
        r.pass = std::abs(slope - target) < 0.3;
        std::ostringstream os;
        os << "fitted slope " << fmt(slope) << " over rho in [R0, 100 R0] (want " << target << " +- 0.3, last decade "
           << fmt(r.metrics["tail_slope_gaussian"]) << "); H^{1.6} profile: " << fmt(rough);
        r.detail = os.str();
    });
}

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"symbolic", "scattering", "evolution", "sobolev", "all"};
    return names;
}

std::vector<CheckResult> run_suite(const std::string& suite, const CheckOptions& opt)
{
    std::vector<CheckResult> out;
    bool all = suite == "all";
    if (std::find(suite_names().begin(), suite_names().end(), suite) == suite_names().end())
        throw std::invalid_argument("unknown suite '" + suite + "'");
    if (all || suite == "symbolic") {
        out.push_back(check_golden_energies());
        out.push_back(check_mu12());
        out.push_back(check_resolvent_structure(6));
        out.push_back(check_scaling_weights(6));
        out.push_back(check_orientation_anchor(6));
        out.push_back(check_telescope_fault());
        out.push_back(check_p_integral(6));
        out.push_back(check_energy_scaling_numeric(6));
    }
    if (all || suite == "scattering") {
        out.push_back(check_two_route(opt));
        out.push_back(check_large_lambda_limit(opt));
        out.push_back(check_hilbert_schmidt(opt));
        out.push_back(check_series_coefficients(opt));
        out.push_back(check_scaling_covariance(opt));
        out.push_back(check_log_series_vs_jost(opt));
    }
    if (all || suite == "evolution") {
        out.push_back(check_plane_wave(opt));
        for (auto& r : check_conservation(opt))
            out.push_back(std::move(r));
        out.push_back(check_hs_boundedness(opt));
    }
    if (all || suite == "sobolev") {
        out.push_back(check_sobolev_identity(opt));
        out.push_back(check_comparison_inequalities(opt));
        out.push_back(check_phi0_tau1(opt));
        out.push_back(check_comparison_monotone(opt));
        out.push_back(check_remainder_decay(opt));
    }
    return out;
}

std::string results_to_json(const std::string& suite, const std::vector<CheckResult>& results, bool with_anchor)
{
    nlohmann::json j;
    j["suite"] = suite;
    bool pass = true;
    auto arr = nlohmann::json::array();
    for (const auto& r : results) {
        nlohmann::json c;
        c["name"] = r.name;
        c["pass"] = r.pass;
        c["detail"] = r.detail;
        if (with_anchor)
            c["anchor"] = r.anchor;
        for (const auto& [k, v] : r.metrics)
            c["metrics"][k] = v;
        arr.push_back(c);
        pass = pass && r.pass;
    }
    j["checks"] = arr;
    j["pass"] = pass;
    return j.dump(1);
}

} // namespace dnls
