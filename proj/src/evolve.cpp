#include "dnls/evolve.hpp"

#include "dnls/diffpoly.hpp"
#include "dnls/errors.hpp"
#include "dnls/hierarchy.hpp"
#include "dnls/scattering.hpp"
#include "dnls/sobolev.hpp"

#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <sstream>

namespace dnls {

double stable_dt(const GridFunction& u, double dealias)
{
    double kmax = dealias * std::numbers::pi * double(u.size()) / u.domain_length();
    double amp = u.max_abs();
    double rate = 3.0 * kmax * amp * amp;
    if (rate == 0.0)
        return std::numeric_limits<double>::infinity();
    // RK4 stability interval on the imaginary axis is about 2.8
    return 2.5 / rate;
}

DnlsStepper::DnlsStepper(Eigen::Index n, double length, double dt, double dealias)
    : n_(n), length_(length), dt_(dt), k_(wavenumbers(n, length)), mask_(n), full_(n), half_(n)
{
    if (!(dealias > 0.0 && dealias <= 1.0))
        throw std::invalid_argument("dealias fraction must lie in (0, 1]");
    double cut = dealias * double(n / 2);
    for (Eigen::Index j = 0; j < n; ++j) {
        double idx = double(j < n / 2 ? j : j - n);
        mask_[j] = (std::abs(idx) <= cut && j != n / 2) ? 1.0 : 0.0;
        // u_t = i u_xx: multiplier e^{-i k^2 t}
        full_[j] = std::polar(1.0, -k_[j] * k_[j] * dt);
        half_[j] = std::polar(1.0, -0.5 * k_[j] * k_[j] * dt);
    }
}

Eigen::VectorXcd DnlsStepper::filtered(const Eigen::VectorXcd& coeffs) const
{
    return (coeffs.array() * mask_.array().cast<cplx>()).matrix();
}

Eigen::VectorXcd DnlsStepper::nonlinear(const Eigen::VectorXcd& coeffs) const
{
    // -(|u|^2 u)_x, dealiased
    Eigen::VectorXcd u = ifft(coeffs);
    Eigen::VectorXcd cubic = (u.array() * u.array().conjugate() * u.array()).matrix();
    Eigen::VectorXcd c = fft(cubic);
    const cplx I(0.0, 1.0);
    for (Eigen::Index j = 0; j < n_; ++j)
        c[j] *= -I * k_[j] * mask_[j];
    return c;
}

void DnlsStepper::advance(Eigen::VectorXcd& v) const
{
    const double h = dt_;
    Eigen::ArrayXcd e1 = full_.array(), e2 = half_.array();
    Eigen::VectorXcd a = nonlinear(v);
    Eigen::VectorXcd b = nonlinear((e2 * (v + 0.5 * h * a).array()).matrix());
    Eigen::VectorXcd c = nonlinear((e2 * v.array()).matrix() + 0.5 * h * b);
    Eigen::VectorXcd d = nonlinear((e1 * v.array()).matrix() + h * (e2 * c.array()).matrix());
    v = (e1 * v.array() + (h / 6.0) * (e1 * a.array() + 2.0 * e2 * (b + c).array() + d.array())).matrix();
    if (!v.allFinite())
        throw StabilityError("non-finite state after time step");
}

GridFunction DnlsStepper::step(const GridFunction& u) const
{
    Eigen::VectorXcd v = filtered(fft(u.values()));
    advance(v);
    return GridFunction(ifft(v), length_);
}

GridFunction step(const GridFunction& u, double dt, double dealias)
{
    if (std::abs(dt) > stable_dt(u, dealias))
        throw StabilityError("dt exceeds the stability estimate " + std::to_string(stable_dt(u, dealias)));
    return DnlsStepper(u.size(), u.domain_length(), dt, dealias).step(u);
}

double MonitorSeries::relative_drift(const std::string& name) const
{
    const auto& v = values.at(name);
    double drift = 0.0;
    for (const auto& x : v)
        drift = std::max(drift, std::abs(x - v.front()));
    double scale = std::abs(v.front());
    return scale > 0.0 ? drift / scale : drift;
}

std::string MonitorSeries::to_csv() const
{
    std::ostringstream os;
    os << std::setprecision(17) << "t";
    for (const auto& n : names)
        os << ',' << n << "_re," << n << "_im";
    os << '\n';
    for (std::size_t i = 0; i < times.size(); ++i) {
        os << times[i];
        for (const auto& n : names)
            os << ',' << values.at(n)[i].real() << ',' << values.at(n)[i].imag();
        os << '\n';
    }
    return os.str();
}

std::string MonitorSeries::to_json() const
{
    nlohmann::json j;
    j["times"] = times;
    for (const auto& n : names) {
        std::vector<double> re, im;
        for (const auto& x : values.at(n)) {
            re.push_back(x.real());
            im.push_back(x.imag());
        }
        j["monitors"][n] = {{"re", re}, {"im", im}, {"relative_drift", relative_drift(n)}};
    }
    return j.dump(1);
}

MonitorSeries evolve(const GridFunction& u0, const EvolutionConfig& cfg, const std::vector<Monitor>& monitors,
                     const SnapshotSink& snapshot)
{
    if (!(cfg.dt > 0.0) || !(cfg.t_final > 0.0) || cfg.monitor_stride < 1)
        throw std::invalid_argument("evolution needs dt > 0, t_final > 0, stride >= 1");
    if (cfg.dt > stable_dt(u0, cfg.dealias))
        throw StabilityError("dt = " + std::to_string(cfg.dt) + " exceeds the stability estimate "
                             + std::to_string(stable_dt(u0, cfg.dealias)));
    warn_if_not_localized(u0, "initial data");
    DnlsStepper stepper(u0.size(), u0.domain_length(), cfg.dt, cfg.dealias);
    auto steps = static_cast<long>(std::llround(cfg.t_final / cfg.dt));

    MonitorSeries series;
    for (const auto& m : monitors) {
        series.names.push_back(m.name);
        series.values[m.name];
    }
    bool warned = false;
    auto record = [&](double t, const GridFunction& u) {
        series.times.push_back(t);
        for (const auto& m : monitors)
            series.values[m.name].push_back(m.evaluate(u));
        if (!warned && !u.localized())
            warned = !warn_if_not_localized(u, "state at t = " + std::to_string(t));
        if (snapshot)
            snapshot(t, u);
    };

    // Work on the dealiased state throughout so monitors see what the stepper evolves.
    Eigen::VectorXcd v = stepper.filtered(fft(u0.values()));
    record(0.0, GridFunction(ifft(v), u0.domain_length()));
    for (long n = 1; n <= steps; ++n) {
        stepper.advance(v);
        if (n % cfg.monitor_stride == 0 || n == steps)
            record(double(n) * cfg.dt, GridFunction(ifft(v), u0.domain_length()));
    }
    return series;
}

Monitor mass_monitor()
{
    return {"M", [](const GridFunction& u) { return evaluate(mass_density(), u); }};
}

Monitor momentum_monitor()
{
    return {"P", [](const GridFunction& u) { return evaluate(momentum_density(), u); }};
}

Monitor energy_monitor()
{
    return {"E", [](const GridFunction& u) { return evaluate(energy_density(), u); }};
}

Monitor hierarchy_monitor(int j)
{
    DiffPolynomial density = energy(j).density;
    return {"E" + std::to_string(j), [density](const GridFunction& u) { return evaluate(density, u); }};
}

Monitor transmission_monitor(cplx lambda_sq)
{
    std::ostringstream name;
    name << "a(" << lambda_sq.real() << (lambda_sq.imag() < 0 ? "" : "+") << lambda_sq.imag() << "i)";
    auto lam = SpectralParameter::from_lambda_sq(lambda_sq);
    return {name.str(), [lam](const GridFunction& u) { return jost_transmission(u, lam); }};
}

Monitor phi_monitor(double rho, int L)
{
    std::ostringstream name;
    name << "phi" << L << "(" << rho << ")";
    return {name.str(), [rho, L](const GridFunction& u) { return cplx(phi(u, rho, L), 0.0); }};
}

Monitor sobolev_monitor(double s, bool homogeneous)
{
    std::ostringstream name;
    name << (homogeneous ? "Hdot" : "H") << s;
    return {name.str(), [s, homogeneous](const GridFunction& u) {
                return cplx(homogeneous ? hs_seminorm(u, s) : hs_norm(u, s), 0.0);
            }};
}

} // namespace dnls
