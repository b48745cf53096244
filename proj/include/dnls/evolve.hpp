#pragma once

#include "dnls/grid.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace dnls {

struct EvolutionConfig {
    double dt = 1e-3;
    double t_final = 1.0;
    double dealias = 2.0 / 3.0;
    int monitor_stride = 100;
};

// Largest dt the explicit nonlinear stages tolerate for this state (heuristic).
double stable_dt(const GridFunction& u, double dealias = 2.0 / 3.0);

// Integrating-factor RK4 for i u_t + u_xx = -i (|u|^2 u)_x. The linear part is exact.
class DnlsStepper {
public:
    DnlsStepper(Eigen::Index n, double length, double dt, double dealias = 2.0 / 3.0);

    double dt() const { return dt_; }
    // Advances Fourier coefficients in place (FFT normalization, not the continuous transform).
    void advance(Eigen::VectorXcd& coeffs) const;
    GridFunction step(const GridFunction& u) const;
    Eigen::VectorXcd filtered(const Eigen::VectorXcd& coeffs) const;

private:
    Eigen::VectorXcd nonlinear(const Eigen::VectorXcd& coeffs) const;

    Eigen::Index n_;
    double length_;
    double dt_;
    Eigen::VectorXd k_;
    Eigen::VectorXd mask_;
    Eigen::VectorXcd full_, half_;
};

GridFunction step(const GridFunction& u, double dt, double dealias = 2.0 / 3.0);

struct Monitor {
    std::string name;
    std::function<cplx(const GridFunction&)> evaluate;
};

struct MonitorSeries {
    std::vector<double> times;
    std::vector<std::string> names;
    std::map<std::string, std::vector<cplx>> values;

    const std::vector<cplx>& operator[](const std::string& name) const { return values.at(name); }
    // max_t |m(t) - m(0)| / |m(0)|
    double relative_drift(const std::string& name) const;
    std::string to_csv() const;
    std::string to_json() const;
};

using SnapshotSink = std::function<void(double t, const GridFunction& u)>;

MonitorSeries evolve(const GridFunction& u0, const EvolutionConfig& cfg, const std::vector<Monitor>& monitors,
                     const SnapshotSink& snapshot = {});

Monitor mass_monitor();
Monitor momentum_monitor();
Monitor energy_monitor();
Monitor hierarchy_monitor(int j);
Monitor transmission_monitor(cplx lambda_sq);
Monitor phi_monitor(double rho, int L);
Monitor sobolev_monitor(double s, bool homogeneous = false);

} // namespace dnls
