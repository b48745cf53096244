#pragma once

#include "dnls/grid.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace dnls {

struct CheckResult {
    std::string name;
    std::string anchor; // the identity or statement being exercised
    bool pass = false;
    std::string detail;
    std::map<std::string, double> metrics;
    double seconds = 0.0;
};

struct CheckOptions {
    std::uint64_t seed = 1;
    Eigen::Index grid = 2048;
    double domain = 20.0;
    int modes = 1024;
    double dt = 1e-3;
    double t_final = 10.0;
    double long_time = 50.0;
    double dealias = 2.0 / 3.0;
    int random_trials = 20;
    std::vector<cplx> lambda_sq; // extra points for the transmission grid
    std::vector<double> rho;     // extra rho values for phi monitors
};

// Smaller grids and shorter runs, for interactive use.
CheckOptions quick_options();

// Test profiles
GridFunction scattering_gaussian(Eigen::Index n, double length);
GridFunction scattering_two_bump(Eigen::Index n, double length);
GridFunction evolution_gaussian(Eigen::Index n, double length);
// hat u = A (1 + (zeta - k)^2)^(-alpha), smoothly cut off at half the Nyquist wavenumber.
// In H^s for s < 2 alpha - 1/2 up to the cutoff.
GridFunction rough_profile(Eigen::Index n, double length, double amplitude, double alpha, double wavenumber);
GridFunction random_profile(Eigen::Index n, double length, std::uint64_t seed);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// Quadrature of P(p)/(p^2-1)^(j+1) along the line at angle -theta through 0.
cplx p_integral_quadrature(const std::vector<cplx>& coeffs, int j, double theta);

CheckResult check_golden_energies();
CheckResult check_mu12();
CheckResult check_resolvent_structure(int kmax);
CheckResult check_scaling_weights(int jmax);
CheckResult check_orientation_anchor(int jmax);
CheckResult check_telescope_fault();
CheckResult check_p_integral(int jmax);
CheckResult check_energy_scaling_numeric(int jmax);

CheckResult check_two_route(const CheckOptions& opt);
CheckResult check_large_lambda_limit(const CheckOptions& opt);
CheckResult check_hilbert_schmidt(const CheckOptions& opt);
CheckResult check_series_coefficients(const CheckOptions& opt);
CheckResult check_scaling_covariance(const CheckOptions& opt);
CheckResult check_log_series_vs_jost(const CheckOptions& opt);

CheckResult check_plane_wave(const CheckOptions& opt);
std::vector<CheckResult> check_conservation(const CheckOptions& opt);
CheckResult check_hs_boundedness(const CheckOptions& opt);

CheckResult check_sobolev_identity(const CheckOptions& opt);
CheckResult check_comparison_inequalities(const CheckOptions& opt);
CheckResult check_phi0_tau1(const CheckOptions& opt);
CheckResult check_comparison_monotone(const CheckOptions& opt);
CheckResult check_remainder_decay(const CheckOptions& opt);

const std::vector<std::string>& suite_names();
// Throws std::invalid_argument for an unknown suite.
std::vector<CheckResult> run_suite(const std::string& suite, const CheckOptions& opt);
std::string results_to_json(const std::string& suite, const std::vector<CheckResult>& results, bool with_anchor);

} // namespace dnls
