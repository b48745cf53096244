#pragma once

#include "dnls/grid.hpp"

#include <string>
#include <vector>

namespace dnls {

// (int |zeta|^{2s} |hat u|^2 dzeta)^{1/2} over the grid wavenumbers.
double hs_seminorm(const GridFunction& u, double s);
// (int (1 + zeta^2)^s |hat u|^2 dzeta)^{1/2}
double hs_norm(const GridFunction& u, double s);

// Quadratic part of phi_L at lambda^2 = i rho.
double phi0(const GridFunction& u, double rho, int L);

// The complex remainder of -tr T^2 / 2 after its first 2L+2 terms in 1/lambda^2,
// written out as a single frequency integral; its imaginary part on lambda^2 = i rho is phi0.
cplx tau1(const GridFunction& u, cplx lambda_sq, int L);

enum class LogMethod { jost, series };

struct PhiOptions {
    LogMethod method = LogMethod::jost;
    int series_terms = 10; // only for LogMethod::series
    int series_modes = 256;
};

// Highest E_j available to phi.
int energy_cap();

// Im[ln a(sqrt(i rho)) - sum_{j=0}^{2L+1} E_j / (i rho)^j]
double phi(const GridFunction& u, double rho, int L, const PhiOptions& opt = {});

struct PhiSample {
    double rho;
    int L;
    double phi;
    double phi0;
};

std::string phi_samples_csv(const std::vector<PhiSample>& samples);

// || |z|^{2 nu - 1} / (1 + z^2) ||_{L^1(R)} by quadrature.
double f_nu_l1_norm(double nu);

// int_R^infty rho^{2s-1} |phi0(u, rho, [s])| d rho
double comparison_integral(const GridFunction& u, double s, double R);

struct ComparisonReport {
    double s = 0.0;
    double R = 0.0;
    double integral = 0.0;
    double hs_sq = 0.0;
    double ratio = 0.0;
    double expected_ratio = 0.0;
    double upper_bound = 0.0; // right-hand side of the Hdot^s bound at this R
    bool integer_order = false;
    bool pass = false;
};

// Lower bound I(R) <= c ||u||^2 and upper bound ||u||^2 <= (I(R) + R^{2 nu} ||u||^2_{[s]} / (nu 4^{[s]+1})) / c,
// c = 4^{-(s+1)} ||f_nu||. Integer s only reports the seminorm.
ComparisonReport compare_hs(const GridFunction& u, double s, double R);
std::string to_json(const ComparisonReport& r);

} // namespace dnls
