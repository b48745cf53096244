#pragma once

#include "dnls/grid.hpp"

#include <string>
#include <vector>

namespace dnls {

// lambda together with lambda^2, so the root is never re-chosen implicitly.
struct SpectralParameter {
    cplx lambda;
    cplx lambda_sq;

    // Root with arg in [0, pi/2], i.e. in the closed upper region when Im lambda_sq >= 0.
    static SpectralParameter from_lambda_sq(cplx lambda_sq);
    static SpectralParameter from_lambda(cplx lambda);
    // lambda = sqrt(rho) e^{i pi/4}
    static SpectralParameter on_imaginary_axis(double rho);
};

struct JostOptions {
    double tolerance = 1e-12;     // per-step error target
    double decay_threshold = 1e-10;
    double window_threshold = 1e-14; // integrate where |u| exceeds this fraction of max|u|
    int max_steps = 200000;
};

// a(lambda) from the left Jost solution in oscillation-removed variables.
cplx jost_transmission(const GridFunction& u, const SpectralParameter& lam, const JostOptions& opt = {});

// Number of accepted steps in the last jost_transmission call on this thread.
int last_jost_steps();

// Analytic traces on the line, from the grid transform.
cplx trace_T2(const GridFunction& u, const SpectralParameter& lam);
cplx trace_T4(const GridFunction& u, const SpectralParameter& lam);

// T = [[0, upper], [lower, 0]] on Fourier modes -M..M-1 of each component.
struct OperatorDiscretization {
    int modes = 0;
    SpectralParameter lambda;
    Eigen::MatrixXcd upper;
    Eigen::MatrixXcd lower;

    Eigen::Index block_size() const { return upper.rows(); }
    Eigen::MatrixXcd dense() const;
    // upper * lower, whose spectrum is that of T^2 (each eigenvalue twice)
    Eigen::MatrixXcd square_block() const { return upper * lower; }
    double hilbert_schmidt_norm_sq() const;
};

OperatorDiscretization build_T_matrix(const GridFunction& u, const SpectralParameter& lam, int modes);

// tr(T^{2k}) for k = 1..kmax from matrix powers.
std::vector<cplx> matrix_traces(const OperatorDiscretization& t, int kmax);

double spectral_radius_T2(const OperatorDiscretization& t, int iterations = 300);

// det(I - T^2) without and with the analytic correction of the k = 1, 2 traces.
cplx perturbation_determinant_raw(const OperatorDiscretization& t);
cplx perturbation_determinant(const GridFunction& u, const SpectralParameter& lam, int modes);
cplx perturbation_determinant(const GridFunction& u, const OperatorDiscretization& t);

// -sum_{k=1}^{K} tr(T^{2k}) / 2k; k = 1, 2 analytic, k >= 3 from build_T_matrix(modes).
cplx log_a_series(const GridFunction& u, const SpectralParameter& lam, int terms, int modes);

// Principal-branch-free ln a: continued along the ray through lambda^2 out to where
// a is close to its limit exp(-i |u|^2 / 2).
cplx log_transmission(const GridFunction& u, const SpectralParameter& lam, const JostOptions& opt = {});

struct ThresholdOptions {
    int modes = 128;
    double rho_min = 0.25;
    double rho_max = 1e4;
    double target = 0.25;
    double floor = 1.0;
};

// Smallest rho on lambda^2 = i rho with spectral radius of T^2 below target (never below floor).
double series_threshold_R0(const GridFunction& u, const ThresholdOptions& opt = {});

struct ScatteringRow {
    cplx lambda_sq;
    cplx a;
    std::string method;
    double residual = 0.0;
};

std::string rows_to_json(const std::vector<ScatteringRow>& rows);
std::string rows_to_csv(const std::vector<ScatteringRow>& rows);

} // namespace dnls
