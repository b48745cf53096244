#pragma once

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <string>

namespace dnls {

using cplx = std::complex<double>;

// Uniform samples of a periodic function on [-L/2, L/2).
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(Eigen::VectorXcd values, double domain_length);

    Eigen::Index size() const { return values_.size(); }
    double domain_length() const { return length_; }
    double dx() const { return length_ / double(values_.size()); }
    double left() const { return -0.5 * length_; }
    double x(Eigen::Index j) const { return left() + double(j) * dx(); }

    const Eigen::VectorXcd& values() const { return values_; }
    cplx operator[](Eigen::Index j) const { return values_[j]; }

    double max_abs() const { return values_.cwiseAbs().maxCoeff(); }
    double edge_ratio() const;
    bool localized(double threshold = 1e-10) const;

private:
    Eigen::VectorXcd values_;
    double length_ = 0.0;
};

// Prints to stderr when the edge samples are not negligible; returns localized().
bool warn_if_not_localized(const GridFunction& u, const std::string& label, double threshold = 1e-10);

// Angular wavenumbers in FFT order: 0, 1, ..., N/2-1, -N/2, ..., -1 (times 2pi/L).
Eigen::VectorXd wavenumbers(Eigen::Index n, double length);

Eigen::VectorXcd fft(const Eigen::VectorXcd& v);
Eigen::VectorXcd ifft(const Eigen::VectorXcd& v);

// Continuous transform sampled at the grid wavenumbers,
// hat u(zeta) = (1/sqrt(2 pi)) int e^{-i x zeta} u(x) dx.
Eigen::VectorXcd transform(const GridFunction& u);
GridFunction inverse_transform(const Eigen::VectorXcd& uhat, double length);

// d^order/dx^order by Fourier multiplication; Nyquist mode dropped for odd orders.
Eigen::VectorXcd spectral_derivative(const GridFunction& u, int order);
Eigen::VectorXcd apply_multiplier(const Eigen::VectorXcd& values, const Eigen::VectorXcd& symbol);

double integrate(const Eigen::VectorXcd& density, double dx);
cplx integrate_complex(const Eigen::VectorXcd& density, double dx);

// sqrt(mu) u(mu x) resampled onto a domain of length L/mu.
GridFunction spatial_rescale(const GridFunction& u, double mu);

GridFunction gaussian(Eigen::Index n, double length, double amplitude, double width,
                      double wavenumber = 0.0, double center = 0.0);
GridFunction two_bump(Eigen::Index n, double length, double amplitude, double width,
                      double separation, double wavenumber = 0.0);
GridFunction plane_wave(Eigen::Index n, double length, double amplitude, int mode);
GridFunction zero_function(Eigen::Index n, double length);

void write_binary(const GridFunction& u, const std::string& path);
GridFunction read_binary(const std::string& path);
GridFunction read_csv(const std::string& path, double domain_length);
GridFunction read_grid_function(const std::string& path, double domain_length);

} // namespace dnls
