#include "dnls/grid.hpp"

#include <unsupported/Eigen/FFT>

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace dnls {

namespace {

Eigen::FFT<double>& fft_engine()
{
    thread_local Eigen::FFT<double> engine;
    return engine;
}

} // namespace

GridFunction::GridFunction(Eigen::VectorXcd values, double domain_length)
    : values_(std::move(values)), length_(domain_length)
{
    auto n = values_.size();
    if (n < 8 || !std::has_single_bit(std::uint64_t(n)))
        throw std::invalid_argument("grid size must be a power of two >= 8");
    if (!(domain_length > 0.0))
        throw std::invalid_argument("domain length must be positive");
}

double GridFunction::edge_ratio() const
{
    double peak = max_abs();
    if (peak == 0.0)
        return 0.0;
    return std::max(std::abs(values_[0]), std::abs(values_[size() - 1])) / peak;
}

bool GridFunction::localized(double threshold) const
{
    return edge_ratio() < threshold;
}

bool warn_if_not_localized(const GridFunction& u, const std::string& label, double threshold)
{
    if (u.localized(threshold))
        return true;
    std::cerr << "warning: " << label << ": edge samples at " << u.edge_ratio()
              << " of max, periodic surrogate may be inaccurate\n";
    return false;
}

Eigen::VectorXd wavenumbers(Eigen::Index n, double length)
{
    Eigen::VectorXd k(n);
    double base = 2.0 * std::numbers::pi / length;
    for (Eigen::Index j = 0; j < n; ++j)
        k[j] = base * double(j < n / 2 ? j : j - n);
    return k;
}

Eigen::VectorXcd fft(const Eigen::VectorXcd& v)
{
    Eigen::VectorXcd out(v.size());
    fft_engine().fwd(out, v);
    return out;
}

Eigen::VectorXcd ifft(const Eigen::VectorXcd& v)
{
    Eigen::VectorXcd out(v.size());
    fft_engine().inv(out, v);
    return out;
}

Eigen::VectorXcd transform(const GridFunction& u)
{
    Eigen::VectorXcd uhat = fft(u.values());
    Eigen::VectorXd k = wavenumbers(u.size(), u.domain_length());
    double scale = u.dx() / std::sqrt(2.0 * std::numbers::pi);
    for (Eigen::Index j = 0; j < uhat.size(); ++j)
        uhat[j] *= scale * std::polar(1.0, -k[j] * u.left());
    return uhat;
}

GridFunction inverse_transform(const Eigen::VectorXcd& uhat, double length)
{
    auto n = uhat.size();
    Eigen::VectorXd k = wavenumbers(n, length);
    double dx = length / double(n);
    Eigen::VectorXcd c(n);
    for (Eigen::Index j = 0; j < n; ++j)
        c[j] = uhat[j] * std::polar(1.0, k[j] * (-0.5 * length)) * (std::sqrt(2.0 * std::numbers::pi) / dx);
    return GridFunction(ifft(c), length);
}

Eigen::VectorXcd apply_multiplier(const Eigen::VectorXcd& values, const Eigen::VectorXcd& symbol)
{
    Eigen::VectorXcd c = fft(values);
    c.array() *= symbol.array();
    return ifft(c);
}

Eigen::VectorXcd spectral_derivative(const GridFunction& u, int order)
{
    if (order == 0)
        return u.values();
    auto n = u.size();
    Eigen::VectorXd k = wavenumbers(n, u.domain_length());
    Eigen::VectorXcd symbol(n);
    const cplx I(0.0, 1.0);
    for (Eigen::Index j = 0; j < n; ++j)
        symbol[j] = std::pow(I * k[j], order);
    if (order % 2 == 1)
        symbol[n / 2] = 0.0;
    return apply_multiplier(u.values(), symbol);
}

double integrate(const Eigen::VectorXcd& density, double dx)
{
    return density.real().sum() * dx;
}

cplx integrate_complex(const Eigen::VectorXcd& density, double dx)
{
    return density.sum() * dx;
}

GridFunction spatial_rescale(const GridFunction& u, double mu)
{
    // Same samples on a grid shrunk by mu: v(x) = sqrt(mu) u(mu x) at x_j / mu.
    return GridFunction(u.values() * std::sqrt(mu), u.domain_length() / mu);
}

GridFunction gaussian(Eigen::Index n, double length, double amplitude, double width,
                      double wavenumber, double center)
{
    Eigen::VectorXcd v(n);
    double dx = length / double(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        double x = -0.5 * length + double(j) * dx;
        double y = (x - center) / width;
        v[j] = amplitude * std::exp(-0.5 * y * y) * std::polar(1.0, wavenumber * x);
    }
    return GridFunction(std::move(v), length);
}

GridFunction two_bump(Eigen::Index n, double length, double amplitude, double width,
                      double separation, double wavenumber)
{
    GridFunction a = gaussian(n, length, amplitude, width, wavenumber, -0.5 * separation);
    GridFunction b = gaussian(n, length, 0.7 * amplitude, 0.8 * width, -wavenumber, 0.5 * separation);
    return GridFunction(a.values() + b.values(), length);
}

GridFunction plane_wave(Eigen::Index n, double length, double amplitude, int mode)
{
    Eigen::VectorXcd v(n);
    double dx = length / double(n);
    double k = 2.0 * std::numbers::pi * mode / length;
    for (Eigen::Index j = 0; j < n; ++j)
        v[j] = std::polar(amplitude, k * (-0.5 * length + double(j) * dx));
    return GridFunction(std::move(v), length);
}

GridFunction zero_function(Eigen::Index n, double length)
{
    return GridFunction(Eigen::VectorXcd::Zero(n), length);
}

namespace {

static_assert(std::endian::native == std::endian::little, "binary format assumes little-endian host");

template <class T>
void put(std::ostream& os, T v)
{
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is)
{
    T v{};
    if (!is.read(reinterpret_cast<char*>(&v), sizeof(T)))
        throw std::runtime_error("truncated grid function file");
    return v;
}

} // namespace

void write_binary(const GridFunction& u, const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open " + path + " for writing");
    os.write("DNLS", 4);
    put<std::uint32_t>(os, 1);
    put<std::uint64_t>(os, std::uint64_t(u.size()));
    put<double>(os, u.domain_length());
    for (Eigen::Index j = 0; j < u.size(); ++j) {
        put<double>(os, u[j].real());
        put<double>(os, u[j].imag());
    }
}

GridFunction read_binary(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open " + path);
    char magic[4];
    if (!is.read(magic, 4) || std::memcmp(magic, "DNLS", 4) != 0)
        throw std::runtime_error(path + ": bad magic");
    auto version = get<std::uint32_t>(is);
    if (version != 1)
        throw std::runtime_error(path + ": unsupported version");
    auto n = get<std::uint64_t>(is);
    auto length = get<double>(is);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        double re = get<double>(is);
        double im = get<double>(is);
        v[j] = {re, im};
    }
    return GridFunction(std::move(v), length);
}

GridFunction read_csv(const std::string& path, double domain_length)
{
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open " + path);
    std::vector<cplx> data;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#')
            continue;
        for (char& c : line)
            if (c == ',')
                c = ' ';
        std::istringstream ls(line);
        double re, im = 0.0;
        if (!(ls >> re))
            continue; // header
        ls >> im;
        data.emplace_back(re, im);
    }
    Eigen::VectorXcd v(Eigen::Index(data.size()));
    for (std::size_t j = 0; j < data.size(); ++j)
        v[Eigen::Index(j)] = data[j];
    return GridFunction(std::move(v), domain_length);
}

GridFunction read_grid_function(const std::string& path, double domain_length)
{
    std::ifstream probe(path, std::ios::binary);
    if (!probe)
        throw std::runtime_error("cannot open " + path);
    char magic[4] = {};
    probe.read(magic, 4);
    if (probe.gcount() == 4 && std::memcmp(magic, "DNLS", 4) == 0)
        return read_binary(path);
    if (!(domain_length > 0.0))
        throw std::invalid_argument("CSV input needs a domain length");
    return read_csv(path, domain_length);
}

} // namespace dnls
