#include "dnls/scattering.hpp"

#include "dnls/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace dnls {

namespace {

const cplx I(0.0, 1.0);

// Radau IIA collocation tableau with s stages (order 2s - 1, L-stable).
struct RadauTableau {
    int s;
    Eigen::VectorXd c;
    Eigen::MatrixXd a;
};

long double legendre(int n, long double t)
{
    long double p0 = 1, p1 = t;
    if (n == 0)
        return p0;
    for (int k = 1; k < n; ++k) {
        long double p2 = ((2 * k + 1) * t * p1 - k * p0) / (k + 1);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

RadauTableau make_radau(int s)
{
    // Nodes: zeros of P_s - P_{s-1} on [-1, 1], mapped to [0, 1]; t = 1 is one of them.
    auto f = [s](long double t) { return legendre(s, t) - legendre(s - 1, t); };
    std::vector<long double> nodes;
    const int scan = 4000;
    for (int i = 0; i < scan; ++i) {
        long double lo = -1.0L + 2.0L * i / scan, hi = -1.0L + 2.0L * (i + 1) / scan;
        if (i == scan - 1)
            break;
        long double flo = f(lo), fhi = f(hi);
        if (flo == 0) {
            nodes.push_back(lo);
            continue;
        }
        if ((flo < 0) == (fhi < 0))
            continue;
        for (int it = 0; it < 200; ++it) {
            long double mid = 0.5L * (lo + hi);
            if ((f(mid) < 0) == (flo < 0))
                lo = mid;
            else
                hi = mid;
        }
        nodes.push_back(0.5L * (lo + hi));
    }
    nodes.push_back(1.0L);
    if (int(nodes.size()) != s)
        throw std::logic_error("Radau node search failed");

    using MatL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    using VecL = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
    VecL c(s);
    for (int i = 0; i < s; ++i)
        c[i] = 0.5L * (1.0L + nodes[std::size_t(i)]);
    // sum_j a_ij c_j^(q-1) = c_i^q / q
    MatL v(s, s);
    for (int q = 0; q < s; ++q)
        for (int j = 0; j < s; ++j)
            v(q, j) = std::pow(c[j], (long double)q);
    Eigen::FullPivLU<MatL> lu(v);
    RadauTableau tab{s, Eigen::VectorXd(s), Eigen::MatrixXd(s, s)};
    for (int i = 0; i < s; ++i) {
        VecL rhs(s);
        for (int q = 0; q < s; ++q)
            rhs[q] = std::pow(c[i], (long double)(q + 1)) / (q + 1);
        VecL row = lu.solve(rhs);
        for (int j = 0; j < s; ++j)
            tab.a(i, j) = double(row[j]);
        tab.c[i] = double(c[i]);
    }
    return tab;
}

const RadauTableau& radau()
{
    static const RadauTableau tab = make_radau(6);
    return tab;
}

// Band-limited interpolant of the grid samples.
class TrigInterpolant {
public:
    explicit TrigInterpolant(const GridFunction& u) : left_(u.left())
    {
        auto n = u.size();
        Eigen::VectorXcd c = fft(u.values()) / double(n);
        Eigen::VectorXd k = wavenumbers(n, u.domain_length());
        double peak = c.cwiseAbs().maxCoeff();
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != n / 2 && std::abs(c[j]) > 1e-17 * peak) {
                coef_.push_back(c[j]);
                freq_.push_back(k[j]);
            }
    }

    cplx operator()(double x) const
    {
        cplx acc = 0.0;
        double y = x - left_;
        for (std::size_t j = 0; j < coef_.size(); ++j)
            acc += coef_[j] * std::polar(1.0, freq_[j] * y);
        return acc;
    }

private:
    double left_;
    std::vector<cplx> coef_;
    std::vector<double> freq_;
};

thread_local int jost_steps = 0;

using Vec2 = Eigen::Vector2cd;

// One collocation step for y' = F(x) y with F = [[0, lam u], [-lam conj(u), 2 i lam^2]].
Vec2 radau_step(const TrigInterpolant& u, cplx lam, cplx lam_sq, double x, double h, const Vec2& y)
{
    const auto& tab = radau();
    int s = tab.s;
    std::vector<Eigen::Matrix2cd> f(static_cast<std::size_t>(s));
    for (int j = 0; j < s; ++j) {
        cplx uj = u(x + tab.c[j] * h);
        f[std::size_t(j)] << 0.0, lam * uj, -lam * std::conj(uj), 2.0 * I * lam_sq;
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(2 * s, 2 * s);
    Eigen::VectorXcd rhs(2 * s);
    for (int i = 0; i < s; ++i) {
        rhs.segment<2>(2 * i) = y;
        for (int j = 0; j < s; ++j)
            m.block<2, 2>(2 * i, 2 * j) -= h * tab.a(i, j) * f[std::size_t(j)];
    }
    Eigen::VectorXcd stages = m.partialPivLu().solve(rhs);
    return stages.segment<2>(2 * (s - 1));
}

} // namespace

SpectralParameter SpectralParameter::from_lambda_sq(cplx lambda_sq)
{
    cplx lam = std::sqrt(lambda_sq);
    if (lam.real() < 0.0 || (lam.real() == 0.0 && lam.imag() < 0.0))
        lam = -lam;
    return {lam, lambda_sq};
}

SpectralParameter SpectralParameter::from_lambda(cplx lambda)
{
    return {lambda, lambda * lambda};
}

SpectralParameter SpectralParameter::on_imaginary_axis(double rho)
{
    return {std::polar(std::sqrt(rho), 0.25 * std::numbers::pi), cplx(0.0, rho)};
}

int last_jost_steps()
{
    return jost_steps;
}

cplx jost_transmission(const GridFunction& u, const SpectralParameter& lam, const JostOptions& opt)
{
    jost_steps = 0;
    double peak = u.max_abs();
    if (peak == 0.0)
        return 1.0;
    if (u.edge_ratio() > opt.decay_threshold)
        throw DecayError("u is not negligible at the domain edges (ratio " + std::to_string(u.edge_ratio()) + ")");
    if (lam.lambda_sq.imag() < 0.0)
        throw std::invalid_argument("jost_transmission needs Im lambda^2 >= 0");

    Eigen::Index first = 0, last = u.size() - 1;
    while (first < last && std::abs(u[first]) < opt.window_threshold * peak)
        ++first;
    while (last > first && std::abs(u[last]) < opt.window_threshold * peak)
        --last;
    double xl = u.x(std::max<Eigen::Index>(first - 1, 0));
    double xr = u.x(std::min<Eigen::Index>(last + 1, u.size() - 1));

    TrigInterpolant interp(u);
    const int order = 2 * radau().s - 1;
    Vec2 y(1.0, 0.0);
    double x = xl;
    double h = (xr - xl) / 64.0;
    double hmin = 1e-12 * (xr - xl);
    while (x < xr) {
        if (jost_steps > opt.max_steps)
            throw StiffnessError("Jost integration exceeded the step budget");
        h = std::min(h, xr - x);
        Vec2 big = radau_step(interp, lam.lambda, lam.lambda_sq, x, h, y);
        Vec2 mid = radau_step(interp, lam.lambda, lam.lambda_sq, x, 0.5 * h, y);
        Vec2 small = radau_step(interp, lam.lambda, lam.lambda_sq, x + 0.5 * h, 0.5 * h, mid);
        double err = (big - small).cwiseAbs().maxCoeff() / (opt.tolerance * (1.0 + small.cwiseAbs().maxCoeff()));
        if (!std::isfinite(err))
            throw StiffnessError("non-finite error estimate in Jost integration");
        if (err <= 1.0) {
            x += h;
            y = small;
            ++jost_steps;
        }
        double factor = err == 0.0 ? 4.0 : 0.9 * std::pow(err, -1.0 / (order + 1));
        h *= std::clamp(factor, 0.2, 4.0);
        if (h < hmin)
            throw StiffnessError("step size collapsed in Jost integration");
    }
    return y[0];
}

cplx trace_T2(const GridFunction& u, const SpectralParameter& lam)
{
    Eigen::VectorXcd uhat = transform(u);
    Eigen::VectorXd k = wavenumbers(u.size(), u.domain_length());
    double dk = 2.0 * std::numbers::pi / u.domain_length();
    cplx two = 2.0 * lam.lambda_sq;
    cplx acc = 0.0;
    for (Eigen::Index j = 0; j < k.size(); ++j)
        acc += std::norm(uhat[j]) / (k[j] + two);
    return I * two * acc * dk;
}

cplx trace_T4(const GridFunction& u, const SpectralParameter& lam)
{
    auto n = u.size();
    Eigen::VectorXd k = wavenumbers(n, u.domain_length());
    cplx two = 2.0 * lam.lambda_sq;
    Eigen::VectorXcd plus(n), minus(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        plus[j] = 1.0 / (k[j] + two);
        minus[j] = 1.0 / (k[j] - two);
    }
    Eigen::VectorXcd ub = u.values().conjugate();
    Eigen::VectorXcd v = apply_multiplier(u.values(), plus);
    Eigen::VectorXcd w = apply_multiplier(ub, minus);
    cplx integral = (ub.array() * v.array() * v.array() * w.array()).sum() * u.dx();
    return I * two * two * integral;
}

Eigen::MatrixXcd OperatorDiscretization::dense() const
{
    Eigen::Index n = block_size();
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    t.topRightCorner(n, n) = upper;
    t.bottomLeftCorner(n, n) = lower;
    return t;
}

double OperatorDiscretization::hilbert_schmidt_norm_sq() const
{
    return upper.squaredNorm() + lower.squaredNorm();
}

OperatorDiscretization build_T_matrix(const GridFunction& u, const SpectralParameter& lam, int modes)
{
    auto n = u.size();
    if (2 * modes > n)
        throw std::invalid_argument("build_T_matrix needs 2M <= N");
    // u(x) = sum_k c_k e^{i zeta_k (x - left)}: multiplication is convolution with c.
    Eigen::VectorXcd c = fft(u.values()) / double(n);
    auto coeff = [&](Eigen::Index k) -> cplx {
        if (k < -n / 2 || k >= n / 2)
            return 0.0;
        return c[k >= 0 ? k : k + n];
    };
    double base = 2.0 * std::numbers::pi / u.domain_length();
    Eigen::Index b = 2 * modes;
    OperatorDiscretization t;
    t.modes = modes;
    t.lambda = lam;
    t.upper.resize(b, b);
    t.lower.resize(b, b);
    cplx il = I * lam.lambda;
    for (Eigen::Index row = 0; row < b; ++row) {
        double zeta = base * double(row - modes);
        cplx g11 = -1.0 / (zeta + lam.lambda_sq);
        cplx g22 = 1.0 / (zeta - lam.lambda_sq);
        for (Eigen::Index col = 0; col < b; ++col) {
            Eigen::Index d = row - col;
            t.upper(row, col) = il * g11 * coeff(d);
            t.lower(row, col) = il * g22 * std::conj(coeff(-d));
        }
    }
    return t;
}

std::vector<cplx> matrix_traces(const OperatorDiscretization& t, int kmax)
{
    std::vector<cplx> out;
    if (kmax < 1)
        return out;
    Eigen::MatrixXcd k1 = t.square_block();
    out.push_back(2.0 * k1.trace());
    if (kmax == 1)
        return out;
    // tr(K^(a+b)) = sum_ij (K^a)_ij (K^b)_ji
    auto pair_trace = [](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
        return (x.array() * y.transpose().array()).sum();
    };
    std::vector<Eigen::MatrixXcd> powers{k1};
    for (int k = 2; k <= kmax; ++k) {
        int a = (k + 1) / 2, b = k / 2;
        while (int(powers.size()) < a)
            powers.push_back(powers.back() * k1);
        out.push_back(2.0 * pair_trace(powers[std::size_t(a - 1)], powers[std::size_t(b - 1)]));
    }
    return out;
}

double spectral_radius_T2(const OperatorDiscretization& t, int iterations)
{
    Eigen::Index n = t.block_size();
    Eigen::VectorXcd x(n);
    for (Eigen::Index j = 0; j < n; ++j)
        x[j] = cplx(std::cos(0.7 * double(j) + 0.3), std::sin(1.3 * double(j)));
    x.normalize();
    // geometric mean of growth over the last half of the run
    double log_growth = 0.0;
    int counted = 0;
    for (int it = 0; it < iterations; ++it) {
        Eigen::VectorXcd y = t.upper * (t.lower * x);
        double g = y.norm();
        if (g == 0.0)
            return 0.0;
        if (it >= iterations / 2) {
            log_growth += std::log(g);
            ++counted;
        }
        x = y / g;
    }
    return std::exp(log_growth / counted);
}

cplx perturbation_determinant_raw(const OperatorDiscretization& t)
{
    Eigen::Index n = t.block_size();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n) - t.square_block();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    const auto& packed = lu.matrixLU();
    cplx logdet = std::log(cplx(lu.permutationP().determinant()));
    for (Eigen::Index j = 0; j < n; ++j)
        logdet += std::log(packed(j, j));
    // det(I - T^2) = det(I - upper lower)^2
    return std::exp(2.0 * logdet);
}

cplx perturbation_determinant(const GridFunction& u, const OperatorDiscretization& t)
{
    Eigen::Index n = t.block_size();
    Eigen::MatrixXcd k = t.square_block();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(Eigen::MatrixXcd::Identity(n, n) - k);
    const auto& packed = lu.matrixLU();
    cplx logdet = std::log(cplx(lu.permutationP().determinant()));
    for (Eigen::Index j = 0; j < n; ++j)
        logdet += std::log(packed(j, j));
    logdet *= 2.0;
    // The mode cutoff loses a tail of order |lambda^2| / zeta_max in tr T^2; swap the
    // truncated k = 1, 2 traces for their analytic values.
    cplx t2_matrix = 2.0 * k.trace();
    cplx t4_matrix = 2.0 * (k.array() * k.transpose().array()).sum();
    cplx t2 = trace_T2(u, t.lambda);
    cplx t4 = trace_T4(u, t.lambda);
    logdet += -(t2 - t2_matrix) - 0.5 * (t4 - t4_matrix);
    return std::exp(logdet);
}

cplx perturbation_determinant(const GridFunction& u, const SpectralParameter& lam, int modes)
{
    if (u.max_abs() == 0.0)
        return 1.0;
    return perturbation_determinant(u, build_T_matrix(u, lam, modes));
}

cplx log_a_series(const GridFunction& u, const SpectralParameter& lam, int terms, int modes)
{
    if (u.max_abs() == 0.0 || terms < 1)
        return 0.0;
    cplx sum = -trace_T2(u, lam) / 2.0;
    if (terms >= 2)
        sum -= trace_T4(u, lam) / 4.0;
    if (terms >= 3) {
        OperatorDiscretization t = build_T_matrix(u, lam, modes);
        double radius = spectral_radius_T2(t);
        if (radius >= 1.0)
            throw DivergenceError("spectral radius of T^2 is " + std::to_string(radius) + " >= 1");
        auto traces = matrix_traces(t, terms);
        for (int k = 3; k <= terms; ++k)
            sum -= traces[std::size_t(k - 1)] / double(2 * k);
    } else {
        OperatorDiscretization t = build_T_matrix(u, lam, std::min<int>(modes, 64));
        if (spectral_radius_T2(t) >= 1.0)
            throw DivergenceError("spectral radius of T^2 >= 1");
    }
    return sum;
}

cplx log_transmission(const GridFunction& u, const SpectralParameter& lam, const JostOptions& opt)
{
    double mass = u.values().squaredNorm() * u.dx();
    cplx limit_log = cplx(0.0, -0.5 * mass);
    if (mass == 0.0)
        return 0.0;
    double r = std::abs(lam.lambda_sq);
    cplx dir = lam.lambda_sq / r;
    cplx prev = jost_transmission(u, lam, opt);
    cplx acc = 0.0;
    double t = r;
    for (int hop = 0; hop < 400; ++hop) {
        if (std::abs(prev) < 1e-8)
            throw BranchError("a(lambda) is too close to zero to continue the logarithm");
        cplx rel = prev * std::exp(-limit_log);
        if (std::abs(rel - 1.0) < 0.05)
            return acc + std::log(rel) + limit_log;
        double step = 1.5;
        for (;;) {
            double tn = t * step;
            cplx next = jost_transmission(u, SpectralParameter::from_lambda_sq(tn * dir), opt);
            cplx ratio = prev / next;
            if (std::abs(ratio - 1.0) < 0.3) {
                acc += std::log(ratio);
                prev = next;
                t = tn;
                break;
            }
            step = 1.0 + 0.5 * (step - 1.0);
            if (step < 1.0 + 1e-6)
                throw BranchError("cannot follow a(lambda) continuously along the ray");
        }
    }
    throw BranchError("a(lambda) does not approach its limit along the ray");
}

double series_threshold_R0(const GridFunction& u, const ThresholdOptions& opt)
{
    if (u.max_abs() == 0.0)
        return opt.floor;
    auto radius = [&](double rho) {
        return spectral_radius_T2(build_T_matrix(u, SpectralParameter::on_imaginary_axis(rho),
                                                 std::min<int>(opt.modes, int(u.size() / 2))));
    };
    double lo = opt.rho_min;
    if (radius(lo) < opt.target)
        return std::max(lo, opt.floor);
    double hi = lo;
    while (radius(hi) >= opt.target) {
        lo = hi;
        hi *= 2.0;
        if (hi > opt.rho_max)
            throw DivergenceError("no series threshold below rho_max");
    }
    for (int it = 0; it < 30 && hi / lo > 1.0 + 1e-3; ++it) {
        double mid = std::sqrt(lo * hi);
        (radius(mid) >= opt.target ? lo : hi) = mid;
    }
    return std::max(hi, opt.floor);
}

std::string rows_to_json(const std::vector<ScatteringRow>& rows)
{
    auto out = nlohmann::json::array();
    for (const auto& r : rows)
        out.push_back({{"lambda_sq_re", r.lambda_sq.real()},
                       {"lambda_sq_im", r.lambda_sq.imag()},
                       {"a_re", r.a.real()},
                       {"a_im", r.a.imag()},
                       {"method", r.method},
                       {"residual", r.residual}});
    return out.dump(1);
}

std::string rows_to_csv(const std::vector<ScatteringRow>& rows)
{
    std::ostringstream os;
    os << std::setprecision(17) << "lambda_sq_re,lambda_sq_im,a_re,a_im,method,residual\n";
    for (const auto& r : rows)
        os << r.lambda_sq.real() << ',' << r.lambda_sq.imag() << ',' << r.a.real() << ',' << r.a.imag() << ','
           << r.method << ',' << r.residual << '\n';
    return os.str();
}

} // namespace dnls
