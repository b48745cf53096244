#include "dnls/checks.hpp"
#include "dnls/errors.hpp"
#include "dnls/scattering.hpp"

#include <doctest.h>

#include <cmath>

using namespace dnls;

namespace {
const GridFunction& profile()
{
    static const GridFunction u = gaussian(1024, 20.0, 1.0, 1.0, 0.5);
    return u;
}
double mass(const GridFunction& u) { return u.values().squaredNorm() * u.dx(); }
} // namespace

TEST_CASE("spectral parameter root choice")
{
    auto lam = SpectralParameter::from_lambda_sq({0.0, 4.0});
    CHECK(std::abs(lam.lambda * lam.lambda - cplx(0.0, 4.0)) < 1e-14);
    CHECK(std::arg(lam.lambda) == doctest::Approx(M_PI / 4));
    auto on = SpectralParameter::on_imaginary_axis(9.0);
    CHECK(std::abs(on.lambda_sq - cplx(0.0, 9.0)) < 1e-13);
}

TEST_CASE("zero potential has a = 1")
{
    auto z = zero_function(256, 20.0);
    CHECK(std::abs(jost_transmission(z, SpectralParameter::from_lambda_sq({1.0, 2.0})) - 1.0) < 1e-14);
    CHECK(perturbation_determinant(z, SpectralParameter::from_lambda_sq({1.0, 2.0}), 64) == cplx(1.0));
}

TEST_CASE("a tends to exp(-i |u|^2 / 2) for large lambda")
{
    cplx limit = std::polar(1.0, -0.5 * mass(profile()));
    double d2 = std::abs(jost_transmission(profile(), SpectralParameter::on_imaginary_axis(1e2)) - limit);
    double d3 = std::abs(jost_transmission(profile(), SpectralParameter::on_imaginary_axis(1e3)) - limit);
    CHECK(d3 < d2);
    CHECK(d3 < 1e-3);
}

TEST_CASE("determinant agrees with the squared Jost coefficient")
{
    auto lam = SpectralParameter::from_lambda_sq(std::polar(4.0, 0.6));
    cplx a = jost_transmission(profile(), lam);
    cplx d = perturbation_determinant(profile(), lam, 256);
    CHECK(std::abs(d - a * a) / std::abs(a * a) < 1e-5);
    // without the trace correction the truncation error is much larger
    cplx raw = perturbation_determinant_raw(build_T_matrix(profile(), lam, 256));
    CHECK(std::abs(raw - a * a) > std::abs(d - a * a));
}

TEST_CASE("matrix traces approach the analytic ones")
{
    auto lam = SpectralParameter::from_lambda_sq({0.0, 2.0});
    auto t = build_T_matrix(profile(), lam, 512);
    auto tr = matrix_traces(t, 2);
    CHECK(std::abs(tr[0] - trace_T2(profile(), lam)) / std::abs(tr[0]) < 1e-2);
    CHECK(std::abs(tr[1] - trace_T4(profile(), lam)) / std::abs(tr[1]) < 1e-2);
    double hs = t.hilbert_schmidt_norm_sq();
    CHECK(hs == doctest::Approx(std::norm(lam.lambda) / 2.0 * mass(profile())).epsilon(0.02));
}

TEST_CASE("scaling covariance of a")
{
    auto lam = SpectralParameter::from_lambda_sq({0.0, 4.0});
    cplx a = jost_transmission(spatial_rescale(profile(), 2.0), lam);
    cplx b = jost_transmission(profile(), SpectralParameter::from_lambda(lam.lambda / std::sqrt(2.0)));
    CHECK(std::abs(a - b) < 1e-8);
}

TEST_CASE("log series and continued logarithm agree")
{
    auto lam = SpectralParameter::from_lambda_sq({0.0, 4.0});
    cplx s = log_a_series(profile(), lam, 10, 256);
    cplx l = log_transmission(profile(), lam);
    CHECK(std::abs(s - l) < 1e-8);
    CHECK(std::abs(std::exp(l) - jost_transmission(profile(), lam)) < 1e-10);
}

TEST_CASE("series diverges below the threshold")
{
    GridFunction big = gaussian(1024, 20.0, 3.0, 1.0, 0.5);
    CHECK_THROWS_AS(log_a_series(big, SpectralParameter::from_lambda_sq({0.0, 0.3}), 4, 128), DivergenceError);
    double r0 = series_threshold_R0(profile());
    CHECK(r0 >= 1.0);
    CHECK(spectral_radius_T2(build_T_matrix(profile(), SpectralParameter::on_imaginary_axis(r0), 128)) < 0.25 + 1e-9);
}

TEST_CASE("errors")
{
    GridFunction wide = gaussian(256, 10.0, 1.0, 3.0);
    CHECK_THROWS_AS(jost_transmission(wide, SpectralParameter::from_lambda_sq({0.0, 1.0})), DecayError);
    CHECK_THROWS_AS(build_T_matrix(profile(), SpectralParameter::from_lambda_sq({0.0, 1.0}), 1024), std::invalid_argument);
}

TEST_CASE("report rows")
{
    std::vector<ScatteringRow> rows{{cplx(0, 4), cplx(0.5, 0.1), "jost", 0.0}};
    CHECK(rows_to_csv(rows).find("lambda_sq_re") != std::string::npos);
    CHECK(rows_to_json(rows).find("\"method\": \"jost\"") != std::string::npos);
}
