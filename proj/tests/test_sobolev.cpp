#include "dnls/errors.hpp"
#include "dnls/scattering.hpp"
#include "dnls/sobolev.hpp"

#include <doctest.h>

#include <cmath>

using namespace dnls;

namespace {
const GridFunction& profile()
{
    static const GridFunction u = gaussian(1024, 40.0, 1.0, 1.0, 0.5);
    return u;
}
} // namespace

TEST_CASE("norms of a Gaussian")
{
    // |hat u|^2 = e^{-(zeta - k)^2} for a unit Gaussian modulated by k
    CHECK(hs_seminorm(profile(), 0.0) * hs_seminorm(profile(), 0.0) == doctest::Approx(std::sqrt(M_PI)));
    double h1 = hs_seminorm(profile(), 1.0);
    CHECK(h1 * h1 == doctest::Approx(std::sqrt(M_PI) * (0.5 + 0.25)).epsilon(1e-10));
    CHECK(hs_norm(profile(), 1.0) * hs_norm(profile(), 1.0) == doctest::Approx(std::sqrt(M_PI) * 1.75).epsilon(1e-10));
}

TEST_CASE("f_nu norm is pi / sin(pi nu)")
{
    for (double nu : {0.1, 0.3, 0.5, 0.9})
        CHECK(f_nu_l1_norm(nu) == doctest::Approx(M_PI / std::sin(M_PI * nu)).epsilon(1e-10));
    CHECK_THROWS(f_nu_l1_norm(1.0));
}

TEST_CASE("phi0 is the imaginary part of the closed-form remainder")
{
    for (int L = 0; L <= 2; ++L)
        for (double rho : {0.5, 3.0, 40.0}) {
            double p = phi0(profile(), rho, L);
            CHECK(tau1(profile(), cplx(0, rho), L).imag() == doctest::Approx(p).epsilon(1e-10));
        }
}

TEST_CASE("phi approaches phi0 for large rho")
{
    double d10 = std::abs(phi(profile(), 10.0, 1) - phi0(profile(), 10.0, 1));
    double d100 = std::abs(phi(profile(), 100.0, 1) - phi0(profile(), 100.0, 1));
    CHECK(d100 < d10 * 1e-2);
    CHECK_THROWS_AS(phi(profile(), 10.0, 5), IndexError);
}

TEST_CASE("comparison identity at R = 0")
{
    for (double s : {0.3, 0.7, 1.5, 2.5}) {
        auto rep = compare_hs(profile(), s, 0.0);
        CHECK(rep.ratio == doctest::Approx(rep.expected_ratio).epsilon(1e-6));
        CHECK(rep.pass);
    }
}

TEST_CASE("comparison bounds for R > 0 and integer order")
{
    auto rep = compare_hs(profile(), 1.5, 3.0);
    CHECK(rep.pass);
    CHECK(rep.integral < comparison_integral(profile(), 1.5, 0.0));
    auto whole = compare_hs(profile(), 1.0, 0.0);
    CHECK(whole.integer_order);
    auto text = to_json(whole);
    CHECK(text.find("hs_sq") != std::string::npos);
    CHECK(text.find("ratio") == std::string::npos);
    CHECK_THROWS(comparison_integral(profile(), 1.0, 0.0));
}

TEST_CASE("csv of samples")
{
    std::vector<PhiSample> rows{{2.0, 1, 0.1, 0.09}};
    auto csv = phi_samples_csv(rows);
    CHECK(csv.rfind("rho,L,phi,phi0,abs_diff", 0) == 0);
}
