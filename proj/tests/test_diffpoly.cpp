#include "dnls/diffpoly.hpp"
#include "dnls/errors.hpp"
#include "dnls/grid.hpp"

#include <doctest.h>

#include <cmath>

using namespace dnls;

namespace {

DiffPolynomial u0() { return DiffPolynomial::u(0); }
DiffPolynomial ub0() { return DiffPolynomial::ubar(0); }
ExactComplex c(long n, long d = 1) { return ExactComplex(Rational(n, d)); }

} // namespace

TEST_CASE("arithmetic merges and cancels monomials")
{
    auto p = u0() * ub0();
    CHECK(p.size() == 1);
    CHECK((p - p).is_zero());
    auto q = p + p * c(2);
    CHECK(q.terms().begin()->second == c(3));
    CHECK(p.conj() == p);
    CHECK((DiffPolynomial::u(1) * ub0()).conj() == u0() * DiffPolynomial::ubar(1));
}

TEST_CASE("Leibniz rule and total derivatives")
{
    auto p = DiffPolynomial::u(1) * ub0();
    auto d = differentiate(p);
    CHECK(d == DiffPolynomial::u(2) * ub0() + DiffPolynomial::u(1) * DiffPolynomial::ubar(1));
    // total derivatives have vanishing Euler operator
    CHECK(variational_derivative(d, Variable::u).is_zero());
    CHECK(variational_derivative(d, Variable::ubar).is_zero());
    CHECK(functionals_equal(p + d, p));
}

TEST_CASE("functionals_equal sees integration by parts")
{
    // u_x ubar ~ - u ubar_x
    CHECK(functionals_equal(DiffPolynomial::u(1) * ub0(), -(u0() * DiffPolynomial::ubar(1))));
    CHECK_FALSE(functionals_equal(DiffPolynomial::u(1) * ub0(), u0() * DiffPolynomial::ubar(1)));
    // u^2 ubar ubar_x = -(1/2) d(u^2) ... not a derivative, so distinct from zero
    CHECK_FALSE(functionals_equal(u0() * u0() * ub0() * DiffPolynomial::ubar(1), DiffPolynomial{}));
    // constant terms are never total derivatives
    CHECK_FALSE(functionals_equal(DiffPolynomial::constant(c(1)), DiffPolynomial{}));
}

TEST_CASE("scaling weight")
{
    CHECK(*scaling_weight(u0() * ub0()) == 0);
    CHECK(*scaling_weight(DiffPolynomial::u(1) * ub0()) == 1);
    CHECK(*scaling_weight(u0() * u0() * ub0() * ub0()) == 1);
    CHECK_FALSE(scaling_weight(u0() * ub0() + DiffPolynomial::u(1) * ub0()).has_value());
    CHECK_THROWS_AS(scaling_weight(DiffPolynomial{}), ZeroPolynomialError);
}

TEST_CASE("partial derivatives")
{
    auto p = u0() * u0() * DiffPolynomial::ubar(1);
    CHECK(partial(p, Variable::u, 0) == u0() * DiffPolynomial::ubar(1) * c(2));
    CHECK(partial(p, Variable::ubar, 1) == u0() * u0());
    CHECK(partial(p, Variable::ubar, 0).is_zero());
}

TEST_CASE("numerical evaluation matches quadrature of the density")
{
    GridFunction u = gaussian(256, 30.0, 1.0, 1.0, 0.7);
    // int |u|^2 for a Gaussian of unit width is sqrt(pi)
    cplx m = evaluate(u0() * ub0(), u);
    CHECK(m.real() == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-12));
    // int u_x ubar = i k int |u|^2 for a modulated real envelope
    cplx p = evaluate(DiffPolynomial::u(1) * ub0(), u);
    CHECK(p.imag() == doctest::Approx(0.7 * std::sqrt(M_PI)).epsilon(1e-10));
    CHECK(std::abs(p.real()) < 1e-10);
    CHECK_THROWS_AS(density_values(DiffPolynomial::u(70) * ub0(), u), ResolutionError);
}

TEST_CASE("printing")
{
    CHECK(to_string(DiffPolynomial::u(2) * ub0() * c(1, 2)) == "1/2*u_xx*ubar");
}
