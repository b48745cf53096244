#include "dnls/errors.hpp"
#include "dnls/resolvent.hpp"

#include <doctest.h>

using namespace dnls;

TEST_CASE("polynomials in p")
{
    auto d = PPoly::denominator(2);
    CHECK(d.degree() == 4);
    CHECK(d(cplx(2.0, 0.0)) == cplx(9.0, 0.0));
    CHECK((PPoly::p() - PPoly::p()).is_zero());
    CHECK((PPoly::p() * PPoly::p() - PPoly::constant(1)) == PPoly::denominator(1));
}

TEST_CASE("base symbols")
{
    auto [d, a] = base_symbols();
    CHECK(d.is_diagonal());
    CHECK(a.is_antidiagonal());
    CHECK(d.denom_power == 1);
    CHECK(a.denom_power == 1);
}

TEST_CASE("coefficients have the homogeneous structure through level 6")
{
    ResolventExpansion rx(6);
    for (int k = 0; k <= 6; ++k) {
        CHECK(rx.diagonal(k).is_diagonal());
        CHECK(rx.antidiagonal(k).is_antidiagonal());
        CHECK(rx.diagonal(k).denom_power == k + 1);
        CHECK(rx.antidiagonal(k).denom_power == k + 1);
        for (auto kind : {SymbolKind::diagonal, SymbolKind::antidiagonal})
            for (const auto& part : rx.homogeneous_parts(k, kind)) {
                auto rep = verify_structure(part);
                CHECK_MESSAGE(rep.pass, rep.violation);
            }
    }
    CHECK(rx.diagonal(1).is_zero() == false);
}

TEST_CASE("telescoping brackets vanish")
{
    ResolventExpansion rx(6);
    for (int k = 0; k <= 5; ++k) {
        auto [bd, ba] = telescoping_brackets(rx, k);
        CHECK(bd.is_zero());
        CHECK(ba.is_zero());
    }
    auto [rd, ra] = rx.truncation_residual(4);
    CHECK(rd.is_diagonal());
    CHECK(ra.is_antidiagonal());
}

TEST_CASE("a corrupted recursion is caught at the first affected level")
{
    ResolventExpansion bad(4, RecursionFault::flipped_diagonal_sign);
    try {
        bad.truncation_residual(3);
        FAIL("no failure reported");
    } catch (const TelescopeFailure& e) {
        CHECK(e.k == 1);
    }
}

TEST_CASE("level cap")
{
    ResolventExpansion rx(2);
    CHECK_THROWS(rx.diagonal(3));
}

TEST_CASE("json export names the four entries")
{
    ResolventExpansion rx(2);
    auto text = to_json_string(rx.antidiagonal(1));
    CHECK(text.find("\"12\"") != std::string::npos);
    CHECK(text.find("denominator_power") != std::string::npos);
}
