#include "dnls/errors.hpp"
#include "dnls/hierarchy.hpp"
#include "dnls/checks.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>

using namespace dnls;

namespace {
ExactComplex ci(long n, long d) { return ExactComplex(0, Rational(n, d)); }
} // namespace

TEST_CASE("first three energies are multiples of mass, momentum and energy")
{
    CHECK(functionals_equal(energy(0).density, mass_density() * ci(-1, 2)));
    CHECK(functionals_equal(energy(1).density, momentum_density() * ci(1, 4)));
    CHECK(functionals_equal(energy(2).density, energy_density() * ci(-1, 8)));
    CHECK_FALSE(functionals_equal(energy(2).density, energy_density() * ci(1, 8)));
}

TEST_CASE("quartic coefficient at level one")
{
    CHECK(functionals_equal(mu_jm(1, 2).density, mass_density() * mass_density() * ci(1, 8)));
}

TEST_CASE("energies are homogeneous of weight j")
{
    for (int j = 0; j <= 6; ++j) {
        auto w = scaling_weight(energy(j).density);
        REQUIRE(w.has_value());
        CHECK(*w == j);
        CHECK(energy(j).density.max_order() <= j);
    }
}

TEST_CASE("quadratic coefficients agree between the closed form and the resolvent")
{
    for (int j = 0; j <= 5; ++j)
        CHECK(functionals_equal(mu_from_resolvent(j, 1, shared_resolvent()).density, mu_j1(j).density));
}

TEST_CASE("residues and p-integrals")
{
    // 1/(p^2-1): residue at 1 is 1/2
    CHECK(residue_at_one(PPoly::constant(1), 0) == ExactComplex(Rational(1, 2)));
    // p/(p^2-1)^2 = p/((p-1)^2 (p+1)^2): residue at 1 is d/dp[p/(p+1)^2] = (1-p)/(p+1)^3 at 1 = 0
    CHECK(residue_at_one(PPoly::p(), 1).is_zero());
    auto val = p_integral(PPoly::constant(1), 0).value();
    auto quad = p_integral_quadrature({1.0}, 0, M_PI / 3);
    CHECK(std::abs(val - quad) < 1e-10);
    CHECK_THROWS_AS(p_integral(PPoly::denominator(1) * PPoly::p(), 0), DegreeError);
}

TEST_CASE("json round trip and cache")
{
    std::vector<EnergyFunctional> es{energy(0), energy(1), energy(2), energy(3)};
    auto back = energies_from_json(energies_to_json(es));
    REQUIRE(back.size() == es.size());
    for (std::size_t i = 0; i < es.size(); ++i)
        CHECK(back[i].density == es[i].density);

    auto dir = std::filesystem::temp_directory_path() / "dnls_hierarchy_cache_test";
    std::filesystem::remove_all(dir);
    auto first = load_or_generate_energies(3, dir.string());
    CHECK(std::filesystem::exists(dir / "energies.json"));
    auto second = load_or_generate_energies(2, dir.string());
    REQUIRE(second.size() == 3);
    CHECK(second[2].density == first[2].density);
    std::filesystem::remove_all(dir);
}
