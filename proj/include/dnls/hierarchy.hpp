#pragma once

#include "dnls/diffpoly.hpp"
#include "dnls/resolvent.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dnls {

struct MuCoefficient {
    int j = 0;
    int k = 0;
    DiffPolynomial density;
    std::optional<cplx> value_cache;
};

struct EnergyFunctional {
    int j = 0;
    DiffPolynomial density;
    std::vector<std::pair<int, int>> provenance; // contributing (j, k)
};

// Exact value c * pi, c a Gaussian rational.
struct PiMultiple {
    ExactComplex coeff;
    cplx value() const;
};

// Residue at p = 1 of P(p) / (p^2 - 1)^(j+1).
ExactComplex residue_at_one(const PPoly& p, int j);

// Integral of P(p)/(p^2-1)^(j+1) along the line through 0 at angle -arg(lambda^2),
// traversed left to right. Independent of the angle in (0, pi).
PiMultiple p_integral(const PPoly& p, int j);

// Quadratic part i/(-2)^(j+1) int zeta^j |hat u|^2, as a density.
MuCoefficient mu_j1(int j);

// Degree-2m part extracted from the antidiagonal resolvent coefficient at level j.
// Accepts m = 1 as well, which reproduces mu_j1 modulo total derivatives.
MuCoefficient mu_from_resolvent(int j, int m, ResolventExpansion& rx);

MuCoefficient mu_jm(int j, int m);
MuCoefficient mu_jm(int j, int m, ResolventExpansion& rx);

// Cached; E_j = mu_{j,1} + sum_{m=2}^{j+1} mu_{j,m}.
const EnergyFunctional& energy(int j);
EnergyFunctional build_energy(int j, ResolventExpansion& rx);

// Densities of M, P and E in their usual normalization.
DiffPolynomial mass_density();
DiffPolynomial momentum_density();
DiffPolynomial energy_density();

std::string energies_to_json(const std::vector<EnergyFunctional>& energies);
std::vector<EnergyFunctional> energies_from_json(const std::string& text);

// Energies 0..j_max, read from <cache_dir>/energies.json when it covers j_max
// and written there otherwise. Empty cache_dir means DNLS_CACHE_DIR or no caching.
std::vector<EnergyFunctional> load_or_generate_energies(int j_max, std::string cache_dir = {});

} // namespace dnls
