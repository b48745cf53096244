#include "dnls/hierarchy.hpp"

#include "dnls/errors.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numbers>
#include <sstream>

namespace dnls {

cplx PiMultiple::value() const
{
    return coeff.value() * std::numbers::pi;
}

namespace {

Rational binomial(int n, int k)
{
    Rational r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

Rational power(const Rational& x, int n)
{
    Rational r = 1;
    for (int i = 0; i < n; ++i)
        r *= x;
    return r;
}

ExactComplex i_power(int n)
{
    switch (((n % 4) + 4) % 4) {
    case 0:
        return {1, 0};
    case 1:
        return {0, 1};
    case 2:
        return {-1, 0};
    default:
        return {0, -1};
    }
}

} // namespace

ExactComplex residue_at_one(const PPoly& p, int j)
{
    // With t = p - 1: P(1+t) (2+t)^{-(j+1)} t^{-(j+1)}; pick the t^j Taylor coefficient.
    int deg = p.degree();
    std::vector<ExactComplex> shifted(std::size_t(std::max(deg + 1, 0)));
    for (int n = 0; n <= deg; ++n)
        for (int i = 0; i <= n; ++i)
            shifted[std::size_t(i)] += p.coefficient(n) * ExactComplex(binomial(n, i));
    ExactComplex out;
    for (int n = 0; n <= std::min(j, deg); ++n) {
        int m = j - n;
        // coefficient of t^m in (2+t)^{-(j+1)} = 2^{-(j+1)} (-1)^m C(j+m, m) 2^{-m}
        Rational c = binomial(j + m, m) / power(Rational(2), j + 1 + m);
        if (m % 2)
            c = -c;
        out += shifted[std::size_t(n)] * ExactComplex(c);
    }
    return out;
}

PiMultiple p_integral(const PPoly& p, int j)
{
    if (j < 0)
        throw DegreeError("negative denominator power");
    if (p.degree() > 2 * j)
        throw DegreeError("integrand not integrable: deg P = " + std::to_string(p.degree())
                          + " > 2j = " + std::to_string(2 * j));
    // Closing on the side containing p = 1 encloses it counterclockwise.
    return {ExactComplex(0, 2) * residue_at_one(p, j)};
}

MuCoefficient mu_j1(int j)
{
    if (j < 0)
        throw std::invalid_argument("mu_j1 needs j >= 0");
    // int zeta^j |hat u|^2 = int conj(u) (-i d)^j u
    Rational scale = Rational(1) / power(Rational(-2), j + 1);
    ExactComplex c = ExactComplex(0, 1) * i_power(-j) * ExactComplex(scale);
    MuCoefficient mu;
    mu.j = j;
    mu.k = 1;
    mu.density = DiffPolynomial::monomial(c, {Factor{false, j}, Factor{true, 0}});
    return mu;
}

MuCoefficient mu_from_resolvent(int j, int m, ResolventExpansion& rx)
{
    if (m < 1 || j < m - 1)
        throw std::invalid_argument("mu needs m >= 1 and j >= m - 1");
    const MatrixSymbol& ra = rx.antidiagonal(j);
    if (ra.denom_power != j + 1)
        throw StructureViolation("unexpected denominator power in antidiagonal symbol");
    int want = 2 * m - 1;
    DiffPolynomial acc;
    auto accumulate = [&](const SymbolEntry& entry, Factor front) {
        for (const auto& [f, poly] : entry) {
            if (degree(f) != want)
                continue;
            PiMultiple w = p_integral(poly, j);
            FactorList g = f;
            g.push_back(front);
            // -(i / 4 m pi) * (c pi)
            ExactComplex c = w.coeff * ExactComplex(0, -1) * ExactComplex(Rational(1, 4 * m));
            acc.add_term(canonical(std::move(g)), c);
        }
    };
    // tr(U X) = u X_21 + conj(u) X_12
    accumulate(ra.at(1, 0), Factor{false, 0});
    accumulate(ra.at(0, 1), Factor{true, 0});
    MuCoefficient mu;
    mu.j = j;
    mu.k = m;
    mu.density = std::move(acc);
    return mu;
}

MuCoefficient mu_jm(int j, int m, ResolventExpansion& rx)
{
    if (m < 2)
        throw std::invalid_argument("mu_jm needs m >= 2; use mu_j1");
    return mu_from_resolvent(j, m, rx);
}

MuCoefficient mu_jm(int j, int m)
{
    return mu_jm(j, m, shared_resolvent());
}

EnergyFunctional build_energy(int j, ResolventExpansion& rx)
{
    if (j < 0)
        throw std::invalid_argument("energy index must be nonnegative");
    EnergyFunctional e;
    e.j = j;
    e.density = mu_j1(j).density;
    e.provenance.emplace_back(j, 1);
    for (int m = 2; m <= j + 1; ++m) {
        e.density += mu_jm(j, m, rx).density;
        e.provenance.emplace_back(j, m);
    }
    return e;
}

const EnergyFunctional& energy(int j)
{
    static std::mutex mutex;
    static std::map<int, EnergyFunctional> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(j);
    if (it == cache.end())
        it = cache.emplace(j, build_energy(j, shared_resolvent())).first;
    return it->second;
}

DiffPolynomial mass_density()
{
    return DiffPolynomial::monomial(1, {Factor{false, 0}, Factor{true, 0}});
}

DiffPolynomial momentum_density()
{
    // Im(conj(u) u_x) + |u|^4 / 2
    ExactComplex half_over_i(0, Rational(-1, 2));
    DiffPolynomial p = DiffPolynomial::monomial(half_over_i, {Factor{false, 1}, Factor{true, 0}});
    p += DiffPolynomial::monomial(-half_over_i, {Factor{false, 0}, Factor{true, 1}});
    p += DiffPolynomial::monomial(Rational(1, 2), {{false, 0}, {false, 0}, {true, 0}, {true, 0}});
    return p;
}

DiffPolynomial energy_density()
{
    // |u_x|^2 - (3/2) Im(|u|^2 u conj(u)_x) + |u|^6 / 2
    DiffPolynomial e = DiffPolynomial::monomial(1, {Factor{false, 1}, Factor{true, 1}});
    ExactComplex c(0, Rational(3, 4)); // -(3/2) / (2i) = (3/4) i
    e += DiffPolynomial::monomial(c, {{false, 0}, {false, 0}, {true, 0}, {true, 1}});
    e += DiffPolynomial::monomial(-c, {{false, 0}, {false, 1}, {true, 0}, {true, 0}});
    e += DiffPolynomial::monomial(Rational(1, 2), {{false, 0}, {false, 0}, {false, 0}, {true, 0}, {true, 0}, {true, 0}});
    return e;
}

std::string energies_to_json(const std::vector<EnergyFunctional>& energies)
{
    auto out = nlohmann::json::array();
    for (const auto& e : energies) {
        nlohmann::json je;
        je["j"] = e.j;
        auto monos = nlohmann::json::array();
        for (const auto& [f, c] : e.density.terms()) {
            nlohmann::json m;
            m["coeff_re"] = to_string(c.re);
            m["coeff_im"] = to_string(c.im);
            auto factors = nlohmann::json::array();
            for (const auto& x : f)
                factors.push_back({x.conjugated, x.order});
            m["factors"] = factors;
            monos.push_back(m);
        }
        je["monomials"] = monos;
        auto prov = nlohmann::json::array();
        for (auto [a, b] : e.provenance)
            prov.push_back({a, b});
        je["provenance"] = prov;
        out.push_back(je);
    }
    return out.dump(1);
}

std::vector<EnergyFunctional> energies_from_json(const std::string& text)
{
    auto in = nlohmann::json::parse(text);
    std::vector<EnergyFunctional> out;
    for (const auto& je : in) {
        EnergyFunctional e;
        e.j = je.at("j").get<int>();
        for (const auto& m : je.at("monomials")) {
            FactorList f;
            for (const auto& x : m.at("factors"))
                f.push_back({x.at(0).get<bool>(), x.at(1).get<int>()});
            ExactComplex c(parse_rational(m.at("coeff_re").get<std::string>()),
                           parse_rational(m.at("coeff_im").get<std::string>()));
            e.density.add_term(canonical(std::move(f)), c);
        }
        if (je.contains("provenance"))
            for (const auto& p : je["provenance"])
                e.provenance.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
        out.push_back(std::move(e));
    }
    return out;
}

std::vector<EnergyFunctional> load_or_generate_energies(int j_max, std::string cache_dir)
{
    if (cache_dir.empty())
        if (const char* env = std::getenv("DNLS_CACHE_DIR"))
            cache_dir = env;
    std::filesystem::path file;
    if (!cache_dir.empty()) {
        file = std::filesystem::path(cache_dir) / "energies.json";
        std::ifstream is(file);
        if (is) {
            std::stringstream ss;
            ss << is.rdbuf();
            try {
                auto cached = energies_from_json(ss.str());
                if (int(cached.size()) > j_max) {
                    cached.resize(std::size_t(j_max + 1));
                    return cached;
                }
            } catch (const std::exception&) {
                // stale or corrupt cache: regenerate
            }
        }
    }
    std::vector<EnergyFunctional> out;
    for (int j = 0; j <= j_max; ++j)
        out.push_back(energy(j));
    if (!file.empty()) {
        std::filesystem::create_directories(file.parent_path());
        std::ofstream os(file);
        os << energies_to_json(out);
    }
    return out;
}

} // namespace dnls
