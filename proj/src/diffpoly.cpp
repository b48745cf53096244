#include "dnls/diffpoly.hpp"

#include "dnls/errors.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace dnls {

FactorList canonical(FactorList f)
{
    std::sort(f.begin(), f.end());
    return f;
}

int degree(const FactorList& f)
{
    return int(f.size());
}

int derivative_count(const FactorList& f)
{
    int n = 0;
    for (const auto& x : f)
        n += x.order;
    return n;
}

int max_order(const FactorList& f)
{
    int n = 0;
    for (const auto& x : f)
        n = std::max(n, x.order);
    return n;
}

Rational scaling_weight(const FactorList& f)
{
    return Rational(derivative_count(f)) + Rational(degree(f), 2) - 1;
}

namespace {

std::string factor_name(const Factor& x)
{
    std::string s = x.conjugated ? "ubar" : "u";
    if (x.order > 0)
        s += "_" + std::string(std::size_t(x.order), 'x');
    return s;
}

} // namespace

std::string to_string(const FactorList& f)
{
    if (f.empty())
        return "1";
    std::string out;
    for (std::size_t i = 0; i < f.size();) {
        std::size_t j = i;
        while (j < f.size() && f[j] == f[i])
            ++j;
        if (!out.empty())
            out += "*";
        out += factor_name(f[i]);
        if (j - i > 1)
            out += "^" + std::to_string(j - i);
        i = j;
    }
    return out;
}

DiffPolynomial DiffPolynomial::constant(const ExactComplex& c)
{
    return monomial(c, {});
}

DiffPolynomial DiffPolynomial::u(int order)
{
    return monomial(1, {Factor{false, order}});
}

DiffPolynomial DiffPolynomial::ubar(int order)
{
    return monomial(1, {Factor{true, order}});
}

DiffPolynomial DiffPolynomial::monomial(const ExactComplex& c, FactorList factors)
{
    DiffPolynomial p;
    p.add_term(canonical(std::move(factors)), c);
    return p;
}

void DiffPolynomial::add_term(const FactorList& factors, const ExactComplex& c)
{
    if (c.is_zero())
        return;
    auto [it, inserted] = terms_.try_emplace(factors, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero())
            terms_.erase(it);
    }
}

std::vector<DiffMonomial> DiffPolynomial::monomials() const
{
    std::vector<DiffMonomial> out;
    out.reserve(terms_.size());
    for (const auto& [f, c] : terms_)
        out.push_back({c, f});
    return out;
}

int DiffPolynomial::max_order() const
{
    int n = 0;
    for (const auto& [f, c] : terms_)
        n = std::max(n, dnls::max_order(f));
    return n;
}

std::vector<int> DiffPolynomial::degrees() const
{
    std::set<int> d;
    for (const auto& [f, c] : terms_)
        d.insert(degree(f));
    return {d.begin(), d.end()};
}

DiffPolynomial DiffPolynomial::conj() const
{
    DiffPolynomial out;
    for (const auto& [f, c] : terms_) {
        FactorList g = f;
        for (auto& x : g)
            x.conjugated = !x.conjugated;
        out.add_term(canonical(std::move(g)), c.conj());
    }
    return out;
}

DiffPolynomial& DiffPolynomial::operator+=(const DiffPolynomial& q)
{
    for (const auto& [f, c] : q.terms_)
        add_term(f, c);
    return *this;
}

DiffPolynomial& DiffPolynomial::operator-=(const DiffPolynomial& q)
{
    for (const auto& [f, c] : q.terms_)
        add_term(f, -c);
    return *this;
}

DiffPolynomial& DiffPolynomial::operator*=(const ExactComplex& c)
{
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [f, v] : terms_)
        v *= c;
    return *this;
}

DiffPolynomial operator*(const DiffPolynomial& p, const DiffPolynomial& q)
{
    DiffPolynomial out;
    for (const auto& [f, a] : p.terms_)
        for (const auto& [g, b] : q.terms_) {
            FactorList h;
            h.reserve(f.size() + g.size());
            std::merge(f.begin(), f.end(), g.begin(), g.end(), std::back_inserter(h));
            out.add_term(h, a * b);
        }
    return out;
}

std::vector<std::pair<FactorList, int>> differentiate(const FactorList& f)
{
    std::map<FactorList, int> acc;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i > 0 && f[i] == f[i - 1])
            continue;
        auto mult = int(std::count(f.begin(), f.end(), f[i]));
        FactorList g = f;
        g[i].order += 1;
        acc[canonical(std::move(g))] += mult;
    }
    return {acc.begin(), acc.end()};
}

DiffPolynomial differentiate(const DiffPolynomial& p)
{
    DiffPolynomial out;
    for (const auto& [f, c] : p.terms())
        for (const auto& [g, m] : differentiate(f))
            out.add_term(g, c * ExactComplex(m));
    return out;
}

std::optional<Rational> scaling_weight(const DiffPolynomial& p)
{
    if (p.is_zero())
        throw ZeroPolynomialError("scaling weight of the zero polynomial");
    std::optional<Rational> w;
    for (const auto& [f, c] : p.terms()) {
        Rational v = scaling_weight(f);
        if (w && *w != v)
            return std::nullopt;
        w = v;
    }
    return w;
}

DiffPolynomial partial(const DiffPolynomial& p, Variable wrt, int order)
{
    Factor target{wrt == Variable::ubar, order};
    DiffPolynomial out;
    for (const auto& [f, c] : p.terms()) {
        auto it = std::find(f.begin(), f.end(), target);
        if (it == f.end())
            continue;
        auto mult = int(std::count(f.begin(), f.end(), target));
        FactorList g = f;
        g.erase(g.begin() + (it - f.begin()));
        out.add_term(g, c * ExactComplex(mult));
    }
    return out;
}

DiffPolynomial variational_derivative(const DiffPolynomial& p, Variable wrt)
{
    DiffPolynomial out;
    int top = p.max_order();
    for (int a = 0; a <= top; ++a) {
        DiffPolynomial d = partial(p, wrt, a);
        for (int i = 0; i < a; ++i)
            d = differentiate(d);
        if (a % 2 == 1)
            d *= ExactComplex(-1);
        out += d;
    }
    return out;
}

bool functionals_equal(const DiffPolynomial& p, const DiffPolynomial& q)
{
    DiffPolynomial d = p - q;
    // A constant density is killed by both Euler operators but is not a total derivative.
    auto it = d.terms().find(FactorList{});
    if (it != d.terms().end())
        return false;
    return variational_derivative(d, Variable::u).is_zero()
        && variational_derivative(d, Variable::ubar).is_zero();
}

Eigen::VectorXcd density_values(const DiffPolynomial& p, const GridFunction& u)
{
    if (p.max_order() >= u.size() / 4)
        throw ResolutionError("derivative order " + std::to_string(p.max_order())
                              + " not resolved on N = " + std::to_string(u.size()));
    std::map<Factor, Eigen::VectorXcd> cache;
    auto field = [&](const Factor& x) -> const Eigen::VectorXcd& {
        auto it = cache.find(x);
        if (it != cache.end())
            return it->second;
        Eigen::VectorXcd v = spectral_derivative(u, x.order);
        if (x.conjugated)
            v = v.conjugate();
        return cache.emplace(x, std::move(v)).first->second;
    };
    Eigen::VectorXcd total = Eigen::VectorXcd::Zero(u.size());
    for (const auto& [f, c] : p.terms()) {
        Eigen::VectorXcd term = Eigen::VectorXcd::Constant(u.size(), c.value());
        for (const auto& x : f)
            term.array() *= field(x).array();
        total += term;
    }
    return total;
}

cplx evaluate(const DiffPolynomial& p, const GridFunction& u)
{
    return integrate_complex(density_values(p, u), u.dx());
}

std::string to_string(const DiffPolynomial& p)
{
    if (p.is_zero())
        return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [f, c] : p.terms()) {
        if (!first)
            os << " + ";
        first = false;
        os << to_string(c);
        if (!f.empty())
            os << "*" << to_string(f);
    }
    return os.str();
}

} // namespace dnls
