#include "dnls/resolvent.hpp"

#include "dnls/errors.hpp"

#include <json.hpp>

#include <mutex>

namespace dnls {

PPoly::PPoly(std::vector<ExactComplex> coeffs) : c_(std::move(coeffs))
{
    trim();
}

void PPoly::trim()
{
    while (!c_.empty() && c_.back().is_zero())
        c_.pop_back();
}

PPoly PPoly::denominator(int e)
{
    PPoly base(std::vector<ExactComplex>{-1, 0, 1});
    PPoly out = PPoly::constant(1);
    for (int i = 0; i < e; ++i)
        out = out * base;
    return out;
}

ExactComplex PPoly::coefficient(int n) const
{
    if (n < 0 || n >= int(c_.size()))
        return {};
    return c_[std::size_t(n)];
}

cplx PPoly::operator()(cplx p) const
{
    cplx acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        acc = acc * p + it->value();
    return acc;
}

PPoly& PPoly::operator+=(const PPoly& q)
{
    if (q.c_.size() > c_.size())
        c_.resize(q.c_.size());
    for (std::size_t i = 0; i < q.c_.size(); ++i)
        c_[i] += q.c_[i];
    trim();
    return *this;
}

PPoly& PPoly::operator-=(const PPoly& q)
{
    if (q.c_.size() > c_.size())
        c_.resize(q.c_.size());
    for (std::size_t i = 0; i < q.c_.size(); ++i)
        c_[i] -= q.c_[i];
    trim();
    return *this;
}

PPoly& PPoly::operator*=(const ExactComplex& a)
{
    for (auto& c : c_)
        c *= a;
    trim();
    return *this;
}

PPoly operator*(const PPoly& a, const PPoly& b)
{
    if (a.is_zero() || b.is_zero())
        return {};
    std::vector<ExactComplex> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j)
            c[i + j] += a.c_[i] * b.c_[j];
    return PPoly(std::move(c));
}

std::string to_string(const PPoly& p)
{
    if (p.is_zero())
        return "0";
    std::string out;
    for (int n = 0; n <= p.degree(); ++n) {
        if (p.coefficient(n).is_zero())
            continue;
        if (!out.empty())
            out += " + ";
        out += to_string(p.coefficient(n));
        if (n > 0)
            out += n == 1 ? "*p" : "*p^" + std::to_string(n);
    }
    return out;
}

bool MatrixSymbol::is_zero() const
{
    for (const auto& e : entries)
        if (!e.empty())
            return false;
    return true;
}

std::size_t MatrixSymbol::term_count() const
{
    std::size_t n = 0;
    for (const auto& e : entries)
        n += e.size();
    return n;
}

void add_term(SymbolEntry& e, const FactorList& f, const PPoly& c)
{
    if (c.is_zero())
        return;
    auto [it, inserted] = e.try_emplace(f, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero())
            e.erase(it);
    }
}

namespace {

MatrixSymbol combine(const MatrixSymbol& a, const MatrixSymbol& b, const ExactComplex& sb)
{
    int m = std::max(a.denom_power, b.denom_power);
    MatrixSymbol x = with_denominator(a, m);
    MatrixSymbol y = with_denominator(b, m);
    for (std::size_t i = 0; i < 4; ++i)
        for (const auto& [f, c] : y.entries[i])
            add_term(x.entries[i], f, c * sb);
    return x;
}

FactorList with_factor(const FactorList& f, Factor x)
{
    FactorList g = f;
    g.insert(std::upper_bound(g.begin(), g.end(), x), x);
    return g;
}

MatrixSymbol identity_symbol()
{
    MatrixSymbol s;
    s.at(0, 0)[{}] = PPoly::constant(1);
    s.at(1, 1)[{}] = PPoly::constant(1);
    return s;
}

} // namespace

MatrixSymbol operator+(const MatrixSymbol& a, const MatrixSymbol& b)
{
    return combine(a, b, 1);
}

MatrixSymbol operator-(const MatrixSymbol& a, const MatrixSymbol& b)
{
    return combine(a, b, -1);
}

MatrixSymbol operator*(const MatrixSymbol& a, const ExactComplex& s)
{
    MatrixSymbol out;
    out.denom_power = a.denom_power;
    for (std::size_t i = 0; i < 4; ++i)
        for (const auto& [f, c] : a.entries[i])
            add_term(out.entries[i], f, c * s);
    return out;
}

MatrixSymbol with_denominator(const MatrixSymbol& a, int power)
{
    if (power < a.denom_power)
        throw std::invalid_argument("cannot lower a symbol denominator");
    if (power == a.denom_power)
        return a;
    PPoly lift = PPoly::denominator(power - a.denom_power);
    MatrixSymbol out;
    out.denom_power = power;
    for (std::size_t i = 0; i < 4; ++i)
        for (const auto& [f, c] : a.entries[i])
            out.entries[i].emplace(f, c * lift);
    return out;
}

MatrixSymbol times_U(const MatrixSymbol& a)
{
    MatrixSymbol out;
    out.denom_power = a.denom_power;
    const Factor u{false, 0}, ub{true, 0};
    for (int j = 0; j < 2; ++j) {
        for (const auto& [f, c] : a.at(1, j))
            add_term(out.at(0, j), with_factor(f, u), c);
        for (const auto& [f, c] : a.at(0, j))
            add_term(out.at(1, j), with_factor(f, ub), c);
    }
    return out;
}

MatrixSymbol times_U2(const MatrixSymbol& a)
{
    MatrixSymbol out;
    out.denom_power = a.denom_power;
    const Factor u{false, 0}, ub{true, 0};
    for (std::size_t i = 0; i < 4; ++i)
        for (const auto& [f, c] : a.entries[i])
            add_term(out.entries[i], with_factor(with_factor(f, u), ub), c);
    return out;
}

MatrixSymbol times_diag_right(const MatrixSymbol& a, const PPoly& d1, const PPoly& d2)
{
    MatrixSymbol out;
    out.denom_power = a.denom_power;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (const auto& [f, c] : a.at(i, j))
                add_term(out.at(i, j), f, c * (j == 0 ? d1 : d2));
    return out;
}

MatrixSymbol times_diag_left(const PPoly& d1, const PPoly& d2, const MatrixSymbol& a)
{
    MatrixSymbol out;
    out.denom_power = a.denom_power;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (const auto& [f, c] : a.at(i, j))
                add_term(out.at(i, j), f, c * (i == 0 ? d1 : d2));
    return out;
}

MatrixSymbol dx(const MatrixSymbol& a)
{
    MatrixSymbol out;
    out.denom_power = a.denom_power;
    for (std::size_t i = 0; i < 4; ++i)
        for (const auto& [f, c] : a.entries[i])
            for (const auto& [g, m] : differentiate(f))
                add_term(out.entries[i], g, c * ExactComplex(m));
    return out;
}

namespace {

const ExactComplex I = ExactComplex::I();

// p*sigma3 + s as its two diagonal entries.
std::pair<PPoly, PPoly> p_sigma3_plus(int s)
{
    return {PPoly(std::vector<ExactComplex>{s, 1}), PPoly(std::vector<ExactComplex>{s, -1})};
}

MatrixSymbol sigma3_right(const MatrixSymbol& a)
{
    return times_diag_right(a, PPoly::constant(1), PPoly::constant(-1));
}

MatrixSymbol i_sigma3_left(const MatrixSymbol& a)
{
    return times_diag_left(PPoly::constant(I), PPoly::constant(-I), a);
}

MatrixSymbol p_sigma3_plus_one_left(const MatrixSymbol& a)
{
    auto [d1, d2] = p_sigma3_plus(1);
    return times_diag_left(d1, d2, a);
}

} // namespace

std::pair<MatrixSymbol, MatrixSymbol> base_symbols()
{
    MatrixSymbol d, a;
    d.denom_power = 1;
    a.denom_power = 1;
    // -(p sigma3 - 1) = diag(1 - p, 1 + p)
    d.at(0, 0)[{}] = PPoly(std::vector<ExactComplex>{1, -1});
    d.at(1, 1)[{}] = PPoly(std::vector<ExactComplex>{1, 1});
    a.at(0, 1)[{Factor{false, 0}}] = PPoly::constant(-I);
    a.at(1, 0)[{Factor{true, 0}}] = PPoly::constant(-I);
    return {d, a};
}

ResolventExpansion::ResolventExpansion(int max_level, RecursionFault fault)
    : max_level_(max_level), fault_(fault)
{
    auto [d, a] = base_symbols();
    diag_.push_back(std::make_unique<MatrixSymbol>(std::move(d)));
    anti_.push_back(std::make_unique<MatrixSymbol>(std::move(a)));
}

void ResolventExpansion::extend_to(int k)
{
    if (k < 0 || k > max_level_)
        throw std::out_of_range("resolvent level " + std::to_string(k) + " outside 0.." + std::to_string(max_level_));
    {
        std::shared_lock lock(mutex_);
        if (int(diag_.size()) > k)
            return;
    }
    std::unique_lock lock(mutex_);
    while (int(diag_.size()) <= k) {
        const MatrixSymbol& rd = *diag_.back();
        const MatrixSymbol& ra = *anti_.back();
        int level = int(diag_.size());
        MatrixSymbol drd = dx(rd);
        ExactComplex sign = fault_ == RecursionFault::flipped_diagonal_sign ? ExactComplex(-1) : ExactComplex(1);

        // [-iU R_a + i (d R_d) sigma3] (p sigma3 - 1), one more power of (p^2 - 1)
        MatrixSymbol inner = times_U(ra) * (-I * sign) + sigma3_right(drd) * I;
        auto [m1, m2] = p_sigma3_plus(-1);
        MatrixSymbol nd = times_diag_right(inner, m1, m2);
        nd.denom_power = level + 1;

        // U^2 R_a - U (d R_d) sigma3 + i (d R_a) sigma3 (p sigma3 + 1)
        auto [q1, q2] = p_sigma3_plus(1);
        MatrixSymbol na = times_U2(ra) - times_U(sigma3_right(drd))
            + times_diag_right(sigma3_right(dx(ra)), q1, q2) * I;
        na.denom_power = level + 1;

        diag_.push_back(std::make_unique<MatrixSymbol>(std::move(nd)));
        anti_.push_back(std::make_unique<MatrixSymbol>(std::move(na)));
    }
}

const MatrixSymbol& ResolventExpansion::diagonal(int k)
{
    extend_to(k);
    std::shared_lock lock(mutex_);
    return *diag_[std::size_t(k)];
}

const MatrixSymbol& ResolventExpansion::antidiagonal(int k)
{
    extend_to(k);
    std::shared_lock lock(mutex_);
    return *anti_[std::size_t(k)];
}

std::vector<HomogeneousPart> ResolventExpansion::homogeneous_parts(int k, SymbolKind kind)
{
    return dnls::homogeneous_parts(kind == SymbolKind::diagonal ? diagonal(k) : antidiagonal(k), k, kind);
}

std::pair<MatrixSymbol, MatrixSymbol> telescoping_brackets(ResolventExpansion& rx, int k)
{
    const MatrixSymbol& rd = rx.diagonal(k);
    const MatrixSymbol& ra = rx.antidiagonal(k);
    if (k == 0) {
        MatrixSymbol d = p_sigma3_plus_one_left(rd) * ExactComplex(-1) - identity_symbol();
        MatrixSymbol a = p_sigma3_plus_one_left(ra) * ExactComplex(-1) - times_U(rd) * I;
        return {d, a};
    }
    const MatrixSymbol& pd = rx.diagonal(k - 1);
    const MatrixSymbol& pa = rx.antidiagonal(k - 1);
    MatrixSymbol d = i_sigma3_left(dx(pd)) - p_sigma3_plus_one_left(rd) - times_U(pa) * I;
    MatrixSymbol a = i_sigma3_left(dx(pa)) - p_sigma3_plus_one_left(ra) - times_U(rd) * I;
    return {d, a};
}

std::pair<MatrixSymbol, MatrixSymbol> ResolventExpansion::truncation_residual(int n)
{
    if (n < 1)
        throw std::invalid_argument("truncation order must be positive");
    for (int k = 0; k <= n; ++k) {
        auto [d, a] = telescoping_brackets(*this, k);
        if (!d.is_zero())
            throw TelescopeFailure(k, "diagonal telescoping bracket nonzero at k = " + std::to_string(k));
        if (!a.is_zero())
            throw TelescopeFailure(k, "antidiagonal telescoping bracket nonzero at k = " + std::to_string(k));
    }
    MatrixSymbol yd = i_sigma3_left(dx(diagonal(n)));
    auto [m1, m2] = p_sigma3_plus(-1);
    MatrixSymbol ya = times_diag_right(antidiagonal(n), m1, m2) * ExactComplex(-1);
    return {yd, ya};
}

ResolventExpansion& shared_resolvent()
{
    static ResolventExpansion rx(10);
    return rx;
}

std::pair<MatrixSymbol, MatrixSymbol> recurse(int k)
{
    if (k < 1)
        throw std::invalid_argument("recurse needs k >= 1");
    auto& rx = shared_resolvent();
    return {rx.diagonal(k), rx.antidiagonal(k)};
}

std::pair<MatrixSymbol, MatrixSymbol> truncation_residual(int n)
{
    return shared_resolvent().truncation_residual(n);
}

std::vector<HomogeneousPart> homogeneous_parts(const MatrixSymbol& symbol, int k, SymbolKind kind)
{
    std::map<int, HomogeneousPart> parts;
    int offset = kind == SymbolKind::diagonal ? 0 : 1;
    for (std::size_t i = 0; i < 4; ++i)
        for (const auto& [f, c] : symbol.entries[i]) {
            int deg = degree(f);
            if ((deg - offset) % 2 != 0 || deg < offset)
                throw StructureViolation("degree " + std::to_string(deg) + " term " + to_string(f)
                                         + " in a " + (offset ? "antidiagonal" : "diagonal") + " symbol at k = "
                                         + std::to_string(k));
            int r = (deg - offset) / 2;
            auto& part = parts[r];
            part.k = k;
            part.r = r;
            part.kind = kind;
            part.symbol.denom_power = symbol.denom_power;
            part.symbol.entries[i].emplace(f, c);
        }
    std::vector<HomogeneousPart> out;
    for (auto& [r, p] : parts)
        out.push_back(std::move(p));
    return out;
}

StructureReport verify_structure(const HomogeneousPart& part)
{
    auto fail = [](std::string msg) { return StructureReport{false, std::move(msg)}; };
    const auto& s = part.symbol;
    bool diag = part.kind == SymbolKind::diagonal;
    if (s.denom_power != part.k + 1)
        return fail("denominator power " + std::to_string(s.denom_power) + " != k+1");
    if (diag ? !s.is_diagonal() : !s.is_antidiagonal())
        return fail("entries outside the " + std::string(diag ? "diagonal" : "antidiagonal"));
    int want_degree = diag ? 2 * part.r : 2 * part.r + 1;
    int budget = part.k - part.r;
    int pbound = diag ? budget + 1 : budget;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (const auto& [f, c] : s.at(i, j)) {
                std::string where = "entry " + std::to_string(i + 1) + std::to_string(j + 1) + " term " + to_string(f);
                if (degree(f) != want_degree)
                    return fail(where + ": degree " + std::to_string(degree(f)) + " != " + std::to_string(want_degree));
                if (derivative_count(f) != budget)
                    return fail(where + ": derivative count " + std::to_string(derivative_count(f)) + " != k-r");
                if (c.degree() > pbound)
                    return fail(where + ": p-degree " + std::to_string(c.degree()) + " > " + std::to_string(pbound));
                int nu = 0;
                for (const auto& x : f)
                    nu += x.conjugated ? 0 : 1;
                int nub = degree(f) - nu;
                // U^n alternates u, conj(u); entry (1,2) carries one extra u, (2,1) one extra conj(u).
                int excess = (i == 0 && j == 1) ? 1 : (i == 1 && j == 0) ? -1 : 0;
                if (nu - nub != excess)
                    return fail(where + ": unbalanced u/conj(u) count");
            }
    return {};
}

std::string to_json_string(const MatrixSymbol& s)
{
    nlohmann::json j;
    j["denominator_power"] = s.denom_power;
    const char* names[4] = {"11", "12", "21", "22"};
    for (std::size_t i = 0; i < 4; ++i) {
        auto terms = nlohmann::json::array();
        for (const auto& [f, c] : s.entries[i]) {
            nlohmann::json t;
            t["monomial"] = to_string(f);
            auto factors = nlohmann::json::array();
            for (const auto& x : f)
                factors.push_back({x.conjugated, x.order});
            t["factors"] = factors;
            auto coeffs = nlohmann::json::array();
            for (const auto& a : c.coefficients())
                coeffs.push_back({to_string(a.re), to_string(a.im)});
            t["p_coefficients"] = coeffs;
            t["denominator_power"] = s.denom_power;
            terms.push_back(t);
        }
        j["entries"][names[i]] = terms;
    }
    return j.dump(1);
}

} // namespace dnls
