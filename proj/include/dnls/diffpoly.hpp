#pragma once

#include "dnls/exact.hpp"
#include "dnls/grid.hpp"

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dnls {

// One factor d^order u (conjugated = false) or d^order conj(u).
struct Factor {
    bool conjugated = false;
    int order = 0;
    auto operator<=>(const Factor&) const = default;
};

// Sorted multiset of factors; the empty list is the constant monomial.
using FactorList = std::vector<Factor>;

enum class Variable { u, ubar };

FactorList canonical(FactorList f);
int degree(const FactorList& f);
int derivative_count(const FactorList& f);
int max_order(const FactorList& f);
Rational scaling_weight(const FactorList& f);
std::string to_string(const FactorList& f);

struct DiffMonomial {
    ExactComplex coeff;
    FactorList factors;
};

class DiffPolynomial {
public:
    using Terms = std::map<FactorList, ExactComplex>;

    DiffPolynomial() = default;

    static DiffPolynomial constant(const ExactComplex& c);
    static DiffPolynomial u(int order = 0);
    static DiffPolynomial ubar(int order = 0);
    static DiffPolynomial monomial(const ExactComplex& c, FactorList factors);

    // Merges into an existing monomial; drops it if the coefficient cancels.
    void add_term(const FactorList& factors, const ExactComplex& c);

    const Terms& terms() const { return terms_; }
    std::vector<DiffMonomial> monomials() const;
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    int max_order() const;
    std::vector<int> degrees() const;

    // Complex conjugate of the density, swapping u and conj(u).
    DiffPolynomial conj() const;

    DiffPolynomial& operator+=(const DiffPolynomial& q);
    DiffPolynomial& operator-=(const DiffPolynomial& q);
    DiffPolynomial& operator*=(const ExactComplex& c);

    friend DiffPolynomial operator+(DiffPolynomial p, const DiffPolynomial& q) { return p += q; }
    friend DiffPolynomial operator-(DiffPolynomial p, const DiffPolynomial& q) { return p -= q; }
    friend DiffPolynomial operator*(const DiffPolynomial& p, const DiffPolynomial& q);
    friend DiffPolynomial operator*(DiffPolynomial p, const ExactComplex& c) { return p *= c; }
    friend DiffPolynomial operator*(const ExactComplex& c, DiffPolynomial p) { return p *= c; }
    friend DiffPolynomial operator-(DiffPolynomial p) { return p *= ExactComplex(-1); }
    friend bool operator==(const DiffPolynomial&, const DiffPolynomial&) = default;

private:
    Terms terms_;
};

DiffPolynomial differentiate(const DiffPolynomial& p);

// Leibniz expansion of d/dx applied to one monomial, as (factors, multiplicity) pairs.
std::vector<std::pair<FactorList, int>> differentiate(const FactorList& f);

// Common weight sum(orders) + degree/2 - 1, or nullopt when terms disagree.
std::optional<Rational> scaling_weight(const DiffPolynomial& p);

DiffPolynomial partial(const DiffPolynomial& p, Variable wrt, int order);
DiffPolynomial variational_derivative(const DiffPolynomial& p, Variable wrt);
bool functionals_equal(const DiffPolynomial& p, const DiffPolynomial& q);

// Pointwise density sampled on the grid, derivatives taken spectrally.
Eigen::VectorXcd density_values(const DiffPolynomial& p, const GridFunction& u);
// Integral of the density over the period.
cplx evaluate(const DiffPolynomial& p, const GridFunction& u);

std::string to_string(const DiffPolynomial& p);

} // namespace dnls
