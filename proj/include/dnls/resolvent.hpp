#pragma once

#include "dnls/diffpoly.hpp"

#include <array>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

namespace dnls {

// Polynomial in p with exact complex coefficients, index = power.
class PPoly {
public:
    PPoly() = default;
    PPoly(std::vector<ExactComplex> coeffs);
    static PPoly constant(const ExactComplex& c) { return PPoly(std::vector<ExactComplex>{c}); }

    static PPoly p() { return PPoly(std::vector<ExactComplex>{0, 1}); }
    // (p^2 - 1)^e
    static PPoly denominator(int e);

    const std::vector<ExactComplex>& coefficients() const { return c_; }
    ExactComplex coefficient(int n) const;
    // -1 for the zero polynomial.
    int degree() const { return int(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    cplx operator()(cplx p) const;

    PPoly& operator+=(const PPoly& q);
    PPoly& operator-=(const PPoly& q);
    PPoly& operator*=(const ExactComplex& a);
    friend PPoly operator+(PPoly a, const PPoly& b) { return a += b; }
    friend PPoly operator-(PPoly a, const PPoly& b) { return a -= b; }
    friend PPoly operator*(PPoly a, const ExactComplex& s) { return a *= s; }
    friend PPoly operator*(const PPoly& a, const PPoly& b);
    friend bool operator==(const PPoly&, const PPoly&) = default;

private:
    void trim();
    std::vector<ExactComplex> c_;
};

std::string to_string(const PPoly& p);

// One matrix entry: sum over differential monomials of monomial * polynomial in p.
using SymbolEntry = std::map<FactorList, PPoly>;

// 2x2 symbol over the common denominator (p^2 - 1)^denom_power.
struct MatrixSymbol {
    std::array<SymbolEntry, 4> entries; // row-major: 11, 12, 21, 22
    int denom_power = 0;

    SymbolEntry& at(int i, int j) { return entries[std::size_t(2 * i + j)]; }
    const SymbolEntry& at(int i, int j) const { return entries[std::size_t(2 * i + j)]; }
    bool is_zero() const;
    bool is_diagonal() const { return at(0, 1).empty() && at(1, 0).empty(); }
    bool is_antidiagonal() const { return at(0, 0).empty() && at(1, 1).empty(); }
    std::size_t term_count() const;
    friend bool operator==(const MatrixSymbol&, const MatrixSymbol&) = default;
};

void add_term(SymbolEntry& e, const FactorList& f, const PPoly& c);

MatrixSymbol operator+(const MatrixSymbol& a, const MatrixSymbol& b);
MatrixSymbol operator-(const MatrixSymbol& a, const MatrixSymbol& b);
MatrixSymbol operator*(const MatrixSymbol& a, const ExactComplex& s);
// Raises the denominator power, multiplying numerators by (p^2 - 1)^extra.
MatrixSymbol with_denominator(const MatrixSymbol& a, int power);
MatrixSymbol times_U(const MatrixSymbol& a);  // U * a
MatrixSymbol times_U2(const MatrixSymbol& a); // U^2 * a = |u|^2 a
MatrixSymbol times_diag_right(const MatrixSymbol& a, const PPoly& d1, const PPoly& d2);
MatrixSymbol times_diag_left(const PPoly& d1, const PPoly& d2, const MatrixSymbol& a);
MatrixSymbol dx(const MatrixSymbol& a);

enum class SymbolKind { diagonal, antidiagonal };

struct HomogeneousPart {
    int k = 0;
    int r = 0;
    SymbolKind kind = SymbolKind::diagonal;
    MatrixSymbol symbol;
};

struct StructureReport {
    bool pass = true;
    std::string violation;
};

// Deliberate corruption of the recursion, for exercising the telescoping check.
enum class RecursionFault { none, flipped_diagonal_sign };

std::pair<MatrixSymbol, MatrixSymbol> base_symbols();

// Memoized recursion for the diagonal and antidiagonal resolvent coefficients.
class ResolventExpansion {
public:
    explicit ResolventExpansion(int max_level = 8, RecursionFault fault = RecursionFault::none);

    int max_level() const { return max_level_; }
    const MatrixSymbol& diagonal(int k);
    const MatrixSymbol& antidiagonal(int k);

    std::vector<HomogeneousPart> homogeneous_parts(int k, SymbolKind kind);

    // Checks every telescoping bracket up to level n and returns the residual pair.
    std::pair<MatrixSymbol, MatrixSymbol> truncation_residual(int n);

private:
    void extend_to(int k);

    int max_level_;
    RecursionFault fault_;
    std::shared_mutex mutex_;
    std::vector<std::unique_ptr<MatrixSymbol>> diag_;
    std::vector<std::unique_ptr<MatrixSymbol>> anti_;
};

// Process-wide expansion shared by the hierarchy pipeline.
ResolventExpansion& shared_resolvent();

std::pair<MatrixSymbol, MatrixSymbol> recurse(int k);
std::vector<HomogeneousPart> homogeneous_parts(const MatrixSymbol& symbol, int k, SymbolKind kind);
StructureReport verify_structure(const HomogeneousPart& part);
std::pair<MatrixSymbol, MatrixSymbol> truncation_residual(int n);

// Telescoping brackets at level k: zero symbols when the recursion is consistent.
std::pair<MatrixSymbol, MatrixSymbol> telescoping_brackets(ResolventExpansion& rx, int k);

std::string to_json_string(const MatrixSymbol& s);

} // namespace dnls
