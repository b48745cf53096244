#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <string>

namespace dnls {

using Rational = boost::multiprecision::cpp_rational;

std::string to_string(const Rational& q);
Rational parse_rational(const std::string& s);
double to_double(const Rational& q);

// Gaussian rational: re + i*im with exact parts.
struct ExactComplex {
    Rational re;
    Rational im;

    ExactComplex() = default;
    ExactComplex(Rational r, Rational i = 0) : re(std::move(r)), im(std::move(i)) {}
    ExactComplex(int r) : re(r), im(0) {}

    static ExactComplex I() { return {0, 1}; }

    bool is_zero() const { return re == 0 && im == 0; }
    ExactComplex conj() const { return {re, -im}; }
    std::complex<double> value() const { return {to_double(re), to_double(im)}; }

    ExactComplex& operator+=(const ExactComplex& o)
    {
        re += o.re;
        im += o.im;
        return *this;
    }
    ExactComplex& operator-=(const ExactComplex& o)
    {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    ExactComplex& operator*=(const ExactComplex& o)
    {
        Rational r = re * o.re - im * o.im;
        im = re * o.im + im * o.re;
        re = std::move(r);
        return *this;
    }
    ExactComplex operator-() const { return {-re, -im}; }
    ExactComplex inverse() const;

    friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
    friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }
    friend ExactComplex operator*(ExactComplex a, const ExactComplex& b) { return a *= b; }
    friend ExactComplex operator/(const ExactComplex& a, const ExactComplex& b) { return a * b.inverse(); }
    friend bool operator==(const ExactComplex& a, const ExactComplex& b) { return a.re == b.re && a.im == b.im; }
};

std::string to_string(const ExactComplex& z);

} // namespace dnls
