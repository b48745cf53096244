#include "dnls/exact.hpp"

#include <stdexcept>

namespace dnls {

std::string to_string(const Rational& q)
{
    return q.str();
}

Rational parse_rational(const std::string& s)
{
    auto slash = s.find('/');
    if (slash == std::string::npos)
        return Rational(boost::multiprecision::cpp_int(s));
    boost::multiprecision::cpp_int num(s.substr(0, slash));
    boost::multiprecision::cpp_int den(s.substr(slash + 1));
    if (den == 0)
        throw std::invalid_argument("zero denominator in " + s);
    return Rational(num, den);
}

double to_double(const Rational& q)
{
    return q.convert_to<double>();
}

ExactComplex ExactComplex::inverse() const
{
    Rational n = re * re + im * im;
    if (n == 0)
        throw std::domain_error("division by exact zero");
    return {re / n, -im / n};
}

std::string to_string(const ExactComplex& z)
{
    if (z.im == 0)
        return to_string(z.re);
    if (z.re == 0)
        return "(" + to_string(z.im) + ")i";
    return "(" + to_string(z.re) + (z.im > 0 ? " + " : " - ") + to_string(abs(z.im)) + "i)";
}

} // namespace dnls
