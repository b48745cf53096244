#pragma once

#include <stdexcept>
#include <string>

namespace dnls {

struct ZeroPolynomialError : std::domain_error {
    using std::domain_error::domain_error;
};
struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StructureViolation : std::logic_error {
    using std::logic_error::logic_error;
};
struct TelescopeFailure : std::logic_error {
    TelescopeFailure(int level, const std::string& what)
        : std::logic_error(what), k(level) {}
    int k;
};
struct DegreeError : std::domain_error {
    using std::domain_error::domain_error;
};
struct DecayError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StiffnessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BranchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IndexError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

} // namespace dnls
