#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lipsquash {

using Vec = Eigen::VectorXd;

// Maps between Euclidean spaces, evaluated pointwise.
using VecMap = std::function<Vec(const Vec&)>;
using ScalarMap = std::function<double(const Vec&)>;
using RealMap = std::function<double(double)>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent user input.
class InputError : public Error {
public:
    using Error::Error;
};

// Input outside the domain where an operation is defined.
class DomainError : public Error {
public:
    using Error::Error;
};

// Numeric parameters with no admissible choice.
class ParameterError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

// Sampling too coarse to certify a verdict.
class ResolutionError : public Error {
public:
    using Error::Error;
};

// A constructed object failed its own post hoc verification. Always a bug.
class ContractViolation : public Error {
public:
    using Error::Error;
};

inline Vec vec2(double x, double y)
{
    Vec v(2);
    v << x, y;
    return v;
}

inline Vec vec1(double x)
{
    Vec v(1);
    v << x;
    return v;
}

}  // namespace lipsquash
