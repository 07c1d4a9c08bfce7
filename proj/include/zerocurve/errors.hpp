#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace zerocurve {

/// A flow was asked for the t-derivative of a field symbol it does not assign.
class MissingFlowAssignment : public std::runtime_error {
public:
    explicit MissingFlowAssignment(const std::string& symbol)
        : std::runtime_error("no flow assignment for field symbol '" + symbol + "'"),
          symbol_(symbol) {}
    const std::string& symbol() const { return symbol_; }

private:
    std::string symbol_;
};

/// integrate_x was called on a polynomial that is not a total x-derivative.
class NotExactDerivative : public std::runtime_error {
public:
    explicit NotExactDerivative(const std::string& what)
        : std::runtime_error("not an exact x-derivative: " + what) {}
};

class DegreeTooLow : public std::runtime_error {
public:
    explicit DegreeTooLow(int n)
        : std::runtime_error("polynomial degree " + std::to_string(n) +
                             " is below the minimum of 2") {}
};

/// det H <= 0 somewhere on a grid where a positive determinant is required.
class DegenerateDeterminant : public std::runtime_error {
public:
    explicit DegenerateDeterminant(std::vector<std::size_t> indices)
        : std::runtime_error("determinant vanishes or is negative at " +
                             std::to_string(indices.size()) + " grid point(s)"),
          indices_(std::move(indices)) {}
    const std::vector<std::size_t>& indices() const { return indices_; }

private:
    std::vector<std::size_t> indices_;
};

class OutOfWindow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonZeroTrace : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class StepUnderflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SolverOverflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CFLViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class WindowTooSmall : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CutoffTooSmall : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace zerocurve
