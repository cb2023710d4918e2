#pragma once

#include <stdexcept>
#include <string>

namespace sdsl {

// Argument outside an operation's mathematical domain.
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// Iterative scheme exhausted its iteration budget.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Affine acceptance-rate law evaluated outside (0,1): the point is an
// extrapolation beyond the law's validity and must be treated as infeasible.
class AlphaOutOfRange : public std::runtime_error {
public:
    AlphaOutOfRange(double value, const std::string& msg)
        : std::runtime_error(msg), value_(value) {}
    double value() const { return value_; }

private:
    double value_;
};

class EmptyInput : public std::invalid_argument {
public:
    explicit EmptyInput(const std::string& msg) : std::invalid_argument(msg) {}
};

// Residuals carry no information about the parameter (e.g. all lookaheads zero).
class DegenerateFit : public std::runtime_error {
public:
    explicit DegenerateFit(const std::string& msg) : std::runtime_error(msg) {}
};

class RankDeficient : public std::runtime_error {
public:
    explicit RankDeficient(const std::string& msg) : std::runtime_error(msg) {}
};

// A hat-matrix diagonal equals one: the point is exactly interpolated and the
// HC3 weight 1/(1-h)^2 is undefined.
class LeverageOne : public std::runtime_error {
public:
    explicit LeverageOne(const std::string& msg) : std::runtime_error(msg) {}
};

class NoFeasiblePoint : public std::runtime_error {
public:
    explicit NoFeasiblePoint(const std::string& msg) : std::runtime_error(msg) {}
};

class InsufficientData : public std::runtime_error {
public:
    explicit InsufficientData(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t row, const std::string& column, const std::string& msg)
        : std::runtime_error("row " + std::to_string(row) +
                             (column.empty() ? "" : ", column '" + column + "'") + ": " + msg),
          row_(row),
          column_(column) {}
    std::size_t row() const { return row_; }
    const std::string& column() const { return column_; }

private:
    std::size_t row_;
    std::string column_;
};

class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sdsl
