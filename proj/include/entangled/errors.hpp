#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace entangled {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Input file does not conform to one of the text formats.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("parse error at line " + std::to_string(line) + ": " + what),
          line_(line),
          detail_(what) {}
    std::size_t line() const { return line_; }
    const std::string& detail() const { return detail_; }

private:
    std::size_t line_;
    std::string detail_;
};

class DuplicateCell : public ParseError {
public:
    DuplicateCell(std::size_t line, const std::string& what) : ParseError(line, what) {}
};

class DimensionMismatch : public Error {
public:
    explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

class AxisOutOfRange : public Error {
public:
    explicit AxisOutOfRange(const std::string& what) : Error(what) {}
};

class EdgeNotInGraph : public Error {
public:
    explicit EdgeNotInGraph(const std::string& what) : Error(what) {}
};

// Raised by exponent_thresholds when min{m,n} = 1; no L^p estimate exists there.
class DegenerateGraph : public Error {
public:
    explicit DegenerateGraph(const std::string& what) : Error(what) {}
};

class Infeasible : public Error {
public:
    explicit Infeasible(const std::string& what) : Error(what) {}
};

// A radical product whose collapsed power is not an integer.
class IrrationalResult : public Error {
public:
    explicit IrrationalResult(const std::string& what) : Error(what) {}
};

// A radical product mixing distinct bases with fractional powers.
class MixedBases : public Error {
public:
    explicit MixedBases(const std::string& what) : Error(what) {}
};

class ZeroDenominator : public Error {
public:
    explicit ZeroDenominator(const std::string& what) : Error(what) {}
};

// Modulation family violating the product constraints.
class InvalidFamily : public Error {
public:
    explicit InvalidFamily(const std::string& what) : Error(what) {}
};

}  // namespace entangled
