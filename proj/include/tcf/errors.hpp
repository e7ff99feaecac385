#pragma once

#include <stdexcept>
#include <string>

namespace tcf {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct DivisionByZero : std::domain_error {
    DivisionByZero() : std::domain_error("division by zero") {}
};

/* Interval enclosure could not separate a point from a cylinder boundary. */
struct PrecisionExhausted : std::runtime_error {
    std::string boundary;
    long bits;
    PrecisionExhausted(std::string what_boundary, long prec)
        : std::runtime_error("precision exhausted at " + std::to_string(prec) +
                             " bits near boundary " + what_boundary),
          boundary(std::move(what_boundary)), bits(prec) {}
};

struct ConsistencyError : std::logic_error {
    using std::logic_error::logic_error;
};

}
