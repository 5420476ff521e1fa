#pragma once

#include <stdexcept>
#include <string>

namespace arvae {

// Shape or extent mismatch between operands.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input outside the mathematical domain of an operation (e.g. log of 0).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A caller broke a documented precondition.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Malformed, truncated or mismatched file contents.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace arvae
