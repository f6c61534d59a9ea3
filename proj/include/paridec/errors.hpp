#pragma once

#include <stdexcept>
#include <string>

namespace paridec {

// Exit-code contract: 0 success, 1 input error, 2 domain error, 3 numerical failure.
class Error : public std::runtime_error {
public:
    Error(std::string msg, int exit_code)
        : std::runtime_error(std::move(msg)), exit_code_(exit_code) {}
    int exit_code() const noexcept { return exit_code_; }

private:
    int exit_code_;
};

// Malformed inputs: bad JSON, schema violations, dimension mismatches, bad flags.
class InputError : public Error {
public:
    explicit InputError(std::string msg) : Error(std::move(msg), 1) {}
};

// The model rejects the data: empty identified set, non-rationalizable demand.
class DomainError : public Error {
public:
    explicit DomainError(std::string msg) : Error(std::move(msg), 2) {}
};

class EmptyIdentifiedSetError : public DomainError {
public:
    explicit EmptyIdentifiedSetError(std::string msg) : DomainError(std::move(msg)) {}
};

class RationalizabilityError : public DomainError {
public:
    explicit RationalizabilityError(std::string msg) : DomainError(std::move(msg)) {}
};

// Numerical machinery gave up: quadrature non-convergence, LP stall, factorization failure,
// non-finite risk values.
class NumericalError : public Error {
public:
    explicit NumericalError(std::string msg) : Error(std::move(msg), 3) {}
};

}  // namespace paridec
