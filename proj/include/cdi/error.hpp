#ifndef CDI_ERROR_HPP
#define CDI_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cdi {

// Malformed input: documents, files, responses, arguments.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Inputs are well-formed but violate a precondition of the requested
// computation (size cap, K >= N/2, label mismatch, ...).
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsatisfiableError : public DomainError {
public:
    using DomainError::DomainError;
};

// The energy spectrum has no usable density minimum; K must be supplied.
class NoGapError : public DomainError {
public:
    using DomainError::DomainError;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cdi

#endif // CDI_ERROR_HPP
