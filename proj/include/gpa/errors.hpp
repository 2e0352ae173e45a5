#pragma once

#include <stdexcept>
#include <string>

namespace gpa {

// Bad input: non-kneading, non-MIA, convention violations, out-of-range values.
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two independent code paths disagreed. Always a bug in this library.
struct InternalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace gpa
