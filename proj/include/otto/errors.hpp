#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace otto {

// Base of every error raised by the library. Callers that only care about
// "something numerical went wrong" can catch this.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotHermitian : public Error {
public:
    explicit NotHermitian(double deviation)
        : Error("matrix is not Hermitian (max |M - M^H| = " + std::to_string(deviation) + ")"),
          deviation_(deviation) {}
    double deviation() const noexcept { return deviation_; }

private:
    double deviation_;
};

class InvalidState : public Error {
public:
    using Error::Error;
};

class OutOfRange : public Error {
public:
    using Error::Error;
};

class InvalidSpec : public Error {
public:
    using Error::Error;
};

class DegenerateSteadyState : public Error {
public:
    explicit DegenerateSteadyState(std::size_t nullspace_dim)
        : Error("steady state is not unique (null space dimension " + std::to_string(nullspace_dim) + ")"),
          nullspace_dim_(nullspace_dim) {}
    std::size_t nullspace_dim() const noexcept { return nullspace_dim_; }

private:
    std::size_t nullspace_dim_;
};

class NumericalFailure : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

} // namespace otto
