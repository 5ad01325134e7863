#pragma once

#include <stdexcept>
#include <string>

namespace tavis {

// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Fock truncation too small for the requested coherent state.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, double tail_mass)
        : Error(what), tail_mass_(tail_mass) {}
    double tail_mass() const noexcept { return tail_mass_; }

private:
    double tail_mass_;
};

// An operation was called outside its domain (e.g. analytic evolution
// for non-symmetric parameters).
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Conditioning on a measurement outcome whose probability density underflows.
class ZeroProbabilityError : public Error {
public:
    using Error::Error;
};

// A P_s plateau is not resolved by the time grid.
class UnresolvablePeakError : public Error {
public:
    using Error::Error;
};

}  // namespace tavis
