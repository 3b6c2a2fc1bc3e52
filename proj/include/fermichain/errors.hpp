#pragma once

#include <stdexcept>
#include <string>

namespace fermichain {

// Invalid input to an operation (bad window, wrong dimension, out-of-range site).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failure: quadrature, singular symbol, optimizer breakdown.
// The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define FERMICHAIN_ERROR(Name, Base)            \
  class Name : public Base {                    \
   public:                                      \
    explicit Name(const std::string& what)      \
        : Base(std::string(#Name ": ") + what) {} \
  };

FERMICHAIN_ERROR(SymbolSingular, NumericalError)
FERMICHAIN_ERROR(QuadratureNotConverged, NumericalError)
FERMICHAIN_ERROR(TailNotReached, NumericalError)
FERMICHAIN_ERROR(TailTooLarge, NumericalError)
FERMICHAIN_ERROR(NotAntisymmetric, InvalidArgument)
FERMICHAIN_ERROR(OddDimension, InvalidArgument)
FERMICHAIN_ERROR(TooManyFactors, InvalidArgument)
FERMICHAIN_ERROR(TooManySites, InvalidArgument)
FERMICHAIN_ERROR(SupportOutsideWindow, InvalidArgument)
FERMICHAIN_ERROR(SiteOutsideWindow, InvalidArgument)
FERMICHAIN_ERROR(NotTwoQubit, InvalidArgument)

#undef FERMICHAIN_ERROR

}  // namespace fermichain
