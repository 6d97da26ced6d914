#pragma once

#include <stdexcept>
#include <string>

namespace funcgauss {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Shape/length/grid mismatches and other misuse of the API.
class StructuralError : public Error {
public:
    using Error::Error;
};

// A denominator required to be bounded away from zero is not; the two
// Gaussian measures involved may be mutually singular.
class SingularityError : public Error {
public:
    using Error::Error;
};

// A precondition of the triangular likelihood-ratio factorization is violated
// (u(0)=0 mismatch between classes, m(0)!=0 with u(0)=0, ...).
class AdmissibilityError : public Error {
public:
    using Error::Error;
};

// Estimator could not produce a usable fit (a_hat outside (0,1),
// not enough observations, degenerate deflation, ...).
class FitError : public Error {
public:
    using Error::Error;
};

// The caller asked for the wrong covariance-estimation regime.
class RegimeError : public Error {
public:
    using Error::Error;
};

// Cross-validation had no surviving candidate.
class SelectionError : public Error {
public:
    using Error::Error;
};

// Malformed input files (curve CSV, experiment config, report CSV).
class IngestError : public Error {
public:
    using Error::Error;
};

}  // namespace funcgauss
