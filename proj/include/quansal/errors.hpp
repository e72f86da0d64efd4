#pragma once

#include <stdexcept>
#include <string>

namespace quansal {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NonHermitian : Error {
    NonHermitian(const std::string& what, double asymmetry)
        : Error(what), asymmetry(asymmetry) {}
    double asymmetry;  // ||M - M^dagger||_F
};

struct NotPSD : Error {
    NotPSD(const std::string& what, double min_eigenvalue)
        : Error(what), min_eigenvalue(min_eigenvalue) {}
    double min_eigenvalue;
};

struct InvalidModel : Error {
    using Error::Error;
};

struct ScenarioMismatch : Error {
    using Error::Error;
};

struct NotNormalized : Error {
    using Error::Error;
};

struct NotProjective : Error {
    using Error::Error;
};

struct ModeMismatch : Error {
    using Error::Error;
};

struct NonHermitianKraus : Error {
    using Error::Error;
};

struct EmptyList : Error {
    using Error::Error;
};

struct SpectrumOutOfRange : Error {
    SpectrumOutOfRange(const std::string& what, double eigenvalue)
        : Error(what), eigenvalue(eigenvalue) {}
    double eigenvalue;
};

/// File parsing / schema violations (CLI exit code 1).
struct ParseError : Error {
    using Error::Error;
};

}  // namespace quansal
