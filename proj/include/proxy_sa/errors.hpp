#pragma once

#include <stdexcept>
#include <string>

namespace proxy_sa {

// Evaluating the weight F(1-F)/rho^2 at a point where rho vanishes (support
// boundary or outside).
class SingularityError : public std::runtime_error {
public:
    explicit SingularityError(const std::string& what) : std::runtime_error(what) {}
};

// Requested feature is not available for this object (e.g. missing analytic
// derivative, no closed form, dimension beyond a table limit).
class CapabilityError : public std::runtime_error {
public:
    explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or inconsistent user input.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// Matrix/vector dimensions do not line up.
class ShapeError : public std::invalid_argument {
public:
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

// Not enough data points for the requested statistic.
class InsufficientDataError : public std::invalid_argument {
public:
    explicit InsufficientDataError(const std::string& what) : std::invalid_argument(what) {}
};

// Model output variance is zero; normalized indices are undefined.
class DegenerateModelError : public std::runtime_error {
public:
    explicit DegenerateModelError(const std::string& what) : std::runtime_error(what) {}
};

// An aggregate needed entries that were not supplied.
class IncompleteInputError : public std::invalid_argument {
public:
    explicit IncompleteInputError(const std::string& what) : std::invalid_argument(what) {}
};

// A supremum search kept growing at the refinement limit.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace proxy_sa
