#pragma once

#include <stdexcept>
#include <string>

namespace seoam {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid or inconsistent configuration (missing fields, bad units, unknown keys).
class config_error : public error {
public:
    using error::error;
};

/// A numeric intermediate left the representable range (Bessel overflow etc).
class numeric_range_error : public error {
public:
    using error::error;
};

/// Requested mode window captures too little probability mass.
class truncation_error : public error {
public:
    truncation_error(const std::string& what, int suggested_min, int suggested_max)
        : error(what), suggested_min_(suggested_min), suggested_max_(suggested_max) {}
    int suggested_min() const { return suggested_min_; }
    int suggested_max() const { return suggested_max_; }

private:
    int suggested_min_;
    int suggested_max_;
};

/// Field does not decay within the polar grid radius.
class grid_extent_error : public error {
public:
    using error::error;
};

/// Two independent evaluation routes disagree beyond tolerance.
class consistency_error : public error {
public:
    using error::error;
};

/// Least-squares problem is rank deficient or otherwise unsolvable.
class fit_error : public error {
public:
    using error::error;
};

/// Grating calibration could not identify enough peaks.
class calibration_error : public error {
public:
    using error::error;
};

/// Peak-order assignment is not unique.
class ambiguity_error : public error {
public:
    using error::error;
};

} // namespace seoam
