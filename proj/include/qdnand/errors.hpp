#pragma once

#include <stdexcept>
#include <string>

namespace qdnand {

/// Bad user-supplied values: wrong lengths, out-of-range parameters.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Tree, parameter and layout objects that do not fit together.
class StructuralError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A request beyond a documented size limit.
class CapacityError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// A numerical procedure that could not reach its tolerance.
/// `figure` carries the reciprocal condition estimate or the achieved
/// relative tolerance, depending on the thrower.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double figure)
        : std::runtime_error(what), figure_(figure) {}

    double figure() const noexcept { return figure_; }

private:
    double figure_;
};

} // namespace qdnand
