#pragma once

#include <stdexcept>
#include <string>

namespace alphaflow
{

/** @brief Base class for all library errors */
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/** @brief Input document does not match the expected layout */
class SchemaError : public Error
{
public:
    using Error::Error;
};

/** @brief Face list does not describe a closed connected simplicial surface */
class TopologyError : public Error
{
public:
    using Error::Error;
};

/** @brief Argument lies outside the domain of an operation */
class DomainError : public Error
{
public:
    using Error::Error;
};

/**
 * @brief A triangle violates the triangle inequality (or an angle left (0, pi))
 *
 * Carries the offending face index when the failure happened while
 * evaluating a whole triangulation; -1 otherwise.
 */
class DegenerateGeometry : public Error
{
public:
    explicit DegenerateGeometry(const std::string& msg, int face = -1)
        : Error(face < 0 ? msg : msg + " (face " + std::to_string(face) + ")")
        , face_{face}
    {
    }

    [[nodiscard]] int face() const noexcept { return face_; }

private:
    int face_;
};

/** @brief Numerical procedure could not reach its target */
class ConvergenceError : public Error
{
public:
    using Error::Error;
};

}  // namespace alphaflow
