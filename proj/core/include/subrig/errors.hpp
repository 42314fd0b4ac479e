#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Core>

namespace subrig {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

class SyntaxError : public Error {
public:
    SyntaxError(std::string message, std::size_t offset)
        : Error("syntax error at offset " + std::to_string(offset) + ": " + message),
          offset_(offset)
    {
    }
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class UnknownVariable : public Error {
public:
    explicit UnknownVariable(std::string name)
        : Error("unknown variable '" + name + "'"), name_(std::move(name))
    {
    }
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

class UnknownFunction : public Error {
public:
    explicit UnknownFunction(std::string name)
        : Error("unknown function '" + name + "'"), name_(std::move(name))
    {
    }
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Evaluation left the domain of a function, e.g. log of a nonpositive value.
class DomainError : public Error {
public:
    DomainError(const std::string& message, std::string subexpression)
        : Error(message + " in '" + subexpression + "'"), subexpression_(std::move(subexpression))
    {
    }
    const std::string& subexpression() const noexcept { return subexpression_; }

private:
    std::string subexpression_;
};

// ---------------------------------------------------------------------------
// Structures and configuration
// ---------------------------------------------------------------------------

class ConfigError : public Error {
public:
    using Error::Error;
};

class PartitionError : public Error {
public:
    using Error::Error;
};

class UnknownCatalogName : public Error {
public:
    explicit UnknownCatalogName(const std::string& name) : Error("unknown catalog structure '" + name + "'") {}
};

class InvalidCarnotData : public Error {
public:
    using Error::Error;
};

/// Raised for inputs outside the supported dimensions or ranks.
class UnsupportedDimension : public Error {
public:
    using Error::Error;
};

class FrameDegenerate : public Error {
public:
    FrameDegenerate(Eigen::VectorXd point, double determinant);
    const Eigen::VectorXd& point() const noexcept { return point_; }
    double determinant() const noexcept { return determinant_; }

private:
    Eigen::VectorXd point_;
    double determinant_;
};

// ---------------------------------------------------------------------------
// Surfaces and curvature
// ---------------------------------------------------------------------------

class OffSurface : public Error {
public:
    OffSurface(Eigen::VectorXd point, double residual);
    const Eigen::VectorXd& point() const noexcept { return point_; }
    double residual() const noexcept { return residual_; }

private:
    Eigen::VectorXd point_;
    double residual_;
};

class RegularityError : public Error {
public:
    using Error::Error;
};

class PatchOffSurface : public Error {
public:
    PatchOffSurface(Eigen::VectorXd worst_node, double residual);
    const Eigen::VectorXd& worst_node() const noexcept { return worst_node_; }
    double residual() const noexcept { return residual_; }

private:
    Eigen::VectorXd worst_node_;
    double residual_;
};

class RootFindFailure : public Error {
public:
    using Error::Error;
};

class CharacteristicPoint : public Error {
public:
    using Error::Error;
};

class NonTangentDirection : public Error {
public:
    using Error::Error;
};

class EigenSolverFailure : public Error {
public:
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Flows
// ---------------------------------------------------------------------------

class StepTooLarge : public Error {
public:
    using Error::Error;
};

class RayRecrossing : public Error {
public:
    using Error::Error;
};

class NotCarnot : public Error {
public:
    using Error::Error;
};

class ProjectionFailure : public Error {
public:
    using Error::Error;
};

class EmptyGrid : public Error {
public:
    using Error::Error;
};

} // namespace subrig
