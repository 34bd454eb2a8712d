#pragma once

#include <stdexcept>
#include <string>

namespace oscistrip {

/// Argument outside the domain where an operation is defined.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Iterative solver failure, factorization breakdown, point-location miss.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or option value.
class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed or degenerate mesh.
class MeshError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace oscistrip
