#pragma once

#include <stdexcept>
#include <string>

namespace ggcsim {

/// Bad or inconsistent user-supplied configuration (files, presets, CLI values).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Adaptive integration could not proceed (step-size underflow or step budget
/// exhausted). Signals pathological inputs rather than a tolerance miss.
class PropagationError : public std::runtime_error {
 public:
  explicit PropagationError(const std::string& what) : std::runtime_error(what) {}
};

/// Root finding failed to meet its residual targets.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual_alpha, double residual_beta)
      : std::runtime_error(what), residual_alpha(residual_alpha), residual_beta(residual_beta) {}
  double residual_alpha;  // rad per 1 m offset
  double residual_beta;   // rad per 1 m/s offset
};

/// Inputs violate a structural assumption of the model (e.g. out-of-plane
/// couplings where an in-plane configuration is required).
class ModelViolationError : public std::runtime_error {
 public:
  explicit ModelViolationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ggcsim
