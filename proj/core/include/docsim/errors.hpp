#pragma once

#include <stdexcept>
#include <string>

namespace docsim {

/// Raised when a tracking-error component reaches the prescribed
/// performance funnel boundary; the closed-loop control law is undefined
/// past this point, so the run is aborted with a diagnostic.
class FunnelViolation : public std::runtime_error {
public:
  FunnelViolation(int node, double t, int component, double z_value, double bound)
      : std::runtime_error("funnel violation: node " + std::to_string(node) +
                           " at t=" + std::to_string(t) + ", |z1[" +
                           std::to_string(component) + "]|=" + std::to_string(z_value) +
                           " >= delta=" + std::to_string(bound)),
        node(node), t(t), component(component), z_value(z_value), bound(bound) {}

  int node;
  double t;
  int component;
  double z_value;
  double bound;
};

/// Raised when an evaluated derivative or state stops being finite.
class DivergenceError : public std::runtime_error {
public:
  explicit DivergenceError(double t, const std::string& what_part = "state")
      : std::runtime_error("divergence: non-finite " + what_part +
                           " at t=" + std::to_string(t)),
        t(t) {}

  double t;
};

}  // namespace docsim
