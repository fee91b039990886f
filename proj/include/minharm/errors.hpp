#pragma once

#include <stdexcept>
#include <string>

namespace minharm {

/// Query point (or a finite-difference stencil around it) left the chart box.
struct OutOfDomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The ball B_r(x) is not covered by the graph chart of the surface.
struct ChartTooSmallError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sampled domination P <= phi failed for a comparison pair.
struct NotTangentBelowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularLinearSystemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bad experiment configuration (unknown key, unparsable value, ...).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace minharm
