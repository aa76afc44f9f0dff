#pragma once

#include <stdexcept>

namespace sscat {

/// Input outside the mathematical or physical domain of an operation.
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Argument sits on a pole of a gamma or hypergeometric function.
class pole_error : public domain_error {
 public:
  using domain_error::domain_error;
};

/// k^2 <= 0: the channel is closed at this energy.
class evanescent_channel_error : public domain_error {
 public:
  using domain_error::domain_error;
};

/// 1/4 + l(l+1) - sigma a^2 b^2 < 0: the indicial exponent is complex.
class supercritical_error : public domain_error {
 public:
  using domain_error::domain_error;
};

/// z -> 1-z connection formula requested with integer c - a - b.
class degenerate_connection_error : public domain_error {
 public:
  using domain_error::domain_error;
};

class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid numerical configuration (grid spacing, step bounds, windows).
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Phase fit residual too large: the sampled solution is not yet asymptotic.
class asymptotic_regime_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sscat
