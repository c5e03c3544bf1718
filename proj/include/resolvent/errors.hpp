#pragma once

#include <stdexcept>
#include <string>

namespace resolvent {

// Numerical-quality failures: truncation tails that cannot certify,
// modulus caps, ill-conditioned constraint systems. CLI maps these to
// exit code 3, as opposed to plain invalid input (exit 2).
class precision_error : public std::runtime_error {
public:
  explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

class conditioning_error : public precision_error {
public:
  explicit conditioning_error(const std::string& what) : precision_error(what) {}
};

// A proven inequality failed numerically. The theorem is not in question,
// so this always means an implementation bug; CLI exit code 1.
class violation_error : public std::runtime_error {
public:
  explicit violation_error(const std::string& what) : std::runtime_error(what) {}
};

// Evaluation at (or numerically at) a pole / spectrum point.
class singular_error : public std::domain_error {
public:
  explicit singular_error(const std::string& what) : std::domain_error(what) {}
};

// Power iteration on an operator whose spectral radius is not < 1.
class divergence_error : public std::domain_error {
public:
  explicit divergence_error(const std::string& what) : std::domain_error(what) {}
};

} // namespace resolvent
