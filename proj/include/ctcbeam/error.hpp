#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ctcbeam {

enum class ErrorKind {
    InvalidParameter,
    Configuration,
    Lookup,
    NumericBlowup,
    Io,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

// Raised by the propagator when any sample leaves the finite range or exceeds
// the blowup threshold.
class NumericBlowup : public Error {
  public:
    NumericBlowup(std::size_t step_index, double max_modulus)
        : Error(ErrorKind::NumericBlowup,
                "numeric blowup at step " + std::to_string(step_index) +
                    " (max |psi| = " + std::to_string(max_modulus) + ")"),
          step_index_(step_index), max_modulus_(max_modulus) {}

    std::size_t step_index() const noexcept { return step_index_; }
    double max_modulus() const noexcept { return max_modulus_; }

  private:
    std::size_t step_index_;
    double max_modulus_;
};

[[noreturn]] inline void throw_invalid(const std::string& what) {
    throw Error(ErrorKind::InvalidParameter, what);
}

} // namespace ctcbeam
