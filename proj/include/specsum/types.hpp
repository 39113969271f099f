#ifndef SPECSUM_TYPES_HPP
#define SPECSUM_TYPES_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace specsum {

using cplx = std::complex<double>;

// Error taxonomy, mapped onto CLI exit codes:
//   InputError -> 2   malformed input, violated precondition
//   GuardError -> 3   a resource/feasibility guard refused the request
//   CheckError -> 4   an internal consistency check failed
struct InputError : std::runtime_error {
  explicit InputError(const std::string& m) : std::runtime_error(m) {}
};
struct GuardError : std::runtime_error {
  explicit GuardError(const std::string& m) : std::runtime_error(m) {}
};
struct CheckError : std::runtime_error {
  explicit CheckError(const std::string& m) : std::runtime_error(m) {}
};

// Caller-declared promise about the spectrum of a Hermitian operator.
// The library never verifies it against the matrix; it only checks internal
// consistency (lo <= hi) and derives kappa when the window is positive.
struct SpectralBounds {
  double lo = -1.0;
  double hi = 1.0;

  SpectralBounds() = default;
  SpectralBounds(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!(lo <= hi)) throw InputError("SpectralBounds: lo > hi");
  }
  bool positive() const { return lo > 0.0; }
  // Condition parameter of the declared window [1/kappa, 1].
  double kappa() const {
    if (!positive()) throw InputError("SpectralBounds: kappa undefined, lo <= 0");
    return 1.0 / lo;
  }
};

}  // namespace specsum

#endif
