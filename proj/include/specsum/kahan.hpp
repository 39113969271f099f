#ifndef SPECSUM_KAHAN_HPP
#define SPECSUM_KAHAN_HPP

#include <cmath>

#include "specsum/types.hpp"

namespace specsum {

// Neumaier-compensated accumulation; used wherever a sum must be both accurate
// and bit-reproducible under a fixed addition order.
struct NeumaierSum {
  double s = 0.0, c = 0.0;

  void add(double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

struct CplxSum {
  NeumaierSum re, im;

  void add(cplx z) {
    re.add(z.real());
    im.add(z.imag());
  }
  cplx value() const { return {re.value(), im.value()}; }
};

}  // namespace specsum

#endif
