#ifndef SPECSUM_REPORT_HPP
#define SPECSUM_REPORT_HPP

#include <string>

#include "specsum/estimator.hpp"

namespace specsum {

// JSON with fixed key order: value, eps, delta, samples, degree, method,
// scale, queries, elapsed_ms, seed, relative_bound (only when present).
// elapsed_ms is the only run-dependent field; everything else is a pure
// function of the request and seed.
std::string report_to_json(const EstimateReport& r);

// Same report with extra fields appended (exact value, abs_err, pass flag...).
struct ComparePayload {
  EstimateReport report;
  double exact = 0.0;
  double abs_err = 0.0;
  bool pass = false;
};
std::string compare_to_json(const ComparePayload& c);

}  // namespace specsum

#endif
