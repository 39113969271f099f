#include "specsum/report.hpp"

#include <json.hpp>

namespace specsum {

namespace {

nlohmann::ordered_json report_fields(const EstimateReport& r) {
  nlohmann::ordered_json j;
  j["value"] = r.value;
  j["eps"] = r.eps;
  j["delta"] = r.delta;
  j["samples"] = r.samples;
  j["degree"] = r.degree;
  j["method"] = r.method;
  j["scale"] = r.scale;
  j["queries"] = r.queries;
  j["elapsed_ms"] = r.elapsed_ms;
  j["seed"] = r.seed;
  if (r.relative_bound) j["relative_bound"] = *r.relative_bound;
  return j;
}

}  // namespace

std::string report_to_json(const EstimateReport& r) {
  return report_fields(r).dump(2) + "\n";
}

std::string compare_to_json(const ComparePayload& c) {
  nlohmann::ordered_json j = report_fields(c.report);
  j["exact"] = c.exact;
  j["abs_err"] = c.abs_err;
  j["pass"] = c.pass;
  return j.dump(2) + "\n";
}

}  // namespace specsum
