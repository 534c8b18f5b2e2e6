// SPDX-License-Identifier: Apache-2.0
#include "epithreshold_app/report.hpp"

#include <cmath>

namespace epithreshold::app {

namespace {

template <class T>
nlohmann::ordered_json opt(const std::optional<T>& v) {
  if (!v) return nullptr;
  if constexpr (std::is_same_v<T, double>) {
    return number_or_null(*v);
  } else {
    return *v;
  }
}

}  // namespace

nlohmann::ordered_json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::ordered_json RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["scenario_hash"] = opt(scenario_hash);
  j["lambda1"] = opt(lambda1);
  j["classification"] = opt(classification);
  j["averaged_r0"] = opt(averaged_r0);
  j["averaged_classification"] = opt(averaged_classification);
  j["d_star"] = opt(d_star);
  j["s_infinity"] = opt(s_infinity);
  j["s_infinity_averaged"] = opt(s_infinity_averaged);
  j["epsilon_empirical"] = opt(epsilon_empirical);
  j["trace_path"] = opt(trace_path);
  j["field_paths"] = field_paths;
  j["timings"] = timings ? *timings : nlohmann::ordered_json(nullptr);
  j["details"] = details;
  return j;
}

std::string RunReport::dump() const { return to_json().dump(2) + "\n"; }

}  // namespace epithreshold::app
