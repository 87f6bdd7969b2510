#ifndef CATLOGIC_REPORT_HPP
#define CATLOGIC_REPORT_HPP

#include "json.hpp"

#include <string>
#include <vector>

namespace catlogic {

struct CheckResult {
  std::string id;
  bool ok = true;
  nlohmann::ordered_json detail; // verdicts, counterexamples, replay hints
};

/// Machine-readable run summary with a stable field order.  Everything but
/// wall_ms is deterministic for fixed inputs and seed.
struct RunReport {
  std::string command;
  std::vector<CheckResult> checks;
  long long wall_ms = 0;

  bool all_ok() const;
  void add(std::string id, bool ok, nlohmann::ordered_json detail = {});
  nlohmann::ordered_json to_json() const;
  std::string to_text() const;
  /// json or text per `format`.
  std::string render(const std::string& format) const;
};

} // namespace catlogic

#endif
