#include "catlogic/report.hpp"

#include "catlogic/fincat.hpp"

#include <sstream>

namespace catlogic {

bool RunReport::all_ok() const {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return true;
}

void RunReport::add(std::string id, bool ok, nlohmann::ordered_json detail) {
  checks.push_back(CheckResult{std::move(id), ok, std::move(detail)});
}

nlohmann::ordered_json RunReport::to_json() const {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json cj;
    cj["id"] = c.id;
    cj["ok"] = c.ok;
    if (!c.detail.is_null()) cj["detail"] = c.detail;
    j["checks"].push_back(cj);
  }
  j["ok"] = all_ok();
  j["wall_ms"] = wall_ms;
  return j;
}

std::string RunReport::to_text() const {
  std::ostringstream out;
  out << "# " << command << "\n";
  for (const auto& c : checks) {
    out << (c.ok ? "ok   " : "FAIL ") << c.id;
    if (!c.detail.is_null()) out << "  " << c.detail.dump();
    out << "\n";
  }
  out << (all_ok() ? "ok" : "FAIL") << " (" << checks.size() << " checks, " << wall_ms
      << " ms)\n";
  return out.str();
}

std::string RunReport::render(const std::string& format) const {
  if (format == "json") return to_json().dump(2) + "\n";
  if (format == "text") return to_text();
  throw error("unknown format \"" + format + "\" (use json or text)");
}

} // namespace catlogic
