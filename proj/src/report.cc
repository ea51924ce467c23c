#include "telescopes/report.hpp"

#include <cstdio>

#include <json.hpp>

namespace telescopes {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::skipped_cap: return "skipped(cap)";
    case Verdict::skipped_search: return "skipped(search)";
  }
  return "?";
}

bool verdict_ok(Verdict v) { return v != Verdict::fail; }

void VerificationReport::add(std::string name, std::string how, bool ok, std::string detail) {
  subchecks.push_back({std::move(name), std::move(how), ok ? Verdict::pass : Verdict::fail,
                       std::move(detail)});
}

void VerificationReport::quantity(std::string name, std::string value) {
  for (auto& [k, v] : quantities)
    if (k == name) {
      v = std::move(value);
      return;
    }
  quantities.emplace_back(std::move(name), std::move(value));
}

const std::string* VerificationReport::find_quantity(const std::string& name) const {
  for (const auto& [k, v] : quantities)
    if (k == name) return &v;
  return nullptr;
}

void VerificationReport::finalize() {
  if (subchecks.empty()) return;
  bool failed = false;
  Verdict skip = Verdict::pass;
  for (const auto& c : subchecks) {
    if (c.verdict == Verdict::fail) failed = true;
    else if (c.verdict != Verdict::pass && skip == Verdict::pass) skip = c.verdict;
  }
  verdict = failed ? Verdict::fail : skip;
}

Verdict ReportDocument::overall() const {
  Verdict v = Verdict::pass;
  for (const auto& r : reports) {
    if (r.verdict == Verdict::fail) return Verdict::fail;
    if (r.verdict != Verdict::pass && v == Verdict::pass) v = r.verdict;
  }
  return v;
}

std::string to_json(const ReportDocument& doc) {
  using nlohmann::ordered_json;
  ordered_json out;
  out["schema"] = "report.v1";
  out["command"] = doc.command;
  out["spec"] = doc.spec_id;
  out["seed"] = doc.seed;
  out["verdict"] = verdict_name(doc.overall());
  ordered_json list = ordered_json::array();
  for (const auto& r : doc.reports) {
    ordered_json j;
    j["check"] = r.check_id;
    j["spec"] = r.spec_id;
    j["levels"] = {r.level_from, r.level_to};
    j["method"] = r.method;
    j["verdict"] = verdict_name(r.verdict);
    ordered_json q = ordered_json::object();
    for (const auto& [k, v] : r.quantities) q[k] = v;
    j["quantities"] = q;
    ordered_json subs = ordered_json::array();
    for (const auto& c : r.subchecks)
      subs.push_back({{"name", c.name},
                      {"method", c.method},
                      {"verdict", verdict_name(c.verdict)},
                      {"detail", c.detail}});
    j["subchecks"] = subs;
    j["notes"] = r.notes;
    list.push_back(std::move(j));
  }
  out["reports"] = list;
  return out.dump(2) + "\n";
}

std::string to_text(const ReportDocument& doc) {
  std::string s = doc.command + " on " + doc.spec_id + " (seed " + std::to_string(doc.seed) + ")\n";
  for (const auto& r : doc.reports) {
    char t[32];
    std::snprintf(t, sizeof t, "%.2fs", r.seconds);
    s += "[" + verdict_name(r.verdict) + "] " + r.check_id + " levels " +
         std::to_string(r.level_from) + ".." + std::to_string(r.level_to) + " via " + r.method +
         " (" + t + ")\n";
    for (const auto& [k, v] : r.quantities) s += "    " + k + " = " + v + "\n";
    for (const auto& c : r.subchecks) {
      if (c.verdict == Verdict::pass && c.detail.empty()) continue;
      s += "    " + verdict_name(c.verdict) + ": " + c.name;
      if (!c.detail.empty()) s += " (" + c.detail + ")";
      s += "\n";
    }
    std::size_t passed = 0;
    for (const auto& c : r.subchecks) passed += c.verdict == Verdict::pass;
    if (!r.subchecks.empty())
      s += "    " + std::to_string(passed) + "/" + std::to_string(r.subchecks.size()) +
           " sub-checks passed\n";
    for (const auto& n : r.notes) s += "    note: " + n + "\n";
  }
  s += "overall: " + verdict_name(doc.overall()) + "\n";
  return s;
}

}  // namespace telescopes
