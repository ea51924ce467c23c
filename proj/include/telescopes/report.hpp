#ifndef TELESCOPES_REPORT_HPP
#define TELESCOPES_REPORT_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace telescopes {

enum class Verdict { pass, fail, skipped_cap, skipped_search };
// "pass", "fail", "skipped(cap)", "skipped(search)".
std::string verdict_name(Verdict v);
bool verdict_ok(Verdict v);  // pass or skipped

struct SubCheck {
  std::string name;
  std::string method;
  Verdict verdict = Verdict::pass;
  std::string detail;
};

struct VerificationReport {
  std::string check_id;
  std::string spec_id;
  std::size_t level_from = 0, level_to = 0;
  std::string method;
  Verdict verdict = Verdict::pass;
  // Insertion-ordered; big integers are decimal strings.
  std::vector<std::pair<std::string, std::string>> quantities;
  std::vector<SubCheck> subchecks;
  std::vector<std::string> notes;
  double seconds = 0;  // text output only

  void add(std::string name, std::string method, bool ok, std::string detail = {});
  void add(SubCheck c) { subchecks.push_back(std::move(c)); }
  void quantity(std::string name, std::string value);
  const std::string* find_quantity(const std::string& name) const;
  // Folds the sub-check verdicts: any failure fails, otherwise any skip
  // skips. A report without sub-checks keeps its verdict.
  void finalize();
  bool passed() const { return verdict == Verdict::pass; }
};

struct ReportDocument {
  std::string command;
  std::string spec_id;
  std::uint64_t seed = 0;
  std::vector<VerificationReport> reports;

  Verdict overall() const;
};

// Stable key order; timing is left out so reruns are byte-identical.
std::string to_json(const ReportDocument& doc);
std::string to_text(const ReportDocument& doc);

}  // namespace telescopes

#endif
