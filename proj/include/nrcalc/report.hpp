#pragma once

// Report assembly and rendering.
//
// A run produces one RunReport: a command echo plus one FamilyReport per
// computed family instance.  Every numeric claim lives either in the
// q-sequence block or in the ordered `values` list, and every verification
// performed along the way is recorded as a named check, so a report is
// auditable line by line.  Rendering is deterministic: identical inputs give
// byte-identical tables, JSON documents, and CSV sheets.  Timing is never
// part of a report.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nrcalc/qseq.hpp"

namespace nrcalc {

struct ReportCheck {
  std::string id;
  bool pass = false;
  std::string detail;
};

struct FamilyReport {
  std::string family;
  std::string params;  // space-separated "d=4 r=1"; kept free of commas
  std::string field;   // "rationals", "fp:<p>", or "" when no linear algebra ran
  unsigned long long seed = 0;
  bool seeded = false;
  std::optional<QSequenceReport> qseq;
  std::vector<std::pair<std::string, long>> values;
  std::vector<ReportCheck> checks;

  void value(const std::string& key, long v) { values.emplace_back(key, v); }
  void check(const std::string& id, bool pass, const std::string& detail) {
    checks.push_back({id, pass, detail});
  }
  long checks_passed() const;
  bool all_checks_pass() const;
};

struct RunReport {
  std::string command;
  std::vector<FamilyReport> families;
  bool all_checks_pass() const;
};

// Human-readable UTF-8 table for standard output.
std::string render_table(const RunReport& report);
// One JSON object per run; field order fixed, seeds echoed.
std::string render_json(const RunReport& report);
// Header family,params,n,L_n,q_n,nr,br,pg,q_inf,checks_passed and one row per
// (family, n) pair; families without a q-sequence emit a single row with the
// sequence columns empty.
std::string render_csv(const RunReport& report);

}  // namespace nrcalc
