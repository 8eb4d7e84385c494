#include "nrcalc/report.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace nrcalc {

namespace {

using Json = nlohmann::ordered_json;

std::string join_params(const FamilyReport& fam) {
  return fam.params.empty() ? std::string("-") : fam.params;
}

}  // namespace

long FamilyReport::checks_passed() const {
  long n = 0;
  for (const auto& c : checks) n += c.pass ? 1 : 0;
  return n;
}

bool FamilyReport::all_checks_pass() const {
  return checks_passed() == static_cast<long>(checks.size());
}

bool RunReport::all_checks_pass() const {
  return std::all_of(families.begin(), families.end(),
                     [](const FamilyReport& f) { return f.all_checks_pass(); });
}

std::string render_table(const RunReport& report) {
  std::ostringstream out;
  out << "command: " << report.command << "\n";
  for (const auto& fam : report.families) {
    out << "\n";
    out << "── family " << fam.family << "  [" << join_params(fam) << "]";
    if (!fam.field.empty()) out << "  field=" << fam.field;
    if (fam.seeded) out << "  seed=" << fam.seed;
    out << "\n";

    if (fam.qseq) {
      const auto& qs = *fam.qseq;
      auto cell = [](long v) {
        std::string s = std::to_string(v);
        return std::string(s.size() >= 6 ? 1 : 6 - s.size(), ' ') + s;
      };
      out << "   n    ";
      for (int n = 0; n <= qs.n_max; ++n) out << cell(n);
      out << "\n   L(n) " << std::string(6, ' ');
      for (int n = 1; n <= qs.n_max; ++n) out << cell(qs.lengths[n - 1]);
      out << "\n   q(n) ";
      for (int n = 0; n <= qs.n_max; ++n) out << cell(qs.q[n]);
      out << "\n";
      out << "   nr=" << qs.nr << "  br=" << qs.br << "  pg=" << qs.pg
          << "  q_inf=" << qs.q_inf << "\n";
    }
    if (!fam.values.empty()) {
      out << "   values:";
      for (const auto& [k, v] : fam.values) out << "  " << k << "=" << v;
      out << "\n";
    }
    out << "   checks: " << fam.checks_passed() << "/" << fam.checks.size()
        << " passed\n";
    for (const auto& c : fam.checks)
      out << "   " << (c.pass ? "✓" : "✗") << " " << c.id
          << (c.detail.empty() ? "" : "  — " + c.detail) << "\n";
  }
  return out.str();
}

std::string render_json(const RunReport& report) {
  Json doc;
  doc["command"] = report.command;
  doc["families"] = Json::array();
  for (const auto& fam : report.families) {
    Json j;
    j["family"] = fam.family;
    j["params"] = fam.params;
    j["field"] = fam.field;
    if (fam.seeded) j["seed"] = fam.seed;
    if (fam.qseq) {
      const auto& qs = *fam.qseq;
      j["qseq"] = {{"pg", qs.pg},      {"n_max", qs.n_max}, {"lengths", qs.lengths},
                   {"q", qs.q},        {"nr", qs.nr},       {"br", qs.br},
                   {"q_inf", qs.q_inf}};
    }
    Json values = Json::object();
    for (const auto& [k, v] : fam.values) values[k] = v;
    j["values"] = std::move(values);
    j["checks"] = Json::array();
    for (const auto& c : fam.checks)
      j["checks"].push_back({{"id", c.id}, {"pass", c.pass}, {"detail", c.detail}});
    doc["families"].push_back(std::move(j));
  }
  doc["all_checks_pass"] = report.all_checks_pass();
  return doc.dump(2) + "\n";
}

std::string render_csv(const RunReport& report) {
  std::ostringstream out;
  out << "family,params,n,L_n,q_n,nr,br,pg,q_inf,checks_passed\n";
  for (const auto& fam : report.families) {
    if (!fam.qseq) {
      out << fam.family << "," << fam.params << ",,,,,,,," << fam.checks_passed()
          << "\n";
      continue;
    }
    const auto& qs = *fam.qseq;
    for (int n = 0; n <= qs.n_max; ++n) {
      out << fam.family << "," << fam.params << "," << n << ",";
      if (n >= 1) out << qs.lengths[n - 1];
      out << "," << qs.q[n] << "," << qs.nr << "," << qs.br << "," << qs.pg << ","
          << qs.q_inf << "," << fam.checks_passed() << "\n";
    }
  }
  return out.str();
}

}  // namespace nrcalc
