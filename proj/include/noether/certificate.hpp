#pragma once

// Certificate records and their JSON / Markdown renderings.

#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "noether/fpgroups.hpp"

namespace noether::cert {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

enum class Status { pass, gated, noted_discrepancy, fail };

inline std::string status_str(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::gated: return "gated";
    case Status::noted_discrepancy: return "noted-discrepancy";
    case Status::fail: return "fail";
  }
  return "?";
}

struct Step {
  std::string name;
  Status status = Status::fail;
  std::string anchor;  // e.g. "p-odd:case-5:step-2"
  json witness = json::object();
  // for noted discrepancies: whether the recomputed replacement was verified
  bool correction_verified = false;
};

struct Certificate {
  fp::FamilySpec family;
  std::vector<Step> steps;
  std::vector<std::string> notes;

  bool passed() const {
    for (const auto& s : steps) {
      if (s.status == Status::fail) return false;
      if (s.status == Status::noted_discrepancy && !s.correction_verified) return false;
    }
    return !steps.empty();
  }
  std::string verdict() const { return passed() ? "pass" : "fail"; }
  std::size_t count(Status st) const {
    std::size_t c = 0;
    for (const auto& s : steps) c += s.status == st;
    return c;
  }

  Step& add(std::string name, bool ok, std::string anchor, json witness = json::object()) {
    steps.push_back({std::move(name), ok ? Status::pass : Status::fail, std::move(anchor), std::move(witness)});
    return steps.back();
  }
  Step& add_gate(std::string name, bool ok, std::string anchor, json witness = json::object()) {
    steps.push_back({std::move(name), ok ? Status::gated : Status::fail, std::move(anchor), std::move(witness)});
    return steps.back();
  }
  /// A printed claim that fails as stated; `verified` says whether the
  /// replacement recorded in the witness was itself checked.
  Step& add_discrepancy(std::string name, bool verified, std::string anchor, json witness) {
    steps.push_back({std::move(name), Status::noted_discrepancy, std::move(anchor), std::move(witness), verified});
    return steps.back();
  }
  void note(const std::string& s) {
    for (const auto& n : notes)
      if (n == s) return;
    notes.push_back(s);
  }
};

inline json family_json(const fp::FamilySpec& f) {
  json j;
  j["theorem"] = fp::list_label(f.list);
  j["index"] = f.index;
  j["p"] = f.p;
  j["n"] = f.n;
  if (f.a) j["a"] = *f.a;
  return j;
}

inline json to_json(const Certificate& c) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["family"] = family_json(c.family);
  j["steps"] = json::array();
  for (const auto& s : c.steps) {
    json sj;
    sj["name"] = s.name;
    sj["status"] = status_str(s.status);
    sj["paper_anchor"] = s.anchor;
    sj["witness"] = s.witness;
    if (s.status == Status::noted_discrepancy) sj["correction_verified"] = s.correction_verified;
    j["steps"].push_back(std::move(sj));
  }
  j["verdict"] = c.verdict();
  j["notes"] = c.notes;
  return j;
}

inline std::string to_markdown(const Certificate& c) {
  std::ostringstream os;
  os << "### " << c.family.label() << " : " << c.verdict() << "\n\n";
  os << "| step | status | anchor |\n|---|---|---|\n";
  for (const auto& s : c.steps) {
    os << "| " << s.name << " | " << status_str(s.status);
    if (s.status == Status::noted_discrepancy) os << (s.correction_verified ? " (corrected, verified)" : " (unverified)");
    os << " | " << s.anchor << " |\n";
  }
  if (!c.notes.empty()) {
    os << "\nNotes:\n";
    for (const auto& n : c.notes) os << "- " << n << "\n";
  }
  os << "\n";
  return os.str();
}

}  // namespace noether::cert
