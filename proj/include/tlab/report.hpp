#pragma once

#include <json.hpp>

#include <string>
#include <vector>

namespace tlab {

/// Outcome of a bounded check. Falsified always carries a concrete witness.
enum class Verdict { verified, falsified, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::verified: return "verified-at-scale";
    case Verdict::falsified: return "falsified";
    case Verdict::inconclusive: return "inconclusive-within-bound";
  }
  return "unknown";
}

/// Falsified dominates inconclusive, which dominates verified.
inline Verdict combine(Verdict a, Verdict b) {
  if (a == Verdict::falsified || b == Verdict::falsified) {
    return Verdict::falsified;
  }
  if (a == Verdict::inconclusive || b == Verdict::inconclusive) {
    return Verdict::inconclusive;
  }
  return Verdict::verified;
}

struct CheckReport {
  std::string name;
  nlohmann::json params = nlohmann::json::object();
  Verdict verdict = Verdict::verified;
  nlohmann::json witnesses = nlohmann::json::array();
  std::size_t compared_count = 0;

  bool passed() const noexcept { return verdict == Verdict::verified; }

  /// Folds a sub-check in: verdicts combine, counts add, and the sub-check is kept as a witness.
  void absorb(const CheckReport& sub) {
    verdict = combine(verdict, sub.verdict);
    compared_count += sub.compared_count;
    witnesses.push_back(sub.to_json());
  }

  nlohmann::json to_json() const {
    return {{"name", name},
            {"params", params},
            {"verdict", to_string(verdict)},
            {"witnesses", witnesses},
            {"compared_count", compared_count}};
  }
};

/// A named, ordered list of reports.
struct Suite {
  std::string name;
  std::vector<CheckReport> reports;

  Verdict verdict() const {
    Verdict v = Verdict::verified;
    for (const CheckReport& r : reports) {
      v = combine(v, r.verdict);
    }
    return v;
  }

  nlohmann::json to_json() const {
    nlohmann::json rs = nlohmann::json::array();
    for (const CheckReport& r : reports) {
      rs.push_back(r.to_json());
    }
    return {{"name", name}, {"reports", rs}, {"verdict", to_string(verdict())}};
  }
};

/// Canonical report text: sorted keys, no insignificant whitespace, trailing newline.
inline std::string emit_report(const std::vector<Suite>& suites) {
  nlohmann::json doc = {{"suites", nlohmann::json::array()}};
  for (const Suite& s : suites) {
    doc["suites"].push_back(s.to_json());
  }
  return doc.dump() + "\n";
}

}  // namespace tlab
