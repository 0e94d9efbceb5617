#ifndef MCX_REPORT_HPP
#define MCX_REPORT_HPP

#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mcx/core.hpp"

namespace mcx {

struct CheckRecord {
  std::string check;
  bool pass = false;
  double deviation = 0.0;
  double tol = 0.0;
  std::string witness;
};

/// Flat list of pass/fail records produced by a verification battery.
struct Report {
  std::string name;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<CheckRecord> checks;

  bool pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }

  CheckRecord& add(std::string check, bool ok, double deviation, double tol, std::string witness = {}) {
    checks.push_back({std::move(check), ok, deviation, tol, std::move(witness)});
    return checks.back();
  }

  /// Record passes when deviation <= tol.
  CheckRecord& add_bound(std::string check, double deviation, double tol, std::string witness = {}) {
    return add(std::move(check), deviation <= tol, deviation, tol, std::move(witness));
  }

  void echo(std::string key, std::string value) { inputs.emplace_back(std::move(key), std::move(value)); }

  const CheckRecord* find(const std::string& check) const {
    for (const auto& c : checks) {
      if (c.check == check) return &c;
    }
    return nullptr;
  }

  void merge(const Report& other, const std::string& prefix = {}) {
    for (auto c : other.checks) {
      if (!prefix.empty()) c.check = prefix + "." + c.check;
      checks.push_back(std::move(c));
    }
  }
};

inline std::string format_sci(double v) {
  if (is_inf(v)) return "inf";
  if (v == -kInf) return "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1e", v);
  return buf;
}

inline std::string format_record(const CheckRecord& c) {
  std::string s = "check=" + c.check + " verdict=" + (c.pass ? "pass" : "fail") +
                  " deviation=" + format_sci(c.deviation) + " tol=" + format_sci(c.tol);
  if (!c.witness.empty()) s += " witness=" + c.witness;
  return s;
}

inline void emit_report(std::ostream& os, const Report& r) {
  os << "# report=" << r.name << " verdict=" << (r.pass() ? "pass" : "fail") << "\n";
  for (const auto& [k, v] : r.inputs) os << "# input " << k << "=" << v << "\n";
  for (const auto& c : r.checks) os << format_record(c) << "\n";
}

inline void emit_report(const std::string& path, const Report& r) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  emit_report(os, r);
}

inline std::string witness_point(const Vec& p, int dim) {
  char buf[64];
  if (dim == 1) {
    std::snprintf(buf, sizeof buf, "(%.6g)", p[0]);
  } else {
    std::snprintf(buf, sizeof buf, "(%.6g,%.6g)", p[0], p[1]);
  }
  return buf;
}

}  // namespace mcx

#endif  // MCX_REPORT_HPP
