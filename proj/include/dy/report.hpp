#pragma once

// Verification records and their text/JSON rendering.

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace dy {

inline constexpr const char* kEngineVersion = "dyverify 1.0.0";

struct IdentityRecord {
  std::string label;   // identity name, e.g. "gauss.fde"
  std::string anchor;  // formula being checked, in words
  std::string params;  // "i=1,j=2,r=3"
  bool pass = true;
  std::string counterexample;  // Element text of the non-vanishing difference
  double seconds = 0.0;
};

struct ReportFragment {
  std::string suite;
  std::vector<IdentityRecord> records;
  // Suite-level facts (precision, ranks, counts), rendered in key order.
  std::map<std::string, std::string> info;

  std::size_t passed() const;
  std::size_t failed() const;
  bool ok() const { return failed() == 0; }
  // Deterministic order: by label, then params.
  void sort();
  void append(const ReportFragment& other);
};

// Record for "difference is zero": fills pass/counterexample.
IdentityRecord make_record(std::string label, std::string anchor, std::string params,
                           bool pass, std::string counterexample = {});

}  // namespace dy

namespace dy {

// Runs check() and stores its wall time in the record.
IdentityRecord timed_check(const std::function<IdentityRecord()>& check);

}  // namespace dy
