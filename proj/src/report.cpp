#include "dy/report.hpp"

#include <algorithm>
#include <chrono>

namespace dy {

std::size_t ReportFragment::passed() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const IdentityRecord& r) { return r.pass; }));
}

std::size_t ReportFragment::failed() const { return records.size() - passed(); }

void ReportFragment::sort() {
  std::stable_sort(records.begin(), records.end(), [](const IdentityRecord& a, const IdentityRecord& b) {
    if (a.label != b.label) return a.label < b.label;
    return a.params < b.params;
  });
}

void ReportFragment::append(const ReportFragment& other) {
  records.insert(records.end(), other.records.begin(), other.records.end());
  for (const auto& [k, v] : other.info) info[k] = v;
}

IdentityRecord make_record(std::string label, std::string anchor, std::string params, bool pass,
                           std::string counterexample) {
  IdentityRecord r;
  r.label = std::move(label);
  r.anchor = std::move(anchor);
  r.params = std::move(params);
  r.pass = pass;
  if (!pass) r.counterexample = std::move(counterexample);
  return r;
}

IdentityRecord timed_check(const std::function<IdentityRecord()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  IdentityRecord r = check();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace dy
