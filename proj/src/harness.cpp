#include "dy/harness.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "dy/berezinian.hpp"
#include "dy/errors.hpp"
#include "dy/gauss.hpp"
#include "dy/morphisms.hpp"
#include "dy/rtt.hpp"

namespace dy {

namespace {

constexpr int kConfluenceTrials = 200;

ReportFragment run_suite(const std::string& name, Workspace& ws, const SuiteConfig& c) {
  const int m = c.m, n = c.n;
  if (name == "relations-oracle") return oracle_match_inverse_relations(ws.table(m, n), c.jobs);
  if (name == "confluence") return confluence_probe(ws.table(m, n), c.seed, kConfluenceTrials);
  if (name == "gauss") {
    ReportFragment frag;
    for (Sign s : {Sign::minus, Sign::plus})
      frag.append(verify_gauss_identities(gauss_decompose(ws.context(m, n), s), ws.table(m, n), c.jobs));
    return frag;
  }
  if (name == "d-commute") return verify_d_commute(ws.table(m, n), c.jobs);
  if (name == "zeta") return verify_zeta_images(ws, m, n, c.jobs);
  if (name == "psi") return verify_psi_images(ws, m, n, 1, c.jobs);
  if (name == "berezinian-equality") return berezinian_equality_suite(ws, m, n, c.jobs);
  if (name == "centrality") return centrality_suite(ws, m, n, c.jobs);
  if (name == "proof-steps") return proof_step_suite(ws, c.jobs);
  if (name == "classical-limit") return classical_limit_suite(ws, m, n);
  if (name == "independence") return independence_probe(ws, m, n, std::min(2, c.N));
  if (name == "delta-sl") return delta_and_sl_suite(ws, m, n, c.jobs);
  throw UsageError("unknown suite " + name);
}

std::string config_line(const SuiteConfig& c) {
  std::ostringstream os;
  os << "gl(" << c.m << '|' << c.n << ") N=" << c.N << " H=" << c.H << " L=" << c.cap
     << " seed=" << c.seed;
  return os.str();
}

std::string seconds_text(double s) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << s;
  return os.str();
}

std::string emit_text(const Report& r) {
  std::ostringstream os;
  os << kEngineVersion << "  " << config_line(r.config) << '\n';
  for (const SuiteResult& s : r.suites) {
    const ReportFragment& f = s.fragment;
    os << '\n' << "suite " << s.name << ": " << f.passed() << " passed, " << f.failed() << " failed";
    if (r.config.timings) os << " (" << seconds_text(s.seconds) << "s)";
    os << '\n';
    for (const auto& [k, v] : f.info) os << "  # " << k << ": " << v << '\n';
    for (const IdentityRecord& rec : f.records) {
      os << "  " << (rec.pass ? "PASS" : "FAIL") << "  " << rec.label;
      if (!rec.params.empty()) os << "  " << rec.params;
      if (r.config.timings) os << "  " << seconds_text(rec.seconds) << 's';
      os << '\n';
      if (!rec.pass) os << "        counterexample: " << rec.counterexample << '\n';
    }
  }
  os << '\n'
     << "summary: " << r.passed() << " passed, " << r.failed() << " failed, " << r.suites.size()
     << " suites\n";
  return os.str();
}

std::string emit_json(const Report& r) {
  using nlohmann::ordered_json;
  const SuiteConfig& c = r.config;
  ordered_json j;
  j["engine_version"] = kEngineVersion;
  // jobs and the cache directory do not change results and are left out, so
  // reports compare byte for byte across machines and worker counts.
  j["config"] = {{"m", c.m},          {"n", c.n},        {"series_order", c.N},
                 {"h_order", c.H},    {"cap", c.cap},    {"suites", c.suites},
                 {"seed", c.seed}};
  j["suites"] = ordered_json::array();
  for (const SuiteResult& s : r.suites) {
    ordered_json js;
    js["name"] = s.name;
    js["info"] = s.fragment.info;
    js["identities"] = ordered_json::array();
    for (const IdentityRecord& rec : s.fragment.records) {
      ordered_json ji;
      ji["label"] = rec.label;
      ji["anchor"] = rec.anchor;
      ji["params"] = rec.params;
      ji["pass"] = rec.pass;
      if (!rec.pass) ji["counterexample"] = rec.counterexample;
      if (c.timings) ji["seconds"] = rec.seconds;
      js["identities"].push_back(std::move(ji));
    }
    js["summary"] = {{"passed", s.fragment.passed()}, {"failed", s.fragment.failed()}};
    if (c.timings) js["seconds"] = s.seconds;
    j["suites"].push_back(std::move(js));
  }
  j["summary"] = {{"suites", r.suites.size()},
                  {"identities", r.passed() + r.failed()},
                  {"passed", r.passed()},
                  {"failed", r.failed()},
                  {"status", r.ok() ? "pass" : "fail"}};
  return j.dump(2) + "\n";
}

}  // namespace

const std::vector<std::string>& suite_registry() {
  static const std::vector<std::string> names = {
      "relations-oracle", "confluence",      "gauss",       "d-commute",
      "zeta",             "psi",             "berezinian-equality",
      "centrality",       "proof-steps",     "classical-limit",
      "independence",     "delta-sl"};
  return names;
}

int default_cap(int N, int H) { return 2 * (N + H) + 10; }

SuiteConfig validate(SuiteConfig c) {
  if (c.m < 0 || c.n < 0 || c.m + c.n < 1) throw UsageError("need m, n >= 0 and m + n >= 1");
  if (c.N < 1) throw UsageError("series order N must be at least 1");
  if (c.H < 1) throw UsageError("h-order H must be at least 1");
  if (c.cap == 0) c.cap = default_cap(c.N, c.H);
  if (c.cap < c.N + 1)
    throw UsageError("level cap L must be at least N + 1 = " + std::to_string(c.N + 1));
  if (c.jobs < 1) throw UsageError("jobs must be at least 1");
  if (c.format != "text" && c.format != "json") throw UsageError("format must be text or json");

  const auto& reg = suite_registry();
  bool all = false;
  std::vector<bool> chosen(reg.size(), false);
  for (const std::string& s : c.suites) {
    if (s == "all") {
      all = true;
      continue;
    }
    auto it = std::find(reg.begin(), reg.end(), s);
    if (it == reg.end()) throw UsageError("unknown suite '" + s + "'");
    if (s == "delta-sl" && c.m != c.n)
      throw UsageError("suite delta-sl needs m = n (got m=" + std::to_string(c.m) +
                       ", n=" + std::to_string(c.n) + ")");
    chosen[static_cast<std::size_t>(it - reg.begin())] = true;
  }
  c.suites.clear();
  for (std::size_t k = 0; k < reg.size(); ++k) {
    const bool applicable = reg[k] != "delta-sl" || c.m == c.n;
    if (chosen[k] || (all && applicable)) c.suites.push_back(reg[k]);
  }
  return c;
}

std::size_t Report::passed() const {
  std::size_t t = 0;
  for (const auto& s : suites) t += s.fragment.passed();
  return t;
}

std::size_t Report::failed() const {
  std::size_t t = 0;
  for (const auto& s : suites) t += s.fragment.failed();
  return t;
}

Report run(const SuiteConfig& config) {
  Report report;
  report.config = validate(config);
  const SuiteConfig& c = report.config;
  Workspace ws(c.N, c.H, c.cap);
  if (!c.cache_dir.empty()) ws.attach_cache(c.cache_dir);

  for (const std::string& name : c.suites) {
    SuiteResult res;
    res.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      res.fragment = run_suite(name, ws, c);
    } catch (const CapError& e) {
      res.fragment.records.clear();
      res.fragment.records.push_back(
          make_record(name + ".cap", "suite completes within the level cap", "L=" + std::to_string(c.cap),
                      false, e.what()));
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.fragment.suite = name;
    res.fragment.sort();
    report.suites.push_back(std::move(res));
  }
  ws.save_cache();
  return report;
}

std::string emit(const Report& report, const std::string& format) {
  if (format == "json") return emit_json(report);
  if (format == "text") return emit_text(report);
  throw UsageError("format must be text or json");
}

}  // namespace dy
