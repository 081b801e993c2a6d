// dyverify: run verification suites and print a report.
// Exit status: 0 all identities pass, 1 some failed, 2 usage error.

#include <exception>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dy/errors.hpp"
#include "dy/harness.hpp"

int main(int argc, char** argv) {
  dy::SuiteConfig cfg;
  std::string out_path;
  bool list = false;

  CLI::App app{"Exact verification of double Yangian identities"};
  app.add_option("--m", cfg.m, "even part size m")->capture_default_str();
  app.add_option("--n", cfg.n, "odd part size n")->capture_default_str();
  app.add_option("--series-order,-N", cfg.N, "series order N (u-order)")->capture_default_str();
  app.add_option("--h-order,-H", cfg.H, "h-order H")->capture_default_str();
  app.add_option("--cap,-L", cfg.cap, "generator level cap L (default 2(N+H)+10)");
  app.add_option("--suite", cfg.suites, "suite to run, repeatable; 'all' for the registry");
  app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  app.add_option("--jobs,-j", cfg.jobs, "worker threads")->capture_default_str();
  app.add_option("--cache-dir", cfg.cache_dir, "rule cache directory");
  app.add_option("--format", cfg.format, "text or json")->capture_default_str();
  app.add_option("--out,-o", out_path, "write the report here instead of stdout");
  app.add_flag("--timings", cfg.timings, "include wall times (report no longer reproducible)");
  app.add_flag("--list-suites", list, "print the suite registry and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (list) {
    for (const auto& s : dy::suite_registry()) std::cout << s << '\n';
    return 0;
  }
  if (cfg.suites.empty()) cfg.suites = {"all"};

  try {
    const dy::Report report = dy::run(cfg);
    const std::string text = dy::emit(report, report.config.format);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) {
        std::cerr << "dyverify: cannot write " << out_path << '\n';
        return 2;
      }
      out << text;
    }
    return report.ok() ? 0 : 1;
  } catch (const dy::UsageError& e) {
    std::cerr << "dyverify: " << e.what() << '\n';
    return 2;
  } catch (const dy::StaleCacheError& e) {
    std::cerr << "dyverify: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "dyverify: error: " << e.what() << '\n';
    return 1;
  }
}
