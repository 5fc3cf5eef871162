// Runs the acceptance criteria and prints one PASS/FAIL line for each.
// Exit status 0 only when every criterion passes.

#include "startail/acceptance.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"startail acceptance suite"};
  unsigned workers = 1;
  std::string json_path;
  app.add_option("--workers", workers, "worker threads, 0 for all cores");
  app.add_option("--json", json_path, "also write the results as JSON");
  CLI11_PARSE(app, argc, argv);

  namespace acc = startail::acceptance;
  const auto results = acc::run_all({workers}, [](const acc::CriterionResult& r) {
    std::cout << acc::format_line(r) << std::endl;
  });
  const bool ok = acc::all_passed(results);
  std::size_t passed = 0;
  for (const auto& r : results) passed += r.passed();
  std::cout << passed << "/" << results.size() << " criteria passed" << std::endl;
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    out << acc::to_json(results).dump(2) << '\n';
  }
  return ok ? 0 : 1;
}
