#include "tasks.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

int input_error(const std::string &msg) {
  std::cerr << "dirac: " << msg << "\n";
  return 2;
}

void print_summary(const dirac::cli::json &report, double seconds) {
  using dirac::cli::json;
  if (!report["source"].get<std::string>().empty()) std::cout << report["source"].get<std::string>() << "\n";
  for (const auto &t : report["tasks"]) {
    std::cout << (t["passed"].get<bool>() ? "[pass] " : "[FAIL] ") << t["index"].get<std::size_t>() << " " << t["op"].get<std::string>();
    if (t.contains("as")) std::cout << " -> " << t["as"].get<std::string>();
    std::cout << "\n";
    if (t["result"].contains("error"))
      std::cout << "    error " << t["result"]["error"].get<std::string>() << ": " << t["result"]["message"].get<std::string>() << "\n";
    for (const auto &c : t["checks"]) {
      std::cout << "    " << (c["pass"].get<bool>() ? "ok   " : "FAIL ") << c["key"].get<std::string>();
      if (!c["pass"].get<bool>() && c.contains("actual")) std::cout << "  actual: " << c["actual"].dump();
      std::cout << "\n";
    }
  }
  std::size_t passed = 0;
  for (const auto &t : report["tasks"]) passed += t["passed"].get<bool>();
  std::cout << passed << "/" << report["tasks"].size() << " tasks passed (seed " << report["seed"].get<std::uint64_t>()
            << ", " << report["probes"].get<std::size_t>() << " probes, " << seconds << " s)\n";
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Run Dirac-geometry problem documents and check their expectations."};
  std::string path, json_path;
  dirac::cli::RunConfig cfg;
  app.add_option("document", path, "Problem document (JSON)")->required();
  app.add_option("--probes", cfg.probes, "Number of seeded probe points per smoothness check")->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for probe points and fibre values")->capture_default_str();
  app.add_option("--json", json_path, "Write the machine-readable report to this path");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::ifstream in(path);
  if (!in) return input_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();

  auto start = std::chrono::steady_clock::now();
  dirac::cli::json report;
  bool passed = false;
  try {
    dirac::cli::Runner runner(dirac::cli::load_document(dirac::cli::parse_json(buf.str())), cfg);
    std::tie(report, passed) = runner.run();
  } catch (const dirac::cli::InputError &e) {
    return input_error(path + ": " + e.what());
  } catch (const dirac::Error &e) {
    return input_error(path + ": " + e.what());
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) return input_error("cannot write " + json_path);
    out << report.dump(2) << "\n";
  }
  print_summary(report, seconds);
  return passed ? 0 : 1;
}
