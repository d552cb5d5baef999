#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rconley/error.hpp"
#include "rconley/parallel.hpp"
#include "rconley/version.hpp"
#include "rconley_app/app.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

int emit_error(const std::string& kind, const std::string& key, const std::string& message, int code) {
  json e{{"error", {{"kind", kind}, {"message", message}}}};
  if (!key.empty()) e["error"]["key"] = key;
  std::cerr << e.dump() << '\n';
  return code;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rconley::app::ConfigError("<file>", "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw rconley::app::ConfigError("<file>", std::string("not valid JSON: ") + e.what());
  }
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Combinatorial random Conley index computations on box grids"};
  cli.set_version_flag("--version", std::string(rconley::kVersion));
  cli.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::size_t threads = 0;
  std::optional<std::uint64_t> seed_override;
  std::string report_path;

  for (const char* name : rconley::app::kCommands) {
    auto* sub = cli.add_subcommand(name, std::string("run the ") + name + " pipeline");
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out-dir", out_dir, "directory for the report and auxiliary files");
    sub->add_option("--threads", threads, "worker threads (default: RCONLEY_THREADS or all cores)");
    sub->add_option("--seed-override", seed_override, "replace the seed list by this single seed");
  }
  auto* verify = cli.add_subcommand("verify-report", "re-run a report's embedded config, or replay a witness file");
  verify->add_option("report", report_path, "report.json or witness file")->required();
  verify->add_option("--threads", threads, "worker threads");

  try {
    cli.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return cli.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return cli.exit(e);
  } catch (const CLI::ParseError& e) {
    return emit_error("usage", "", e.what(), kExitConfig);
  }
  if (threads > 0) rconley::set_thread_count(threads);

  auto* sub = cli.get_subcommands().front();
  const std::string command = sub->get_name();
  try {
    if (command == "verify-report") {
      const auto r = rconley::app::verify_report(load_json(report_path));
      std::cout << json{{"identical", r.identical}, {"witnesses_ok", r.witnesses_ok}, {"detail", r.detail}}.dump()
                << '\n';
      return r.identical && r.witnesses_ok ? kExitPass : kExitFail;
    }
    const auto resolved = rconley::app::resolve_config(load_json(config_path), command, seed_override);
    const auto start = std::chrono::steady_clock::now();
    const auto result = rconley::app::run_command(command, resolved);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "report.json", result.report.dump(2) + "\n");
    for (const auto& [name, text] : result.files) write_file(fs::path(out_dir) / name, text);
    write_file(fs::path(out_dir) / "timing.json",
               json{{"command", command}, {"seconds", seconds}, {"threads", rconley::thread_count()}}.dump(2) + "\n");
    std::cout << json{{"command", command}, {"passed", result.passed}, {"report", (fs::path(out_dir) / "report.json").string()}}
                     .dump()
              << '\n';
    return result.passed ? kExitPass : kExitFail;
  } catch (const rconley::app::ConfigError& e) {
    return emit_error("config", e.key(), e.what(), kExitConfig);
  } catch (const rconley::InputError& e) {
    return emit_error("input", "", e.what(), kExitConfig);
  } catch (const rconley::ConstructionError& e) {
    return emit_error("construction", "", e.what(), kExitFail);
  } catch (const std::exception& e) {
    return emit_error("runtime", "", e.what(), kExitFail);
  }
}
