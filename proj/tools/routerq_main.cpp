#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "routerq/chart.hpp"
#include "routerq/config.hpp"
#include "routerq/report_io.hpp"
#include "routerq/validate.hpp"
#include "routerq/version.hpp"

namespace fs = std::filesystem;
using namespace routerq;

namespace {

constexpr std::uint64_t kDefaultSeed = 12345;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("ROUTERQ_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
      throw CLI::ValidationError("ROUTERQ_SEED", "not an unsigned integer");
    return v;
  }
  return kDefaultSeed;
}

ScenarioSpec resolve_scenario(const std::string& name) {
  if (is_builtin_scenario(name)) return builtin_scenario(name);
  std::ifstream in(name);
  if (!in)
    throw CLI::ValidationError(
        "--scenario", "`" + name + "` is neither A|B|C|D nor a readable file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

// Per-packet trace rows for one replication, written as CSV.
class FileTraceObserver : public NodeObserver {
 public:
  FileTraceObserver(std::ofstream& out, const char* node)
      : out_(out), node_(node) {}

  void on_admit(const Packet& p, double now) override {
    row("admit", p, now, 0.0);
  }
  void on_service_start(const Packet& p, double now) override {
    row("start", p, now, p.remaining_service);
  }
  void on_preempt(const Packet& p, double now) override {
    row("preempt", p, now, p.remaining_service);
  }
  void on_depart(const Packet& p, double now) override {
    row("depart", p, now, p.service_demand);
  }

 private:
  void row(const char* event, const Packet& p, double now, double value) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.9g,%s,%s,%llu,%d,%.9g\n", now, event,
                  node_, static_cast<unsigned long long>(p.id), p.klass,
                  value);
    out_ << buf;
  }

  std::ofstream& out_;
  const char* node_;
};

void write_trace(const ScenarioSpec& spec, std::uint64_t base_seed,
                 const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "time,event,node,packet,class,value\n";
  FileTraceObserver fwd_obs(out, "forwarding");
  FileTraceObserver acl_obs(out, "acl");
  const ArmSpec& arm = spec.arms.front();
  run_replication(make_router_config(spec, arm),
                  make_streams(spec, arm, spec.lambda1_sweep.front()),
                  replication_seed(base_seed, 0, 0, 0),
                  spec.arrivals_per_replication, spec.warmup_fraction,
                  &fwd_obs, &acl_obs);
}

int run_simulate(const std::string& scenario, std::uint64_t seed,
                 const std::string& out_dir, int parallel,
                 const std::string& trace_path) {
  const ScenarioSpec spec = resolve_scenario(scenario);
  fs::create_directories(out_dir);
  const auto t0 = std::chrono::steady_clock::now();
  const MetricsReport report = run_scenario(spec, seed, parallel);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();

  const std::string csv_path = (fs::path(out_dir) / "results.csv").string();
  emit_csv(report, csv_path);
  write_manifest(make_manifest(spec, report, seed, wall),
                 (fs::path(out_dir) / "manifest.txt").string());
  if (!trace_path.empty()) write_trace(spec, seed, trace_path);

  bool any_failed = false;
  for (const auto& arm : report.arms) {
    if (arm.failed) {
      any_failed = true;
      std::cerr << "arm " << arm.arm.label << " failed: " << arm.error << "\n";
    }
  }
  std::cout << "scenario " << spec.name << ": " << report.arms.size()
            << " arms x " << report.sweep.size() << " sweep points x "
            << spec.replications << " replications -> " << csv_path << " ("
            << wall << " s)\n";
  return any_failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kToolName) +
               " - tandem GE/GE/c/N router queue simulator"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
  app.require_subcommand(1);

  auto* simulate = app.add_subcommand(
      "simulate", "run a scenario and write results.csv + manifest.txt");
  std::string scenario;
  std::string out_dir = ".";
  std::string trace_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int parallel = static_cast<int>(
      std::max(1u, std::thread::hardware_concurrency()));
  simulate->add_option("--scenario", scenario,
                       "builtin scenario A|B|C|D or a config file path")
      ->required();
  simulate->add_option("--seed", seed, "base seed (default: ROUTERQ_SEED env or 12345)")
      ->each([&](const std::string&) { seed_given = true; });
  simulate->add_option("--out", out_dir, "output directory");
  simulate->add_option("--parallel", parallel, "worker threads")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--trace", trace_path,
                       "per-packet trace CSV for replication 0 of the first "
                       "arm and sweep point");

  auto* validate =
      app.add_subcommand("validate", "run the analytic oracle suite");

  auto* scenarios =
      app.add_subcommand("scenarios", "print the builtin scenario specs");

  auto* chart = app.add_subcommand(
      "chart", "render one metric of a results CSV as an SVG line chart");
  std::string chart_in, chart_metric, chart_out;
  chart->add_option("--in", chart_in, "results.csv path")->required();
  chart->add_option("--metric", chart_metric, "one of W, MQL, PL, UTIL")
      ->required();
  chart->add_option("--out", chart_out, "output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    std::cerr << app.help() << "\n";
    return 2;
  }

  try {
    if (simulate->parsed()) {
      if (!seed_given) seed = default_seed();
      return run_simulate(scenario, seed, out_dir, parallel, trace_path);
    }
    if (validate->parsed())
      return run_validation_suite(std::cout) ? 0 : 1;
    if (scenarios->parsed()) {
      bool first = true;
      for (const auto& spec : builtin_scenarios()) {
        if (!first) std::cout << "\n";
        std::cout << canonical_config(spec);
        first = false;
      }
      return 0;
    }
    if (chart->parsed()) {
      emit_chart(read_csv(chart_in), chart_metric, chart_out);
      std::cout << "wrote " << chart_out << "\n";
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
