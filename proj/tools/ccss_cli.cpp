// ccss: run scenarios, sweep confluence exhaustively, fuzz random workloads.
//
// Exit codes: 0 success, 1 failed checks / counterexamples / divergence,
// 2 unreadable or malformed input.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "ccss/conformance.hpp"
#include "ccss/sim.hpp"
#include "ccss/text.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kBadInput = 2;

// CCSS_REPORT_DIR, when set, redirects every written report into it.
fs::path report_destination(const std::string& requested, const std::string& fallback_name) {
  const char* dir = std::getenv("CCSS_REPORT_DIR");
  if (dir && *dir) {
    fs::path name = requested.empty() ? fs::path(fallback_name) : fs::path(requested).filename();
    return fs::path(dir) / name;
  }
  return requested;
}

bool write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  return static_cast<bool>(out);
}

struct RunArgs {
  std::string scenario;
  std::uint64_t seed = 0;
  std::string report;
  bool segment = false;
};

struct ConformanceArgs {
  std::size_t universe = 3;
  std::size_t base_bits = 2;
  std::size_t max_len = 2;
};

struct FuzzArgs {
  std::size_t peers = 3;
  std::size_t ops = 20;
  std::size_t seeds = 100;
  std::uint64_t first_seed = 1;
  std::size_t universe = 6;
  double density = 0.3;
  bool segment = false;
};

int cmd_run(const RunArgs& args, ccss::TransformFn transform) {
  std::ifstream in(args.scenario, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << args.scenario << "\n";
    return kBadInput;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  ccss::RunReport report;
  try {
    ccss::Scenario s = ccss::parse_scenario(buf.str());
    report = ccss::run_scenario(s, ccss::RunOptions{.seed = args.seed, .segment_payloads = args.segment,
                                                    .transform = transform, .max_quiesce_rounds = 64});
  } catch (const ccss::ScenarioError& e) {
    std::cerr << args.scenario << ": " << e.what() << "\n";
    return kBadInput;
  }

  std::string text = report.to_text();
  std::cout << text;
  fs::path dest = report_destination(args.report, fs::path(args.scenario).stem().string() + ".report");
  if (!dest.empty() && !write_file(dest, text)) {
    std::cerr << "error: cannot write report " << dest << "\n";
    return kBadInput;
  }
  for (const auto& c : report.checks) {
    if (!c.passed()) {
      std::cerr << "check at event " << c.event_index << " failed: " << c.peer.str() << " expected "
                << ccss::to_string(c.expected) << " got " << ccss::to_string(c.actual) << "\n";
    }
  }
  if (report.error) std::cerr << "error: " << *report.error << "\n";
  return report.checks_passed() ? kOk : kFailed;
}

int cmd_conformance(const ConformanceArgs& args, ccss::TransformFn transform) {
  if (args.universe > 5 || args.max_len > 4 || args.base_bits > args.universe) {
    std::cerr << "error: require universe <= 5, max-len <= 4, base-bits <= universe\n";
    return kBadInput;
  }
  auto report = ccss::check_confluence_all_bases(args.universe, args.base_bits, args.max_len, transform);
  for (const auto& c : report.failures) std::cout << ccss::render_counterexample(c) << "\n";
  std::cout << "checked=" << report.checked << " failures=" << report.failures.size() << "\n";
  return report.failures.empty() ? kOk : kFailed;
}

int cmd_fuzz(const FuzzArgs& args, ccss::TransformFn transform, const std::string& corrupt_flag) {
  int status = kOk;
  for (std::uint64_t seed = args.first_seed; seed < args.first_seed + args.seeds; ++seed) {
    ccss::Scenario s = ccss::random_workload(args.peers, args.universe, args.ops, args.density, seed);
    auto report = ccss::run_scenario(s, ccss::RunOptions{.seed = seed, .segment_payloads = args.segment,
                                                         .transform = transform, .max_quiesce_rounds = 64});
    if (report.converged && !report.starved && report.checks_passed()) continue;

    status = kFailed;
    std::string stem = "fuzz-seed-" + std::to_string(seed);
    fs::path scenario_path = report_destination(stem + ".scn", stem + ".scn");
    fs::path report_path = report_destination(stem + ".report", stem + ".report");
    write_file(scenario_path, ccss::format_scenario(s));
    write_file(report_path, report.to_text());
    std::cout << "FAIL seed=" << seed << " scenario=" << scenario_path.string() << "\n"
              << "  rerun: ccss run " << scenario_path.string() << " --seed " << seed
              << (args.segment ? " --segment" : "") << corrupt_flag << "\n"
              << report.to_text();
  }
  if (status == kOk) std::cout << "PASS seeds=" << args.seeds << "\n";
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conflict-free set sharing: scenarios, conformance sweeps and fuzzing"};
  app.require_subcommand(1);

  bool corrupt = false;
  auto add_hook = [&](CLI::App* sub) {
#ifdef CCSS_TEST_HOOKS
    sub->add_flag("--corrupt-transform", corrupt, "Use a deliberately broken transform (self-test)")
        ->group("Test hooks");
#else
    (void)sub;
#endif
  };

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario file and report final states");
  run_cmd->add_option("scenario", run.scenario, "Scenario file")->required();
  run_cmd->add_option("--seed", run.seed, "Seed for payload segmentation");
  run_cmd->add_option("--report", run.report, "Also write the report to this path");
  run_cmd->add_flag("--segment", run.segment, "Deliver payloads in seed-chosen segments");
  add_hook(run_cmd);

  ConformanceArgs conf;
  auto* conf_cmd = app.add_subcommand("conformance", "Exhaustive confluence sweep over small universes");
  conf_cmd->add_option("--universe", conf.universe, "Universe size k (<= 5)");
  conf_cmd->add_option("--base-bits", conf.base_bits, "Bases range over all subsets of the first b elements");
  conf_cmd->add_option("--max-len", conf.max_len, "Maximum sequence length L (<= 4)");
  add_hook(conf_cmd);

  FuzzArgs fuzz;
  auto* fuzz_cmd = app.add_subcommand("fuzz", "Run seeded random workloads and require convergence");
  fuzz_cmd->add_option("--peers", fuzz.peers, "Peers per workload")->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--ops", fuzz.ops, "Operations per peer");
  fuzz_cmd->add_option("--seeds", fuzz.seeds, "Number of seeds")->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--first-seed", fuzz.first_seed, "First seed");
  fuzz_cmd->add_option("--universe", fuzz.universe, "Universe size")->check(CLI::PositiveNumber);
  fuzz_cmd->add_option("--density", fuzz.density, "Sync probability after each op")->check(CLI::Range(0.0, 1.0));
  fuzz_cmd->add_flag("--segment", fuzz.segment, "Deliver payloads in seed-chosen segments");
  add_hook(fuzz_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadInput;
  }

  ccss::TransformFn transform = corrupt ? ccss::corrupted_transform_remote : ccss::transform_remote;
  if (*run_cmd) return cmd_run(run, transform);
  if (*conf_cmd) return cmd_conformance(conf, transform);
  return cmd_fuzz(fuzz, transform, corrupt ? " --corrupt-transform" : "");
}
