// Command-line front end: run, sweep, allocate, compare.
// Exit status: 0 ok, 1 configuration error, 2 input-data error.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "hsnoc/orchestrator.hpp"

namespace fs = std::filesystem;
using namespace hsnoc;

namespace {

void warn(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p);
  if (!f) throw ConfigError("cannot write " + p.string());
  return f;
}

fs::path out_dir(const ExperimentConfig& c, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (!c.output_dir.empty()) return c.output_dir;
  return ".";
}

void write_file(const fs::path& p, const RunReport& rep) {
  auto f = open_out(p);
  write_report(f, rep);
}

void print_line(const RunReport& r) {
  std::cout << r.label << ": mode=" << r.mode << " subnets=" << r.subnet_count << " circuits=" << r.circuits
            << " in_circuit=" << r.percent_in_circuit << "% mean_latency=" << r.mean_latency;
  if (r.has_energy_per_flit) std::cout << " energy_per_flit=" << r.energy_per_flit;
  std::cout << '\n';
}

int cmd_run(const std::string& config, const std::vector<std::string>& sets, const std::string& out) {
  const auto c = load_config_file(config, sets);
  const fs::path dir = out_dir(c, out);
  RunReport rep;
  RunResult keep;
  switch (c.mode) {
    case Mode::baseline_vc: {
      std::vector<std::string> w;
      const Trace trace = load_traffic(c, &w);
      warn(w);
      keep = run_baseline(c, trace);
      rep = make_report(keep, c.granularity);
      break;
    }
    case Mode::static_hybrid: {
      auto r = run_static(c);
      warn(r.warnings);
      keep = std::move(r.production);
      rep = make_report(keep, c.granularity);
      auto pf = open_out(dir / (c.label + ".plan"));
      write_plan(pf, keep.plan);
      auto prof = open_out(dir / (c.label + ".profile"));
      write_profile(prof, r.profile);
      break;
    }
    case Mode::adaptive_hybrid: {
      auto r = run_adaptive(c);
      warn(r.warnings);
      keep = std::move(r.total);
      rep = make_report(keep, c.granularity);
      add_epochs(rep, r);
      break;
    }
  }
  write_file(dir / (c.label + ".report.ini"), rep);
  if (!c.flit_dump_path.empty()) {
    auto f = open_out(c.flit_dump_path);
    write_flit_dump(f, keep.flits);
  }
  print_line(rep);
  return 0;
}

int cmd_sweep_rate(const std::string& config, const std::vector<std::string>& sets, std::vector<double> rates,
                   const std::string& out) {
  const auto c = load_config_file(config, sets);
  if (rates.empty()) rates = {0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 0.3, 0.4, 0.5, 0.6, 0.8, 1.0};
  std::vector<RateRow> rows;
  try {
    rows = rate_sweep(c, rates);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (out.empty()) {
    write_rate_table(std::cout, rows);
  } else {
    auto f = open_out(out);
    write_rate_table(f, rows);
  }
  return 0;
}

int cmd_sweep_subnets(const std::string& config, const std::vector<std::string>& sets,
                      const std::vector<std::uint32_t>& counts, const std::string& out) {
  auto c = load_config_file(config, sets);
  std::vector<std::string> warnings;
  const auto reports = subnet_sweep(c, counts.empty() ? std::vector<std::uint32_t>{2, 4, 8} : counts, &warnings);
  warn(warnings);
  const fs::path dir = out_dir(c, out);
  for (const auto& r : reports) write_file(dir / (r.label + ".report.ini"), r);
  const auto rows = compare({reports.begin() + 1, reports.end()}, &reports.front());
  auto f = open_out(dir / "summary.csv");
  write_summary(f, rows);
  write_summary(std::cout, rows);
  return 0;
}

int cmd_allocate(const std::string& config, const std::vector<std::string>& sets, const std::string& profile_path,
                 const std::string& out) {
  const auto c = load_config_file(config, sets);
  std::ifstream pf(profile_path);
  if (!pf) throw InputError("cannot open profile " + profile_path);
  const TrafficProfile prof = read_profile(pf);
  ExperimentConfig cc = c;
  cc.granularity = prof.granularity;
  std::vector<std::string> warnings;
  CircuitPlan plan;
  try {
    plan = allocate(cc, prof, warnings, false);
  } catch (const DomainError& e) {
    throw InputError(std::string("profile: ") + e.what());
  }
  warn(warnings);
  if (out.empty()) {
    write_plan(std::cout, plan);
  } else {
    auto f = open_out(out);
    write_plan(f, plan);
  }
  std::cerr << "circuits=" << plan.circuit_count() << " weight=" << plan_weight(plan, prof) << '\n';
  return 0;
}

RunReport load_report(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open report " + path);
  return read_report(f);
}

int cmd_compare(const std::string& baseline, const std::vector<std::string>& paths, const std::string& out) {
  if (baseline.empty()) throw ConfigError("compare needs --baseline");
  const RunReport base = load_report(baseline);
  std::vector<RunReport> reports;
  for (const auto& p : paths) reports.push_back(load_report(p));
  std::vector<SummaryRow> rows;
  try {
    rows = compare(reports, &base);
  } catch (const DomainError& e) {
    throw InputError(e.what());
  }
  if (out.empty()) {
    write_summary(std::cout, rows);
  } else {
    auto f = open_out(out);
    write_summary(f, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid circuit/packet switched NoC simulator"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> sets;
  std::string out;

  auto* run = app.add_subcommand("run", "Run one experiment from a config file");
  run->add_option("config", config, "Config file")->required();
  run->add_option("--set", sets, "Override as section.key=value")->take_all();
  run->add_option("-o,--out", out, "Output directory (default: output.dir or .)");

  auto* sweep = app.add_subcommand("sweep", "Injection-rate or subnet-count sweep");
  std::string kind;
  std::vector<double> rates;
  std::vector<std::uint32_t> counts;
  sweep->add_option("kind", kind, "rate or subnets")->required()->check(CLI::IsMember({"rate", "subnets"}));
  sweep->add_option("config", config, "Config file")->required();
  sweep->add_option("--set", sets, "Override as section.key=value")->take_all();
  sweep->add_option("--rates", rates, "Offered rates, ascending")->delimiter(',');
  sweep->add_option("--counts", counts, "Subnet counts")->delimiter(',');
  sweep->add_option("-o,--out", out, "Output file (rate) or directory (subnets)");

  auto* alloc = app.add_subcommand("allocate", "Compute a circuit plan from a profile file");
  std::string profile_path;
  alloc->add_option("config", config, "Config file (mesh, layout, allocator)")->required();
  alloc->add_option("profile", profile_path, "Traffic profile file")->required();
  alloc->add_option("--set", sets, "Override as section.key=value")->take_all();
  alloc->add_option("-o,--out", out, "Plan file (default: stdout)");

  auto* cmp = app.add_subcommand("compare", "Summarise run reports against a baseline");
  std::string baseline;
  std::vector<std::string> reports;
  cmp->add_option("--baseline", baseline, "Baseline run report");
  cmp->add_option("reports", reports, "Run reports")->required();
  cmp->add_option("-o,--out", out, "Summary CSV (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(config, sets, out);
    if (*sweep) {
      return kind == "rate" ? cmd_sweep_rate(config, sets, rates, out) : cmd_sweep_subnets(config, sets, counts, out);
    }
    if (*alloc) return cmd_allocate(config, sets, profile_path, out);
    if (*cmp) return cmd_compare(baseline, reports, out);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const RefusalError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
