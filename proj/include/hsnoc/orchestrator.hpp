#ifndef HSNOC_ORCHESTRATOR_HPP
#define HSNOC_ORCHESTRATOR_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hsnoc/allocator.hpp"
#include "hsnoc/energy.hpp"
#include "hsnoc/errors.hpp"
#include "hsnoc/simcore.hpp"
#include "hsnoc/topology.hpp"
#include "hsnoc/traffic.hpp"

namespace hsnoc {

enum class Mode : std::uint8_t { baseline_vc, static_hybrid, adaptive_hybrid };
enum class AllocatorKind : std::uint8_t { greedy, ga, oracle, plan_file };

inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::baseline_vc: return "baseline_vc";
    case Mode::static_hybrid: return "static_hybrid";
    case Mode::adaptive_hybrid: return "adaptive_hybrid";
  }
  return "?";
}

inline std::string to_string(AllocatorKind a) {
  switch (a) {
    case AllocatorKind::greedy: return "greedy";
    case AllocatorKind::ga: return "ga";
    case AllocatorKind::oracle: return "oracle";
    case AllocatorKind::plan_file: return "plan_file";
  }
  return "?";
}

inline Mode parse_mode(const std::string& s) {
  if (s == "baseline_vc" || s == "baseline") return Mode::baseline_vc;
  if (s == "static_hybrid" || s == "static") return Mode::static_hybrid;
  if (s == "adaptive_hybrid" || s == "adaptive") return Mode::adaptive_hybrid;
  throw ConfigError("unknown mode '" + s + "'");
}

inline AllocatorKind parse_allocator(const std::string& s) {
  if (s == "greedy") return AllocatorKind::greedy;
  if (s == "ga") return AllocatorKind::ga;
  if (s == "oracle") return AllocatorKind::oracle;
  if (s == "plan_file" || s == "plan") return AllocatorKind::plan_file;
  throw ConfigError("unknown allocator '" + s + "'");
}

struct ExperimentConfig {
  std::string label = "run";
  Mode mode = Mode::static_hybrid;
  AllocatorKind allocator = AllocatorKind::greedy;
  Granularity granularity = Granularity::e2e;
  MeshConfig mesh{4, 4};
  SubnetLayout layout{128, 2};
  VcConfig vc{};
  SyntheticSpec traffic{};
  /// Trace file to replay instead of generating `traffic`.
  std::string trace_path;
  std::string plan_path;
  /// Length of generated traffic.
  Cycle cycles = 20000;
  /// Extra cycles allowed after the traffic ends for the network to empty.
  Cycle drain_cycles = 20000;
  Cycle epoch_cycles = 100000;
  /// Unset: epoch_cycles / 200.
  std::optional<Cycle> config_period_cycles;
  std::uint64_t seed = 1;
  bool gate_cs_buffers = true;
  GaParams ga{};
  bool ga_runtime_budget = false;
  std::size_t oracle_max_pairs = 20;
  EnergyCoefficients energy{};
  std::string output_dir;
  std::string flit_dump_path;

  Cycle config_period() const { return config_period_cycles ? *config_period_cycles : epoch_cycles / 200; }

  void validate() const {
    layout.validate();
    vc.validate();
    energy.validate();
    try {
      traffic.validate();
      ga.validate();
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
    if (epoch_cycles == 0) throw ConfigError("epoch_cycles must be positive");
    if (config_period() >= epoch_cycles) throw ConfigError("config_period_cycles must be below epoch_cycles");
    if (mode != Mode::baseline_vc && layout.cs_subnets() == 0) {
      throw ConfigError("hybrid modes need subnet_count >= 2");
    }
    if (allocator == AllocatorKind::plan_file && plan_path.empty() && mode == Mode::static_hybrid) {
      throw ConfigError("allocator plan_file needs experiment.plan_file");
    }
    if (allocator == AllocatorKind::plan_file && mode == Mode::adaptive_hybrid) {
      throw ConfigError("adaptive mode computes its own plans; plan_file is not allowed");
    }
  }
};

// ------------------------------------------------------------------ config I/O

namespace detail {

class IniReader {
 public:
  explicit IniReader(boost::property_tree::ptree tree) : tree_(std::move(tree)) {}

  template <class T>
  void get(const std::string& key, T& out) {
    used_.insert(key);
    const auto v = tree_.get_optional<std::string>(key);
    if (!v) return;
    out = parse<T>(key, *v);
  }

  std::optional<std::string> raw(const std::string& key) {
    used_.insert(key);
    if (auto v = tree_.get_optional<std::string>(key)) return *v;
    return std::nullopt;
  }

  void reject_unknown() const {
    for (const auto& [section, sub] : tree_) {
      if (sub.empty() && !sub.data().empty()) throw ConfigError("config key outside a section: " + section);
      for (const auto& [key, _] : sub) {
        if (!used_.count(section + "." + key)) throw ConfigError("unknown config key " + section + "." + key);
      }
    }
  }

 private:
  template <class T>
  static T parse(const std::string& key, const std::string& v) {
    try {
      if constexpr (std::is_same_v<T, std::string>) {
        return v;
      } else if constexpr (std::is_same_v<T, bool>) {
        if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
        if (v == "false" || v == "0" || v == "no" || v == "off") return false;
        throw std::invalid_argument(v);
      } else if constexpr (std::is_floating_point_v<T>) {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return static_cast<T>(d);
      } else {
        if (v.empty() || v[0] == '-') throw std::invalid_argument(v);
        std::size_t used = 0;
        const unsigned long long u = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return static_cast<T>(u);
      }
    } catch (const std::invalid_argument&) {
      throw ConfigError("bad value '" + v + "' for " + key);
    } catch (const std::out_of_range&) {
      throw ConfigError("value out of range for " + key);
    }
  }

  boost::property_tree::ptree tree_;
  std::set<std::string> used_;
};

}  // namespace detail

/// Reads a sectioned key=value config. `overrides` are `section.key=value`
/// strings applied on top of the file.
inline ExperimentConfig load_config(std::istream& in, const std::vector<std::string>& overrides = {}) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config: " + e.message() + " at line " + std::to_string(e.line()));
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    const auto dot = o.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
      throw ConfigError("override must look like section.key=value: " + o);
    }
    tree.put(o.substr(0, eq), o.substr(eq + 1));
  }
  detail::IniReader r(tree);
  ExperimentConfig c;
  r.get("experiment.label", c.label);
  if (auto v = r.raw("experiment.mode")) c.mode = parse_mode(*v);
  if (auto v = r.raw("experiment.allocator")) c.allocator = parse_allocator(*v);
  if (auto v = r.raw("experiment.granularity")) {
    try {
      c.granularity = parse_granularity(*v);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  r.get("experiment.seed", c.seed);
  r.get("experiment.cycles", c.cycles);
  r.get("experiment.drain_cycles", c.drain_cycles);
  r.get("experiment.epoch_cycles", c.epoch_cycles);
  if (r.raw("experiment.config_period_cycles")) {
    Cycle p = 0;
    r.get("experiment.config_period_cycles", p);
    c.config_period_cycles = p;
  }
  r.get("experiment.trace_file", c.trace_path);
  r.get("experiment.plan_file", c.plan_path);
  r.get("experiment.oracle_max_pairs", c.oracle_max_pairs);
  r.get("experiment.ga_runtime_budget", c.ga_runtime_budget);

  std::string preset = "uniform";
  r.get("mesh.preset", preset);
  int width = 4;
  int height = 4;
  std::uint32_t nis = 1;
  r.get("mesh.width", width);
  r.get("mesh.height", height);
  r.get("mesh.ni_per_router", nis);
  try {
    if (preset == "cmp51") {
      c.mesh = MeshConfig::cmp51();
    } else if (preset == "uniform") {
      c.mesh = MeshConfig(width, height,
                          std::vector<std::uint32_t>(static_cast<std::size_t>(std::max(0, width * height)), nis));
    } else {
      throw ConfigError("unknown mesh preset '" + preset + "'");
    }
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }

  r.get("layout.total_width_bits", c.layout.total_width_bits);
  r.get("layout.subnet_count", c.layout.subnet_count);
  r.get("layout.gate_cs_buffers", c.gate_cs_buffers);

  r.get("vc.vcs_per_vnet", c.vc.vcs_per_vnet);
  r.get("vc.vnets", c.vc.vnets);
  r.get("vc.buffer_depth_flits", c.vc.buffer_depth_flits);
  r.get("vc.pipeline_stages", c.vc.pipeline_stages);
  r.get("vc.link_cycles", c.vc.link_cycles);

  if (auto v = r.raw("traffic.pattern")) {
    try {
      c.traffic.pattern = parse_pattern(*v);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  r.get("traffic.injection_rate", c.traffic.injection_rate);
  r.get("traffic.control_fraction", c.traffic.control_fraction);
  r.get("traffic.regularity", c.traffic.regularity);
  r.get("traffic.designated_pairs", c.traffic.designated_pairs);
  r.get("traffic.hotspot_fraction", c.traffic.hotspot_fraction);
  r.get("traffic.control_bits", c.traffic.sizes.control_bits);
  r.get("traffic.data_bits", c.traffic.sizes.data_bits);
  c.traffic.full_width_bits = c.layout.total_width_bits;

  r.get("ga.population_size", c.ga.population_size);
  r.get("ga.generations", c.ga.generations);
  r.get("ga.crossover_rate_min", c.ga.crossover_rate_min);
  r.get("ga.crossover_rate_max", c.ga.crossover_rate_max);
  r.get("ga.mutation_probability", c.ga.chromosome_mutation_probability);
  r.get("ga.elitism_count", c.ga.elitism_count);
  if (r.raw("ga.per_gene_flip_rate")) {
    double d = 0;
    r.get("ga.per_gene_flip_rate", d);
    c.ga.per_gene_flip_rate = d;
  }
  c.ga.seed = c.seed;

  if (auto v = r.raw("energy.coefficients_file")) {
    std::ifstream f(*v);
    if (!f) throw InputError("cannot open coefficients file " + *v);
    c.energy = read_coefficients(f);
  }
  c.energy.each([&](const char* name, double& val) { r.get(std::string("energy.") + name, val); });

  r.get("output.dir", c.output_dir);
  r.get("output.flit_dump", c.flit_dump_path);

  r.reject_unknown();
  c.validate();
  return c;
}

inline ExperimentConfig load_config_file(const std::string& path, const std::vector<std::string>& overrides = {}) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  return load_config(f, overrides);
}

// ------------------------------------------------------------------ results

struct RunResult {
  std::string label;
  Mode mode = Mode::baseline_vc;
  SubnetLayout layout;
  CircuitPlan plan;
  SimStats stats;
  EnergyReport energy;
  std::vector<FlitRecord> flits;
};

struct StaticResult {
  RunResult profile_run;
  RunResult production;
  TrafficProfile profile;
  std::vector<std::string> warnings;
};

struct EpochResult {
  std::size_t epoch_index = 0;
  Cycle start_cycle = 0;
  Cycle activation_cycle = 0;
  CircuitPlan plan;
  SimStats stats;
  EnergyReport energy;
};

struct AdaptiveResult {
  std::vector<EpochResult> epochs;
  RunResult total;
  std::vector<std::string> warnings;
  bool comparison_only = false;
};

inline Trace load_traffic(const ExperimentConfig& c, std::vector<std::string>* warnings = nullptr) {
  if (c.trace_path.empty()) {
    SyntheticSpec spec = c.traffic;
    spec.full_width_bits = c.layout.total_width_bits;
    return generate(spec, c.mesh, c.seed, c.cycles);
  }
  std::ifstream f(c.trace_path);
  if (!f) throw InputError("cannot open trace file " + c.trace_path);
  return ingest(f, c.mesh, warnings);
}

/// Cycle at which generated or replayed traffic ends.
inline Cycle traffic_end(const ExperimentConfig& c, const Trace& trace) {
  Cycle end = c.trace_path.empty() ? c.cycles : 0;
  if (!trace.empty()) end = std::max(end, trace.back().inject_cycle + 1);
  return end;
}

inline SimOptions sim_options(const ExperimentConfig& c) {
  SimOptions o;
  o.gate_cs_buffers = c.gate_cs_buffers;
  o.seed = c.seed;
  o.sizes = c.traffic.sizes;
  o.record_flits = !c.flit_dump_path.empty();
  o.stop_when_drained = true;
  return o;
}

inline RunResult run_trace(const ExperimentConfig& c, const Trace& trace, const SubnetLayout& layout,
                           const CircuitPlan& plan, Mode mode, std::vector<TrafficEvent>* ejected = nullptr) {
  Simulator sim(c.mesh, layout, c.vc, sim_options(c));
  sim.load_trace(trace);
  sim.set_plan(plan, 0);
  sim.run_until(traffic_end(c, trace) + c.drain_cycles);
  RunResult r;
  r.label = c.label;
  r.mode = mode;
  r.layout = layout;
  r.plan = plan;
  r.stats = sim.snapshot();
  r.energy = account(r.stats, layout, c.energy);
  r.flits = sim.flit_records();
  if (ejected) *ejected = sim.take_ejected_packets();
  return r;
}

/// Pure VC network on the undivided link.
inline RunResult run_baseline(const ExperimentConfig& c, const Trace& trace) {
  const auto layout = SubnetLayout::baseline(c.layout.total_width_bits);
  return run_trace(c, trace, layout, CircuitPlan::empty_plan(0, c.granularity), Mode::baseline_vc);
}

inline RunResult run_baseline(const ExperimentConfig& c) { return run_baseline(c, load_traffic(c)); }

inline CircuitPlan allocate(const ExperimentConfig& c, const TrafficProfile& prof, std::vector<std::string>& warnings,
                            bool adaptive) {
  const std::size_t k = c.layout.cs_subnets();
  switch (c.allocator) {
    case AllocatorKind::greedy: return greedy_allocate(prof, c.mesh, k);
    case AllocatorKind::ga: {
      if (adaptive) warnings.push_back("GA allocator in adaptive mode: comparison only");
      if (c.ga_runtime_budget && !adaptive) warnings.push_back("GA allocator exceeds the runtime budget");
      return ga_allocate(prof, c.mesh, k, c.ga).plan;
    }
    case AllocatorKind::oracle:
      try {
        return enumerate_oracle(prof, c.mesh, k, c.oracle_max_pairs);
      } catch (const RefusalError& e) {
        throw ConfigError(e.what());
      }
    case AllocatorKind::plan_file: {
      std::ifstream f(c.plan_path);
      if (!f) throw InputError("cannot open plan file " + c.plan_path);
      CircuitPlan plan = read_plan(f);
      if (plan.granularity != c.granularity) throw ConfigError("plan file granularity differs from config");
      if (plan.subnet_count() != k) throw ConfigError("plan file subnet count differs from layout");
      if (auto why = plan_violation(plan, c.mesh); !why.empty()) throw InputError("plan file: " + why);
      return plan;
    }
  }
  return CircuitPlan::empty_plan(k, c.granularity);
}

/// Test run on the pure VC network, offline allocation from its ejected
/// traffic, then the production run on the hybrid network.
inline StaticResult run_static(const ExperimentConfig& c, const Trace& trace) {
  StaticResult out;
  std::vector<TrafficEvent> delivered;
  const auto base_layout = SubnetLayout::baseline(c.layout.total_width_bits);
  out.profile_run =
      run_trace(c, trace, base_layout, CircuitPlan::empty_plan(0, c.granularity), Mode::baseline_vc, &delivered);
  out.profile = profile(delivered, c.mesh, c.granularity, c.traffic.sizes, c.layout.total_width_bits);
  CircuitPlan plan = allocate(c, out.profile, out.warnings, false);
  if (plan.subnet_count() == 0) plan = CircuitPlan::empty_plan(c.layout.cs_subnets(), c.granularity);
  out.production = run_trace(c, trace, c.layout, plan, Mode::static_hybrid);
  return out;
}

inline StaticResult run_static(const ExperimentConfig& c) {
  StaticResult out;
  std::vector<std::string> warnings;
  const Trace trace = load_traffic(c, &warnings);
  out = run_static(c, trace);
  out.warnings.insert(out.warnings.begin(), warnings.begin(), warnings.end());
  return out;
}

/// Epoch loop: epoch i runs under the plan computed from epoch i-1's
/// delivered traffic, switched in config_period cycles after the epoch
/// starts. Epoch 0 is all-VC.
inline AdaptiveResult run_adaptive(const ExperimentConfig& c, const Trace& trace) {
  AdaptiveResult out;
  out.comparison_only = c.allocator == AllocatorKind::ga;
  const Cycle end = traffic_end(c, trace);
  const std::size_t k = c.layout.cs_subnets();
  if (end < 2 * c.epoch_cycles) {
    out.warnings.push_back("traffic shorter than two epochs; running a single static epoch");
    StaticResult st = run_static(c, trace);
    out.warnings.insert(out.warnings.end(), st.warnings.begin(), st.warnings.end());
    EpochResult e;
    e.plan = st.production.plan;
    e.stats = st.production.stats;
    e.energy = st.production.energy;
    out.epochs.push_back(std::move(e));
    out.total = std::move(st.production);
    out.total.mode = Mode::adaptive_hybrid;
    return out;
  }
  const std::size_t epochs = static_cast<std::size_t>((end + c.epoch_cycles - 1) / c.epoch_cycles);
  SimOptions opts = sim_options(c);
  opts.stop_when_drained = false;
  Simulator sim(c.mesh, c.layout, c.vc, opts);
  sim.load_trace(trace);
  CircuitPlan plan = CircuitPlan::empty_plan(k, c.granularity);
  sim.set_plan(plan, 0);
  SimStats before = sim.snapshot();
  for (std::size_t i = 0; i < epochs; ++i) {
    EpochResult e;
    e.epoch_index = i;
    e.start_cycle = i * c.epoch_cycles;
    if (i > 0) {
      const auto delivered = sim.take_ejected_packets();
      const auto prof = profile(delivered, c.mesh, c.granularity, c.traffic.sizes, c.layout.total_width_bits);
      plan = allocate(c, prof, out.warnings, true);
      e.activation_cycle = e.start_cycle + c.config_period();
      sim.set_plan(plan, e.activation_cycle);
    } else {
      sim.take_ejected_packets();
    }
    sim.run_until(e.start_cycle + c.epoch_cycles);
    if (i + 1 == epochs) sim.drain(e.start_cycle + c.epoch_cycles + c.drain_cycles);
    const SimStats now = sim.snapshot();
    e.plan = plan;
    e.stats = stats_between(now, before);
    e.energy = account(e.stats, c.layout, c.energy);
    before = now;
    out.epochs.push_back(std::move(e));
  }
  out.total.label = c.label;
  out.total.mode = Mode::adaptive_hybrid;
  out.total.layout = c.layout;
  out.total.plan = plan;
  out.total.stats = sim.snapshot();
  out.total.energy = account(out.total.stats, c.layout, c.energy);
  out.total.flits = sim.flit_records();
  // Duplicate messages from repeated GA epochs collapse to one.
  std::vector<std::string> uniq;
  for (auto& w : out.warnings) {
    if (std::find(uniq.begin(), uniq.end(), w) == uniq.end()) uniq.push_back(w);
  }
  out.warnings = std::move(uniq);
  return out;
}

inline AdaptiveResult run_adaptive(const ExperimentConfig& c) {
  std::vector<std::string> warnings;
  const Trace trace = load_traffic(c, &warnings);
  AdaptiveResult out = run_adaptive(c, trace);
  out.warnings.insert(out.warnings.begin(), warnings.begin(), warnings.end());
  return out;
}

// ------------------------------------------------------------------ reports

/// What a run-report file carries: the numbers the comparison needs plus
/// every counter of the run.
struct RunReport {
  std::string label;
  std::string mode;
  std::uint32_t subnet_count = 1;
  std::uint32_t total_width_bits = 128;
  std::string granularity = "e2e";
  std::size_t circuits = 0;
  double percent_in_circuit = 0.0;
  double mean_latency = 0.0;
  double energy_per_flit = 0.0;
  bool has_energy_per_flit = false;
  boost::property_tree::ptree tree;
};

inline void put_stats(boost::property_tree::ptree& t, const std::string& sec, const SimStats& s) {
  t.put(sec + ".cycles_simulated", s.cycles_simulated);
  t.put(sec + ".routers", s.routers);
  t.put(sec + ".packets_created", s.packets_created);
  t.put(sec + ".packets_ejected", s.packets_ejected);
  t.put(sec + ".flits_injected", s.flits_injected);
  t.put(sec + ".flits_ejected", s.flits_ejected);
  t.put(sec + ".flits_in_flight", s.flits_in_flight);
  t.put(sec + ".packets_waiting", s.packets_waiting);
  t.put(sec + ".in_circuit_flits", s.in_circuit_flits);
  t.put(sec + ".flit_bits_ejected", s.flit_bits_ejected);
  t.put(sec + ".percent_in_circuit", s.percent_in_circuit());
  const auto lat = s.all_latency();
  t.put(sec + ".mean_latency", lat.mean());
  t.put(sec + ".mean_network_latency", lat.network_mean());
  t.put(sec + ".p99_latency", lat.percentile(0.99));
  t.put(sec + ".max_latency", lat.max);
  t.put(sec + ".vc_mean_latency", s.vc_latency.mean());
  t.put(sec + ".cs_mean_latency", s.cs_latency.mean());
  t.put(sec + ".max_vc_occupancy", s.max_vc_occupancy);
  t.put(sec + ".order_violations", s.order_violations);
  t.put(sec + ".max_barrier_cycles", s.max_barrier_cycles);
  t.put(sec + ".gated_buffer_cycles", s.gated_buffer_cycle_count());
  for (std::size_t i = 0; i < s.subnets.size(); ++i) {
    const auto& n = s.subnets[i];
    const std::string p = sec + ".subnet" + std::to_string(i) + "_";
    t.put(p + "width_bits", n.width_bits);
    t.put(p + "buffer_writes", n.buffer_writes);
    t.put(p + "buffer_reads", n.buffer_reads);
    t.put(p + "vc_allocations", n.vc_allocations);
    t.put(p + "sw_allocations", n.sw_allocations);
    t.put(p + "crossbar_traversals", n.crossbar_traversals);
    t.put(p + "link_traversals", n.link_traversals);
    t.put(p + "buffer_cycles_active", n.buffer_cycles_active);
    t.put(p + "buffer_cycles_gated", n.buffer_cycles_gated);
  }
}

inline void put_energy(boost::property_tree::ptree& t, const std::string& sec, const EnergyReport& e) {
  t.put(sec + ".total_energy", e.total_energy);
  if (e.energy_per_flit) t.put(sec + ".energy_per_flit", *e.energy_per_flit);
  t.put(sec + ".buffer_dynamic", e.buffer_dynamic);
  t.put(sec + ".allocation", e.allocation);
  t.put(sec + ".crossbar", e.crossbar);
  t.put(sec + ".link", e.link);
  t.put(sec + ".static", e.static_energy);
  t.put(sec + ".gated_savings", e.gated_savings);
}

inline RunReport make_report(const RunResult& r, Granularity g = Granularity::e2e) {
  RunReport rep;
  rep.label = r.label;
  rep.mode = to_string(r.mode);
  rep.subnet_count = r.layout.subnet_count;
  rep.total_width_bits = r.layout.total_width_bits;
  rep.granularity = to_string(r.plan.subnets.empty() ? g : r.plan.granularity);
  rep.circuits = r.plan.circuit_count();
  rep.percent_in_circuit = r.stats.percent_in_circuit();
  rep.mean_latency = r.stats.mean_latency();
  rep.has_energy_per_flit = r.energy.energy_per_flit.has_value();
  rep.energy_per_flit = r.energy.energy_per_flit.value_or(0.0);
  auto& t = rep.tree;
  t.put("run.label", rep.label);
  t.put("run.mode", rep.mode);
  t.put("run.subnet_count", rep.subnet_count);
  t.put("run.total_width_bits", rep.total_width_bits);
  t.put("run.granularity", rep.granularity);
  t.put("run.circuits", rep.circuits);
  t.put("run.plan_provenance", to_string(r.plan.provenance));
  put_stats(t, "stats", r.stats);
  put_energy(t, "energy", r.energy);
  return rep;
}

inline void add_epochs(RunReport& rep, const AdaptiveResult& a) {
  rep.tree.put("run.epochs", a.epochs.size());
  if (a.comparison_only) rep.tree.put("run.note", "comparison only");
  for (const auto& e : a.epochs) {
    const std::string sec = "epoch" + std::to_string(e.epoch_index);
    rep.tree.put(sec + ".activation_cycle", e.activation_cycle);
    rep.tree.put(sec + ".circuits", e.plan.circuit_count());
    rep.tree.put(sec + ".percent_in_circuit", e.stats.percent_in_circuit());
    rep.tree.put(sec + ".mean_latency", e.stats.mean_latency());
    rep.tree.put(sec + ".flits_ejected", e.stats.flits_ejected);
    if (e.energy.energy_per_flit) rep.tree.put(sec + ".energy_per_flit", *e.energy.energy_per_flit);
  }
}

inline void write_report(std::ostream& out, const RunReport& rep) {
  out << std::setprecision(17);
  boost::property_tree::write_ini(out, rep.tree);
}

inline RunReport read_report(std::istream& in) {
  RunReport rep;
  try {
    boost::property_tree::read_ini(in, rep.tree);
    const auto& t = rep.tree;
    rep.label = t.get<std::string>("run.label");
    rep.mode = t.get<std::string>("run.mode");
    rep.subnet_count = t.get<std::uint32_t>("run.subnet_count");
    rep.total_width_bits = t.get<std::uint32_t>("run.total_width_bits");
    rep.granularity = t.get<std::string>("run.granularity", "e2e");
    rep.circuits = t.get<std::size_t>("run.circuits", 0);
    rep.percent_in_circuit = t.get<double>("stats.percent_in_circuit");
    rep.mean_latency = t.get<double>("stats.mean_latency");
    if (auto e = t.get_optional<double>("energy.energy_per_flit")) {
      rep.energy_per_flit = *e;
      rep.has_energy_per_flit = true;
    }
  } catch (const boost::property_tree::ptree_error& e) {
    throw InputError(std::string("run report: ") + e.what());
  }
  return rep;
}

struct SummaryRow {
  std::string config;
  double percent_in_circuit = 0.0;
  double norm_latency = 0.0;
  double norm_energy = 0.0;
};

/// One row per report, latency and energy per flit relative to `baseline`.
inline std::vector<SummaryRow> compare(const std::vector<RunReport>& reports, const RunReport* baseline) {
  if (!baseline) throw ConfigError("compare needs a baseline report");
  if (!baseline->has_energy_per_flit || baseline->energy_per_flit <= 0.0 || baseline->mean_latency <= 0.0) {
    throw DomainError("baseline report carries no delivered flits");
  }
  std::vector<SummaryRow> rows;
  for (const auto& r : reports) {
    if (!r.has_energy_per_flit) throw DomainError("report '" + r.label + "' carries no delivered flits");
    rows.push_back({r.label, r.percent_in_circuit, r.mean_latency / baseline->mean_latency,
                    r.energy_per_flit / baseline->energy_per_flit});
  }
  return rows;
}

inline void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "config,percent_in_circuit,norm_latency,norm_energy\n";
  out << std::fixed << std::setprecision(4);
  for (const auto& r : rows) {
    out << r.config << ',' << r.percent_in_circuit << ',' << r.norm_latency << ',' << r.norm_energy << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

inline void write_flit_dump(std::ostream& out, const std::vector<FlitRecord>& flits) {
  out << "packet_id,flit_index,route_class,inject_cycle,eject_cycle\n";
  for (const auto& f : flits) {
    out << f.packet_id << ',' << f.flit_index << ',' << to_string(f.route_class) << ',' << f.inject_cycle << ','
        << f.eject_cycle << '\n';
  }
}

// ------------------------------------------------------------------ sweeps

/// Static hybrid runs for each subnet count against one shared baseline.
/// Rows are labelled `<n>subnets`; the baseline row comes first.
inline std::vector<RunReport> subnet_sweep(const ExperimentConfig& base, const std::vector<std::uint32_t>& counts,
                                           std::vector<std::string>* warnings = nullptr) {
  std::vector<std::string> w;
  const Trace trace = load_traffic(base, &w);
  std::vector<RunReport> out;
  ExperimentConfig bc = base;
  bc.label = "baseline";
  out.push_back(make_report(run_baseline(bc, trace), base.granularity));
  for (const auto n : counts) {
    ExperimentConfig c = base;
    c.layout.subnet_count = n;
    c.mode = Mode::static_hybrid;
    c.label = std::to_string(n) + "subnets";
    c.validate();
    StaticResult st = run_static(c, trace);
    w.insert(w.end(), st.warnings.begin(), st.warnings.end());
    out.push_back(make_report(st.production, c.granularity));
  }
  if (warnings) warnings->insert(warnings->end(), w.begin(), w.end());
  return out;
}

struct RateRow {
  std::string fabric;
  SweepPoint point;
};

/// Offered-load sweep of the pure VC network and the all-circuit fabric on
/// the config's pattern.
inline std::vector<RateRow> rate_sweep(const ExperimentConfig& c, const std::vector<double>& rates) {
  std::vector<RateRow> rows;
  SweepRequest req;
  req.mesh = c.mesh;
  req.vc = c.vc;
  req.pattern = c.traffic;
  req.rates = rates;
  req.cycles = c.cycles;
  req.seed = c.seed;
  req.layout = SubnetLayout::baseline(c.layout.total_width_bits);
  for (const auto fabric : {Fabric::hybrid, Fabric::circuit_reservation}) {
    req.fabric = fabric;
    for (const auto& p : sweep_injection(req)) {
      rows.push_back({fabric == Fabric::hybrid ? "vc" : "circuit", p});
    }
  }
  return rows;
}

inline void write_rate_table(std::ostream& out, const std::vector<RateRow>& rows) {
  out << "fabric,rate,offered,accepted,mean_latency,p99_latency,zero_load_latency,saturated\n";
  out << std::fixed << std::setprecision(4);
  for (const auto& r : rows) {
    const auto& p = r.point;
    out << r.fabric << ',' << p.rate << ',' << p.offered_flits_per_node_cycle << ','
        << p.accepted_flits_per_node_cycle << ',' << p.mean_latency << ',' << p.p99_latency << ','
        << p.unloaded_latency << ',' << (p.saturated ? 1 : 0) << '\n';
  }
  out.unsetf(std::ios::floatfield);
}

}  // namespace hsnoc

#endif  // HSNOC_ORCHESTRATOR_HPP
