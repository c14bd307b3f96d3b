#ifndef HSNOC_SIMCORE_HPP
#define HSNOC_SIMCORE_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hsnoc/allocator.hpp"
#include "hsnoc/errors.hpp"
#include "hsnoc/random.hpp"
#include "hsnoc/topology.hpp"
#include "hsnoc/traffic.hpp"

namespace hsnoc {

/// Space-division split of every physical link: subnet 0 is the buffered VC
/// subnet, subnets 1..k are bufferless circuit-switched planes. A single
/// subnet is the undivided pure-VC network.
struct SubnetLayout {
  std::uint32_t total_width_bits = 128;
  std::uint32_t subnet_count = 2;

  static SubnetLayout baseline(std::uint32_t width = 128) { return {width, 1}; }

  std::uint32_t subnet_width() const { return total_width_bits / subnet_count; }
  std::size_t cs_subnets() const { return subnet_count - 1; }

  void validate() const {
    if (subnet_count < 1) throw ConfigError("subnet_count must be at least 1");
    if (total_width_bits == 0 || total_width_bits % subnet_count != 0) {
      throw ConfigError("subnet_count must divide total_width_bits into positive equal widths");
    }
  }
  bool operator==(const SubnetLayout&) const = default;
};

struct VcConfig {
  std::uint32_t vcs_per_vnet = 4;
  std::uint32_t vnets = 3;
  std::uint32_t buffer_depth_flits = 4;
  /// Route compute, VC allocation, switch allocation, switch traversal.
  std::uint32_t pipeline_stages = 4;
  std::uint32_t link_cycles = 1;

  std::uint32_t vcs_per_port() const { return vcs_per_vnet * vnets; }

  void validate() const {
    if (vcs_per_vnet == 0 || vnets == 0 || buffer_depth_flits == 0 || link_cycles == 0) {
      throw ConfigError("VC parameters must be positive");
    }
    if (pipeline_stages < 3) throw ConfigError("pipeline_stages must be at least 3");
  }
  bool operator==(const VcConfig&) const = default;
};

struct RouteClass {
  bool circuit = false;
  std::uint16_t subnet = 0;

  static RouteClass vc() { return {false, 0}; }
  static RouteClass cs(std::uint16_t s) { return {true, s}; }
  bool operator==(const RouteClass&) const = default;
};

inline std::string to_string(RouteClass rc) {
  return rc.circuit ? "cs(" + std::to_string(rc.subnet) + ")" : "vc";
}

/// Route class of a packet under a plan. Subnet numbers count the VC subnet
/// as 0, so plan subnet i maps to cs(i + 1).
inline RouteClass classify_packet(const TrafficEvent& ev, const CircuitPlan& plan, const MeshConfig& mesh) {
  const Circuit key = plan.granularity == Granularity::e2e
                          ? Circuit{ev.src, ev.dst}
                          : Circuit{mesh.router_of(ev.src), mesh.router_of(ev.dst)};
  for (std::size_t s = 0; s < plan.subnets.size(); ++s) {
    const auto& sub = plan.subnets[s];
    if (std::find(sub.begin(), sub.end(), key) != sub.end()) {
      return RouteClass::cs(static_cast<std::uint16_t>(s + 1));
    }
  }
  return RouteClass::vc();
}

enum class Fabric : std::uint8_t {
  /// One VC subnet plus k circuit planes driven by a plan.
  hybrid,
  /// Conventional circuit switching on the full-width link with zero set-up
  /// delay: a packet reserves its whole path until its tail is delivered.
  circuit_reservation,
};

struct SimOptions {
  Fabric fabric = Fabric::hybrid;
  bool gate_cs_buffers = true;
  /// Latency statistics only count packets created at or after this cycle.
  Cycle measure_from = 0;
  bool stop_when_drained = false;
  bool record_flits = false;
  std::uint64_t seed = 1;
  PacketSizes sizes{};
};

struct LatencyStats {
  std::uint64_t count = 0;
  std::uint64_t sum = 0;
  std::uint64_t network_sum = 0;
  std::uint64_t max = 0;
  std::vector<std::uint64_t> histogram;  // index = total latency in cycles

  void add(std::uint64_t total, std::uint64_t network) {
    ++count;
    sum += total;
    network_sum += network;
    max = std::max(max, total);
    if (histogram.size() <= total) histogram.resize(total + 1, 0);
    ++histogram[total];
  }

  double mean() const { return count ? static_cast<double>(sum) / static_cast<double>(count) : 0.0; }
  double network_mean() const {
    return count ? static_cast<double>(network_sum) / static_cast<double>(count) : 0.0;
  }

  std::uint64_t percentile(double q) const {
    if (count == 0) return 0;
    const auto rank = static_cast<std::uint64_t>(q * static_cast<double>(count - 1));
    std::uint64_t seen = 0;
    for (std::size_t i = 0; i < histogram.size(); ++i) {
      seen += histogram[i];
      if (seen > rank) return i;
    }
    return max;
  }

  /// Removes the samples of an earlier snapshot of the same counter.
  void subtract(const LatencyStats& earlier) {
    count -= earlier.count;
    sum -= earlier.sum;
    network_sum -= earlier.network_sum;
    for (std::size_t i = 0; i < earlier.histogram.size(); ++i) histogram[i] -= earlier.histogram[i];
    max = 0;
    for (std::size_t i = histogram.size(); i-- > 0;) {
      if (histogram[i]) {
        max = i;
        break;
      }
    }
  }

  void merge(const LatencyStats& o) {
    count += o.count;
    sum += o.sum;
    network_sum += o.network_sum;
    max = std::max(max, o.max);
    if (histogram.size() < o.histogram.size()) histogram.resize(o.histogram.size(), 0);
    for (std::size_t i = 0; i < o.histogram.size(); ++i) histogram[i] += o.histogram[i];
  }

  bool operator==(const LatencyStats&) const = default;
};

struct SubnetCounters {
  std::uint32_t width_bits = 0;
  bool circuit_switched = false;
  std::uint64_t buffer_writes = 0;
  std::uint64_t buffer_reads = 0;
  std::uint64_t vc_allocations = 0;
  std::uint64_t sw_allocations = 0;
  std::uint64_t crossbar_traversals = 0;
  std::uint64_t link_traversals = 0;
  std::uint64_t buffers = 0;
  std::uint64_t buffer_cycles_active = 0;
  std::uint64_t buffer_cycles_gated = 0;

  bool operator==(const SubnetCounters&) const = default;
};

struct SimStats {
  Cycle cycles_simulated = 0;
  std::uint32_t routers = 0;
  std::uint32_t total_width_bits = 128;
  std::uint64_t packets_created = 0;
  std::uint64_t packets_ejected = 0;
  std::uint64_t flits_injected = 0;
  std::uint64_t flits_ejected = 0;
  std::uint64_t in_circuit_flits = 0;
  std::uint64_t flit_bits_ejected = 0;
  std::uint64_t flits_in_flight = 0;
  std::uint64_t packets_waiting = 0;
  std::uint32_t max_vc_occupancy = 0;
  std::uint64_t order_violations = 0;
  Cycle max_barrier_cycles = 0;
  LatencyStats vc_latency;
  LatencyStats cs_latency;
  std::vector<SubnetCounters> subnets;

  LatencyStats all_latency() const {
    LatencyStats l = vc_latency;
    l.merge(cs_latency);
    return l;
  }
  double mean_latency() const { return all_latency().mean(); }
  double percent_in_circuit() const {
    return flits_ejected ? 100.0 * static_cast<double>(in_circuit_flits) / static_cast<double>(flits_ejected) : 0.0;
  }
  /// Ejected traffic expressed in full-link-width flits.
  double full_width_flits_ejected() const {
    return static_cast<double>(flit_bits_ejected) / static_cast<double>(total_width_bits);
  }
  std::uint64_t gated_buffer_cycle_count() const {
    std::uint64_t t = 0;
    for (const auto& s : subnets) t += s.buffer_cycles_gated;
    return t;
  }
  std::uint64_t cs_buffer_events() const {
    std::uint64_t t = 0;
    for (const auto& s : subnets) {
      if (s.circuit_switched) t += s.buffer_reads + s.buffer_writes;
    }
    return t;
  }

  bool operator==(const SimStats&) const = default;
};

/// Counters accumulated between two snapshots of one run. Gauges (in-flight,
/// waiting, peak occupancy, barrier length) keep the later value.
inline SimStats stats_between(const SimStats& later, const SimStats& earlier) {
  SimStats d = later;
  d.cycles_simulated -= earlier.cycles_simulated;
  d.packets_created -= earlier.packets_created;
  d.packets_ejected -= earlier.packets_ejected;
  d.flits_injected -= earlier.flits_injected;
  d.flits_ejected -= earlier.flits_ejected;
  d.in_circuit_flits -= earlier.in_circuit_flits;
  d.flit_bits_ejected -= earlier.flit_bits_ejected;
  d.order_violations -= earlier.order_violations;
  d.vc_latency.subtract(earlier.vc_latency);
  d.cs_latency.subtract(earlier.cs_latency);
  for (std::size_t i = 0; i < d.subnets.size() && i < earlier.subnets.size(); ++i) {
    auto& a = d.subnets[i];
    const auto& b = earlier.subnets[i];
    a.buffer_writes -= b.buffer_writes;
    a.buffer_reads -= b.buffer_reads;
    a.vc_allocations -= b.vc_allocations;
    a.sw_allocations -= b.sw_allocations;
    a.crossbar_traversals -= b.crossbar_traversals;
    a.link_traversals -= b.link_traversals;
    a.buffer_cycles_active -= b.buffer_cycles_active;
    a.buffer_cycles_gated -= b.buffer_cycles_gated;
  }
  return d;
}

struct FlitRecord {
  std::uint64_t packet_id = 0;
  std::uint32_t flit_index = 0;
  RouteClass route_class;
  Cycle create_cycle = 0;
  Cycle inject_cycle = 0;
  Cycle eject_cycle = 0;
  std::uint32_t hops = 0;
};

/// Zero-load flit latency in cycles from first-router entry to leaving the
/// destination router, for a packet of `hops` hops on the given class.
inline Cycle unloaded_latency(RouteClass rc, Granularity g, std::uint32_t hops, const VcConfig& vc) {
  const Cycle p = vc.pipeline_stages;
  const Cycle l = vc.link_cycles;
  if (!rc.circuit) return (hops + 1) * p + hops * l;
  if (g == Granularity::e2e) return (hops + 1) + hops * l;
  // r2r: full pipeline at the first and last router, bypass in between.
  if (hops == 0) return p;
  return 2 * p + (hops - 1) + hops * l;
}

/// Cycle-driven flit-level simulator of the hybrid network. The VC subnet
/// runs a wormhole router with route compute, VC allocation, switch
/// allocation and switch traversal stages plus credit flow control; circuit
/// planes pass flits one router per cycle with no buffering. One instance is
/// single-threaded; separate instances share nothing.
class Simulator {
 public:
  Simulator(MeshConfig mesh, SubnetLayout layout, VcConfig vc, SimOptions opts = {})
      : mesh_(std::move(mesh)), layout_(layout), vc_(vc), opts_(opts) {
    layout_.validate();
    vc_.validate();
    if (opts_.fabric == Fabric::circuit_reservation) layout_ = SubnetLayout::baseline(layout_.total_width_bits);
    build();
  }

  const MeshConfig& mesh() const { return mesh_; }
  const SubnetLayout& layout() const { return layout_; }
  Cycle now() const { return now_; }

  /// Appends trace events; they must not precede events already loaded.
  void load_trace(const Trace& trace) {
    for (const auto& ev : trace) {
      if (!mesh_.valid_ni(ev.src) || !mesh_.valid_ni(ev.dst)) {
        throw InputError("trace NodeId out of range for packet " + std::to_string(ev.packet_id));
      }
      if (ev.src == ev.dst) throw InputError("trace packet " + std::to_string(ev.packet_id) + " has src == dst");
      if (!trace_.empty() && ev.inject_cycle < trace_.back().inject_cycle) {
        throw InputError("trace events must be ordered by inject_cycle");
      }
      trace_.push_back(ev);
    }
  }

  /// Schedules `plan` to take over circuit classification at `activation`.
  void set_plan(const CircuitPlan& plan, Cycle activation = 0) {
    if (opts_.fabric != Fabric::hybrid) throw ConfigError("plans apply to the hybrid fabric only");
    // A plan with no subnets at all means "no circuits" on any layout.
    if (plan.subnet_count() != 0 && plan.subnet_count() != layout_.cs_subnets()) {
      throw ConfigError("plan has " + std::to_string(plan.subnet_count()) + " subnets but layout has " +
                        std::to_string(layout_.cs_subnets()) + " CS subnets");
    }
    if (auto why = plan_violation(plan, mesh_); !why.empty()) throw ConfigError("invalid plan: " + why);
    if (activation < now_) activation = now_;
    pending_plans_.emplace_back(activation, plan);
    std::stable_sort(pending_plans_.begin(), pending_plans_.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
  }

  const CircuitPlan& active_plan() const { return active_plan_; }

  /// Simulates cycles [now, end).
  void run_until(Cycle end) {
    while (now_ < end) {
      if (opts_.stop_when_drained && drained()) break;
      step();
    }
  }

  /// Keeps stepping until every loaded packet is delivered or `limit` is hit.
  void drain(Cycle limit) {
    while (now_ < limit && !drained()) step();
  }

  bool drained() const {
    return next_event_ == trace_.size() && pending_injection_ == 0 && stats_.flits_injected == stats_.flits_ejected;
  }

  /// Counters with buffer-cycle totals and in-flight/waiting counts filled in.
  SimStats snapshot() const {
    SimStats s = stats_;
    for (std::size_t i = 0; i < s.subnets.size(); ++i) {
      auto& sc = s.subnets[i];
      const std::uint64_t bc = sc.buffers * s.cycles_simulated;
      if (sc.circuit_switched && opts_.gate_cs_buffers) {
        sc.buffer_cycles_gated = bc;
        sc.buffer_cycles_active = 0;
      } else {
        sc.buffer_cycles_active = bc;
        sc.buffer_cycles_gated = 0;
      }
    }
    s.flits_in_flight = in_flight_walk();
    s.packets_waiting = pending_injection_;
    return s;
  }

  /// Flits inside the network counted from the data structures: buffered in
  /// routers, crossing switches or links, or on circuit planes.
  std::uint64_t in_flight_walk() const {
    std::uint64_t n = 0;
    for (const auto& ivc : ivcs_) n += ivc.size;
    for (const auto& bucket : wheel_) {
      for (const auto& e : bucket) {
        if (e.kind == EventKind::arrive || e.kind == EventKind::eject) ++n;
      }
    }
    return n;
  }

  /// Largest occupancy currently held in any VC buffer.
  std::uint32_t current_max_occupancy() const {
    std::uint32_t m = 0;
    for (const auto& ivc : ivcs_) m = std::max(m, ivc.size);
    return m;
  }

  /// Packets whose last flit was ejected since the previous call.
  std::vector<TrafficEvent> take_ejected_packets() { return std::exchange(ejected_log_, {}); }

  const std::vector<FlitRecord>& flit_records() const { return flit_records_; }

  /// Circuit owning a mesh input port of a CS subnet, or -1 (the CS_flag).
  int port_owner(std::size_t subnet, RouterId r, Direction in_port) const {
    if (subnet == 0 || subnet >= layout_.subnet_count) return -1;
    return cs_flags_[(subnet - 1) * mesh_.router_count() * kMeshPorts + r * kMeshPorts +
                     static_cast<std::uint32_t>(in_port)];
  }

 private:
  enum class VcState : std::uint8_t { idle, wait_va, active };
  enum class EventKind : std::uint8_t { arrive, credit, ni_credit, eject };

  struct FlitRef {
    std::uint32_t packet = 0;
    std::uint32_t index = 0;
    Cycle arrival = 0;
    Cycle entry = 0;
  };

  struct InputVc {
    std::vector<FlitRef> ring;
    std::uint32_t head = 0;
    std::uint32_t size = 0;
    VcState state = VcState::idle;
    std::uint32_t out_port = 0;
    std::uint32_t out_vc = 0;
    Cycle va_ready = 0;
    Cycle sa_ready = 0;

    const FlitRef& front() const { return ring[head]; }
    void push(const FlitRef& f) {
      ring[(head + size) % ring.size()] = f;
      ++size;
    }
    FlitRef pop() {
      FlitRef f = ring[head];
      head = static_cast<std::uint32_t>((head + 1) % ring.size());
      --size;
      return f;
    }
  };

  struct OutputVc {
    std::uint32_t credits = 0;
    bool busy = false;
  };

  struct Event {
    EventKind kind = EventKind::arrive;
    bool free = false;
    std::uint16_t subnet = 0;
    std::uint32_t target = 0;
    std::int32_t circuit = -1;
    FlitRef flit;
  };

  struct PacketState {
    std::uint32_t flits = 0;
    std::uint32_t ejected = 0;
    std::uint32_t hops = 0;
    RouteClass rc;
    std::int32_t circuit = -1;
    std::uint32_t vnet = 0;
    RouterId dst_router = 0;
    std::uint32_t dst_port = 0;
  };

  struct NiState {
    std::vector<std::deque<std::uint32_t>> vnet_queues;
    std::vector<OutputVc> local_vcs;
    std::uint32_t rr = 0;
    bool has_current = false;
    std::uint32_t cur_packet = 0;
    std::uint32_t cur_vc = 0;
    std::uint32_t cur_flit = 0;
    // circuit_reservation fabric
    std::deque<std::uint32_t> fabric_queue;
  };

  struct ActiveCircuit {
    std::uint16_t subnet = 0;
    Circuit key;
    RouterId src_router = 0;
    RouterId dst_router = 0;
    std::uint32_t hops = 0;
    Cycle latency = 0;
    std::vector<NodeId> src_nis;
    std::vector<std::deque<std::uint32_t>> queues;
    std::uint32_t rr = 0;
    bool has_current = false;
    std::uint32_t cur_packet = 0;
    std::uint32_t cur_flit = 0;
    std::uint64_t in_flight = 0;
    bool retiring = false;
    bool r2r = false;
  };

  struct FabricFlow {
    bool active = false;
    std::uint32_t packet = 0;
    std::uint32_t next_flit = 0;
  };

  // ---------------------------------------------------------------- setup

  void build() {
    const std::uint32_t routers = mesh_.router_count();
    const std::uint32_t V = vc_.vcs_per_port();
    port_base_.assign(routers + 1, 0);
    for (RouterId r = 0; r < routers; ++r) port_base_[r + 1] = port_base_[r] + kMeshPorts + mesh_.nis_at(r);
    ivcs_.resize(static_cast<std::size_t>(port_base_[routers]) * V);
    for (auto& ivc : ivcs_) ivc.ring.resize(vc_.buffer_depth_flits);
    ovcs_.resize(static_cast<std::size_t>(routers) * kMeshPorts * V);
    for (auto& o : ovcs_) o.credits = vc_.buffer_depth_flits;
    router_busy_vcs_.assign(routers, 0);

    Rng rng(opts_.seed);
    va_rr_.resize(routers);
    sa_in_rr_.resize(port_base_[routers]);
    sa_out_rr_.resize(port_base_[routers]);
    for (auto& v : va_rr_) v = static_cast<std::uint32_t>(uniform_index(rng, 1u << 16));
    for (auto& v : sa_in_rr_) v = static_cast<std::uint32_t>(uniform_index(rng, V));
    for (auto& v : sa_out_rr_) v = static_cast<std::uint32_t>(uniform_index(rng, 1u << 16));
    requests_.assign(port_base_[routers], -1);
    request_vc_.assign(port_base_[routers], 0);

    nis_.resize(mesh_.ni_count());
    for (auto& ni : nis_) {
      ni.vnet_queues.resize(vc_.vnets);
      ni.local_vcs.assign(V, OutputVc{vc_.buffer_depth_flits, false});
    }

    const std::uint32_t max_hops = static_cast<std::uint32_t>(mesh_.width() + mesh_.height());
    const Cycle max_delay = 2 * max_hops * (vc_.link_cycles + 1) + 2 * vc_.pipeline_stages + vc_.link_cycles +
                            vc_.buffer_depth_flits + 8;
    wheel_.resize(std::bit_ceil(max_delay + 1));

    stats_.routers = routers;
    stats_.total_width_bits = layout_.total_width_bits;
    stats_.subnets.resize(layout_.subnet_count);
    std::uint64_t buffers_per_subnet = 0;
    for (RouterId r = 0; r < routers; ++r) {
      std::uint32_t ports = mesh_.nis_at(r);
      for (int d = 0; d < kMeshPorts; ++d) ports += mesh_.has_neighbor(r, static_cast<Direction>(d)) ? 1 : 0;
      buffers_per_subnet += static_cast<std::uint64_t>(ports) * V;
    }
    for (std::uint32_t s = 0; s < layout_.subnet_count; ++s) {
      auto& sc = stats_.subnets[s];
      sc.width_bits = layout_.subnet_width();
      sc.circuit_switched = s > 0 || opts_.fabric == Fabric::circuit_reservation;
      sc.buffers = buffers_per_subnet;
    }
    cs_flags_.assign(layout_.cs_subnets() * routers * kMeshPorts, -1);
    cs_inject_used_.assign(layout_.cs_subnets() * mesh_.ni_count(), 0);
    cs_eject_free_.assign(layout_.cs_subnets() * mesh_.ni_count(), 0);
    active_plan_ = CircuitPlan::empty_plan(layout_.cs_subnets());
    if (opts_.fabric == Fabric::circuit_reservation) {
      link_busy_until_.assign(mesh_.link_id_space(), 0);
      ni_inject_busy_until_.assign(mesh_.ni_count(), 0);
      ni_eject_busy_until_.assign(mesh_.ni_count(), 0);
      fabric_flows_.resize(mesh_.ni_count());
    }
  }

  std::size_t ivc_index(RouterId r, std::uint32_t port, std::uint32_t v) const {
    return (static_cast<std::size_t>(port_base_[r]) + port) * vc_.vcs_per_port() + v;
  }
  std::size_t ovc_index(RouterId r, std::uint32_t port, std::uint32_t v) const {
    return (static_cast<std::size_t>(r) * kMeshPorts + port) * vc_.vcs_per_port() + v;
  }

  void schedule(Cycle at, Event e) { wheel_[at & (wheel_.size() - 1)].push_back(e); }

  // ---------------------------------------------------------------- cycle

  void step() {
    const Cycle c = now_;
    auto& bucket = wheel_[c & (wheel_.size() - 1)];
    // Handlers never schedule into the current cycle, so the bucket is stable.
    for (const auto& e : bucket) handle(e, c);
    bucket.clear();

    while (!pending_plans_.empty() && pending_plans_.front().first <= c) {
      activate_plan(pending_plans_.front().second, c);
      pending_plans_.erase(pending_plans_.begin());
    }
    create_packets(c);
    if (opts_.fabric == Fabric::hybrid) {
      update_barriers(c);
      inject_circuits(c);
    } else {
      inject_fabric(c);
    }
    for (RouterId r = 0; r < mesh_.router_count(); ++r) {
      if (router_busy_vcs_[r] == 0) continue;
      vc_allocate(r, c);
      sw_allocate(r, c);
    }
    inject_vc(c);
    ++stats_.cycles_simulated;
    ++now_;
  }

  void handle(const Event& e, Cycle c) {
    switch (e.kind) {
      case EventKind::arrive: {
        FlitRef f = e.flit;
        f.arrival = c;
        write_buffer(e.target, f, c);
        break;
      }
      case EventKind::credit: {
        auto& o = ovcs_[e.target];
        ++o.credits;
        if (e.free) o.busy = false;
        break;
      }
      case EventKind::ni_credit: {
        auto& o = nis_[e.target / vc_.vcs_per_port()].local_vcs[e.target % vc_.vcs_per_port()];
        ++o.credits;
        if (e.free) o.busy = false;
        break;
      }
      case EventKind::eject:
        if (e.circuit >= 0) --circuits_[static_cast<std::size_t>(e.circuit)].in_flight;
        eject(e.flit, e.subnet, c);
        break;
    }
  }

  void write_buffer(std::size_t ivc_idx, const FlitRef& f, Cycle c) {
    auto& ivc = ivcs_[ivc_idx];
    if (ivc.size >= vc_.buffer_depth_flits) throw std::logic_error("credit violation: VC buffer overflow");
    ivc.push(f);
    ++stats_.subnets[0].buffer_writes;
    stats_.max_vc_occupancy = std::max(stats_.max_vc_occupancy, ivc.size);
    if (f.index == 0) {
      if (ivc.state != VcState::idle) throw std::logic_error("head flit arrived at a busy VC");
      const std::uint32_t port_slot = static_cast<std::uint32_t>(ivc_idx / vc_.vcs_per_port());
      const RouterId r = router_of_port_slot(port_slot);
      const auto& pk = packets_[f.packet];
      ivc.state = VcState::wait_va;
      ivc.out_port = pk.dst_router == r
                         ? kMeshPorts + pk.dst_port
                         : static_cast<std::uint32_t>(xy_next_direction(mesh_, r, pk.dst_router));
      ivc.va_ready = c + vc_.pipeline_stages - 3;
      ++router_busy_vcs_[r];
    }
  }

  RouterId router_of_port_slot(std::uint32_t slot) const {
    const auto it = std::upper_bound(port_base_.begin(), port_base_.end(), slot);
    return static_cast<RouterId>(std::distance(port_base_.begin(), it) - 1);
  }

  void eject(const FlitRef& f, std::uint16_t subnet, Cycle c) {
    auto& pk = packets_[f.packet];
    const auto& ev = trace_[f.packet];
    ++stats_.flits_ejected;
    stats_.flit_bits_ejected += stats_.subnets[subnet].width_bits;
    const bool circuit = stats_.subnets[subnet].circuit_switched;
    if (circuit) ++stats_.in_circuit_flits;
    if (f.index != pk.ejected) ++stats_.order_violations;
    ++pk.ejected;
    if (ev.inject_cycle >= opts_.measure_from) {
      (circuit ? stats_.cs_latency : stats_.vc_latency).add(c - ev.inject_cycle, c - f.entry);
    }
    if (opts_.record_flits) {
      flit_records_.push_back({ev.packet_id, f.index, pk.rc, ev.inject_cycle, f.entry, c, pk.hops});
    }
    if (pk.ejected == pk.flits) {
      ++stats_.packets_ejected;
      ejected_log_.push_back(ev);
    }
  }

  // ---------------------------------------------------------------- plans

  void activate_plan(const CircuitPlan& plan, Cycle c) {
    // Retire the old circuits: packets not yet started fall back to the VC
    // subnet; a packet already streaming finishes on its circuit.
    for (auto idx : live_circuits_) {
      auto& ac = circuits_[idx];
      ac.retiring = true;
      for (auto& q : ac.queues) {
        for (auto p : q) {
          packets_[p].rc = RouteClass::vc();
          packets_[p].circuit = -1;
          setup_vc_packet(p);
        }
        q.clear();
      }
    }
    circuit_lookup_.clear();
    std::fill(cs_flags_.begin(), cs_flags_.end(), -1);
    std::vector<std::uint32_t> live;
    for (auto idx : live_circuits_) {
      if (circuits_[idx].has_current || circuits_[idx].in_flight > 0) live.push_back(idx);
    }
    for (std::size_t s = 0; s < plan.subnets.size(); ++s) {
      for (const auto& c_key : plan.subnets[s]) {
        ActiveCircuit ac;
        ac.subnet = static_cast<std::uint16_t>(s + 1);
        ac.key = c_key;
        ac.r2r = plan.granularity == Granularity::r2r;
        const auto [rs, rd] = circuit_routers(c_key, plan.granularity, mesh_);
        ac.src_router = rs;
        ac.dst_router = rd;
        const Path path = xy_route(rs, rd, mesh_);
        ac.hops = static_cast<std::uint32_t>(path.hops());
        ac.latency = unloaded_latency(RouteClass::cs(ac.subnet), plan.granularity, ac.hops, vc_);
        if (plan.granularity == Granularity::e2e) {
          ac.src_nis = {c_key.src};
        } else {
          for (std::uint32_t k = 0; k < mesh_.nis_at(rs); ++k) ac.src_nis.push_back(mesh_.first_ni(rs) + k);
        }
        ac.queues.resize(ac.src_nis.size());
        const auto idx = static_cast<std::uint32_t>(circuits_.size());
        for (const auto& l : path.links) {
          auto& flag = cs_flags_[(s * mesh_.router_count() + l.to) * kMeshPorts +
                                 static_cast<std::uint32_t>(opposite(l.direction))];
          if (flag >= 0) throw ConfigError("CS input port claimed by two circuits");
          flag = static_cast<int>(idx);
        }
        circuit_lookup_[pack_key(c_key)] = idx;
        circuits_.push_back(std::move(ac));
        live.push_back(idx);
      }
    }
    live_circuits_ = std::move(live);
    active_plan_ = plan;
    if (!plan.subnets.empty() || !circuits_.empty()) barrier_start_ = c;
  }

  static std::uint64_t pack_key(const Circuit& c) { return (static_cast<std::uint64_t>(c.src) << 32) | c.dst; }

  bool subnet_blocked(std::uint16_t subnet) const {
    for (auto idx : live_circuits_) {
      const auto& ac = circuits_[idx];
      if (ac.retiring && ac.subnet == subnet && (ac.has_current || ac.in_flight > 0)) return true;
    }
    return false;
  }

  void update_barriers(Cycle c) {
    if (!barrier_start_) return;
    bool any_retiring = false;
    std::vector<std::uint32_t> keep;
    keep.reserve(live_circuits_.size());
    for (auto idx : live_circuits_) {
      const auto& ac = circuits_[idx];
      if (ac.retiring) {
        if (!ac.has_current && ac.in_flight == 0) continue;
        any_retiring = true;
      }
      keep.push_back(idx);
    }
    live_circuits_ = std::move(keep);
    if (!any_retiring) {
      stats_.max_barrier_cycles = std::max(stats_.max_barrier_cycles, c - *barrier_start_);
      barrier_start_.reset();
    }
  }

  // ---------------------------------------------------------------- injection

  void create_packets(Cycle c) {
    while (next_event_ < trace_.size() && trace_[next_event_].inject_cycle <= c) {
      const auto p = static_cast<std::uint32_t>(next_event_++);
      const auto& ev = trace_[p];
      PacketState pk;
      pk.dst_router = mesh_.router_of(ev.dst);
      pk.dst_port = mesh_.local_index(ev.dst);
      const RouterId src_router = mesh_.router_of(ev.src);
      pk.hops = static_cast<std::uint32_t>(mesh_.distance(src_router, pk.dst_router));
      pk.vnet = ev.kind == PacketKind::data ? vc_.vnets - 1
                                            : static_cast<std::uint32_t>(ev.packet_id % std::max(1u, vc_.vnets - 1));
      pk.flits = flits_for_packet(ev.kind, opts_.sizes, layout_.subnet_width());
      packets_.push_back(pk);
      ++stats_.packets_created;
      ++pending_injection_;

      if (opts_.fabric == Fabric::circuit_reservation) {
        packets_[p].rc = RouteClass::cs(0);
        nis_[ev.src].fabric_queue.push_back(p);
        continue;
      }
      if (!circuit_lookup_.empty()) {
        const Circuit key = active_plan_.granularity == Granularity::e2e
                                ? Circuit{ev.src, ev.dst}
                                : Circuit{src_router, pk.dst_router};
        const auto it = circuit_lookup_.find(pack_key(key));
        if (it != circuit_lookup_.end()) {
          auto& ac = circuits_[it->second];
          packets_[p].rc = RouteClass::cs(ac.subnet);
          packets_[p].circuit = static_cast<std::int32_t>(it->second);
          const auto q = std::find(ac.src_nis.begin(), ac.src_nis.end(), ev.src) - ac.src_nis.begin();
          ac.queues[static_cast<std::size_t>(q)].push_back(p);
          continue;
        }
      }
      setup_vc_packet(p);
    }
  }

  void setup_vc_packet(std::uint32_t p) {
    nis_[trace_[p].src].vnet_queues[packets_[p].vnet].push_back(p);
  }

  std::size_t cs_port(std::uint16_t subnet, NodeId ni) const {
    return static_cast<std::size_t>(subnet - 1) * mesh_.ni_count() + ni;
  }

  // Each NI has one injection and one ejection port per circuit plane. At
  // the last router of r2r circuits, flits competing for an ejection port
  // queue for at most buffer_depth cycles; beyond that the circuit stalls.
  void inject_circuits(Cycle c) {
    for (auto idx : live_circuits_) {
      auto& ac = circuits_[idx];
      if (!ac.has_current) {
        if (ac.retiring || (barrier_start_ && subnet_blocked(ac.subnet))) continue;
        const auto n = static_cast<std::uint32_t>(ac.queues.size());
        for (std::uint32_t k = 0; k < n; ++k) {
          auto& q = ac.queues[(ac.rr + k) % n];
          if (q.empty() || cs_inject_used_[cs_port(ac.subnet, ac.src_nis[(ac.rr + k) % n])] == c + 1) continue;
          ac.cur_packet = q.front();
          q.pop_front();
          ac.cur_flit = 0;
          ac.has_current = true;
          ac.rr = (ac.rr + k + 1) % n;
          break;
        }
        if (!ac.has_current) continue;
      }
      const auto& ev = trace_[ac.cur_packet];
      const auto in_port = cs_port(ac.subnet, ev.src);
      const auto out_port = cs_port(ac.subnet, ev.dst);
      if (cs_inject_used_[in_port] == c + 1) continue;
      const Cycle at = std::max(c + ac.latency, cs_eject_free_[out_port]);
      if (at > c + ac.latency + vc_.buffer_depth_flits) continue;
      cs_inject_used_[in_port] = c + 1;
      cs_eject_free_[out_port] = at + 1;

      const auto& pk = packets_[ac.cur_packet];
      Event e;
      e.kind = EventKind::eject;
      e.subnet = ac.subnet;
      e.circuit = static_cast<std::int32_t>(idx);
      e.flit = {ac.cur_packet, ac.cur_flit, c, c};
      schedule(at, e);
      ++ac.in_flight;
      ++stats_.flits_injected;
      auto& sc = stats_.subnets[ac.subnet];
      sc.crossbar_traversals += ac.hops + 1;
      sc.link_traversals += ac.hops;
      if (ac.r2r) sc.sw_allocations += 2;
      if (++ac.cur_flit == pk.flits) {
        ac.has_current = false;
        --pending_injection_;
      }
    }
  }

  const std::vector<std::uint32_t>& fabric_links(RouterId a, RouterId b) {
    const std::uint64_t key = (static_cast<std::uint64_t>(a) << 32) | b;
    auto it = route_cache_.find(key);
    if (it == route_cache_.end()) {
      std::vector<std::uint32_t> ids;
      if (a != b) {
        for (const auto& l : xy_route(a, b, mesh_).links) ids.push_back(l.id());
      }
      it = route_cache_.emplace(key, std::move(ids)).first;
    }
    return it->second;
  }

  void inject_fabric(Cycle c) {
    const auto n = mesh_.ni_count();
    // Set-up attempts rotate their starting NI every cycle.
    for (std::uint32_t k = 0; k < n; ++k) {
      const NodeId ni = (fabric_rr_ + k) % n;
      auto& flow = fabric_flows_[ni];
      auto& q = nis_[ni].fabric_queue;
      if (flow.active || q.empty()) continue;
      const auto p = q.front();
      const auto& ev = trace_[p];
      const auto& links = fabric_links(mesh_.router_of(ev.src), packets_[p].dst_router);
      if (ni_inject_busy_until_[ev.src] > c || ni_eject_busy_until_[ev.dst] > c) continue;
      bool free = true;
      for (auto l : links) free = free && link_busy_until_[l] <= c;
      if (!free) continue;
      const Cycle release = c + 2 * links.size() + packets_[p].flits;
      for (auto l : links) link_busy_until_[l] = release;
      ni_inject_busy_until_[ev.src] = release;
      ni_eject_busy_until_[ev.dst] = release;
      q.pop_front();
      flow = {true, p, 0};
    }
    fabric_rr_ = (fabric_rr_ + 1) % n;
    for (auto& flow : fabric_flows_) {
      if (!flow.active) continue;
      const auto& pk = packets_[flow.packet];
      Event e;
      e.kind = EventKind::eject;
      e.subnet = 0;
      e.flit = {flow.packet, flow.next_flit, c, c};
      schedule(c + 2 * pk.hops + 1, e);
      ++stats_.flits_injected;
      stats_.subnets[0].crossbar_traversals += pk.hops + 1;
      stats_.subnets[0].link_traversals += pk.hops;
      if (++flow.next_flit == pk.flits) {
        flow.active = false;
        --pending_injection_;
      }
    }
  }

  void inject_vc(Cycle c) {
    const std::uint32_t vpv = vc_.vcs_per_vnet;
    for (NodeId n = 0; n < nis_.size(); ++n) {
      auto& ni = nis_[n];
      if (!ni.has_current) {
        for (std::uint32_t k = 0; k < vc_.vnets && !ni.has_current; ++k) {
          const std::uint32_t vn = (ni.rr + k) % vc_.vnets;
          if (ni.vnet_queues[vn].empty()) continue;
          for (std::uint32_t v = vn * vpv; v < (vn + 1) * vpv; ++v) {
            if (ni.local_vcs[v].busy) continue;
            ni.local_vcs[v].busy = true;
            ni.cur_packet = ni.vnet_queues[vn].front();
            ni.vnet_queues[vn].pop_front();
            ni.cur_vc = v;
            ni.cur_flit = 0;
            ni.has_current = true;
            ni.rr = (vn + 1) % vc_.vnets;
            break;
          }
        }
        if (!ni.has_current) continue;
      }
      auto& ovc = ni.local_vcs[ni.cur_vc];
      if (ovc.credits == 0) continue;
      --ovc.credits;
      const RouterId r = mesh_.router_of(n);
      write_buffer(ivc_index(r, kMeshPorts + mesh_.local_index(n), ni.cur_vc), {ni.cur_packet, ni.cur_flit, c, c}, c);
      ++stats_.flits_injected;
      if (++ni.cur_flit == packets_[ni.cur_packet].flits) {
        ni.has_current = false;
        --pending_injection_;
      }
    }
  }

  // ---------------------------------------------------------------- router

  std::uint32_t ports_at(RouterId r) const { return port_base_[r + 1] - port_base_[r]; }

  void vc_allocate(RouterId r, Cycle c) {
    const std::uint32_t V = vc_.vcs_per_port();
    const std::uint32_t total = ports_at(r) * V;
    const std::uint32_t start = va_rr_[r] % total;
    for (std::uint32_t k = 0; k < total; ++k) {
      const std::uint32_t slot = (start + k) % total;
      auto& ivc = ivcs_[ivc_index(r, slot / V, slot % V)];
      if (ivc.state != VcState::wait_va || c < ivc.va_ready) continue;
      if (ivc.out_port >= kMeshPorts) {
        ivc.state = VcState::active;
        ivc.sa_ready = c + 1;
        ++stats_.subnets[0].vc_allocations;
        continue;
      }
      const std::uint32_t vnet = (slot % V) / vc_.vcs_per_vnet;
      for (std::uint32_t ov = vnet * vc_.vcs_per_vnet; ov < (vnet + 1) * vc_.vcs_per_vnet; ++ov) {
        auto& o = ovcs_[ovc_index(r, ivc.out_port, ov)];
        if (o.busy) continue;
        o.busy = true;
        ivc.out_vc = ov;
        ivc.state = VcState::active;
        ivc.sa_ready = c + 1;
        ++stats_.subnets[0].vc_allocations;
        break;
      }
    }
    ++va_rr_[r];
  }

  void sw_allocate(RouterId r, Cycle c) {
    const std::uint32_t V = vc_.vcs_per_port();
    const std::uint32_t ports = ports_at(r);
    const std::uint32_t base = port_base_[r];
    const Cycle sa_delay = vc_.pipeline_stages - 2;
    // Input stage: one eligible VC per input port, round-robin.
    for (std::uint32_t p = 0; p < ports; ++p) {
      requests_[base + p] = -1;
      for (std::uint32_t k = 0; k < V; ++k) {
        const std::uint32_t v = (sa_in_rr_[base + p] + k) % V;
        const auto& ivc = ivcs_[ivc_index(r, p, v)];
        if (ivc.state != VcState::active || ivc.size == 0) continue;
        const auto& f = ivc.front();
        if (c < f.arrival + sa_delay || c < ivc.sa_ready) continue;
        if (ivc.out_port < kMeshPorts && ovcs_[ovc_index(r, ivc.out_port, ivc.out_vc)].credits == 0) continue;
        requests_[base + p] = static_cast<std::int32_t>(ivc.out_port);
        request_vc_[base + p] = v;
        break;
      }
    }
    // Output stage: one input per output port, round-robin.
    for (std::uint32_t o = 0; o < ports; ++o) {
      const std::uint32_t start = sa_out_rr_[base + o] % ports;
      for (std::uint32_t k = 0; k < ports; ++k) {
        const std::uint32_t p = (start + k) % ports;
        if (requests_[base + p] != static_cast<std::int32_t>(o)) continue;
        grant(r, p, request_vc_[base + p], c);
        sa_out_rr_[base + o] = p + 1;
        sa_in_rr_[base + p] = (request_vc_[base + p] + 1) % V;
        break;
      }
    }
  }

  void grant(RouterId r, std::uint32_t p, std::uint32_t v, Cycle c) {
    auto& ivc = ivcs_[ivc_index(r, p, v)];
    const FlitRef f = ivc.pop();
    const bool tail = f.index + 1 == packets_[f.packet].flits;
    auto& sc = stats_.subnets[0];
    ++sc.sw_allocations;
    ++sc.buffer_reads;
    ++sc.crossbar_traversals;

    Event out;
    out.flit = f;
    if (ivc.out_port < kMeshPorts) {
      const auto dir = static_cast<Direction>(ivc.out_port);
      --ovcs_[ovc_index(r, ivc.out_port, ivc.out_vc)].credits;
      ++sc.link_traversals;
      out.kind = EventKind::arrive;
      out.target = static_cast<std::uint32_t>(
          ivc_index(mesh_.neighbor(r, dir), static_cast<std::uint32_t>(opposite(dir)), ivc.out_vc));
      schedule(c + 2 + vc_.link_cycles, out);
    } else {
      out.kind = EventKind::eject;
      out.subnet = 0;
      schedule(c + 2, out);
    }

    Event credit;
    credit.free = tail;
    if (p < kMeshPorts) {
      const auto dir = static_cast<Direction>(p);
      credit.kind = EventKind::credit;
      credit.target = static_cast<std::uint32_t>(
          ovc_index(mesh_.neighbor(r, dir), static_cast<std::uint32_t>(opposite(dir)), v));
    } else {
      credit.kind = EventKind::ni_credit;
      credit.target = (mesh_.first_ni(r) + (p - kMeshPorts)) * vc_.vcs_per_port() + v;
    }
    schedule(c + 2, credit);

    if (tail) {
      ivc.state = VcState::idle;
      --router_busy_vcs_[r];
    }
  }

  MeshConfig mesh_;
  SubnetLayout layout_;
  VcConfig vc_;
  SimOptions opts_;

  Cycle now_ = 0;
  Trace trace_;
  std::size_t next_event_ = 0;
  std::uint64_t pending_injection_ = 0;
  std::vector<PacketState> packets_;

  std::vector<std::uint32_t> port_base_;
  std::vector<InputVc> ivcs_;
  std::vector<OutputVc> ovcs_;
  std::vector<std::uint32_t> router_busy_vcs_;
  std::vector<std::uint32_t> va_rr_;
  std::vector<std::uint32_t> sa_in_rr_;
  std::vector<std::uint32_t> sa_out_rr_;
  std::vector<std::int32_t> requests_;
  std::vector<std::uint32_t> request_vc_;
  std::vector<NiState> nis_;
  std::vector<std::vector<Event>> wheel_;

  CircuitPlan active_plan_;
  std::vector<std::pair<Cycle, CircuitPlan>> pending_plans_;
  std::vector<ActiveCircuit> circuits_;
  std::vector<std::uint32_t> live_circuits_;
  std::unordered_map<std::uint64_t, std::uint32_t> circuit_lookup_;
  std::vector<int> cs_flags_;
  std::vector<Cycle> cs_inject_used_;
  std::vector<Cycle> cs_eject_free_;
  std::optional<Cycle> barrier_start_;

  std::vector<Cycle> link_busy_until_;
  std::vector<Cycle> ni_inject_busy_until_;
  std::vector<Cycle> ni_eject_busy_until_;
  std::vector<FabricFlow> fabric_flows_;
  std::uint32_t fabric_rr_ = 0;
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> route_cache_;

  SimStats stats_;
  std::vector<TrafficEvent> ejected_log_;
  std::vector<FlitRecord> flit_records_;
};

/// One-shot run of `trace` under `plan` for at most `cycles_limit` cycles.
inline SimStats simulate(const MeshConfig& mesh, const SubnetLayout& layout, const VcConfig& vc, const Trace& trace,
                         const CircuitPlan& plan, Cycle cycles_limit, const SimOptions& opts = {}) {
  Simulator sim(mesh, layout, vc, opts);
  sim.load_trace(trace);
  if (opts.fabric == Fabric::hybrid) sim.set_plan(plan, 0);
  sim.run_until(cycles_limit);
  return sim.snapshot();
}

/// Mean zero-load flit latency of a trace (packet serialization included),
/// measured from packet creation to ejection.
inline double zero_load_latency(const MeshConfig& mesh, const SubnetLayout& layout, const VcConfig& vc,
                                const Trace& trace, const CircuitPlan& plan, Fabric fabric,
                                const PacketSizes& sizes = {}) {
  const std::uint32_t width = fabric == Fabric::hybrid ? layout.subnet_width() : layout.total_width_bits;
  double sum = 0.0;
  std::uint64_t count = 0;
  for (const auto& ev : trace) {
    const auto hops = static_cast<std::uint32_t>(mesh.distance(mesh.router_of(ev.src), mesh.router_of(ev.dst)));
    const RouteClass rc = fabric == Fabric::hybrid ? classify_packet(ev, plan, mesh) : RouteClass::cs(0);
    const Granularity g = fabric == Fabric::hybrid ? plan.granularity : Granularity::e2e;
    const Cycle base = unloaded_latency(rc, g, hops, vc);
    const std::uint32_t flits = flits_for_packet(ev.kind, sizes, width);
    sum += static_cast<double>(flits) * static_cast<double>(base) + static_cast<double>(flits) * (flits - 1) / 2.0;
    count += flits;
  }
  return count ? sum / static_cast<double>(count) : 0.0;
}

struct SweepPoint {
  double rate = 0.0;
  double offered_flits_per_node_cycle = 0.0;
  double accepted_flits_per_node_cycle = 0.0;
  double mean_latency = 0.0;
  std::uint64_t p99_latency = 0;
  double unloaded_latency = 0.0;
  bool saturated = false;
};

struct SweepRequest {
  MeshConfig mesh;
  SubnetLayout layout = SubnetLayout::baseline();
  VcConfig vc{};
  SyntheticSpec pattern{};
  std::vector<double> rates;
  CircuitPlan plan = CircuitPlan::empty_plan(0);
  Fabric fabric = Fabric::hybrid;
  Cycle cycles = 20000;
  std::uint64_t seed = 1;
  /// Derive the plan from each point's own trace profile (greedy) instead of
  /// using `plan`. Ignored outside the hybrid fabric.
  bool greedy_plan_per_point = false;
  Granularity granularity = Granularity::e2e;
};

/// One simulation per offered rate; the first tenth of the cycles is warm-up.
/// A point is saturated when its mean latency exceeds ten times the
/// zero-load latency of the same trace.
inline std::vector<SweepPoint> sweep_injection(const SweepRequest& req) {
  for (std::size_t i = 1; i < req.rates.size(); ++i) {
    if (req.rates[i] < req.rates[i - 1]) throw DomainError("sweep rates must be ascending");
  }
  std::vector<SweepPoint> out;
  for (const double rate : req.rates) {
    SyntheticSpec spec = req.pattern;
    spec.injection_rate = rate;
    spec.full_width_bits = req.layout.total_width_bits;
    const Trace trace = generate(spec, req.mesh, req.seed, req.cycles);
    CircuitPlan plan = req.plan;
    if (req.fabric == Fabric::hybrid && req.greedy_plan_per_point && req.layout.cs_subnets() > 0) {
      plan = greedy_allocate(profile(trace, req.mesh, req.granularity, spec.sizes, req.layout.total_width_bits),
                             req.mesh, req.layout.cs_subnets());
    }
    SimOptions opts;
    opts.fabric = req.fabric;
    opts.measure_from = req.cycles / 10;
    opts.seed = req.seed;
    opts.sizes = spec.sizes;
    const SimStats st = simulate(req.mesh, req.layout, req.vc, trace, plan, req.cycles, opts);
    SweepPoint pt;
    pt.rate = rate;
    const double node_cycles = static_cast<double>(req.mesh.ni_count()) * static_cast<double>(req.cycles);
    std::uint64_t offered_bits = 0;
    for (const auto& ev : trace) offered_bits += spec.sizes.bits(ev.kind);
    const double full = static_cast<double>(req.layout.total_width_bits);
    pt.offered_flits_per_node_cycle = static_cast<double>(offered_bits) / full / node_cycles;
    pt.accepted_flits_per_node_cycle = st.full_width_flits_ejected() / node_cycles;
    const auto lat = st.all_latency();
    pt.mean_latency = lat.mean();
    pt.p99_latency = lat.percentile(0.99);
    pt.unloaded_latency = zero_load_latency(req.mesh, req.layout, req.vc, trace, plan, req.fabric, spec.sizes);
    pt.saturated = lat.count > 0 && pt.mean_latency > 10.0 * pt.unloaded_latency;
    out.push_back(pt);
  }
  return out;
}

/// First saturated rate of a sweep, or +inf when none saturated.
inline double saturation_rate(const std::vector<SweepPoint>& pts) {
  for (const auto& p : pts) {
    if (p.saturated) return p.rate;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace hsnoc

#endif  // HSNOC_SIMCORE_HPP
