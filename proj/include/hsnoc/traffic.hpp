#ifndef HSNOC_TRAFFIC_HPP
#define HSNOC_TRAFFIC_HPP

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hsnoc/errors.hpp"
#include "hsnoc/random.hpp"
#include "hsnoc/topology.hpp"

namespace hsnoc {

using Cycle = std::uint64_t;

enum class PacketKind : std::uint8_t { control, data };

inline std::string to_string(PacketKind k) { return k == PacketKind::control ? "control" : "data"; }

/// Payload sizes in bits; defaults are the 128-bit control / 640-bit data
/// packets of the evaluated CMP.
struct PacketSizes {
  std::uint32_t control_bits = 128;
  std::uint32_t data_bits = 640;

  std::uint32_t bits(PacketKind k) const { return k == PacketKind::control ? control_bits : data_bits; }
  bool operator==(const PacketSizes&) const = default;
};

struct PacketClass {
  PacketKind kind = PacketKind::control;
  std::uint32_t payload_bits = 128;

  static PacketClass of(PacketKind k, const PacketSizes& sizes = {}) { return {k, sizes.bits(k)}; }
};

/// Number of flits a packet serializes into on a channel of the given width.
inline std::uint32_t flits_for_packet(const PacketClass& pc, std::uint32_t channel_width_bits) {
  if (channel_width_bits == 0) throw DomainError("flits_for_packet: zero channel width");
  return (pc.payload_bits + channel_width_bits - 1) / channel_width_bits;
}

inline std::uint32_t flits_for_packet(PacketKind k, const PacketSizes& sizes, std::uint32_t width) {
  return flits_for_packet(PacketClass::of(k, sizes), width);
}

struct TrafficEvent {
  Cycle inject_cycle = 0;
  NodeId src = 0;
  NodeId dst = 0;
  PacketKind kind = PacketKind::control;
  std::uint64_t packet_id = 0;

  bool operator==(const TrafficEvent&) const = default;
};

using Trace = std::vector<TrafficEvent>;

enum class Pattern : std::uint8_t { uniform_random, permutation, hotspot, regular_mix };

inline std::string to_string(Pattern p) {
  switch (p) {
    case Pattern::uniform_random: return "uniform_random";
    case Pattern::permutation: return "permutation";
    case Pattern::hotspot: return "hotspot";
    case Pattern::regular_mix: return "regular_mix";
  }
  return "?";
}

inline Pattern parse_pattern(std::string_view s) {
  if (s == "uniform_random" || s == "uniform") return Pattern::uniform_random;
  if (s == "permutation") return Pattern::permutation;
  if (s == "hotspot") return Pattern::hotspot;
  if (s == "regular_mix") return Pattern::regular_mix;
  throw DomainError("unknown traffic pattern '" + std::string(s) + "'");
}

struct SyntheticSpec {
  Pattern pattern = Pattern::uniform_random;
  /// Offered load in full-width flits per node per cycle.
  double injection_rate = 0.05;
  double control_fraction = 0.5;
  /// regular_mix only: share of packets confined to the designated pairs.
  double regularity = 0.0;
  std::uint32_t designated_pairs = 8;
  /// hotspot only: share of packets aimed at the hotspot node.
  double hotspot_fraction = 0.2;
  std::uint32_t full_width_bits = 128;
  PacketSizes sizes{};

  void validate() const {
    if (!(injection_rate >= 0.0) || injection_rate > 1.0) {
      throw DomainError("injection_rate must lie in [0, 1]");
    }
    if (control_fraction < 0.0 || control_fraction > 1.0) throw DomainError("control_fraction outside [0, 1]");
    if (regularity < 0.0 || regularity > 1.0) throw DomainError("regularity outside [0, 1]");
    if (hotspot_fraction < 0.0 || hotspot_fraction > 1.0) throw DomainError("hotspot_fraction outside [0, 1]");
    if (full_width_bits == 0) throw DomainError("full_width_bits must be positive");
  }

  double mean_flits_per_packet() const {
    return control_fraction * flits_for_packet(PacketKind::control, sizes, full_width_bits) +
           (1.0 - control_fraction) * flits_for_packet(PacketKind::data, sizes, full_width_bits);
  }
};

namespace detail {

inline NodeId other_node(Rng& rng, NodeId self, std::uint32_t n) {
  const auto pick = static_cast<NodeId>(uniform_index(rng, n - 1));
  return pick >= self ? pick + 1 : pick;
}

// Seed streams for the pattern's fixed structure, kept apart from the
// per-cycle injection stream so that changing the rate does not move the
// designated pairs.
inline constexpr std::uint64_t kStructureSalt = 0x9e3779b97f4a7c15ULL;

}  // namespace detail

/// Seed-chosen hot pairs of the regular_mix pattern, in draw order.
inline std::vector<std::pair<NodeId, NodeId>> designated_pairs(const SyntheticSpec& spec, const MeshConfig& mesh,
                                                               std::uint64_t seed) {
  const std::uint32_t n = mesh.ni_count();
  std::vector<std::pair<NodeId, NodeId>> out;
  if (n < 2) return out;
  const std::uint64_t total = static_cast<std::uint64_t>(n) * (n - 1);
  const auto want = static_cast<std::size_t>(std::min<std::uint64_t>(spec.designated_pairs, total));
  Rng rng(seed ^ detail::kStructureSalt);
  std::set<std::pair<NodeId, NodeId>> seen;
  while (out.size() < want) {
    const auto s = static_cast<NodeId>(uniform_index(rng, n));
    const NodeId d = detail::other_node(rng, s, n);
    if (seen.emplace(s, d).second) out.emplace_back(s, d);
  }
  return out;
}

/// Seed-chosen derangement used by the permutation pattern.
inline std::vector<NodeId> permutation_targets(const MeshConfig& mesh, std::uint64_t seed) {
  const std::uint32_t n = mesh.ni_count();
  std::vector<NodeId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  if (n < 2) return perm;
  Rng rng((seed ^ detail::kStructureSalt) + 1);
  for (std::uint32_t i = n - 1; i > 0; --i) {
    std::swap(perm[i], perm[uniform_index(rng, i + 1)]);
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    if (perm[i] == i) std::swap(perm[i], perm[(i + 1) % n]);
  }
  return perm;
}

inline NodeId hotspot_node(const MeshConfig& mesh, std::uint64_t seed) {
  Rng rng((seed ^ detail::kStructureSalt) + 2);
  return static_cast<NodeId>(uniform_index(rng, mesh.ni_count()));
}

/// Bernoulli packet arrivals at every NI; destinations follow the pattern.
/// The result is a pure function of (spec, mesh, seed, cycles).
inline Trace generate(const SyntheticSpec& spec, const MeshConfig& mesh, std::uint64_t seed, Cycle cycles) {
  spec.validate();
  if (cycles < 1) throw DomainError("generate: cycles must be at least 1");
  Trace trace;
  const std::uint32_t n = mesh.ni_count();
  if (spec.injection_rate == 0.0 || n < 2) return trace;

  const double packet_prob = spec.injection_rate / spec.mean_flits_per_packet();
  const auto hot_pairs = spec.pattern == Pattern::regular_mix ? designated_pairs(spec, mesh, seed)
                                                              : std::vector<std::pair<NodeId, NodeId>>{};
  const auto perm = spec.pattern == Pattern::permutation ? permutation_targets(mesh, seed) : std::vector<NodeId>{};
  const NodeId hotspot = hotspot_node(mesh, seed);

  Rng rng(seed);
  std::uint64_t next_id = 0;
  for (Cycle c = 0; c < cycles; ++c) {
    for (NodeId slot = 0; slot < n; ++slot) {
      if (!bernoulli(rng, packet_prob)) continue;
      TrafficEvent ev;
      ev.inject_cycle = c;
      ev.kind = bernoulli(rng, spec.control_fraction) ? PacketKind::control : PacketKind::data;
      ev.src = slot;
      switch (spec.pattern) {
        case Pattern::uniform_random:
          ev.dst = detail::other_node(rng, slot, n);
          break;
        case Pattern::permutation:
          ev.dst = perm[slot];
          break;
        case Pattern::hotspot:
          ev.dst = (slot != hotspot && bernoulli(rng, spec.hotspot_fraction)) ? hotspot
                                                                              : detail::other_node(rng, slot, n);
          break;
        case Pattern::regular_mix:
          if (!hot_pairs.empty() && bernoulli(rng, spec.regularity)) {
            const auto& hp = hot_pairs[uniform_index(rng, hot_pairs.size())];
            ev.src = hp.first;
            ev.dst = hp.second;
          } else {
            ev.dst = detail::other_node(rng, slot, n);
          }
          break;
      }
      ev.packet_id = next_id++;
      trace.push_back(ev);
    }
  }
  return trace;
}

/// Appends `tail` shifted by `offset` cycles, renumbering its packet ids.
inline Trace concatenate(Trace head, const Trace& tail, Cycle offset) {
  std::uint64_t next_id = head.empty() ? 0 : head.back().packet_id + 1;
  for (auto ev : tail) {
    ev.inject_cycle += offset;
    ev.packet_id = next_id++;
    head.push_back(ev);
  }
  std::stable_sort(head.begin(), head.end(),
                   [](const TrafficEvent& a, const TrafficEvent& b) { return a.inject_cycle < b.inject_cycle; });
  return head;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <typename T>
bool parse_uint(std::string_view s, T& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [p, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && p == end;
}

inline bool skippable(std::string_view line) {
  line = trim(line);
  return line.empty() || line.front() == '#';
}

}  // namespace detail

/// Parses `inject_cycle,src_ni,dst_ni,class` lines. Out-of-order cycles are
/// stably reordered and reported through `warnings`; malformed lines and
/// unknown NIs raise InputError naming the line.
inline Trace ingest(std::istream& in, const MeshConfig& mesh, std::vector<std::string>* warnings = nullptr) {
  Trace trace;
  std::string line;
  std::size_t line_no = 0;
  bool monotone = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::skippable(line)) continue;
    const auto fields = detail::split_csv(line);
    auto fail = [&](const std::string& why) {
      throw InputError("trace line " + std::to_string(line_no) + ": " + why);
    };
    if (fields.size() != 4) fail("expected 4 comma-separated fields");
    TrafficEvent ev;
    if (!detail::parse_uint(fields[0], ev.inject_cycle)) fail("bad inject_cycle");
    if (!detail::parse_uint(fields[1], ev.src)) fail("bad src");
    if (!detail::parse_uint(fields[2], ev.dst)) fail("bad dst");
    if (fields[3] == "control") {
      ev.kind = PacketKind::control;
    } else if (fields[3] == "data") {
      ev.kind = PacketKind::data;
    } else {
      fail("class must be control or data");
    }
    if (!mesh.valid_ni(ev.src) || !mesh.valid_ni(ev.dst)) fail("unknown NodeId");
    if (ev.src == ev.dst) fail("src equals dst");
    if (!trace.empty() && ev.inject_cycle < trace.back().inject_cycle) monotone = false;
    trace.push_back(ev);
  }
  if (!monotone) {
    std::stable_sort(trace.begin(), trace.end(),
                     [](const TrafficEvent& a, const TrafficEvent& b) { return a.inject_cycle < b.inject_cycle; });
    if (warnings) warnings->push_back("trace cycles not monotone; events reordered");
  }
  for (std::size_t i = 0; i < trace.size(); ++i) trace[i].packet_id = i;
  return trace;
}

inline void write_trace(std::ostream& out, const Trace& trace) {
  for (const auto& ev : trace) {
    out << ev.inject_cycle << ',' << ev.src << ',' << ev.dst << ',' << to_string(ev.kind) << '\n';
  }
}

struct PairStats {
  std::uint64_t flit_count = 0;
  std::uint32_t hop_count = 0;

  std::uint64_t weight() const { return flit_count * hop_count; }
  bool operator==(const PairStats&) const = default;
};

using PairKey = std::pair<std::uint32_t, std::uint32_t>;

/// Per-pair traffic volume. Flit counts are at the full link width; the
/// simulator rescales to subnet widths itself.
struct TrafficProfile {
  Granularity granularity = Granularity::e2e;
  std::map<PairKey, PairStats> pairs;

  bool empty() const { return pairs.empty(); }
  std::uint64_t total_flits() const {
    std::uint64_t t = 0;
    for (const auto& [k, v] : pairs) t += v.flit_count;
    return t;
  }
  bool operator==(const TrafficProfile&) const = default;
};

inline std::uint32_t router_hops(const MeshConfig& mesh, RouterId a, RouterId b) {
  return a == b ? 0u : static_cast<std::uint32_t>(xy_route(a, b, mesh).hops());
}

inline TrafficProfile profile(const Trace& trace, const MeshConfig& mesh, Granularity g,
                              const PacketSizes& sizes = {}, std::uint32_t full_width_bits = 128) {
  TrafficProfile prof;
  prof.granularity = g;
  for (const auto& ev : trace) {
    const RouterId rs = mesh.router_of(ev.src);
    const RouterId rd = mesh.router_of(ev.dst);
    PairKey key = g == Granularity::e2e ? PairKey{ev.src, ev.dst} : PairKey{rs, rd};
    if (g == Granularity::r2r && rs == rd) continue;  // never leaves the router
    auto [it, fresh] = prof.pairs.try_emplace(key);
    if (fresh) it->second.hop_count = router_hops(mesh, rs, rd);
    it->second.flit_count += flits_for_packet(ev.kind, sizes, full_width_bits);
  }
  return prof;
}

inline void write_profile(std::ostream& out, const TrafficProfile& prof) {
  out << "# granularity=" << to_string(prof.granularity) << '\n';
  for (const auto& [k, v] : prof.pairs) {
    out << k.first << ',' << k.second << ',' << v.flit_count << ',' << v.hop_count << '\n';
  }
}

/// Reads `src,dst,flit_count,hop_count` lines. A `# granularity=` comment,
/// when present, overrides `g`.
inline TrafficProfile read_profile(std::istream& in, Granularity g = Granularity::e2e) {
  TrafficProfile prof;
  prof.granularity = g;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = detail::trim(line);
    if (t.starts_with("# granularity=")) {
      try {
        prof.granularity = parse_granularity(detail::trim(t.substr(14)));
      } catch (const DomainError& e) {
        throw InputError("profile line " + std::to_string(line_no) + ": " + e.what());
      }
      continue;
    }
    if (detail::skippable(t)) continue;
    const auto f = detail::split_csv(t);
    PairKey key;
    PairStats st;
    if (f.size() != 4 || !detail::parse_uint(f[0], key.first) || !detail::parse_uint(f[1], key.second) ||
        !detail::parse_uint(f[2], st.flit_count) || !detail::parse_uint(f[3], st.hop_count)) {
      throw InputError("profile line " + std::to_string(line_no) + ": expected src,dst,flit_count,hop_count");
    }
    if (key.first == key.second) throw InputError("profile line " + std::to_string(line_no) + ": src equals dst");
    prof.pairs[key].flit_count += st.flit_count;
    prof.pairs[key].hop_count = st.hop_count;
  }
  return prof;
}

}  // namespace hsnoc

#endif  // HSNOC_TRAFFIC_HPP
