#ifndef HSNOC_ALLOCATOR_HPP
#define HSNOC_ALLOCATOR_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hsnoc/errors.hpp"
#include "hsnoc/random.hpp"
#include "hsnoc/topology.hpp"
#include "hsnoc/traffic.hpp"

namespace hsnoc {

enum class Provenance : std::uint8_t { greedy, ga, oracle, manual };

inline std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::greedy: return "greedy";
    case Provenance::ga: return "ga";
    case Provenance::oracle: return "oracle";
    case Provenance::manual: return "manual";
  }
  return "?";
}

/// A source/destination pair that may become a circuit. `resources` is the
/// sorted set of exclusive resources the circuit occupies inside one subnet:
/// directed links, plus the two NI local ports for e2e circuits.
struct Candidate {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  std::uint64_t weight = 0;
  Path path;
  std::vector<std::uint32_t> resources;
};

struct Circuit {
  std::uint32_t src = 0;
  std::uint32_t dst = 0;
  auto operator<=>(const Circuit&) const = default;
};

struct CircuitPlan {
  Granularity granularity = Granularity::e2e;
  std::vector<std::vector<Circuit>> subnets;
  Provenance provenance = Provenance::manual;

  static CircuitPlan empty_plan(std::size_t k, Granularity g = Granularity::e2e) {
    CircuitPlan p;
    p.granularity = g;
    p.subnets.resize(k);
    return p;
  }

  std::size_t subnet_count() const { return subnets.size(); }
  std::size_t circuit_count() const {
    std::size_t n = 0;
    for (const auto& s : subnets) n += s.size();
    return n;
  }
  bool empty() const { return circuit_count() == 0; }

  bool contains(const Circuit& c) const {
    for (const auto& s : subnets) {
      if (std::find(s.begin(), s.end(), c) != s.end()) return true;
    }
    return false;
  }

  /// Same circuits in the same subnets; provenance is ignored.
  bool same_circuits(const CircuitPlan& o) const {
    return granularity == o.granularity && subnets == o.subnets;
  }
};

/// Candidates in sweep order: descending weight, then ascending (src, dst).
/// Zero-weight pairs carry no hops or no flits and are dropped.
inline std::vector<Candidate> build_candidates(const TrafficProfile& prof, const MeshConfig& mesh) {
  std::vector<Candidate> out;
  const std::uint32_t links = mesh.link_id_space();
  for (const auto& [key, st] : prof.pairs) {
    if (st.weight() == 0) continue;
    Candidate c;
    c.src = key.first;
    c.dst = key.second;
    c.weight = st.weight();
    RouterId rs = key.first;
    RouterId rd = key.second;
    if (prof.granularity == Granularity::e2e) {
      if (!mesh.valid_ni(key.first) || !mesh.valid_ni(key.second)) throw DomainError("profile NI out of range");
      rs = mesh.router_of(key.first);
      rd = mesh.router_of(key.second);
    } else if (!mesh.valid_router(rs) || !mesh.valid_router(rd)) {
      throw DomainError("profile router out of range");
    }
    if (rs == rd) continue;
    c.path = xy_route(rs, rd, mesh);
    for (const auto& l : c.path.links) c.resources.push_back(l.id());
    // An e2e circuit also owns the local ports of its two NIs.
    if (prof.granularity == Granularity::e2e) {
      c.resources.push_back(links + c.src);
      c.resources.push_back(links + mesh.ni_count() + c.dst);
    }
    std::sort(c.resources.begin(), c.resources.end());
    out.push_back(std::move(c));
  }
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.weight != b.weight) return a.weight > b.weight;
    return std::pair(a.src, a.dst) < std::pair(b.src, b.dst);
  });
  return out;
}

namespace detail {

inline std::uint32_t resource_space(std::span<const Candidate> cands) {
  std::uint32_t hi = 0;
  for (const auto& c : cands) {
    if (!c.resources.empty()) hi = std::max(hi, c.resources.back() + 1);
  }
  return hi;
}

/// Per-subnet occupancy bitsets for first-fit packing.
class SubnetPacker {
 public:
  SubnetPacker(std::size_t k, std::uint32_t resources)
      : words_((resources + 63) / 64), used_(k * words_, 0), k_(k) {}

  bool fits(std::size_t subnet, const Candidate& c) const {
    const std::uint64_t* row = used_.data() + subnet * words_;
    for (auto r : c.resources) {
      if (row[r >> 6] & (1ULL << (r & 63))) return false;
    }
    return true;
  }

  void set(std::size_t subnet, const Candidate& c, bool on) {
    std::uint64_t* row = used_.data() + subnet * words_;
    for (auto r : c.resources) {
      if (on) {
        row[r >> 6] |= 1ULL << (r & 63);
      } else {
        row[r >> 6] &= ~(1ULL << (r & 63));
      }
    }
  }

  /// First subnet that admits c, or -1.
  int place(const Candidate& c) {
    for (std::size_t s = 0; s < k_; ++s) {
      if (fits(s, c)) {
        set(s, c, true);
        return static_cast<int>(s);
      }
    }
    return -1;
  }

  std::size_t subnets() const { return k_; }

 private:
  std::size_t words_;
  std::vector<std::uint64_t> used_;
  std::size_t k_;
};

struct Packing {
  std::vector<int> subnet_of;  // -1 when not placed
  std::uint64_t weight = 0;
};

/// Weight-ordered first-fit of the selected candidates; unpackable ones are
/// dropped. `cands` must already be in sweep order.
inline Packing first_fit(std::span<const Candidate> cands, std::size_t k, std::span<const std::uint8_t> selected,
                         std::uint32_t resources) {
  Packing out;
  out.subnet_of.assign(cands.size(), -1);
  SubnetPacker packer(k, resources);
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (!selected[i]) continue;
    const int s = packer.place(cands[i]);
    if (s >= 0) {
      out.subnet_of[i] = s;
      out.weight += cands[i].weight;
    }
  }
  return out;
}

inline CircuitPlan to_plan(std::span<const Candidate> cands, const std::vector<int>& subnet_of, std::size_t k,
                           Granularity g, Provenance prov) {
  CircuitPlan plan = CircuitPlan::empty_plan(k, g);
  plan.provenance = prov;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    if (subnet_of[i] >= 0) plan.subnets[static_cast<std::size_t>(subnet_of[i])].push_back({cands[i].src, cands[i].dst});
  }
  return plan;
}

}  // namespace detail

using Chromosome = std::vector<std::uint8_t>;

/// Decodes a selection bitset into a feasible plan (repair by drop).
inline CircuitPlan decode(const Chromosome& chromosome, std::span<const Candidate> cands, std::size_t k,
                          Granularity g = Granularity::e2e, Provenance prov = Provenance::ga) {
  if (chromosome.size() != cands.size()) throw DomainError("decode: chromosome length differs from candidate count");
  const auto packing = detail::first_fit(cands, k, chromosome, detail::resource_space(cands));
  return detail::to_plan(cands, packing.subnet_of, k, g, prov);
}

/// Greedy sweep over candidates in sweep order; `excluded` removes one
/// candidate index before the sweep.
inline CircuitPlan greedy_on_candidates(std::span<const Candidate> cands, std::size_t k, Granularity g,
                                        std::optional<std::size_t> excluded = std::nullopt) {
  if (k < 1) throw DomainError("greedy_allocate: need at least one CS subnet");
  Chromosome all(cands.size(), 1);
  if (excluded && *excluded < all.size()) all[*excluded] = 0;
  return decode(all, cands, k, g, Provenance::greedy);
}

inline CircuitPlan greedy_allocate(const TrafficProfile& prof, const MeshConfig& mesh, std::size_t k) {
  const auto cands = build_candidates(prof, mesh);
  return greedy_on_candidates(cands, k, prof.granularity);
}

/// Sum of profile weights over every circuit of the plan.
inline std::uint64_t plan_weight(const CircuitPlan& plan, const TrafficProfile& prof) {
  std::uint64_t w = 0;
  for (const auto& subnet : plan.subnets) {
    for (const auto& c : subnet) {
      const auto it = prof.pairs.find({c.src, c.dst});
      if (it == prof.pairs.end()) {
        throw DomainError("plan_weight: pair " + std::to_string(c.src) + "->" + std::to_string(c.dst) +
                          " missing from profile");
      }
      w += it->second.weight();
    }
  }
  return w;
}

/// Weight of a plan whose circuits are drawn from `cands`.
inline std::uint64_t plan_weight(const CircuitPlan& plan, std::span<const Candidate> cands) {
  std::uint64_t w = 0;
  for (const auto& subnet : plan.subnets) {
    for (const auto& c : subnet) {
      const auto it = std::find_if(cands.begin(), cands.end(),
                                   [&](const Candidate& x) { return x.src == c.src && x.dst == c.dst; });
      if (it == cands.end()) throw DomainError("plan_weight: circuit not among candidates");
      w += it->weight;
    }
  }
  return w;
}

struct GaParams {
  std::size_t population_size = 10;
  std::size_t generations = 5000;
  double crossover_rate_min = 0.3;
  double crossover_rate_max = 0.7;
  double chromosome_mutation_probability = 0.5;
  /// Unset means 1 / number of candidates.
  std::optional<double> per_gene_flip_rate;
  std::size_t elitism_count = 1;
  std::uint64_t seed = 1;

  void validate() const {
    auto unit = [](double r) { return r >= 0.0 && r <= 1.0; };
    if (population_size < 2) throw DomainError("GA population_size must be at least 2");
    if (!unit(crossover_rate_min) || !unit(crossover_rate_max) || crossover_rate_min > crossover_rate_max) {
      throw DomainError("GA crossover range must be an ordered pair in [0, 1]");
    }
    if (!unit(chromosome_mutation_probability)) throw DomainError("GA mutation probability outside [0, 1]");
    if (per_gene_flip_rate && !unit(*per_gene_flip_rate)) throw DomainError("GA per-gene flip rate outside [0, 1]");
    if (elitism_count >= population_size) throw DomainError("GA elitism_count must be below population_size");
  }
};

struct GaResult {
  CircuitPlan plan;
  std::uint64_t best_fitness = 0;
  /// Best fitness in the population after initialization and after each generation.
  std::vector<std::uint64_t> best_fitness_trace;
};

/// Genetic search over selection bitsets. The population starts from greedy
/// solutions: pure greedy plus greedy with each of the top-ranked pairs
/// excluded in turn.
inline GaResult ga_on_candidates(std::span<const Candidate> cands, std::size_t k, Granularity g,
                                 const GaParams& params) {
  params.validate();
  if (k < 1) throw DomainError("ga_allocate: need at least one CS subnet");
  const std::size_t n = cands.size();
  GaResult result;
  if (n == 0) {
    result.plan = CircuitPlan::empty_plan(k, g);
    result.plan.provenance = Provenance::ga;
    result.best_fitness_trace.assign(params.generations + 1, 0);
    return result;
  }
  const std::uint32_t resources = detail::resource_space(cands);
  const double flip_rate = params.per_gene_flip_rate.value_or(1.0 / static_cast<double>(n));
  Rng rng(params.seed);

  auto fitness_of = [&](const Chromosome& ch) { return detail::first_fit(cands, k, ch, resources).weight; };
  auto greedy_seed = [&](std::optional<std::size_t> excluded) {
    Chromosome all(n, 1);
    if (excluded && *excluded < n) all[*excluded] = 0;
    const auto packing = detail::first_fit(cands, k, all, resources);
    Chromosome chosen(n, 0);
    for (std::size_t i = 0; i < n; ++i) chosen[i] = packing.subnet_of[i] >= 0 ? 1 : 0;
    return chosen;
  };
  auto mutate = [&](Chromosome& ch) {
    for (auto& gene : ch) {
      if (bernoulli(rng, flip_rate)) gene ^= 1;
    }
  };

  std::vector<Chromosome> pop;
  pop.reserve(params.population_size);
  constexpr std::size_t kGreedySeeds = 10;
  for (std::size_t i = 0; i < std::min(params.population_size, kGreedySeeds); ++i) {
    pop.push_back(greedy_seed(i == 0 ? std::nullopt : std::optional<std::size_t>(i - 1)));
  }
  while (pop.size() < params.population_size) {
    Chromosome extra = pop.front();
    mutate(extra);
    pop.push_back(std::move(extra));
  }
  std::vector<std::uint64_t> fit(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) fit[i] = fitness_of(pop[i]);

  auto ranking = [&] {
    std::vector<std::size_t> idx(pop.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fit[a] > fit[b]; });
    return idx;
  };
  auto tournament = [&]() -> const Chromosome& {
    const auto a = uniform_index(rng, pop.size());
    const auto b = uniform_index(rng, pop.size());
    return fit[b] > fit[a] ? pop[b] : pop[a];
  };

  auto order = ranking();
  result.best_fitness_trace.reserve(params.generations + 1);
  result.best_fitness_trace.push_back(fit[order.front()]);

  for (std::size_t gen = 0; gen < params.generations; ++gen) {
    std::vector<Chromosome> next;
    next.reserve(pop.size());
    for (std::size_t e = 0; e < params.elitism_count; ++e) next.push_back(pop[order[e]]);
    while (next.size() < pop.size()) {
      Chromosome c1 = tournament();
      Chromosome c2 = tournament();
      const double exchange = uniform_real(rng, params.crossover_rate_min, params.crossover_rate_max);
      for (std::size_t i = 0; i < n; ++i) {
        if (bernoulli(rng, exchange)) std::swap(c1[i], c2[i]);
      }
      if (bernoulli(rng, params.chromosome_mutation_probability)) mutate(c1);
      if (bernoulli(rng, params.chromosome_mutation_probability)) mutate(c2);
      next.push_back(std::move(c1));
      if (next.size() < pop.size()) next.push_back(std::move(c2));
    }
    pop = std::move(next);
    for (std::size_t i = 0; i < pop.size(); ++i) fit[i] = fitness_of(pop[i]);
    order = ranking();
    result.best_fitness_trace.push_back(fit[order.front()]);
  }

  const auto& best = pop[order.front()];
  result.best_fitness = fit[order.front()];
  result.plan = decode(best, cands, k, g, Provenance::ga);
  return result;
}

inline GaResult ga_allocate(const TrafficProfile& prof, const MeshConfig& mesh, std::size_t k,
                            const GaParams& params) {
  const auto cands = build_candidates(prof, mesh);
  return ga_on_candidates(cands, k, prof.granularity, params);
}

/// Exact maximum-weight feasible plan by branch-and-bound over subnet
/// assignments. Test oracle only: exponential in the candidate count.
inline CircuitPlan oracle_on_candidates(std::span<const Candidate> cands, std::size_t k, Granularity g,
                                        std::size_t max_pairs = 20) {
  if (max_pairs > 20) throw DomainError("enumerate_oracle: max_pairs limit is 20");
  if (cands.size() > max_pairs) {
    throw RefusalError("enumerate_oracle: " + std::to_string(cands.size()) + " candidates exceed limit " +
                       std::to_string(max_pairs));
  }
  if (k < 1) throw DomainError("enumerate_oracle: need at least one CS subnet");
  const std::size_t n = cands.size();
  std::vector<std::uint64_t> suffix(n + 1, 0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + cands[i].weight;

  detail::SubnetPacker packer(k, detail::resource_space(cands));
  std::vector<int> current(n, -1);
  std::vector<int> best(n, -1);
  std::uint64_t best_weight = 0;
  bool have_best = false;

  // Subnets are interchangeable, so a candidate may open at most one new
  // (previously empty) subnet: the first one.
  auto search = [&](auto&& self, std::size_t i, std::uint64_t weight, std::size_t opened) -> void {
    if (have_best && weight + suffix[i] <= best_weight) return;
    if (i == n) {
      best = current;
      best_weight = weight;
      have_best = true;
      return;
    }
    const std::size_t limit = std::min(k, opened + 1);
    for (std::size_t s = 0; s < limit; ++s) {
      if (!packer.fits(s, cands[i])) continue;
      packer.set(s, cands[i], true);
      current[i] = static_cast<int>(s);
      self(self, i + 1, weight + cands[i].weight, std::max(opened, s + 1));
      packer.set(s, cands[i], false);
      current[i] = -1;
    }
    self(self, i + 1, weight, opened);
  };
  search(search, 0, 0, 0);
  return detail::to_plan(cands, best, k, g, Provenance::oracle);
}

inline CircuitPlan enumerate_oracle(const TrafficProfile& prof, const MeshConfig& mesh, std::size_t k,
                                    std::size_t max_pairs = 20) {
  const auto cands = build_candidates(prof, mesh);
  return oracle_on_candidates(cands, k, prof.granularity, max_pairs);
}

/// Circuit endpoints mapped to routers for the plan's granularity.
inline std::pair<RouterId, RouterId> circuit_routers(const Circuit& c, Granularity g, const MeshConfig& mesh) {
  if (g == Granularity::e2e) return {mesh.router_of(c.src), mesh.router_of(c.dst)};
  return {c.src, c.dst};
}

/// Post-hoc feasibility check, independent of the packers above: endpoints
/// valid, no pair in two places, and no two circuits of one subnet conflict.
/// Returns an empty string when the plan is valid.
inline std::string plan_violation(const CircuitPlan& plan, const MeshConfig& mesh) {
  std::vector<Circuit> seen;
  for (std::size_t s = 0; s < plan.subnets.size(); ++s) {
    std::vector<Path> paths;
    std::vector<Circuit> here;
    for (const auto& c : plan.subnets[s]) {
      const bool ok = plan.granularity == Granularity::e2e ? (mesh.valid_ni(c.src) && mesh.valid_ni(c.dst))
                                                           : (mesh.valid_router(c.src) && mesh.valid_router(c.dst));
      if (!ok) return "circuit endpoint out of range";
      if (c.src == c.dst) return "circuit with identical endpoints";
      if (std::find(seen.begin(), seen.end(), c) != seen.end()) return "pair appears twice in plan";
      seen.push_back(c);
      const auto [rs, rd] = circuit_routers(c, plan.granularity, mesh);
      if (rs == rd) return "circuit does not leave its router";
      if (plan.granularity == Granularity::e2e) {
        for (const auto& o : here) {
          if (o.src == c.src || o.dst == c.dst) return "circuits share an NI port in subnet " + std::to_string(s);
        }
        here.push_back(c);
      }
      Path p = xy_route(rs, rd, mesh);
      for (const auto& q : paths) {
        if (links_conflict(p, q)) {
          return "conflicting circuits in subnet " + std::to_string(s);
        }
      }
      paths.push_back(std::move(p));
    }
  }
  return {};
}

inline void write_plan(std::ostream& out, const CircuitPlan& plan) {
  out << "granularity=" << to_string(plan.granularity) << " subnets=" << plan.subnet_count() << '\n';
  for (std::size_t s = 0; s < plan.subnets.size(); ++s) {
    for (const auto& c : plan.subnets[s]) out << s << ',' << c.src << ',' << c.dst << '\n';
  }
}

inline CircuitPlan read_plan(std::istream& in) {
  CircuitPlan plan;
  plan.provenance = Provenance::manual;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::skippable(line)) continue;
    const auto t = detail::trim(line);
    if (!have_header) {
      std::istringstream hs{std::string(t)};
      std::string g_tok;
      std::string k_tok;
      hs >> g_tok >> k_tok;
      std::size_t k = 0;
      if (!g_tok.starts_with("granularity=") || !k_tok.starts_with("subnets=") ||
          !detail::parse_uint(std::string_view(k_tok).substr(8), k)) {
        throw InputError("plan line " + std::to_string(line_no) + ": expected 'granularity=<e2e|r2r> subnets=<k>'");
      }
      try {
        plan.granularity = parse_granularity(std::string_view(g_tok).substr(12));
      } catch (const DomainError& e) {
        throw InputError("plan line " + std::to_string(line_no) + ": " + e.what());
      }
      plan.subnets.resize(k);
      have_header = true;
      continue;
    }
    const auto f = detail::split_csv(t);
    std::size_t s = 0;
    Circuit c;
    if (f.size() != 3 || !detail::parse_uint(f[0], s) || !detail::parse_uint(f[1], c.src) ||
        !detail::parse_uint(f[2], c.dst)) {
      throw InputError("plan line " + std::to_string(line_no) + ": expected subnet_index,src,dst");
    }
    if (s >= plan.subnets.size()) throw InputError("plan line " + std::to_string(line_no) + ": subnet index out of range");
    plan.subnets[s].push_back(c);
  }
  if (!have_header) throw InputError("plan file has no header");
  return plan;
}

}  // namespace hsnoc

#endif  // HSNOC_ALLOCATOR_HPP
