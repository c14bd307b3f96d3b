#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "hsnoc/allocator.hpp"
#include "oracles.hpp"

using namespace hsnoc;

namespace {

Candidate abstract(std::uint32_t id, std::uint64_t w, std::vector<std::uint32_t> res) {
  Candidate c;
  c.src = id;
  c.dst = id + 100;
  c.weight = w;
  c.resources = std::move(res);
  return c;
}

// A uses links {1,2}, B {2,3}, C {3,4}: A-B and B-C conflict.
std::vector<Candidate> abc(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::vector<Candidate> v{abstract(0, a, {1, 2}), abstract(1, b, {2, 3}), abstract(2, c, {3, 4})};
  std::stable_sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.weight > y.weight; });
  return v;
}

std::uint64_t oracle_abc(std::uint64_t a, std::uint64_t b, std::uint64_t c, int k) {
  std::vector<std::vector<bool>> adj{{false, true, false}, {true, false, true}, {false, true, false}};
  return oracle::best_weight({a, b, c}, adj, k);
}

bool selected(const CircuitPlan& p, std::uint32_t id) { return p.contains({id, id + 100}); }

TrafficProfile random_profile(const MeshConfig& m, Granularity g, std::mt19937& gen, double density) {
  TrafficProfile p;
  p.granularity = g;
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<std::uint64_t> flits(1, 200);
  for (const auto& [s, d] : enumerate_pairs(m, g)) {
    if (u(gen) > density) continue;
    const RouterId rs = g == Granularity::e2e ? m.router_of(s) : s;
    const RouterId rd = g == Granularity::e2e ? m.router_of(d) : d;
    p.pairs[{s, d}] = {flits(gen), static_cast<std::uint32_t>(m.distance(rs, rd))};
  }
  return p;
}

std::vector<oracle::Request> requests(std::span<const Candidate> cands, const MeshConfig& m, Granularity g) {
  std::vector<oracle::Request> out;
  for (const auto& c : cands) {
    oracle::Request r;
    r.weight = c.weight;
    if (g == Granularity::e2e) {
      r.src_router = static_cast<int>(m.router_of(c.src));
      r.dst_router = static_cast<int>(m.router_of(c.dst));
      r.src_port = static_cast<int>(c.src);
      r.dst_port = static_cast<int>(c.dst);
    } else {
      r.src_router = static_cast<int>(c.src);
      r.dst_router = static_cast<int>(c.dst);
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST(Greedy, EmptyProfile) {
  TrafficProfile p;
  const auto plan = greedy_allocate(p, MeshConfig(4, 4), 3);
  EXPECT_EQ(plan.subnet_count(), 3u);
  EXPECT_TRUE(plan.empty());
  EXPECT_EQ(plan_weight(plan, p), 0u);
}

TEST(Greedy, AbcOneSubnet) {
  const auto c = abc(30, 20, 10);
  const auto plan = greedy_on_candidates(c, 1, Granularity::e2e);
  EXPECT_TRUE(selected(plan, 0));
  EXPECT_FALSE(selected(plan, 1));
  EXPECT_TRUE(selected(plan, 2));
  EXPECT_EQ(plan_weight(plan, c), 40u);
}

TEST(Greedy, AbcTwoSubnets) {
  const auto c = abc(30, 20, 10);
  const auto plan = greedy_on_candidates(c, 2, Granularity::e2e);
  ASSERT_EQ(plan.subnets.size(), 2u);
  EXPECT_EQ(plan.subnets[0], (std::vector<Circuit>{{0, 100}, {2, 102}}));
  EXPECT_EQ(plan.subnets[1], (std::vector<Circuit>{{1, 101}}));
}

TEST(Decode, Examples) {
  const auto c = abc(30, 20, 10);  // sweep order A, B, C
  EXPECT_TRUE(decode({0, 0, 0}, c, 1).empty());
  EXPECT_TRUE(decode({1, 1, 1}, c, 1, Granularity::e2e).same_circuits(greedy_on_candidates(c, 1, Granularity::e2e)));
  // B and C share link 3, so asking for both keeps only the heavier B.
  const auto bc = decode({0, 1, 1}, c, 1);
  EXPECT_TRUE(selected(bc, 1));
  EXPECT_FALSE(selected(bc, 2));
  EXPECT_EQ(plan_weight(bc, c), 20u);
  EXPECT_THROW(decode({1, 1}, c, 1), DomainError);
}

TEST(PlanWeight, CountsListedCircuits) {
  const auto c = abc(30, 20, 10);
  CircuitPlan p = CircuitPlan::empty_plan(1);
  p.subnets[0] = {{1, 101}, {2, 102}};
  EXPECT_EQ(plan_weight(p, c), 30u);
  p.subnets[0].push_back({7, 8});
  EXPECT_THROW(plan_weight(p, c), DomainError);
}

TEST(Oracle, AbcExamples) {
  const auto c = abc(30, 20, 10);
  EXPECT_EQ(plan_weight(oracle_on_candidates(c, 1, Granularity::e2e), c), 40u);
  EXPECT_EQ(plan_weight(oracle_on_candidates(c, 2, Granularity::e2e), c), 60u);
  EXPECT_TRUE(oracle_on_candidates({}, 1, Granularity::e2e).empty());
  EXPECT_EQ(oracle_abc(30, 20, 10, 1), 40u);
  EXPECT_EQ(oracle_abc(30, 20, 10, 2), 60u);
}

TEST(Oracle, GreedyCanBeBeaten) {
  // B is heaviest and blocks both A and C.
  const auto c = abc(15, 20, 10);
  EXPECT_EQ(plan_weight(greedy_on_candidates(c, 1, Granularity::e2e), c), 20u);
  EXPECT_EQ(plan_weight(oracle_on_candidates(c, 1, Granularity::e2e), c), oracle_abc(15, 20, 10, 1));
  EXPECT_EQ(oracle_abc(15, 20, 10, 1), 25u);
}

TEST(Oracle, RefusesLargeInputs) {
  std::vector<Candidate> many;
  for (std::uint32_t i = 0; i < 21; ++i) many.push_back(abstract(i, 21 - i, {i}));
  EXPECT_THROW(oracle_on_candidates(many, 1, Granularity::e2e, 20), RefusalError);
  EXPECT_THROW(oracle_on_candidates(many, 1, Granularity::e2e, 21), DomainError);
  many.pop_back();
  EXPECT_EQ(oracle_on_candidates(many, 1, Granularity::e2e).circuit_count(), 20u);
}

TEST(Oracle, MatchesBruteForceOnMeshes) {
  std::mt19937 gen(123);
  for (int trial = 0; trial < 30; ++trial) {
    const bool router = trial % 2 == 0;
    const MeshConfig m = router ? MeshConfig(2, 3) : MeshConfig(2, 2, {2, 1, 1, 1});
    const Granularity g = router ? Granularity::r2r : Granularity::e2e;
    auto cands = build_candidates(random_profile(m, g, gen, 0.6), m);
    if (cands.size() > 12) cands.resize(12);
    const int k = 1 + trial % 3;
    const auto plan = oracle_on_candidates(cands, static_cast<std::size_t>(k), g);
    EXPECT_EQ(plan_violation(plan, m), "");
    EXPECT_EQ(plan_weight(plan, cands), oracle::best_weight(m.width(), requests(cands, m, g), k)) << trial;
  }
}

TEST(Candidates, OrderAndResources) {
  const MeshConfig m(3, 3);
  TrafficProfile p;
  p.granularity = Granularity::e2e;
  p.pairs[{0, 2}] = {10, 2};
  p.pairs[{1, 2}] = {20, 1};
  p.pairs[{3, 5}] = {5, 4};
  p.pairs[{4, 7}] = {0, 1};
  const auto c = build_candidates(p, m);
  ASSERT_EQ(c.size(), 3u);
  // All three weigh 20, so ties fall back to (src, dst) order.
  EXPECT_EQ(std::pair(c[0].src, c[0].dst), std::pair(0u, 2u));
  EXPECT_EQ(std::pair(c[1].src, c[1].dst), std::pair(1u, 2u));
  EXPECT_EQ(c[2].weight, 20u);
  // e2e circuits also hold their two NI ports.
  EXPECT_EQ(c[0].resources.size(), 2u + 2u);
}

TEST(Candidates, E2eSharedNiConflicts) {
  // NI 0 -> east and NI 0 -> north share no link but share NI 0's port.
  const MeshConfig m(2, 2);
  TrafficProfile p;
  p.pairs[{0, 1}] = {10, 1};
  p.pairs[{0, 2}] = {9, 1};
  const auto plan = greedy_allocate(p, m, 1);
  EXPECT_EQ(plan.circuit_count(), 1u);
  EXPECT_EQ(greedy_allocate(p, m, 2).circuit_count(), 2u);

  CircuitPlan bad = CircuitPlan::empty_plan(1);
  bad.subnets[0] = {{0, 1}, {0, 2}};
  EXPECT_NE(plan_violation(bad, m), "");
}

TEST(Candidates, R2rSharesEndpointRouters) {
  // At router granularity the end routers arbitrate: 0->1 and 0->2 coexist.
  const MeshConfig m(2, 2);
  TrafficProfile p;
  p.granularity = Granularity::r2r;
  p.pairs[{0, 1}] = {10, 1};
  p.pairs[{0, 2}] = {9, 1};
  const auto plan = greedy_allocate(p, m, 1);
  EXPECT_EQ(plan.circuit_count(), 2u);
  EXPECT_EQ(plan_violation(plan, m), "");
}

TEST(PlanViolation, Detects) {
  const MeshConfig m(4, 4);
  CircuitPlan p = CircuitPlan::empty_plan(2, Granularity::r2r);
  p.subnets[0] = {{0, 3}, {1, 2}};
  EXPECT_NE(plan_violation(p, m), "");
  p.subnets[0] = {{0, 3}};
  p.subnets[1] = {{1, 2}};
  EXPECT_EQ(plan_violation(p, m), "");
  p.subnets[1].push_back({0, 3});
  EXPECT_NE(plan_violation(p, m), "");  // same pair twice
  p.subnets[1] = {{5, 5}};
  EXPECT_NE(plan_violation(p, m), "");
  p.subnets[1] = {{0, 16}};
  EXPECT_NE(plan_violation(p, m), "");
}

TEST(AllocatorProperties, EmittedPlansAreFeasibleAndOrdered) {
  std::mt19937 gen(99);
  GaParams params;
  params.generations = 200;
  for (int trial = 0; trial < 20; ++trial) {
    const Granularity g = trial % 2 ? Granularity::r2r : Granularity::e2e;
    const MeshConfig m = g == Granularity::r2r ? MeshConfig(4, 4) : MeshConfig::cmp51();
    const auto prof = random_profile(m, g, gen, g == Granularity::r2r ? 0.5 : 0.05);
    const std::size_t k = 1 + trial % 4;
    params.seed = static_cast<std::uint64_t>(trial);
    const auto greedy = greedy_allocate(prof, m, k);
    const auto ga = ga_allocate(prof, m, k, params);
    EXPECT_EQ(plan_violation(greedy, m), "");
    EXPECT_EQ(plan_violation(ga.plan, m), "");
    EXPECT_LE(plan_weight(greedy, prof), plan_weight(ga.plan, prof));
    EXPECT_EQ(plan_weight(ga.plan, prof), ga.best_fitness);
    for (std::size_t i = 1; i < ga.best_fitness_trace.size(); ++i) {
      EXPECT_LE(ga.best_fitness_trace[i - 1], ga.best_fitness_trace[i]);
    }
  }
}

TEST(AllocatorProperties, GreedyInvariantUnderScaling) {
  std::mt19937 gen(5);
  const MeshConfig m(4, 4);
  for (int trial = 0; trial < 10; ++trial) {
    auto prof = random_profile(m, Granularity::r2r, gen, 0.4);
    auto scaled = prof;
    for (auto& [k, v] : scaled.pairs) v.flit_count *= 7;
    EXPECT_TRUE(greedy_allocate(prof, m, 2).same_circuits(greedy_allocate(scaled, m, 2)));
  }
}

TEST(Ga, DeterministicAndEqualToGreedyWhenAllConflict) {
  // All candidates share resource 0: any feasible plan has one circuit.
  std::vector<Candidate> c;
  for (std::uint32_t i = 0; i < 6; ++i) c.push_back(abstract(i, 60 - 10 * i, {0, i + 1}));
  GaParams params;
  params.generations = 300;
  const auto a = ga_on_candidates(c, 1, Granularity::e2e, params);
  const auto b = ga_on_candidates(c, 1, Granularity::e2e, params);
  EXPECT_TRUE(a.plan.same_circuits(b.plan));
  EXPECT_EQ(a.best_fitness_trace, b.best_fitness_trace);
  EXPECT_EQ(a.best_fitness, 60u);
  EXPECT_TRUE(a.plan.same_circuits(greedy_on_candidates(c, 1, Granularity::e2e)));
  EXPECT_EQ(a.best_fitness_trace.size(), params.generations + 1);
}

TEST(Ga, TwoByTwoRouterMeshReachesOptimum) {
  const MeshConfig m(2, 2);
  std::mt19937 gen(17);
  const auto prof = random_profile(m, Granularity::r2r, gen, 1.0);
  const auto cands = build_candidates(prof, m);
  ASSERT_EQ(cands.size(), 12u);
  GaParams params;
  const auto ga = ga_on_candidates(cands, 1, Granularity::r2r, params);
  EXPECT_EQ(ga.best_fitness, oracle::best_weight(2, requests(cands, m, Granularity::r2r), 1));
}

TEST(Ga, ParamsValidate) {
  GaParams p;
  p.population_size = 1;
  EXPECT_THROW(p.validate(), DomainError);
  p = {};
  p.crossover_rate_min = 0.8;
  EXPECT_THROW(p.validate(), DomainError);
  p = {};
  p.per_gene_flip_rate = 1.5;
  EXPECT_THROW(p.validate(), DomainError);
}

TEST(PlanFile, RoundTripAndErrors) {
  CircuitPlan p = CircuitPlan::empty_plan(2, Granularity::r2r);
  p.subnets[0] = {{0, 3}};
  p.subnets[1] = {{1, 2}, {4, 5}};
  std::stringstream ss;
  write_plan(ss, p);
  const auto back = read_plan(ss);
  EXPECT_TRUE(back.same_circuits(p));
  EXPECT_EQ(back.provenance, Provenance::manual);

  std::istringstream no_header("0,1,2\n");
  EXPECT_THROW(read_plan(no_header), InputError);
  std::istringstream out_of_range("granularity=e2e subnets=1\n3,1,2\n");
  EXPECT_THROW(read_plan(out_of_range), InputError);
  std::istringstream bad_g("granularity=mesh subnets=1\n");
  EXPECT_THROW(read_plan(bad_g), InputError);
}
