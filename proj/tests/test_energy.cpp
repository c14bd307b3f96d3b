#include <gtest/gtest.h>

#include <sstream>

#include "hsnoc/energy.hpp"

using namespace hsnoc;

namespace {

// Two 64-bit subnets over 100 cycles on 4 routers, 640 bits delivered.
SimStats hand_stats() {
  SimStats s;
  s.cycles_simulated = 100;
  s.routers = 4;
  s.total_width_bits = 128;
  s.flit_bits_ejected = 640;
  SubnetCounters vc;
  vc.width_bits = 64;
  vc.buffer_writes = 10;
  vc.buffer_reads = 10;
  vc.vc_allocations = 2;
  vc.sw_allocations = 10;
  vc.crossbar_traversals = 10;
  vc.link_traversals = 8;
  vc.buffer_cycles_active = 1000;
  SubnetCounters cs;
  cs.width_bits = 64;
  cs.circuit_switched = true;
  cs.sw_allocations = 4;
  cs.crossbar_traversals = 12;
  cs.link_traversals = 9;
  cs.buffer_cycles_gated = 500;
  s.subnets = {vc, cs};
  return s;
}

SimStats run(const SubnetLayout& layout, double regularity, bool gate, std::uint64_t seed = 3) {
  const MeshConfig m(4, 4);
  SyntheticSpec spec;
  spec.pattern = Pattern::regular_mix;
  spec.regularity = regularity;
  spec.injection_rate = 0.05;
  const auto trace = generate(spec, m, seed, 4000);
  const auto plan = layout.cs_subnets() ? greedy_allocate(profile(trace, m, Granularity::e2e), m, layout.cs_subnets())
                                        : CircuitPlan::empty_plan(0);
  SimOptions o;
  o.gate_cs_buffers = gate;
  Simulator sim(m, layout, VcConfig{}, o);
  sim.load_trace(trace);
  sim.set_plan(plan);
  sim.drain(100000);
  return sim.snapshot();
}

}  // namespace

TEST(Account, HandComputedBreakdown) {
  const auto r = account(hand_stats(), SubnetLayout{128, 2}, EnergyCoefficients{});
  EXPECT_DOUBLE_EQ(r.buffer_dynamic, 10.0);    // half width x 20 events
  EXPECT_DOUBLE_EQ(r.allocation, 8.0);         // 16 events x 0.5
  EXPECT_DOUBLE_EQ(r.crossbar, 11.0);          // half width x 22
  EXPECT_NEAR(r.link, 10.88, 1e-12);           // 64 bits x 17 x 0.01
  EXPECT_DOUBLE_EQ(r.static_energy, 300.0);    // 1000 x 0.1 + 400 x 0.5
  EXPECT_DOUBLE_EQ(r.gated_savings, 50.0);
  EXPECT_NEAR(r.total_energy, 339.88, 1e-9);
  EXPECT_NEAR(r.per_flit(), 339.88 * 128 / 640, 1e-9);
  EXPECT_DOUBLE_EQ(r.total_energy, r.breakdown_sum());
}

TEST(Account, ZeroCoefficientsGiveZero) {
  const auto r = account(run(SubnetLayout{128, 2}, 0.7, true), SubnetLayout{128, 2}, EnergyCoefficients::zero());
  EXPECT_EQ(r.total_energy, 0.0);
  EXPECT_EQ(r.gated_savings, 0.0);
  ASSERT_TRUE(r.energy_per_flit);
  EXPECT_EQ(*r.energy_per_flit, 0.0);
}

TEST(Account, NothingEjectedLeavesPerFlitUndefined) {
  SimStats s = hand_stats();
  s.flit_bits_ejected = 0;
  const auto r = account(s, SubnetLayout{128, 2}, EnergyCoefficients{});
  EXPECT_FALSE(r.energy_per_flit);
  EXPECT_THROW(r.per_flit(), DomainError);
  EXPECT_THROW(normalize(account(hand_stats(), SubnetLayout{128, 2}, {}), r), DomainError);
}

TEST(Account, CircuitOnlyTrafficHasNoBufferEnergy) {
  // One circuit carries every packet.
  const MeshConfig m(4, 4);
  Trace t;
  for (std::uint64_t i = 0; i < 20; ++i) t.push_back({i * 10, 0, 15, PacketKind::data, i});
  CircuitPlan plan = CircuitPlan::empty_plan(1);
  plan.subnets[0] = {{0, 15}};
  Simulator sim(m, SubnetLayout{128, 2}, VcConfig{});
  sim.load_trace(t);
  sim.set_plan(plan);
  sim.drain(10000);
  const auto st = sim.snapshot();
  EXPECT_DOUBLE_EQ(st.percent_in_circuit(), 100.0);
  const auto r = account(st, SubnetLayout{128, 2}, EnergyCoefficients{});
  EXPECT_EQ(r.buffer_dynamic, 0.0);
  EXPECT_GT(r.link, 0.0);
}

TEST(Account, GatingLowersStaticByGatedBufferCycles) {
  const SubnetLayout layout{128, 4};
  const auto gated = run(layout, 0.8, true);
  const auto plain = run(layout, 0.8, false);
  const EnergyCoefficients k;
  const auto a = account(gated, layout, k);
  const auto b = account(plain, layout, k);
  ASSERT_GT(gated.gated_buffer_cycle_count(), 0u);
  EXPECT_EQ(plain.gated_buffer_cycle_count(), 0u);
  EXPECT_NEAR(b.static_energy - a.static_energy,
              static_cast<double>(gated.gated_buffer_cycle_count()) * k.p_buffer_static, 1e-6);
  EXPECT_DOUBLE_EQ(a.gated_savings, b.static_energy - a.static_energy);
  EXPECT_DOUBLE_EQ(a.dynamic(), b.dynamic());
}

TEST(Account, MonotoneInEachCoefficient) {
  const SubnetLayout layout{128, 2};
  const auto st = run(layout, 0.6, false);
  const auto base = account(st, layout, EnergyCoefficients{}).total_energy;
  EnergyCoefficients probe;
  probe.each([&](const char* name, double& v) {
    const double saved = v;
    v = saved * 2 + 1;
    EXPECT_GT(account(st, layout, probe).total_energy, base) << name;
    v = saved;
  });
}

TEST(Account, MoreCountsNeverCheaper) {
  SimStats s = hand_stats();
  const auto before = account(s, SubnetLayout{128, 2}, {}).total_energy;
  s.subnets[0].buffer_writes += 5;
  s.subnets[1].link_traversals += 1;
  EXPECT_GT(account(s, SubnetLayout{128, 2}, {}).total_energy, before);
}

TEST(Normalize, Examples) {
  const auto r = account(hand_stats(), SubnetLayout{128, 2}, {});
  EXPECT_DOUBLE_EQ(normalize(r, r), 1.0);
  const auto zero = account(hand_stats(), SubnetLayout{128, 2}, EnergyCoefficients::zero());
  EXPECT_DOUBLE_EQ(normalize(zero, r), 0.0);
  EXPECT_THROW(normalize(r, zero), DomainError);
}

TEST(Coefficients, ReadWriteAndErrors) {
  EnergyCoefficients k;
  k.e_crossbar = 2.5;
  k.p_router_other = 0.125;
  std::stringstream ss;
  write_coefficients(ss, k);
  EXPECT_EQ(read_coefficients(ss), k);

  std::istringstream partial("e_link_per_bit = 0.5\n");
  const auto p = read_coefficients(partial);
  EXPECT_DOUBLE_EQ(p.e_link_per_bit, 0.5);
  EXPECT_DOUBLE_EQ(p.e_buffer_write, EnergyCoefficients{}.e_buffer_write);

  std::istringstream unknown("e_teleport = 1\n");
  EXPECT_THROW(read_coefficients(unknown), InputError);
  std::istringstream junk("e_crossbar = lots\n");
  EXPECT_THROW(read_coefficients(junk), InputError);
  std::istringstream negative("e_crossbar = -1\n");
  EXPECT_THROW(read_coefficients(negative), ConfigError);
  std::istringstream garbled("[unclosed\n");
  EXPECT_THROW(read_coefficients(garbled), InputError);
}
