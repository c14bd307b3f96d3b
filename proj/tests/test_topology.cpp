#include <gtest/gtest.h>

#include <random>

#include "hsnoc/topology.hpp"
#include "oracles.hpp"

using namespace hsnoc;

namespace {

std::string letters(const Path& p) {
  std::string s;
  for (const auto& l : p.links) s += direction_letter(l.direction);
  return s;
}

}  // namespace

TEST(Mesh, CountsAndMapping) {
  MeshConfig m(4, 4);
  EXPECT_EQ(m.router_count(), 16u);
  EXPECT_EQ(m.ni_count(), 16u);
  EXPECT_EQ(m.router_of(5), 5u);

  MeshConfig uneven(2, 1, {2, 3});
  EXPECT_EQ(uneven.ni_count(), 5u);
  EXPECT_EQ(uneven.router_of(1), 0u);
  EXPECT_EQ(uneven.router_of(2), 1u);
  EXPECT_EQ(uneven.local_index(4), 2u);
  EXPECT_THROW(uneven.router_of(5), DomainError);
}

TEST(Mesh, Cmp51HasFiftyOneInterfaces) {
  const auto m = MeshConfig::cmp51();
  EXPECT_EQ(m.ni_count(), 51u);
  EXPECT_EQ(m.router_count(), 16u);
  std::uint32_t total = 0;
  for (RouterId r = 0; r < 16; ++r) total += m.nis_at(r);
  EXPECT_EQ(total, 51u);
}

TEST(Mesh, RejectsBadShapes) {
  EXPECT_THROW(MeshConfig(0, 3), DomainError);
  EXPECT_THROW(MeshConfig(2, 2, {1, 1, 1}), DomainError);
}

TEST(XyRoute, StraightRow) {
  MeshConfig m(4, 4);
  const auto p = xy_route(m.router_at({0, 0}), m.router_at({3, 0}), m);
  EXPECT_EQ(letters(p), "EEE");
  EXPECT_EQ(p.hops(), 3);
}

TEST(XyRoute, XBeforeY) {
  MeshConfig m(4, 4);
  EXPECT_EQ(letters(xy_route(m.router_at({1, 1}), m.router_at({3, 2}), m)), "EEN");
  const auto back = xy_route(m.router_at({2, 3}), m.router_at({0, 0}), m);
  EXPECT_EQ(letters(back), "WWSSS");
  EXPECT_EQ(back.hops(), 5);
}

TEST(XyRoute, Errors) {
  MeshConfig m(4, 4);
  EXPECT_THROW(xy_route(3, 3, m), DomainError);
  EXPECT_THROW(xy_route(0, 16, m), DomainError);
}

TEST(XyRoute, MatchesCoordinateWalkEverywhere) {
  for (auto [w, h] : {std::pair{4, 4}, std::pair{3, 5}, std::pair{1, 6}, std::pair{6, 2}}) {
    MeshConfig m(w, h);
    for (RouterId a = 0; a < m.router_count(); ++a) {
      for (RouterId b = 0; b < m.router_count(); ++b) {
        if (a == b) continue;
        const auto p = xy_route(a, b, m);
        const auto ref = oracle::xy_hops(w, static_cast<int>(a), static_cast<int>(b));
        ASSERT_EQ(p.links.size(), ref.size());
        EXPECT_EQ(p.hops(), oracle::manhattan(w, static_cast<int>(a), static_cast<int>(b)));
        for (std::size_t i = 0; i < ref.size(); ++i) {
          const auto f = m.coord(p.links[i].from);
          const auto t = m.coord(p.links[i].to);
          EXPECT_EQ((oracle::Hop{f.x, f.y, t.x, t.y}), ref[i]);
        }
        EXPECT_EQ(p, xy_route(a, b, m));
      }
    }
  }
}

TEST(EnumeratePairs, Counts) {
  EXPECT_EQ(enumerate_pairs(MeshConfig::cmp51(), Granularity::e2e).size(), 2550u);
  EXPECT_EQ(enumerate_pairs(MeshConfig(4, 4), Granularity::r2r).size(), 240u);
  EXPECT_TRUE(enumerate_pairs(MeshConfig(1, 1), Granularity::e2e).empty());
  MeshConfig m(3, 2, {2, 1, 1, 3, 1, 1});
  const auto n = m.ni_count();
  EXPECT_EQ(enumerate_pairs(m, Granularity::e2e).size(), n * (n - 1));
}

TEST(LinksConflict, Examples) {
  MeshConfig m(4, 4);
  auto r = [&](int x, int y) { return m.router_at({x, y}); };
  EXPECT_FALSE(links_conflict(xy_route(r(0, 0), r(3, 0), m), xy_route(r(0, 2), r(3, 2), m)));
  EXPECT_TRUE(links_conflict(xy_route(r(0, 0), r(3, 0), m), xy_route(r(1, 0), r(2, 0), m)));
  EXPECT_FALSE(links_conflict(xy_route(r(0, 0), r(1, 1), m), xy_route(r(0, 1), r(1, 0), m)));
  // Opposite directions on the same wire pair are distinct channels.
  EXPECT_FALSE(links_conflict(xy_route(r(0, 0), r(1, 0), m), xy_route(r(1, 0), r(0, 0), m)));
}

TEST(LinksConflict, SymmetricReflexiveAndMatchesHopIntersection) {
  MeshConfig m(4, 3);
  std::mt19937 gen(7);
  std::uniform_int_distribution<RouterId> pick(0, m.router_count() - 1);
  for (int i = 0; i < 400; ++i) {
    RouterId a = pick(gen), b = pick(gen), c = pick(gen), d = pick(gen);
    if (a == b || c == d) continue;
    const auto p = xy_route(a, b, m);
    const auto q = xy_route(c, d, m);
    EXPECT_TRUE(links_conflict(p, p));
    EXPECT_EQ(links_conflict(p, q), links_conflict(q, p));
    const oracle::Request ra{static_cast<int>(a), static_cast<int>(b)};
    const oracle::Request rb{static_cast<int>(c), static_cast<int>(d)};
    EXPECT_EQ(links_conflict(p, q), oracle::conflict(4, ra, rb));
  }
}

TEST(Granularity, Parse) {
  EXPECT_EQ(parse_granularity("ni"), Granularity::e2e);
  EXPECT_EQ(parse_granularity("router"), Granularity::r2r);
  EXPECT_EQ(to_string(Granularity::r2r), "r2r");
  EXPECT_THROW(parse_granularity("mesh"), DomainError);
}
