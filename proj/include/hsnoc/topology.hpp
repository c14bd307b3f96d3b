#ifndef HSNOC_TOPOLOGY_HPP
#define HSNOC_TOPOLOGY_HPP

#include <algorithm>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hsnoc/errors.hpp"

namespace hsnoc {

using RouterId = std::uint32_t;
using NodeId = std::uint32_t;

enum class Direction : std::uint8_t { east = 0, west = 1, north = 2, south = 3 };

inline constexpr int kMeshPorts = 4;

inline constexpr Direction opposite(Direction d) {
  switch (d) {
    case Direction::east: return Direction::west;
    case Direction::west: return Direction::east;
    case Direction::north: return Direction::south;
    case Direction::south: return Direction::north;
  }
  return d;
}

inline constexpr char direction_letter(Direction d) {
  constexpr char letters[] = {'E', 'W', 'N', 'S'};
  return letters[static_cast<int>(d)];
}

/// Circuit granularity. e2e circuits are keyed by network interfaces,
/// r2r circuits by routers.
enum class Granularity : std::uint8_t { e2e, r2r };

inline std::string to_string(Granularity g) { return g == Granularity::e2e ? "e2e" : "r2r"; }

inline Granularity parse_granularity(std::string_view s) {
  if (s == "e2e" || s == "ni") return Granularity::e2e;
  if (s == "r2r" || s == "router") return Granularity::r2r;
  throw DomainError("unknown granularity '" + std::string(s) + "'");
}

struct Coord {
  int x = 0;
  int y = 0;
  auto operator<=>(const Coord&) const = default;
};

/// 2D mesh with routers numbered row-major and network interfaces numbered
/// router by router (all NIs of router 0 first).
class MeshConfig {
 public:
  MeshConfig() : MeshConfig(4, 4) {}

  MeshConfig(int width, int height) : MeshConfig(width, height, {}) {}

  MeshConfig(int width, int height, std::vector<std::uint32_t> ni_per_router)
      : width_(width), height_(height), ni_per_router_(std::move(ni_per_router)) {
    if (width_ < 1 || height_ < 1) {
      throw DomainError("mesh dimensions must be positive");
    }
    const auto routers = static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_);
    if (ni_per_router_.empty()) ni_per_router_.assign(routers, 1);
    if (ni_per_router_.size() != routers) {
      throw DomainError("ni_per_router must list one count per router");
    }
    first_ni_.resize(routers + 1, 0);
    for (std::size_t r = 0; r < routers; ++r) {
      first_ni_[r + 1] = first_ni_[r] + ni_per_router_[r];
      for (std::uint32_t k = 0; k < ni_per_router_[r]; ++k) {
        ni_router_.push_back(static_cast<RouterId>(r));
      }
    }
  }

  /// 4x4 chip with 16 cores, 16 L2 banks, 16 directories, 2 DMA engines and
  /// one I/O controller: 51 interfaces.
  static MeshConfig cmp51() {
    std::vector<std::uint32_t> nis(16, 3);
    nis[0] += 1;   // DMA 0
    nis[3] += 1;   // DMA 1
    nis[12] += 1;  // I/O
    return MeshConfig(4, 4, std::move(nis));
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::uint32_t router_count() const { return static_cast<std::uint32_t>(width_ * height_); }
  std::uint32_t ni_count() const { return static_cast<std::uint32_t>(ni_router_.size()); }
  const std::vector<std::uint32_t>& ni_per_router() const { return ni_per_router_; }

  std::uint32_t nis_at(RouterId r) const { return ni_per_router_.at(r); }
  NodeId first_ni(RouterId r) const { return first_ni_.at(r); }

  RouterId router_of(NodeId ni) const {
    if (ni >= ni_count()) throw DomainError("NodeId " + std::to_string(ni) + " out of range");
    return ni_router_[ni];
  }

  /// Position of an NI among its router's local ports.
  std::uint32_t local_index(NodeId ni) const { return ni - first_ni_[router_of(ni)]; }

  bool valid_router(RouterId r) const { return r < router_count(); }
  bool valid_ni(NodeId n) const { return n < ni_count(); }

  Coord coord(RouterId r) const {
    return {static_cast<int>(r % static_cast<std::uint32_t>(width_)),
            static_cast<int>(r / static_cast<std::uint32_t>(width_))};
  }
  RouterId router_at(Coord c) const {
    return static_cast<RouterId>(c.y * width_ + c.x);
  }

  bool has_neighbor(RouterId r, Direction d) const {
    const Coord c = coord(r);
    switch (d) {
      case Direction::east: return c.x + 1 < width_;
      case Direction::west: return c.x > 0;
      case Direction::north: return c.y + 1 < height_;
      case Direction::south: return c.y > 0;
    }
    return false;
  }

  RouterId neighbor(RouterId r, Direction d) const {
    Coord c = coord(r);
    switch (d) {
      case Direction::east: ++c.x; break;
      case Direction::west: --c.x; break;
      case Direction::north: ++c.y; break;
      case Direction::south: --c.y; break;
    }
    return router_at(c);
  }

  int distance(RouterId a, RouterId b) const {
    const Coord ca = coord(a);
    const Coord cb = coord(b);
    return std::abs(ca.x - cb.x) + std::abs(ca.y - cb.y);
  }

  /// Dense id space for directed links: router * 4 + direction.
  std::uint32_t link_id_space() const { return router_count() * kMeshPorts; }

  bool operator==(const MeshConfig& o) const {
    return width_ == o.width_ && height_ == o.height_ && ni_per_router_ == o.ni_per_router_;
  }

 private:
  int width_;
  int height_;
  std::vector<std::uint32_t> ni_per_router_;
  std::vector<NodeId> first_ni_;
  std::vector<RouterId> ni_router_;
};

struct DirectedLink {
  RouterId from = 0;
  RouterId to = 0;
  Direction direction = Direction::east;

  std::uint32_t id() const { return from * kMeshPorts + static_cast<std::uint32_t>(direction); }
  auto operator<=>(const DirectedLink&) const = default;
};

struct Path {
  RouterId src_router = 0;
  RouterId dst_router = 0;
  std::vector<DirectedLink> links;

  int hops() const { return static_cast<int>(links.size()); }
  bool operator==(const Path&) const = default;
};

/// Dimension-ordered route: the X offset is consumed entirely before Y.
inline Path xy_route(RouterId src, RouterId dst, const MeshConfig& mesh) {
  if (!mesh.valid_router(src) || !mesh.valid_router(dst)) {
    throw DomainError("xy_route: router out of range");
  }
  if (src == dst) throw DomainError("xy_route: identical endpoints give an empty path");
  Path p{src, dst, {}};
  const Coord target = mesh.coord(dst);
  RouterId at = src;
  auto step = [&](Direction d) {
    const RouterId next = mesh.neighbor(at, d);
    p.links.push_back({at, next, d});
    at = next;
  };
  while (mesh.coord(at).x < target.x) step(Direction::east);
  while (mesh.coord(at).x > target.x) step(Direction::west);
  while (mesh.coord(at).y < target.y) step(Direction::north);
  while (mesh.coord(at).y > target.y) step(Direction::south);
  return p;
}

/// Next output direction under X-Y routing; nullopt-free: caller checks at==dst.
inline Direction xy_next_direction(const MeshConfig& mesh, RouterId at, RouterId dst) {
  const Coord c = mesh.coord(at);
  const Coord t = mesh.coord(dst);
  if (t.x > c.x) return Direction::east;
  if (t.x < c.x) return Direction::west;
  if (t.y > c.y) return Direction::north;
  return Direction::south;
}

/// All ordered pairs of distinct endpoints: NIs for e2e, routers for r2r.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> enumerate_pairs(const MeshConfig& mesh,
                                                                            Granularity g) {
  const std::uint32_t n = g == Granularity::e2e ? mesh.ni_count() : mesh.router_count();
  std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
  if (n > 1) out.reserve(static_cast<std::size_t>(n) * (n - 1));
  for (std::uint32_t s = 0; s < n; ++s) {
    for (std::uint32_t d = 0; d < n; ++d) {
      if (s != d) out.emplace_back(s, d);
    }
  }
  return out;
}

/// Two circuits in the same subnet conflict when they share a directed link.
/// Endpoint ports are a separate matter: an e2e circuit owns its NIs' local
/// ports, while the end routers of r2r circuits arbitrate and can be shared.
inline bool links_conflict(const Path& a, const Path& b) {
  for (const auto& la : a.links) {
    for (const auto& lb : b.links) {
      if (la == lb) return true;
    }
  }
  return false;
}

}  // namespace hsnoc

#endif  // HSNOC_TOPOLOGY_HPP
