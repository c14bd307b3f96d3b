#ifndef HSNOC_ENERGY_HPP
#define HSNOC_ENERGY_HPP

#include <istream>
#include <optional>
#include <ostream>
#include <string>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "hsnoc/errors.hpp"
#include "hsnoc/simcore.hpp"

namespace hsnoc {

/// Abstract energy units. Dynamic terms are per event at full link width;
/// static terms are per buffer (or router) per cycle.
struct EnergyCoefficients {
  double e_buffer_write = 1.0;
  double e_buffer_read = 1.0;
  double e_vc_alloc = 0.5;
  double e_sw_alloc = 0.5;
  double e_crossbar = 1.0;
  double e_link_per_bit = 0.01;
  double p_buffer_static = 0.1;
  double p_router_other = 0.5;

  static EnergyCoefficients zero() { return {0, 0, 0, 0, 0, 0, 0, 0}; }

  template <class F>
  void each(F&& f) {
    f("e_buffer_write", e_buffer_write);
    f("e_buffer_read", e_buffer_read);
    f("e_vc_alloc", e_vc_alloc);
    f("e_sw_alloc", e_sw_alloc);
    f("e_crossbar", e_crossbar);
    f("e_link_per_bit", e_link_per_bit);
    f("p_buffer_static", p_buffer_static);
    f("p_router_other", p_router_other);
  }

  void validate() const {
    auto copy = *this;
    copy.each([](const char* name, double v) {
      if (!(v >= 0.0)) throw ConfigError(std::string("energy coefficient ") + name + " must be >= 0");
    });
  }

  bool operator==(const EnergyCoefficients&) const = default;
};

/// Reads `key = value` lines; unknown keys are rejected, missing keys keep
/// their defaults.
inline EnergyCoefficients read_coefficients(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw InputError("coefficients: " + e.message() + " at line " + std::to_string(e.line()));
  }
  EnergyCoefficients c;
  std::size_t known = 0;
  c.each([&](const char* name, double& v) {
    if (auto s = tree.get_optional<std::string>(name)) {
      try {
        std::size_t used = 0;
        v = std::stod(*s, &used);
        if (used != s->size()) throw std::invalid_argument(*s);
      } catch (const std::exception&) {
        throw InputError(std::string("coefficients: bad value for ") + name);
      }
      ++known;
    }
  });
  if (known != tree.size()) throw InputError("coefficients: unknown key");
  c.validate();
  return c;
}

inline void write_coefficients(std::ostream& out, EnergyCoefficients c) {
  c.each([&](const char* name, double v) { out << name << " = " << v << '\n'; });
}

struct EnergyReport {
  double buffer_dynamic = 0.0;
  double allocation = 0.0;
  double crossbar = 0.0;
  double link = 0.0;
  double static_energy = 0.0;
  /// Static energy the gated buffers would have drawn. Not part of total.
  double gated_savings = 0.0;
  double total_energy = 0.0;
  /// Energy per full-width flit; empty when nothing was ejected.
  std::optional<double> energy_per_flit;
  std::optional<double> normalized_to_baseline;

  double breakdown_sum() const { return buffer_dynamic + allocation + crossbar + link + static_energy; }
  double dynamic() const { return buffer_dynamic + allocation + crossbar + link; }

  double per_flit() const {
    if (!energy_per_flit) throw DomainError("energy per flit undefined: no flits ejected");
    return *energy_per_flit;
  }
};

/// Converts event counts into energy. Buffer and crossbar events scale with
/// the subnet's share of the link width; link energy is charged per bit;
/// allocation events are width independent. Gated buffers draw no static
/// power. Energy per flit is normalised to full-width flits so that runs
/// with different subnet widths compare on the same traffic volume.
inline EnergyReport account(const SimStats& stats, const SubnetLayout& layout, const EnergyCoefficients& k) {
  k.validate();
  EnergyReport r;
  const double full = static_cast<double>(layout.total_width_bits);
  double active_buffer_cycles = 0.0;
  double gated_buffer_cycles = 0.0;
  for (const auto& s : stats.subnets) {
    const double w = static_cast<double>(s.width_bits);
    const double share = w / full;
    r.buffer_dynamic += share * (static_cast<double>(s.buffer_writes) * k.e_buffer_write +
                                 static_cast<double>(s.buffer_reads) * k.e_buffer_read);
    r.allocation += static_cast<double>(s.vc_allocations) * k.e_vc_alloc +
                    static_cast<double>(s.sw_allocations) * k.e_sw_alloc;
    r.crossbar += share * static_cast<double>(s.crossbar_traversals) * k.e_crossbar;
    r.link += w * static_cast<double>(s.link_traversals) * k.e_link_per_bit;
    active_buffer_cycles += static_cast<double>(s.buffer_cycles_active);
    gated_buffer_cycles += static_cast<double>(s.buffer_cycles_gated);
  }
  r.static_energy = active_buffer_cycles * k.p_buffer_static +
                    static_cast<double>(stats.cycles_simulated) * stats.routers * k.p_router_other;
  r.gated_savings = gated_buffer_cycles * k.p_buffer_static;
  r.total_energy = r.breakdown_sum();
  if (stats.flit_bits_ejected > 0) {
    r.energy_per_flit = r.total_energy * full / static_cast<double>(stats.flit_bits_ejected);
  }
  return r;
}

/// report.energy_per_flit / baseline.energy_per_flit.
inline double normalize(const EnergyReport& report, const EnergyReport& baseline) {
  if (!baseline.energy_per_flit || *baseline.energy_per_flit <= 0.0) {
    throw DomainError("baseline energy per flit is zero or undefined");
  }
  return report.per_flit() / *baseline.energy_per_flit;
}

}  // namespace hsnoc

#endif  // HSNOC_ENERGY_HPP
