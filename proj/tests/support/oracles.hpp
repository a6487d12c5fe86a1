#pragma once
// Independent reference computations for tests. Nothing here calls the
// library's propagation, interference or routing code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "mmroute/topology.hpp"

namespace mmroute::oracle {

// ---------------------------------------------------------------------------
// Routing: enumerate every simple path, keep the minimum weight, break ties by
// the lexicographically smallest station sequence.

inline std::optional<Path> brute_force_path(const Topology& t, StationId s, StationId d) {
  const std::size_t n = t.station_count();
  std::vector<std::vector<double>> w(n, std::vector<double>(n, -1.0));
  for (const Link& l : t.links()) w[l.src.index()][l.dst.index()] = l.weight;

  std::optional<Path> best;
  double best_cost = std::numeric_limits<double>::infinity();
  Path current{s};
  std::vector<bool> used(n, false);
  used[s.index()] = true;

  std::function<void()> dfs = [&]() {
    const StationId u = current.back();
    if (u == d) {
      double cost = 0.0;  // accumulated from the destination backwards
      for (std::size_t i = current.size(); i > 1; --i) {
        cost = w[current[i - 2].index()][current[i - 1].index()] + cost;
      }
      if (!best || cost < best_cost || (cost == best_cost && current < *best)) {
        best = current;
        best_cost = cost;
      }
      return;
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (w[u.index()][v] < 0.0 || used[v]) continue;
      used[v] = true;
      current.emplace_back(v);
      dfs();
      current.pop_back();
      used[v] = false;
    }
  };
  dfs();
  return best;
}

// ---------------------------------------------------------------------------
// Radio: recompute everything from station coordinates.

inline double fsl_db(double d, double f) {
  constexpr double c = 299792458.0;
  return 20.0 * std::log10(d) + 20.0 * std::log10(f) + 20.0 * std::log10(4.0 * std::numbers::pi / c);
}

inline double fsl_linear(double d, double f) {
  constexpr double c = 299792458.0;
  return (c * c) / (16.0 * std::numbers::pi * std::numbers::pi * d * d * f * f);
}

inline double path_loss(const PropagationConfig& cfg, double d) {
  return cfg.power_domain == PowerDomain::decibel ? fsl_db(d, cfg.carrier_frequency_hz)
                                                  : fsl_linear(d, cfg.carrier_frequency_hz);
}

/// Angle at `vertex` between rays to a and b, via atan2.
inline double angle_deg(Position vertex, Position a, Position b) {
  const double ta = std::atan2(a.y - vertex.y, a.x - vertex.x);
  const double tb = std::atan2(b.y - vertex.y, b.x - vertex.x);
  double diff = std::fabs(ta - tb) * 180.0 / std::numbers::pi;
  if (diff > 180.0) diff = 360.0 - diff;
  return diff;
}

inline double directivity(double alpha) { return alpha <= 90.0 ? 1.0 - alpha / 90.0 : 0.0; }

inline double arriving_interference(const Topology& t, const PropagationConfig& cfg,
                                    const Link& victim, const Link& interferer, double power,
                                    double noise) {
  if (interferer.id == victim.id || interferer.src == victim.src || interferer.src == victim.dst) {
    return 0.0;
  }
  const Position rx = t.position(victim.dst);
  const Position tx = t.position(victim.src);
  const Position itx = t.position(interferer.src);
  const double g = directivity(angle_deg(rx, tx, itx));
  if (g == 0.0) return 0.0;
  const double d = std::hypot(itx.x - rx.x, itx.y - rx.y);
  return g * std::max(0.0, power - path_loss(cfg, d) - noise);
}

struct DirectState {
  double p_received = 0.0;
  double p_effective = 0.0;
  double capacity = 0.0;
};

/// powers[l] == 0 means link l is off.
inline std::vector<DirectState> direct_radio(const Topology& t, const PropagationConfig& cfg,
                                             const std::vector<double>& powers,
                                             const std::vector<double>& noise) {
  std::vector<DirectState> out(t.link_count());
  for (const Link& v : t.links()) {
    if (powers[v.id.index()] == 0.0) continue;
    const Position a = t.position(v.src);
    const Position b = t.position(v.dst);
    DirectState& s = out[v.id.index()];
    s.p_received = powers[v.id.index()] - path_loss(cfg, std::hypot(b.x - a.x, b.y - a.y)) -
                   noise[v.id.index()];
    double sum = 0.0;
    for (const Link& i : t.links()) {
      if (i.id == v.id || powers[i.id.index()] == 0.0) continue;
      sum += arriving_interference(t, cfg, v, i, powers[i.id.index()], noise[i.id.index()]);
    }
    s.p_effective = s.p_received - sum;
    if (s.p_received > 0.0) {
      s.capacity = std::min(1.0, std::max(0.0, s.p_effective / s.p_received)) * v.nominal_capacity;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Profitable: replay a recorded visit order; at each link evaluate every power
// by recomputing the decided network from scratch.

struct OracleDecision {
  std::size_t level = 0;
  double profit = 0.0;
};

inline std::vector<std::size_t> profitable_replay(const Topology& t, const PropagationConfig& cfg,
                                                  const std::vector<double>& ladder,
                                                  const std::vector<double>& noise, double dt,
                                                  const std::vector<LinkId>& order,
                                                  std::vector<OracleDecision>* decisions = nullptr) {
  std::vector<double> powers(t.link_count(), 0.0);
  std::vector<std::size_t> levels(t.link_count(), 0);
  std::vector<int> spare(t.station_count());
  for (std::size_t s = 0; s < spare.size(); ++s) spare[s] = t.station(StationId{s}).max_transceivers;

  for (LinkId l : order) {
    const Link& link = t.link(l);
    OracleDecision best{0, 0.0};
    bool have = false;
    if (spare[link.src.index()] > 0 && spare[link.dst.index()] > 0) {
      const auto before = direct_radio(t, cfg, powers, noise);
      for (std::size_t level = 1; level < ladder.size(); ++level) {
        auto trial = powers;
        trial[l.index()] = ladder[level];
        const auto after = direct_radio(t, cfg, trial, noise);
        const double gain = std::floor(after[l.index()].capacity * dt);
        double loss = 0.0;
        for (const Link& d : t.links()) {
          if (powers[d.id.index()] == 0.0 || !(before[d.id.index()].p_received > 0.0)) continue;
          loss += (before[d.id.index()].p_effective - after[d.id.index()].p_effective) *
                  d.nominal_capacity / before[d.id.index()].p_received * dt;
        }
        const double profit = gain - loss;
        if (!have || profit > best.profit) {
          best = {level, profit};
          have = true;
        }
      }
    }
    if (have && best.profit > 0.0) {
      powers[l.index()] = ladder[best.level];
      levels[l.index()] = best.level;
      --spare[link.src.index()];
      --spare[link.dst.index()];
      if (decisions) decisions->push_back(best);
    }
  }
  return levels;
}

// ---------------------------------------------------------------------------
// Fixtures.

/// Strongly connected topology with `links` directed links (2..5 recommended):
/// a ring over k stations plus chords, random positions in a 300 m square.
inline TopologySpec random_small_spec(std::mt19937_64& gen, std::size_t links, int transceivers = 8) {
  std::uniform_real_distribution<double> coord(0.0, 300.0);
  std::uniform_real_distribution<double> cap(1.0, 20.0);
  const std::size_t k = std::max<std::size_t>(2, std::min<std::size_t>(links, links == 2 ? 2 : 3 + (links >= 5)));
  TopologySpec spec;
  for (std::size_t i = 0; i < k; ++i) {
    spec.stations.push_back({"N" + std::to_string(i), {coord(gen), coord(gen)}, transceivers});
  }
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < k; ++i) edges.emplace_back(i, (i + 1) % k);
  std::vector<std::pair<std::size_t, std::size_t>> extra;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j && std::find(edges.begin(), edges.end(), std::pair{i, j}) == edges.end())
        extra.emplace_back(i, j);
  std::shuffle(extra.begin(), extra.end(), gen);
  for (std::size_t e = 0; edges.size() < links && e < extra.size(); ++e) edges.push_back(extra[e]);
  for (auto [a, b] : edges) {
    spec.edges.push_back({spec.stations[a].name, spec.stations[b].name, std::round(cap(gen)), 100});
  }
  spec.weight_min = 1.0;
  spec.weight_max = 4.0;
  return spec;
}

}  // namespace mmroute::oracle
