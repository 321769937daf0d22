#pragma once

#include <algorithm>
#include <cstdint>
#include <random>

#include "par/geometry.hpp"

namespace par {

/// Seeded 64-bit generator with platform-independent real and index draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform in [0, n); n > 0.
  std::size_t index(std::size_t n) {
    auto i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

 private:
  std::mt19937_64 engine_;
};

/// Independent stream seed derived from a run seed (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

struct RwpParams {
  double width{1000.0};
  double height{1000.0};
  double speed_min{0.0};
  double speed_max{10.0};
  double pause_time{0.0};
};

// Lowest speed ever drawn; a zero-speed node would never reach its waypoint.
inline constexpr double kMinSpeed = 0.1;

/// One straight-line leg: rest at `origin` until `depart_time`, then move at
/// `speed` to reach `waypoint` at `arrive_time`.
struct MotionState {
  Point origin;
  double depart_time{0.0};
  Point waypoint;
  double arrive_time{0.0};
  double speed{0.0};
  bool mobile{false};
  std::uint64_t leg{0};
};

/// Exact position at time t, interpolated along the current leg.
inline Point position_at(const MotionState& m, double t) {
  if (!m.mobile || t <= m.depart_time) return m.origin;
  if (t >= m.arrive_time) return m.waypoint;
  const double f = (t - m.depart_time) / (m.arrive_time - m.depart_time);
  return {m.origin.x + (m.waypoint.x - m.origin.x) * f,
          m.origin.y + (m.waypoint.y - m.origin.y) * f};
}

inline double draw_speed(Rng& rng, const RwpParams& p) {
  const double lo = std::max(p.speed_min, kMinSpeed);
  const double hi = std::max(p.speed_max, lo);
  return rng.uniform(lo, hi);
}

/// Starts a leg from `from` at `depart`. Draw order: waypoint x, waypoint y,
/// speed.
inline void begin_leg(MotionState& m, Point from, double depart, Rng& rng, const RwpParams& p) {
  m.origin = from;
  m.depart_time = depart;
  m.waypoint = {rng.uniform(0.0, p.width), rng.uniform(0.0, p.height)};
  m.speed = draw_speed(rng, p);
  m.arrive_time = depart + distance(from, m.waypoint) / m.speed;
  m.mobile = true;
  ++m.leg;
}

/// Waypoint arrival: pause, then head for a fresh uniform waypoint.
inline void rwp_step(MotionState& m, double now, Rng& rng, const RwpParams& p) {
  begin_leg(m, m.waypoint, now + p.pause_time, rng, p);
}

}  // namespace par
