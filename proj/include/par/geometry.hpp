#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace par {

/// Planar position in meters (x east, y north).
struct Point {
  double x{0.0};
  double y{0.0};

  friend bool operator==(const Point&, const Point&) = default;
};

/// Raised when the source and destination of a petal coincide; the caller
/// should fall back to the one-hop case.
class DegeneratePetal : public std::domain_error {
 public:
  DegeneratePetal() : std::domain_error("petal endpoints coincide") {}
};

/// Elliptical forwarding zone between a source and a destination.
///
/// The major axis lies along the source->destination line, `orientation`
/// being that line's angle from +x in (-pi, pi].
struct PetalRegion {
  Point center;
  double semi_major{0.0};
  double semi_minor{0.0};
  double orientation{0.0};

  friend bool operator==(const PetalRegion&, const PetalRegion&) = default;
};

inline bool is_finite(const Point& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

inline bool is_valid(const PetalRegion& r) {
  return is_finite(r.center) && std::isfinite(r.semi_major) && std::isfinite(r.semi_minor) &&
         std::isfinite(r.orientation) && r.semi_major > 0.0 && r.semi_minor > 0.0 &&
         r.semi_minor <= r.semi_major && r.orientation > -std::numbers::pi &&
         r.orientation <= std::numbers::pi;
}

namespace detail {
inline void require_finite(const Point& p) {
  if (!is_finite(p)) throw std::invalid_argument("non-finite coordinate");
}
}  // namespace detail

inline double distance(const Point& p, const Point& q) {
  detail::require_finite(p);
  detail::require_finite(q);
  return std::hypot(q.x - p.x, q.y - p.y);
}

inline Point midpoint(const Point& p, const Point& q) {
  detail::require_finite(p);
  detail::require_finite(q);
  return {(p.x + q.x) / 2.0, (p.y + q.y) / 2.0};
}

/// Builds the petal between `s` and `d`.
///
/// semi_major = |sd|/2 + margin, semi_minor = width_ratio * semi_major. With a
/// positive margin both endpoints are strictly interior.
inline PetalRegion build_petal(const Point& s, const Point& d, double width_ratio,
                               double margin) {
  if (!(width_ratio > 0.0 && width_ratio <= 1.0))
    throw std::invalid_argument("width_ratio must be in (0, 1]");
  if (!(margin >= 0.0) || !std::isfinite(margin))
    throw std::invalid_argument("margin must be >= 0");
  const double span = distance(s, d);
  if (span == 0.0) throw DegeneratePetal{};

  PetalRegion r;
  r.center = midpoint(s, d);
  r.semi_major = span / 2.0 + margin;
  r.semi_minor = width_ratio * r.semi_major;
  r.orientation = std::atan2(d.y - s.y, d.x - s.x);
  // atan2 may return exactly -pi for (-0, negative x); fold it onto +pi.
  if (r.orientation <= -std::numbers::pi) r.orientation = std::numbers::pi;
  return r;
}

inline double petal_area(const PetalRegion& r) {
  return std::numbers::pi * r.semi_major * r.semi_minor;
}

/// Quadratic form x'^2/a^2 + y'^2/b^2 of `p` in the ellipse-local frame.
inline double petal_level(const PetalRegion& r, const Point& p) {
  const double dx = p.x - r.center.x;
  const double dy = p.y - r.center.y;
  const double c = std::cos(r.orientation);
  const double s = std::sin(r.orientation);
  const double along = c * dx + s * dy;
  const double across = -s * dx + c * dy;
  return (along * along) / (r.semi_major * r.semi_major) +
         (across * across) / (r.semi_minor * r.semi_minor);
}

/// Membership test; the boundary counts as inside.
inline bool contains(const PetalRegion& r, const Point& p) {
  detail::require_finite(p);
  return petal_level(r, p) <= 1.0;
}

}  // namespace par
