#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "par/geometry.hpp"

using namespace par;

namespace {

constexpr double kPi = std::numbers::pi;

// Focal-sum ellipse test built straight from the endpoints: a point is inside
// iff its distances to the two foci sum to at most 2a. Shares no code with
// contains(). Returns the normalized slack (2a - sum) / 2a.
double focal_slack(Point s, Point d, double width_ratio, double margin, Point p) {
  const double dx = d.x - s.x, dy = d.y - s.y;
  const double len = std::sqrt(dx * dx + dy * dy);
  const double ux = dx / len, uy = dy / len;
  const double cx = 0.5 * (s.x + d.x), cy = 0.5 * (s.y + d.y);
  const double a = 0.5 * len + margin;
  const double b = width_ratio * a;
  const double c = std::sqrt(std::max(0.0, a * a - b * b));
  const double f1 = std::hypot(p.x - (cx + c * ux), p.y - (cy + c * uy));
  const double f2 = std::hypot(p.x - (cx - c * ux), p.y - (cy - c * uy));
  return (2.0 * a - (f1 + f2)) / (2.0 * a);
}

Point rigid(Point p, double theta, Point shift) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {c * p.x - s * p.y + shift.x, s * p.x + c * p.y + shift.y};
}

}  // namespace

TEST(Distance, Examples) {
  EXPECT_DOUBLE_EQ(distance({0, 0}, {3, 4}), 5.0);
  EXPECT_DOUBLE_EQ(distance({7, -2}, {7, -2}), 0.0);
  EXPECT_DOUBLE_EQ(distance({100, 200}, {400, 600}), 500.0);
}

TEST(Distance, SymmetricAndRejectsNonFinite) {
  EXPECT_DOUBLE_EQ(distance({1.5, -3}, {-8, 2}), distance({-8, 2}, {1.5, -3}));
  EXPECT_THROW(distance({NAN, 0}, {0, 0}), std::invalid_argument);
  EXPECT_THROW(distance({0, 0}, {INFINITY, 0}), std::invalid_argument);
}

TEST(Midpoint, Examples) {
  EXPECT_EQ(midpoint({0, 0}, {10, 20}), (Point{5, 10}));
  EXPECT_EQ(midpoint({2.5, -1}, {2.5, -1}), (Point{2.5, -1}));
  EXPECT_EQ(midpoint({-3, 4}, {3, -4}), (Point{0, 0}));
}

TEST(BuildPetal, HorizontalExample) {
  const auto r = build_petal({0, 0}, {100, 0}, 0.5, 1.0);
  EXPECT_EQ(r.center, (Point{50, 0}));
  EXPECT_DOUBLE_EQ(r.semi_major, 51.0);
  EXPECT_DOUBLE_EQ(r.semi_minor, 25.5);
  EXPECT_DOUBLE_EQ(r.orientation, 0.0);
  EXPECT_TRUE(is_valid(r));
}

TEST(BuildPetal, VerticalExample) {
  const auto r = build_petal({0, 0}, {0, 100}, 0.5, 0.0);
  EXPECT_DOUBLE_EQ(r.orientation, kPi / 2);
  EXPECT_DOUBLE_EQ(r.semi_major, 50.0);
  EXPECT_DOUBLE_EQ(r.semi_minor, 25.0);
}

TEST(BuildPetal, DiscoveryExample) {
  const auto r = build_petal({0, 0}, {500, 0}, 0.5, 1.0);
  EXPECT_EQ(r.center, (Point{250, 0}));
  EXPECT_DOUBLE_EQ(r.semi_major, 251.0);
  EXPECT_DOUBLE_EQ(r.semi_minor, 125.5);
}

TEST(BuildPetal, CoincidentEndpointsAreDegenerate) {
  EXPECT_THROW(build_petal({5, 5}, {5, 5}, 0.5, 1.0), DegeneratePetal);
}

TEST(BuildPetal, RejectsBadParameters) {
  EXPECT_THROW(build_petal({0, 0}, {1, 0}, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(build_petal({0, 0}, {1, 0}, 1.5, 1.0), std::invalid_argument);
  EXPECT_THROW(build_petal({0, 0}, {1, 0}, 0.5, -1.0), std::invalid_argument);
  EXPECT_THROW(build_petal({0, 0}, {NAN, 0}, 0.5, 1.0), std::invalid_argument);
}

TEST(BuildPetal, OrientationStaysInHalfOpenRange) {
  // Pointing along -x must give +pi, never -pi.
  EXPECT_DOUBLE_EQ(build_petal({0, 0}, {-10, 0}, 0.5, 1).orientation, kPi);
  EXPECT_DOUBLE_EQ(build_petal({0, 0}, {-10, -0.0}, 0.5, 1).orientation, kPi);
  EXPECT_TRUE(is_valid(build_petal({0, 0}, {-10, -0.0}, 0.5, 1)));
}

TEST(PetalArea, Examples) {
  EXPECT_DOUBLE_EQ(petal_area({{0, 0}, 5, 2, 0}), 31.415926535897931);
  EXPECT_DOUBLE_EQ(petal_area({{0, 0}, 1, 1, 0}), kPi);
  EXPECT_NEAR(petal_area({{0, 0}, 51, 25.5, 0}), 4085.6412, 1e-4);  // pi * 1300.5
}

TEST(PetalArea, DoublingAxesQuadruples) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(0.1, 500.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(gen), b = std::min(a, u(gen));
    EXPECT_EQ(petal_area({{0, 0}, 2 * a, 2 * b, 0}), 4.0 * petal_area({{0, 0}, a, b, 0}));
  }
}

TEST(Contains, Examples) {
  const auto r = build_petal({0, 0}, {100, 0}, 0.5, 1.0);
  EXPECT_TRUE(contains(r, {50, 0}));
  EXPECT_FALSE(contains(r, {50, 200}));
  EXPECT_TRUE(contains(r, {50, 25.5}));  // on the boundary
  EXPECT_FALSE(contains(r, {50, 25.5000001}));
}

TEST(Contains, AgreesWithFocalOracleOnExampleRegion) {
  const Point s{0, 0}, d{100, 0};
  const auto r = build_petal(s, d, 0.5, 1.0);
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-200.0, 300.0);
  int checked = 0;
  for (int i = 0; i < 100000; ++i) {
    const Point p{u(gen), u(gen)};
    const double slack = focal_slack(s, d, 0.5, 1.0, p);
    if (std::abs(slack) < 1e-6) continue;
    ASSERT_EQ(contains(r, p), slack > 0) << p.x << "," << p.y;
    ++checked;
  }
  EXPECT_GT(checked, 99000);
}

TEST(ContainsProperty, MidpointAndEndpointsInside) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> coord(-1000, 1000), w(0.01, 1.0), m(0.001, 5.0);
  for (int i = 0; i < 10000; ++i) {
    const Point s{coord(gen), coord(gen)}, d{coord(gen), coord(gen)};
    const auto r = build_petal(s, d, w(gen), m(gen));
    EXPECT_TRUE(contains(r, midpoint(s, d)));
    EXPECT_TRUE(contains(r, s));
    EXPECT_TRUE(contains(r, d));
  }
}

TEST(ContainsProperty, ZeroMarginPutsEndpointsOnBoundary) {
  const auto r = build_petal({10, 20}, {310, 420}, 0.3, 0.0);
  EXPECT_NEAR(petal_level(r, {10, 20}), 1.0, 1e-12);
  EXPECT_NEAR(petal_level(r, {310, 420}), 1.0, 1e-12);
}

TEST(ContainsProperty, RigidMotionInvariance) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> coord(-500, 500), w(0.05, 1.0), ang(-kPi, kPi);
  for (int i = 0; i < 10000; ++i) {
    const Point s{coord(gen), coord(gen)}, d{coord(gen), coord(gen)}, p{coord(gen), coord(gen)};
    const double width = w(gen);
    const double theta = ang(gen);
    const Point shift{coord(gen), coord(gen)};
    const auto r1 = build_petal(s, d, width, 1.0);
    const auto r2 = build_petal(rigid(s, theta, shift), rigid(d, theta, shift), width, 1.0);
    const double l1 = petal_level(r1, p);
    const double l2 = petal_level(r2, rigid(p, theta, shift));
    EXPECT_NEAR(l1, l2, 1e-9 * std::max(1.0, l1));
    if (std::abs(l1 - 1.0) > 1e-6) EXPECT_EQ(contains(r1, p), l1 <= 1.0);
  }
}

TEST(ContainsProperty, MonotoneInWidth) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> coord(-500, 500), w(0.01, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const Point s{coord(gen), coord(gen)}, d{coord(gen), coord(gen)}, p{coord(gen), coord(gen)};
    double w1 = w(gen), w2 = w(gen);
    if (w1 > w2) std::swap(w1, w2);
    if (contains(build_petal(s, d, w1, 1.0), p)) EXPECT_TRUE(contains(build_petal(s, d, w2, 1.0), p));
  }
}

TEST(Contains, RejectsNonFinitePoint) {
  const auto r = build_petal({0, 0}, {100, 0}, 0.5, 1.0);
  EXPECT_THROW(contains(r, {NAN, 0}), std::invalid_argument);
}
