#pragma once

// Lattice point enumeration and direction angles seen from an observer.

#include <cstdint>
#include <utility>
#include <vector>

#include "latcorr/common.hpp"

namespace latcorr {

struct LatticePoint {
  long long q = 0;  // abscissa
  long long a = 0;  // ordinate
  friend bool operator==(const LatticePoint&, const LatticePoint&) = default;
  friend auto operator<=>(const LatticePoint&, const LatticePoint&) = default;
};

// The fixed point directions are measured from. Coordinates normally live in
// [0,1)^2 but nothing below requires it (disc averaging may spill outside).
struct Observer {
  double x = 0.0;
  double y = 0.0;
};

struct Box {
  long long Q = 0;
  std::uint64_t N = 1;  // (2Q+1)^2
  static Box of(long long Q);
};

// Convex domain containing the origin, either a CCW polygon or a disc.
// Membership is tested on the dilate Q*Omega with the boundary included.
class ConvexRegion {
 public:
  static ConvexRegion polygon(std::vector<std::pair<double, double>> ccw_vertices);
  static ConvexRegion disc(double cx, double cy, double radius);

  bool contains_scaled(long long px, long long py, long long Q) const;
  void scaled_bounds(long long Q, long long& lo_x, long long& hi_x,
                     long long& lo_y, long long& hi_y) const;

 private:
  ConvexRegion() = default;
  bool is_disc_ = false;
  double cx_ = 0, cy_ = 0, radius_ = 0;
  std::vector<std::pair<double, double>> verts_;
};

std::vector<LatticePoint> enumerate_box(long long Q);
std::vector<LatticePoint> enumerate_region(const ConvexRegion& region, long long Q);

// Polar angle of P - obs, normalized to [0, 2pi). Throws
// degenerate_point_error when P coincides with the observer.
double ray_angle(const Observer& obs, const LatticePoint& p);

// Folded circular distance, in [0, pi].
double angular_separation(double a1, double a2);

struct AngleEntry {
  double angle;
  LatticePoint point;
};

// Sorted multiset of ray angles with point identities. A lattice point
// coinciding with the observer is dropped (the correlation normalization
// still uses N = (2Q+1)^2); ties sort by (q,a) for determinism.
class AngleMultiset {
 public:
  AngleMultiset(const Observer& obs, const std::vector<LatticePoint>& points);

  const std::vector<AngleEntry>& entries() const { return entries_; }
  const Observer& observer() const { return observer_; }
  std::size_t excluded_count() const { return excluded_; }

 private:
  Observer observer_;
  std::vector<AngleEntry> entries_;
  std::size_t excluded_ = 0;
};

}  // namespace latcorr
