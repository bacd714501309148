#include "latcorr/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace latcorr {

Box Box::of(long long Q) {
  if (Q < 0) throw validation_error("box radius must be non-negative");
  if (Q > ((1LL << 31) - 2)) throw size_error("box point count overflows the count type");
  std::uint64_t side = static_cast<std::uint64_t>(2 * Q + 1);
  return Box{Q, side * side};
}

ConvexRegion ConvexRegion::polygon(std::vector<std::pair<double, double>> ccw) {
  if (ccw.size() < 3) throw validation_error("polygon needs at least 3 vertices");
  const std::size_t n = ccw.size();
  // strict convexity, CCW orientation
  for (std::size_t i = 0; i < n; ++i) {
    auto [x0, y0] = ccw[i];
    auto [x1, y1] = ccw[(i + 1) % n];
    auto [x2, y2] = ccw[(i + 2) % n];
    double cross = (x1 - x0) * (y2 - y1) - (y1 - y0) * (x2 - x1);
    if (cross <= 0) throw validation_error("polygon not strictly convex CCW");
  }
  // origin strictly interior: positive side of every edge
  for (std::size_t i = 0; i < n; ++i) {
    auto [x0, y0] = ccw[i];
    auto [x1, y1] = ccw[(i + 1) % n];
    double cross = (x1 - x0) * (0.0 - y0) - (y1 - y0) * (0.0 - x0);
    if (cross <= 0) throw validation_error("origin not strictly interior to region");
  }
  ConvexRegion r;
  r.is_disc_ = false;
  r.verts_ = std::move(ccw);
  return r;
}

ConvexRegion ConvexRegion::disc(double cx, double cy, double radius) {
  if (!(radius > 0)) throw validation_error("disc radius must be positive");
  if (cx * cx + cy * cy >= radius * radius)
    throw validation_error("origin not strictly interior to region");
  ConvexRegion r;
  r.is_disc_ = true;
  r.cx_ = cx;
  r.cy_ = cy;
  r.radius_ = radius;
  return r;
}

bool ConvexRegion::contains_scaled(long long px, long long py, long long Q) const {
  if (Q == 0) return px == 0 && py == 0;
  double x = static_cast<double>(px);
  double y = static_cast<double>(py);
  double Qd = static_cast<double>(Q);
  if (is_disc_) {
    double dx = x - Qd * cx_;
    double dy = y - Qd * cy_;
    return dx * dx + dy * dy <= (Qd * radius_) * (Qd * radius_);
  }
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto [x0, y0] = verts_[i];
    auto [x1, y1] = verts_[(i + 1) % n];
    double ex = x1 - x0, ey = y1 - y0;
    double cross = ex * (y - Qd * y0) - ey * (x - Qd * x0);
    // boundary included; fuzz only matters for non-representable vertices
    double scale = std::max(1.0, std::hypot(ex, ey) * Qd);
    if (cross < -1e-9 * scale) return false;
  }
  return true;
}

void ConvexRegion::scaled_bounds(long long Q, long long& lo_x, long long& hi_x,
                                 long long& lo_y, long long& hi_y) const {
  double xmin, xmax, ymin, ymax;
  if (is_disc_) {
    xmin = cx_ - radius_; xmax = cx_ + radius_;
    ymin = cy_ - radius_; ymax = cy_ + radius_;
  } else {
    xmin = xmax = verts_[0].first;
    ymin = ymax = verts_[0].second;
    for (auto& [vx, vy] : verts_) {
      xmin = std::min(xmin, vx); xmax = std::max(xmax, vx);
      ymin = std::min(ymin, vy); ymax = std::max(ymax, vy);
    }
  }
  double Qd = static_cast<double>(Q);
  lo_x = static_cast<long long>(std::floor(xmin * Qd)) - 1;
  hi_x = static_cast<long long>(std::ceil(xmax * Qd)) + 1;
  lo_y = static_cast<long long>(std::floor(ymin * Qd)) - 1;
  hi_y = static_cast<long long>(std::ceil(ymax * Qd)) + 1;
}

std::vector<LatticePoint> enumerate_box(long long Q) {
  Box box = Box::of(Q);
  std::vector<LatticePoint> pts;
  pts.reserve(box.N);
  for (long long q = -Q; q <= Q; ++q)
    for (long long a = -Q; a <= Q; ++a)
      pts.push_back({q, a});
  return pts;
}

std::vector<LatticePoint> enumerate_region(const ConvexRegion& region, long long Q) {
  if (Q < 0) throw validation_error("dilation factor must be non-negative");
  long long lo_x, hi_x, lo_y, hi_y;
  region.scaled_bounds(Q, lo_x, hi_x, lo_y, hi_y);
  std::vector<LatticePoint> pts;
  for (long long q = lo_x; q <= hi_x; ++q)
    for (long long a = lo_y; a <= hi_y; ++a)
      if (region.contains_scaled(q, a, Q)) pts.push_back({q, a});
  return pts;
}

double ray_angle(const Observer& obs, const LatticePoint& p) {
  double dx = static_cast<double>(p.q) - obs.x;
  double dy = static_cast<double>(p.a) - obs.y;
  if (dx == 0.0 && dy == 0.0)
    throw degenerate_point_error("observer coincides with lattice point");
  double ang = std::atan2(dy, dx);
  if (ang < 0) ang += kTwoPi;
  if (ang >= kTwoPi || ang == 0.0) ang = 0.0;
  return ang;
}

double angular_separation(double a1, double a2) {
  double d = std::fabs(a1 - a2);
  return std::min(d, kTwoPi - d);
}

AngleMultiset::AngleMultiset(const Observer& obs, const std::vector<LatticePoint>& points)
    : observer_(obs) {
  entries_.reserve(points.size());
  for (const auto& p : points) {
    double dx = static_cast<double>(p.q) - obs.x;
    double dy = static_cast<double>(p.a) - obs.y;
    if (dx == 0.0 && dy == 0.0) {
      ++excluded_;
      continue;
    }
    entries_.push_back({ray_angle(obs, p), p});
  }
  std::sort(entries_.begin(), entries_.end(), [](const AngleEntry& l, const AngleEntry& r) {
    if (l.angle != r.angle) return l.angle < r.angle;
    return l.point < r.point;
  });
}

}  // namespace latcorr
