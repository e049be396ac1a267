#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pgsw/rng.hpp"

namespace pgsw {

using PointId = std::uint32_t;

/// Periodic: the torus T^d_n (opposite faces identified). Open: the plain cube [0, n]^d.
enum class Boundary { periodic, open };

struct TorusDomain {
  double n = 1.0;
  int d = 2;
  Boundary boundary = Boundary::periodic;

  double volume() const;
  bool periodic() const { return boundary == Boundary::periodic; }
  /// Throws InvalidInput unless n > 0 (finite) and d >= 1.
  void validate() const;
};

struct TorusPoint {
  std::vector<double> coords;

  std::size_t dim() const { return coords.size(); }
  friend bool operator==(const TorusPoint&, const TorusPoint&) = default;
};

/// Reduces each coordinate modulo n into [0, n). Non-finite input is rejected.
TorusPoint wrap_point(std::span<const double> raw, const TorusDomain& domain);
double wrap_coord(double x, double n);

/// Per-axis wrapped separation min(|dx|, n - |dx|).
double axis_separation(double a, double b, double n);

double torus_dist_euclid(std::span<const double> x, std::span<const double> y,
                         const TorusDomain& domain);
double torus_dist_linf(std::span<const double> x, std::span<const double> y,
                       const TorusDomain& domain);
double torus_dist_euclid(const TorusPoint& x, const TorusPoint& y, const TorusDomain& domain);
double torus_dist_linf(const TorusPoint& x, const TorusPoint& y, const TorusDomain& domain);

/// Euclidean distance under the domain's boundary rule (torus metric or plain R^d).
double domain_dist(std::span<const double> x, std::span<const double> y,
                   const TorusDomain& domain);

/// Axis-aligned box on the torus. On an axis where upper < lower the interval wraps through n.
/// An axis whose upper bound exceeds lower by exactly n covers the whole circle.
struct BoxRegion {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<bool> lower_closed;
  std::vector<bool> upper_closed;

  /// {y : |y_s - center_s|_torus <= half_extent} (closed) or < (open) on every axis.
  static BoxRegion centered(std::span<const double> center, double half_extent, bool closed);
  /// Whole domain, all faces closed.
  static BoxRegion whole(const TorusDomain& domain);

  bool contains(std::span<const double> x, const TorusDomain& domain) const;
};

/// Unwrapped cell-index range; physical cell = k mod cells_per_axis.
struct CellRange {
  long lo = 0;
  long hi = -1;

  bool empty() const { return hi < lo; }
  long length() const { return empty() ? 0 : hi - lo + 1; }
};

using CellBox = std::vector<CellRange>;

/// Box-minus-box in cell coordinates: cells of `outer` not in `inner`, as at most 2d disjoint boxes.
std::vector<CellBox> subtract_cell_box(const CellBox& outer, const CellBox& inner);

/// Immutable point set with a uniform cell grid and a d-dimensional prefix-count table.
/// The grid uses m = floor(n / requested_side) cells per axis (at least 1), so the actual
/// cell side n/m is never smaller than requested.
class IndexedPointSet {
public:
  IndexedPointSet() : IndexedPointSet(TorusDomain{}, {}, 1.0) {}
  IndexedPointSet(TorusDomain domain, std::vector<double> coords, double requested_cell_side);

  const TorusDomain& domain() const { return domain_; }
  int dim() const { return domain_.d; }
  std::size_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  std::span<const double> point(PointId id) const {
    return {coords_.data() + static_cast<std::size_t>(id) * domain_.d,
            static_cast<std::size_t>(domain_.d)};
  }
  TorusPoint torus_point(PointId id) const;
  const std::vector<double>& coords() const { return coords_; }

  double cell_side() const { return cell_side_; }
  long cells_per_axis() const { return cells_per_axis_; }
  std::size_t cell_count() const { return cell_start_.size() - 1; }
  long cell_coord(double x) const;
  std::size_t flat_cell(std::span<const long> cell) const;
  std::span<const PointId> cell_members(std::size_t flat) const {
    return {members_.data() + cell_start_[flat], cell_start_[flat + 1] - cell_start_[flat]};
  }

  /// Exact count of points in a (possibly wrapped) cell box, via the prefix table.
  std::size_t count_cells(const CellBox& box) const;

  /// The rank-th point of a cell box, ordering points lexicographically by unwrapped cell
  /// offset (axis 0 most significant) and then by position inside the cell.
  PointId select_in_cells(const CellBox& box, std::size_t rank) const;

  /// Visits every point of a cell box (each physical cell at most once).
  template <class Fn>
  void for_each_in_cells(const CellBox& box, Fn&& fn) const {
    std::vector<long> cell(box.size());
    for_each_cell(box, 0, cell, fn);
  }

  /// Touched and fully-contained cell boxes for a BoxRegion. The contained box is a sub-box
  /// of the touched box whose cells lie strictly inside the region.
  void cell_cover(const BoxRegion& box, CellBox& touched, CellBox& contained) const;

  /// Calls fn(id, dist) for every point with domain_dist(x, point) <= radius.
  template <class Fn>
  void for_each_within(std::span<const double> x, double radius, Fn&& fn) const {
    CellBox box;
    if (!ball_cell_box(x, radius, box)) {
      for (PointId id = 0; id < count_; ++id) {
        const double dist = domain_dist(x, point(id), domain_);
        if (dist <= radius) fn(id, dist);
      }
      return;
    }
    for_each_in_cells(box, [&](PointId id) {
      const double dist = domain_dist(x, point(id), domain_);
      if (dist <= radius) fn(id, dist);
    });
  }

  /// Sorted ids with domain_dist(x, point) <= radius (closed ball).
  std::vector<PointId> neighbors_within(std::span<const double> x, double radius) const;

  /// Nearest point to x by domain distance; ties by smallest id. Requires a nonempty set.
  std::pair<PointId, double> nearest(std::span<const double> x) const;

private:
  template <class Fn>
  void for_each_cell(const CellBox& box, std::size_t axis, std::vector<long>& cell, Fn& fn) const {
    if (axis == box.size()) {
      for (PointId id : cell_members(flat_cell(cell))) fn(id);
      return;
    }
    for (long k = box[axis].lo; k <= box[axis].hi; ++k) {
      cell[axis] = physical(k);
      for_each_cell(box, axis + 1, cell, fn);
    }
  }

  long physical(long k) const {
    const long m = cells_per_axis_;
    const long r = k % m;
    return r < 0 ? r + m : r;
  }
  bool ball_cell_box(std::span<const double> x, double radius, CellBox& box) const;
  CellRange trim(CellRange range) const;
  std::size_t prefix_box(std::span<const long> lo, std::span<const long> hi) const;

  TorusDomain domain_;
  std::size_t count_ = 0;
  std::vector<double> coords_;
  double cell_side_ = 1.0;
  long cells_per_axis_ = 1;
  std::vector<std::size_t> strides_;         // row-major strides over cells
  std::vector<std::size_t> prefix_strides_;  // strides over the (m+1)^d prefix table
  std::vector<std::size_t> cell_start_;
  std::vector<PointId> members_;
  std::vector<std::uint32_t> prefix_;
};

/// Count-then-place Poisson process of the given rate on the domain.
IndexedPointSet sample_poisson_points(const TorusDomain& domain, double rate, Stream& stream,
                                      double cell_side);

/// Exact number of points in the box.
std::size_t count_in_box(const IndexedPointSet& index, const BoxRegion& box);

/// Sorted ids within closed Euclidean (domain) distance `radius` of x.
std::vector<PointId> neighbors_within(const IndexedPointSet& index, std::span<const double> x,
                                      double radius);

}  // namespace pgsw
