#include "pgsw/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "pgsw/errors.hpp"

namespace pgsw {

namespace {

// Cells closer than this to a box face are never treated as fully inside it.
constexpr double kCellMargin = 1e-9;

void check_dims(std::span<const double> x, std::span<const double> y, const TorusDomain& domain) {
  if (x.size() != y.size() || x.size() != static_cast<std::size_t>(domain.d)) {
    throw InvalidInput("dimension mismatch: " + std::to_string(x.size()) + " vs " +
                       std::to_string(y.size()) + " in d=" + std::to_string(domain.d));
  }
}

// Normalized axis interval: start in [0, n) (periodic) plus extent in [0, n].
struct AxisInterval {
  double start;
  double extent;
  bool whole;
};

AxisInterval normalize_axis(const BoxRegion& box, std::size_t s, const TorusDomain& domain) {
  const double n = domain.n;
  if (!domain.periodic()) {
    const double lo = std::max(0.0, box.lower[s]);
    const double hi = std::min(n, box.upper[s]);
    return {lo, hi - lo, lo <= 0.0 && hi >= n};
  }
  double extent = box.upper[s] - box.lower[s];
  if (extent < 0) extent += n;
  if (extent > n * (1 + 1e-12)) {
    throw InvalidInput("box extent " + std::to_string(extent) + " exceeds torus side " +
                       std::to_string(n));
  }
  const bool whole = extent >= n;
  return {wrap_coord(box.lower[s], n), std::min(extent, n), whole};
}

}  // namespace

double TorusDomain::volume() const { return std::pow(n, d); }

void TorusDomain::validate() const {
  if (!(n > 0) || !std::isfinite(n)) throw InvalidInput("side length n must be positive");
  if (d < 1) throw InvalidInput("dimension d must be >= 1");
}

double wrap_coord(double x, double n) {
  double r = std::fmod(x, n);
  if (r < 0) r += n;
  if (r >= n) r = 0.0;
  return r;
}

TorusPoint wrap_point(std::span<const double> raw, const TorusDomain& domain) {
  domain.validate();
  if (raw.size() != static_cast<std::size_t>(domain.d)) {
    throw InvalidInput("expected " + std::to_string(domain.d) + " coordinates, got " +
                       std::to_string(raw.size()));
  }
  TorusPoint p;
  p.coords.reserve(raw.size());
  for (double x : raw) {
    if (!std::isfinite(x)) throw InvalidInput("non-finite coordinate");
    p.coords.push_back(wrap_coord(x, domain.n));
  }
  return p;
}

double axis_separation(double a, double b, double n) {
  double dx = std::fabs(a - b);
  if (dx > n) dx = std::fmod(dx, n);
  return std::min(dx, n - dx);
}

double torus_dist_euclid(std::span<const double> x, std::span<const double> y,
                         const TorusDomain& domain) {
  check_dims(x, y, domain);
  double sum = 0;
  for (std::size_t s = 0; s < x.size(); ++s) {
    const double dx = axis_separation(x[s], y[s], domain.n);
    sum += dx * dx;
  }
  return std::sqrt(sum);
}

double torus_dist_linf(std::span<const double> x, std::span<const double> y,
                       const TorusDomain& domain) {
  check_dims(x, y, domain);
  double best = 0;
  for (std::size_t s = 0; s < x.size(); ++s) {
    best = std::max(best, axis_separation(x[s], y[s], domain.n));
  }
  return best;
}

double torus_dist_euclid(const TorusPoint& x, const TorusPoint& y, const TorusDomain& domain) {
  return torus_dist_euclid(std::span<const double>(x.coords), std::span<const double>(y.coords),
                           domain);
}

double torus_dist_linf(const TorusPoint& x, const TorusPoint& y, const TorusDomain& domain) {
  return torus_dist_linf(std::span<const double>(x.coords), std::span<const double>(y.coords),
                         domain);
}

double domain_dist(std::span<const double> x, std::span<const double> y,
                   const TorusDomain& domain) {
  if (domain.periodic()) return torus_dist_euclid(x, y, domain);
  check_dims(x, y, domain);
  double sum = 0;
  for (std::size_t s = 0; s < x.size(); ++s) {
    const double dx = x[s] - y[s];
    sum += dx * dx;
  }
  return std::sqrt(sum);
}

BoxRegion BoxRegion::centered(std::span<const double> center, double half_extent, bool closed) {
  BoxRegion box;
  for (double c : center) {
    box.lower.push_back(c - half_extent);
    box.upper.push_back(c + half_extent);
  }
  box.lower_closed.assign(center.size(), closed);
  box.upper_closed.assign(center.size(), closed);
  return box;
}

BoxRegion BoxRegion::whole(const TorusDomain& domain) {
  BoxRegion box;
  box.lower.assign(domain.d, 0.0);
  box.upper.assign(domain.d, domain.n);
  box.lower_closed.assign(domain.d, true);
  box.upper_closed.assign(domain.d, true);
  return box;
}

bool BoxRegion::contains(std::span<const double> x, const TorusDomain& domain) const {
  for (std::size_t s = 0; s < x.size(); ++s) {
    if (!domain.periodic()) {
      if (x[s] < lower[s] || (x[s] == lower[s] && !lower_closed[s])) return false;
      if (x[s] > upper[s] || (x[s] == upper[s] && !upper_closed[s])) return false;
      continue;
    }
    const AxisInterval axis = normalize_axis(*this, s, domain);
    if (axis.whole) continue;
    double offset = x[s] - axis.start;
    if (offset < 0) offset += domain.n;
    if (offset == 0 && !lower_closed[s]) return false;
    if (offset > axis.extent || (offset == axis.extent && !upper_closed[s])) return false;
  }
  return true;
}

std::vector<CellBox> subtract_cell_box(const CellBox& outer, const CellBox& inner) {
  const std::size_t d = outer.size();
  CellBox clipped(d);
  for (std::size_t s = 0; s < d; ++s) {
    if (outer[s].empty()) return {};
    clipped[s] = {std::max(outer[s].lo, inner[s].lo), std::min(outer[s].hi, inner[s].hi)};
    if (clipped[s].empty()) return {outer};
  }
  std::vector<CellBox> pieces;
  CellBox rest = outer;
  for (std::size_t s = 0; s < d; ++s) {
    if (rest[s].lo < clipped[s].lo) {
      CellBox slab = rest;
      slab[s] = {rest[s].lo, clipped[s].lo - 1};
      pieces.push_back(std::move(slab));
    }
    if (clipped[s].hi < rest[s].hi) {
      CellBox slab = rest;
      slab[s] = {clipped[s].hi + 1, rest[s].hi};
      pieces.push_back(std::move(slab));
    }
    rest[s] = clipped[s];
  }
  return pieces;
}

IndexedPointSet::IndexedPointSet(TorusDomain domain, std::vector<double> coords,
                                 double requested_cell_side)
    : domain_(domain), coords_(std::move(coords)) {
  domain_.validate();
  const auto d = static_cast<std::size_t>(domain_.d);
  if (coords_.size() % d != 0) throw InvalidInput("coordinate array is not a multiple of d");
  count_ = coords_.size() / d;
  if (count_ > std::numeric_limits<PointId>::max()) throw GuardExceeded("too many points");
  for (double x : coords_) {
    const bool inside = domain_.periodic() ? (x >= 0 && x < domain_.n) : (x >= 0 && x <= domain_.n);
    if (!std::isfinite(x) || !inside) {
      throw InvalidInput("coordinate " + std::to_string(x) + " outside the domain");
    }
  }
  if (!(requested_cell_side > 0)) throw InvalidInput("cell side must be positive");

  long m = std::max(1L, static_cast<long>(std::floor(domain_.n / requested_cell_side)));
  // Keep the prefix table within 2^26 entries.
  while (m > 1 && std::pow(static_cast<double>(m + 1), domain_.d) > 67108864.0) m /= 2;
  cells_per_axis_ = m;
  cell_side_ = domain_.n / static_cast<double>(m);

  strides_.assign(d, 1);
  prefix_strides_.assign(d, 1);
  for (std::size_t s = d; s-- > 1;) {
    strides_[s - 1] = strides_[s] * static_cast<std::size_t>(m);
    prefix_strides_[s - 1] = prefix_strides_[s] * static_cast<std::size_t>(m + 1);
  }
  const std::size_t cells = strides_[0] * static_cast<std::size_t>(m);
  const std::size_t prefix_size = prefix_strides_[0] * static_cast<std::size_t>(m + 1);

  std::vector<std::size_t> cell_of(count_);
  cell_start_.assign(cells + 1, 0);
  for (std::size_t i = 0; i < count_; ++i) {
    std::size_t flat = 0;
    for (std::size_t s = 0; s < d; ++s) {
      flat += static_cast<std::size_t>(cell_coord(coords_[i * d + s])) * strides_[s];
    }
    cell_of[i] = flat;
    ++cell_start_[flat + 1];
  }
  for (std::size_t c = 0; c < cells; ++c) cell_start_[c + 1] += cell_start_[c];
  members_.resize(count_);
  std::vector<std::size_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t i = 0; i < count_; ++i) members_[fill[cell_of[i]]++] = static_cast<PointId>(i);

  // prefix_[i_1..i_d] = number of points in cells with coordinate < i_s on every axis.
  prefix_.assign(prefix_size, 0);
  std::vector<long> cell(d, 0);
  for (std::size_t c = 0; c < cells; ++c) {
    std::size_t rem = c;
    std::size_t p = 0;
    for (std::size_t s = 0; s < d; ++s) {
      const std::size_t k = rem / strides_[s];
      rem %= strides_[s];
      p += (k + 1) * prefix_strides_[s];
    }
    prefix_[p] = static_cast<std::uint32_t>(cell_start_[c + 1] - cell_start_[c]);
  }
  for (std::size_t s = 0; s < d; ++s) {
    const std::size_t stride = prefix_strides_[s];
    const std::size_t extent = static_cast<std::size_t>(m + 1);
    for (std::size_t p = 0; p < prefix_size; ++p) {
      if ((p / stride) % extent != 0) prefix_[p] += prefix_[p - stride];
    }
  }
}

TorusPoint IndexedPointSet::torus_point(PointId id) const {
  const auto p = point(id);
  return TorusPoint{{p.begin(), p.end()}};
}

long IndexedPointSet::cell_coord(double x) const {
  const long k = static_cast<long>(std::floor(x / cell_side_));
  return std::clamp(k, 0L, cells_per_axis_ - 1);
}

std::size_t IndexedPointSet::flat_cell(std::span<const long> cell) const {
  std::size_t flat = 0;
  for (std::size_t s = 0; s < cell.size(); ++s) {
    flat += static_cast<std::size_t>(physical(cell[s])) * strides_[s];
  }
  return flat;
}

CellRange IndexedPointSet::trim(CellRange range) const {
  if (range.empty()) return range;
  if (!domain_.periodic()) {
    return {std::max(range.lo, 0L), std::min(range.hi, cells_per_axis_ - 1)};
  }
  if (range.length() > cells_per_axis_) range.hi = range.lo + cells_per_axis_ - 1;
  return range;
}

std::size_t IndexedPointSet::prefix_box(std::span<const long> lo, std::span<const long> hi) const {
  const std::size_t d = lo.size();
  long long total = 0;
  for (std::size_t corner = 0; corner < (std::size_t{1} << d); ++corner) {
    std::size_t p = 0;
    int lows = 0;
    for (std::size_t s = 0; s < d; ++s) {
      if (corner & (std::size_t{1} << s)) {
        p += static_cast<std::size_t>(hi[s] + 1) * prefix_strides_[s];
      } else {
        p += static_cast<std::size_t>(lo[s]) * prefix_strides_[s];
        ++lows;
      }
    }
    total += (lows % 2 == 0) ? prefix_[p] : -static_cast<long long>(prefix_[p]);
  }
  return static_cast<std::size_t>(total);
}

std::size_t IndexedPointSet::count_cells(const CellBox& box) const {
  const std::size_t d = box.size();
  // Split each unwrapped axis range into at most two physical ranges.
  std::vector<std::array<CellRange, 2>> pieces(d);
  std::vector<int> piece_count(d);
  const long m = cells_per_axis_;
  for (std::size_t s = 0; s < d; ++s) {
    if (box[s].empty()) return 0;
    const long len = std::min(box[s].length(), m);
    const long start = physical(box[s].lo);
    if (start + len - 1 < m) {
      pieces[s][0] = {start, start + len - 1};
      piece_count[s] = 1;
    } else {
      pieces[s][0] = {start, m - 1};
      pieces[s][1] = {0, len - (m - start) - 1};
      piece_count[s] = 2;
    }
  }
  std::vector<long> lo(d), hi(d);
  std::vector<int> choice(d, 0);
  std::size_t total = 0;
  for (;;) {
    for (std::size_t s = 0; s < d; ++s) {
      lo[s] = pieces[s][choice[s]].lo;
      hi[s] = pieces[s][choice[s]].hi;
    }
    total += prefix_box(lo, hi);
    std::size_t s = 0;
    while (s < d && ++choice[s] == piece_count[s]) choice[s++] = 0;
    if (s == d) break;
  }
  return total;
}

PointId IndexedPointSet::select_in_cells(const CellBox& box, std::size_t rank) const {
  CellBox work = box;
  for (std::size_t s = 0; s < work.size(); ++s) {
    long lo = work[s].lo;
    long hi = work[s].hi;
    // Smallest t with count(axis s in [lo, t]) > rank.
    const long base = lo;
    while (lo < hi) {
      const long mid = lo + (hi - lo) / 2;
      work[s] = {base, mid};
      if (count_cells(work) > rank) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    if (lo > base) {
      work[s] = {base, lo - 1};
      rank -= count_cells(work);
    }
    work[s] = {lo, lo};
  }
  std::vector<long> cell(work.size());
  for (std::size_t s = 0; s < work.size(); ++s) cell[s] = work[s].lo;
  const auto members = cell_members(flat_cell(cell));
  if (rank >= members.size()) throw InvariantViolation("select_in_cells: rank out of range");
  return members[rank];
}

void IndexedPointSet::cell_cover(const BoxRegion& box, CellBox& touched,
                                 CellBox& contained) const {
  const std::size_t d = static_cast<std::size_t>(domain_.d);
  if (box.lower.size() != d || box.upper.size() != d) throw InvalidInput("box dimension mismatch");
  touched.assign(d, {});
  contained.assign(d, {});
  const double c = cell_side_;
  const double eps = kCellMargin * c;
  for (std::size_t s = 0; s < d; ++s) {
    const AxisInterval axis = normalize_axis(box, s, domain_);
    if (axis.extent < 0) return;  // empty open-mode interval
    if (axis.whole) {
      touched[s] = {0, cells_per_axis_ - 1};
      contained[s] = touched[s];
      continue;
    }
    const double lo = axis.start;
    const double hi = axis.start + axis.extent;
    touched[s] = trim({static_cast<long>(std::floor(lo / c)), static_cast<long>(std::floor(hi / c))});
    CellRange inside{static_cast<long>(std::ceil((lo + eps) / c)),
                     static_cast<long>(std::floor((hi - eps) / c)) - 1};
    inside.lo = std::max(inside.lo, touched[s].lo);
    inside.hi = std::min(inside.hi, touched[s].hi);
    contained[s] = inside;
  }
}

bool IndexedPointSet::ball_cell_box(std::span<const double> x, double radius, CellBox& box) const {
  if (!std::isfinite(radius)) return false;
  const std::size_t d = static_cast<std::size_t>(domain_.d);
  const long reach = static_cast<long>(std::ceil(radius / cell_side_ * (1 + 1e-12) + 1e-12));
  box.assign(d, {});
  for (std::size_t s = 0; s < d; ++s) {
    const long k = cell_coord(x[s]);
    box[s] = trim({k - reach, k + reach});
  }
  return true;
}

std::vector<PointId> IndexedPointSet::neighbors_within(std::span<const double> x,
                                                       double radius) const {
  std::vector<PointId> out;
  for_each_within(x, radius, [&](PointId id, double) { out.push_back(id); });
  std::sort(out.begin(), out.end());
  return out;
}

std::pair<PointId, double> IndexedPointSet::nearest(std::span<const double> x) const {
  if (empty()) throw InvalidInput("nearest: empty point set");
  const std::size_t d = static_cast<std::size_t>(domain_.d);
  PointId best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  auto visit = [&](PointId id) {
    const double dist = domain_dist(x, point(id), domain_);
    if (dist < best_dist || (dist == best_dist && id < best)) {
      best = id;
      best_dist = dist;
    }
  };
  std::vector<long> centre(d);
  for (std::size_t s = 0; s < d; ++s) centre[s] = cell_coord(x[s]);
  CellBox previous;
  for (long k = 0;; ++k) {
    CellBox box(d);
    bool all_full = true;
    for (std::size_t s = 0; s < d; ++s) {
      box[s] = trim({centre[s] - k, centre[s] + k});
      const bool full = domain_.periodic() ? box[s].length() >= cells_per_axis_
                                           : (box[s].lo == 0 && box[s].hi == cells_per_axis_ - 1);
      all_full = all_full && full;
    }
    if (previous.empty()) {
      for_each_in_cells(box, visit);
    } else {
      for (const CellBox& piece : subtract_cell_box(box, previous)) for_each_in_cells(piece, visit);
    }
    // Anything outside the scanned box is farther than k cell sides.
    if (all_full || best_dist <= static_cast<double>(k) * cell_side_) break;
    previous = std::move(box);
  }
  return {best, best_dist};
}

IndexedPointSet sample_poisson_points(const TorusDomain& domain, double rate, Stream& stream,
                                      double cell_side) {
  domain.validate();
  if (!(rate > 0) || !std::isfinite(rate)) throw InvalidInput("rate must be positive");
  std::poisson_distribution<long long> count_dist(rate * domain.volume());
  const long long count = count_dist(stream);
  std::vector<double> coords;
  coords.reserve(static_cast<std::size_t>(count) * domain.d);
  for (long long i = 0; i < count * domain.d; ++i) {
    coords.push_back(wrap_coord(domain.n * stream.uniform(), domain.n));
  }
  return IndexedPointSet(domain, std::move(coords), cell_side);
}

std::size_t count_in_box(const IndexedPointSet& index, const BoxRegion& box) {
  if (index.empty()) return 0;
  CellBox touched, contained;
  index.cell_cover(box, touched, contained);
  for (const CellRange& r : touched) {
    if (r.empty()) return 0;
  }
  bool has_inside = true;
  for (const CellRange& r : contained) has_inside = has_inside && !r.empty();
  std::size_t total = 0;
  std::vector<CellBox> shell;
  if (has_inside) {
    total += index.count_cells(contained);
    shell = subtract_cell_box(touched, contained);
  } else {
    shell.push_back(touched);
  }
  for (const CellBox& piece : shell) {
    index.for_each_in_cells(piece, [&](PointId id) {
      if (box.contains(index.point(id), index.domain())) ++total;
    });
  }
  return total;
}

std::vector<PointId> neighbors_within(const IndexedPointSet& index, std::span<const double> x,
                                      double radius) {
  return index.neighbors_within(x, radius);
}

}  // namespace pgsw
