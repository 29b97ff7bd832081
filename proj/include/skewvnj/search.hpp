#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <thread>
#include <vector>

namespace skewvnj {

/// Parameters of the deterministic grid + refinement search. Together with the
/// inputs they fully determine every estimate; `threads` only changes speed.
struct SearchConfig {
  int grid_theta = 720;   // points per full angle period
  int grid_t = 64;        // points on [0, 1], endpoints included
  int refine_rounds = 40;
  int multistart = 8;
  std::uint64_t seed = 0;
  double tol = 1e-7;
  int threads = 0;        // 0 = hardware concurrency

  /// Throws ConfigError when a field is out of range.
  void validate() const;

  /// Same config with both grid resolutions doubled (used for audit re-runs).
  SearchConfig doubled() const;

  friend bool operator==(const SearchConfig&, const SearchConfig&) = default;
};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces an angle into [0, 2*pi).
inline double wrap_angle(double theta) {
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

int resolve_threads(int requested);

/// Runs fn(begin, end, chunk) over contiguous chunks of [0, n). Chunk
/// boundaries depend only on n and the chunk count, never on scheduling.
template <class Fn>
void parallel_chunks(std::size_t n, std::size_t chunks, Fn&& fn) {
  chunks = std::max<std::size_t>(1, std::min(chunks, n));
  if (chunks == 1) {
    fn(std::size_t{0}, n, std::size_t{0});
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = n * c / chunks;
    const std::size_t end = n * (c + 1) / chunks;
    workers.emplace_back([&fn, begin, end, c] { fn(begin, end, c); });
  }
}

/// Bounded best-k set under the total order (value descending, index
/// ascending). Merging partial sets in any order gives the same result.
class TopCells {
 public:
  struct Cell {
    double value;
    std::uint64_t index;
  };

  explicit TopCells(std::size_t capacity) : capacity_(std::max<std::size_t>(1, capacity)) {}

  static bool better(const Cell& a, const Cell& b) {
    return a.value > b.value || (a.value == b.value && a.index < b.index);
  }

  void offer(double value, std::uint64_t index) {
    if (std::isnan(value)) return;
    const Cell cell{value, index};
    if (cells_.size() == capacity_ && !better(cell, cells_.back())) return;
    auto pos = std::upper_bound(cells_.begin(), cells_.end(), cell,
                                [](const Cell& a, const Cell& b) { return better(a, b); });
    cells_.insert(pos, cell);
    if (cells_.size() > capacity_) cells_.pop_back();
  }

  void merge(const TopCells& other) {
    for (const Cell& c : other.cells_) offer(c.value, c.index);
  }

  const std::vector<Cell>& cells() const { return cells_; }
  bool empty() const { return cells_.empty(); }

 private:
  std::size_t capacity_;
  std::vector<Cell> cells_;  // sorted best-first
};

struct LineResult {
  double x;
  double value;
  long evals;
};

/// Golden-section maximization on [lo, hi]. Not assumed unimodal: returns the
/// best point among all evaluations, endpoints included.
template <class F>
LineResult golden_section_max(F&& f, double lo, double hi, int iters) {
  constexpr double kInvPhi = 0.6180339887498948482;
  LineResult best{lo, f(lo), 1};
  auto consider = [&](double x, double v) {
    ++best.evals;
    if (v > best.value) {
      best.x = x;
      best.value = v;
    }
  };
  consider(hi, f(hi));
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  consider(c, fc);
  consider(d, fd);
  for (int i = 0; i < iters; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
      consider(d, fd);
    }
  }
  if (std::isnan(best.value)) best.value = -std::numeric_limits<double>::infinity();
  return best;
}

struct Axis {
  double lo;
  double hi;
  bool periodic;  // period hi - lo
};

template <std::size_t D>
struct RefineResult {
  std::array<double, D> x;
  double value;
  bool converged;
  long evals;
};

/// Round-robin coordinate-wise golden-section ascent from x0, followed each
/// round by one line search along that round's net displacement. Only strict
/// improvements are accepted, so the value is non-decreasing in `rounds`.
/// The step of every coordinate is halved after any round that gains < tol.
template <std::size_t D, class F>
RefineResult<D> coordinate_refine(F&& f, std::array<double, D> x0, double v0,
                                  std::array<double, D> step, const std::array<Axis, D>& axes,
                                  int rounds, double tol, int golden_iters = 40) {
  RefineResult<D> r{x0, v0, false, 0};
  auto normalize = [&](std::size_t i, double s) {
    const Axis& ax = axes[i];
    if (ax.periodic) {
      const double period = ax.hi - ax.lo;
      double w = std::fmod(s - ax.lo, period);
      if (w < 0.0) w += period;
      if (w >= period) w = 0.0;
      return ax.lo + w;
    }
    return std::clamp(s, ax.lo, ax.hi);
  };
  for (int round = 0; round < rounds; ++round) {
    const double before = r.value;
    const std::array<double, D> start = r.x;
    for (std::size_t i = 0; i < D; ++i) {
      double lo = r.x[i] - step[i];
      double hi = r.x[i] + step[i];
      if (!axes[i].periodic) {
        lo = std::max(lo, axes[i].lo);
        hi = std::min(hi, axes[i].hi);
      }
      if (!(hi > lo)) continue;
      std::array<double, D> probe = r.x;
      auto line = golden_section_max(
          [&](double s) {
            probe[i] = normalize(i, s);
            return f(probe);
          },
          lo, hi, golden_iters);
      r.evals += line.evals;
      if (line.value > r.value) {
        r.value = line.value;
        r.x[i] = normalize(i, line.x);
      }
    }
    std::array<double, D> disp{};
    bool moved = false;
    for (std::size_t i = 0; i < D; ++i) {
      double d = r.x[i] - start[i];
      if (axes[i].periodic) {
        const double period = axes[i].hi - axes[i].lo;
        d = std::remainder(d, period);
      }
      disp[i] = d;
      moved = moved || d != 0.0;
    }
    if (moved) {
      const std::array<double, D> base = r.x;
      std::array<double, D> probe = base;
      auto along = [&](double a) {
        for (std::size_t i = 0; i < D; ++i) probe[i] = normalize(i, base[i] + a * disp[i]);
        return f(probe);
      };
      auto line = golden_section_max(along, 0.0, 2.0, golden_iters);
      r.evals += line.evals;
      if (line.value > r.value) {
        r.value = line.value;
        for (std::size_t i = 0; i < D; ++i) r.x[i] = normalize(i, base[i] + line.x * disp[i]);
      }
    }
    const double gain = r.value - before;
    r.converged = gain < tol;
    if (gain < tol) {
      bool tiny = true;
      for (std::size_t i = 0; i < D; ++i) {
        step[i] *= 0.5;
        tiny = tiny && step[i] < 1e-15 * std::max(1.0, axes[i].hi - axes[i].lo);
      }
      if (tiny) break;
    }
  }
  return r;
}

struct Maximum1d {
  double x;
  double value;
  bool converged;
  long evals;
};

/// Maximizes f over [lo, hi) sampled at n equispaced points, refining the
/// best `starts` grid cells. `periodic` makes the interval wrap around.
template <class F>
Maximum1d maximize_on_interval(F&& f, double lo, double hi, bool periodic, int n, int starts,
                               int rounds, double tol) {
  TopCells top(static_cast<std::size_t>(starts));
  const double h = (hi - lo) / (periodic ? n : std::max(1, n - 1));
  for (int i = 0; i < n; ++i) top.offer(f(lo + h * i), static_cast<std::uint64_t>(i));
  Maximum1d best{lo, -std::numeric_limits<double>::infinity(), false, n};
  const std::array<Axis, 1> axes{Axis{lo, hi, periodic}};
  bool first = true;
  for (const auto& cell : top.cells()) {
    auto res = coordinate_refine<1>([&](const std::array<double, 1>& x) { return f(x[0]); },
                                    {lo + h * static_cast<double>(cell.index)}, cell.value, {h},
                                    axes, rounds, tol);
    best.evals += res.evals;
    if (first || res.value > best.value) {
      best.x = res.x[0];
      best.value = res.value;
      best.converged = res.converged;
      first = false;
    }
  }
  return best;
}

}  // namespace skewvnj
