#include "skewvnj/banach_mazur.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "skewvnj/errors.hpp"

namespace skewvnj {
namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Operator norm with the unit-sphere grid of the source space precomputed;
// one golden-section polish around the best node. Used inside the outer search.
class SphereGrid {
 public:
  SphereGrid(const Space& space, int n) : space_(&space), h_(kPi / n) {
    points_.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) points_.push_back(sphere_point(space, h_ * i));
  }

  double sup(const Space& to, const Mat2& m) const {
    std::size_t best_i = 0;
    double best = -1.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      const double v = to(m(points_[i]));
      if (v > best) {
        best = v;
        best_i = i;
      }
    }
    const double c = h_ * static_cast<double>(best_i);
    auto line = golden_section_max(
        [&](double theta) { return to(m(sphere_point(*space_, theta))); }, c - h_, c + h_, 24);
    return std::max(best, line.value);
  }

 private:
  const Space* space_;
  double h_;
  std::vector<Vec2> points_;
};

}  // namespace

Transform2::Transform2(const Mat2& m) : m_(m) {
  if (!std::isfinite(m.det()) || std::abs(m.det()) <= kSingularDet)
    throw ConfigError("transform is singular (|det| <= 1e-12)");
}

Transform2 Transform2::rotation_stretch(double alpha, double s, double beta, bool reflect) {
  Mat2 m = Mat2::rotation(alpha) * Mat2::diag(s, 1.0) * Mat2::rotation(beta);
  if (reflect) m = m * Mat2::diag(1.0, -1.0);
  return Transform2(m);
}

double operator_norm(const Space& from, const Space& to, const Transform2& t,
                     const SearchConfig& config) {
  config.validate();
  // u and -u give the same value, so half a period suffices.
  const int n = std::max(4, config.grid_theta / 2);
  auto res = maximize_on_interval(
      [&](double theta) { return to(t(sphere_point(from, theta))); }, 0.0, kPi, true, n,
      config.multistart, config.refine_rounds, config.tol);
  return res.value;
}

BmEstimate bm_upper_bound(const Space& x_space, const Space& y_space, const SearchConfig& config,
                          const BmOptions& opts) {
  config.validate();
  if (!(opts.s_max >= 1.0) || opts.grid_angle < 2 || opts.grid_scale < 2 || opts.max_starts < 1)
    throw ConfigError("invalid Banach-Mazur search options");
  const int inner = std::max(16, config.grid_theta / 2);
  const SphereGrid x_grid(x_space, inner);
  const SphereGrid y_grid(y_space, inner);
  const double log_smax = std::log(opts.s_max);

  // Maximized objective: -log(||T|| ||T^-1||).
  auto objective = [&](double alpha, double log_s, double beta, bool reflect) {
    const Transform2 t = Transform2::rotation_stretch(alpha, std::exp(log_s), beta, reflect);
    const double fwd = x_grid.sup(y_space, t.matrix());
    const double bwd = y_grid.sup(x_space, t.matrix().inverse());
    return -std::log(fwd * bwd);
  };

  const int na = opts.grid_angle, ns = opts.grid_scale;
  const double ha = kPi / na;
  const double hs = log_smax / (ns - 1);
  const std::size_t starts = static_cast<std::size_t>(std::min(opts.max_starts, config.multistart));
  const std::size_t cells = static_cast<std::size_t>(2 * na * na * ns);
  const auto n_chunks = static_cast<std::size_t>(resolve_threads(config.threads));
  std::vector<TopCells> partial(std::min(n_chunks, cells), TopCells(starts));
  // index = ((reflect * na + ia) * na + ib) * ns + is
  parallel_chunks(cells, partial.size(), [&](std::size_t begin, std::size_t end, std::size_t chunk) {
    for (std::size_t idx = begin; idx < end; ++idx) {
      const std::size_t is = idx % ns;
      const std::size_t ib = (idx / ns) % na;
      const std::size_t ia = (idx / ns / na) % na;
      const bool reflect = idx / ns / na / na == 1;
      partial[chunk].offer(objective(ha * ia, hs * is, ha * ib, reflect), idx);
    }
  });
  TopCells top(starts);
  for (const TopCells& part : partial) top.merge(part);

  struct Candidate {
    Transform2 t;
    bool converged;
  };
  std::vector<Candidate> candidates{{Transform2::identity(), true}};
  const std::array<Axis, 3> axes{Axis{0.0, kPi, true}, Axis{0.0, log_smax, false},
                                 Axis{0.0, kPi, true}};
  for (const auto& cell : top.cells()) {
    const std::size_t idx = static_cast<std::size_t>(cell.index);
    const std::size_t is = idx % ns;
    const std::size_t ib = (idx / ns) % na;
    const std::size_t ia = (idx / ns / na) % na;
    const bool reflect = idx / ns / na / na == 1;
    auto r = coordinate_refine<3>(
        [&](const std::array<double, 3>& a) { return objective(a[0], a[1], a[2], reflect); },
        {ha * ia, hs * is, ha * ib}, cell.value, {ha, hs, ha}, axes, config.refine_rounds,
        config.tol, 24);
    candidates.push_back(
        {Transform2::rotation_stretch(r.x[0], std::exp(r.x[1]), r.x[2], reflect), r.converged});
  }

  BmEstimate best;
  double best_product = std::numeric_limits<double>::infinity();
  for (const Candidate& c : candidates) {
    const double product = operator_norm(x_space, y_space, c.t, config) *
                           operator_norm(y_space, x_space, c.t.inverse(), config);
    if (product < best_product) {
      best_product = product;
      best.best_transform = c.t;
      best.converged = c.converged;
    }
  }
  best.upper_bound = std::max(1.0, best_product);
  return best;
}

std::pair<double, double> equivalent_norm_ratio(const Space& space1, const Space& space2,
                                                const SearchConfig& config) {
  config.validate();
  auto ratio = [&](double theta) {
    const Vec2 v{std::cos(theta), std::sin(theta)};
    return space1(v) / space2(v);
  };
  const int n = std::max(4, config.grid_theta / 2);
  auto hi = maximize_on_interval(ratio, 0.0, kPi, true, n, config.multistart,
                                 config.refine_rounds, config.tol);
  auto lo = maximize_on_interval([&](double th) { return -ratio(th); }, 0.0, kPi, true, n,
                                 config.multistart, config.refine_rounds, config.tol);
  return {-lo.value, hi.value};
}

AuditRecord audit_bm_stability(const Space& x_space, const Space& y_space, double lambda,
                               double mu, double p, const SearchConfig& config,
                               const AuditOptions& opts, const BmOptions& bm_opts,
                               EstimateCache* cache) {
  auto compute = [&](const SearchConfig& cfg) {
    const Query q = Query::make(ConstantKind::CpMinusInf, lambda, mu, p);
    const double d = bm_upper_bound(x_space, y_space, cfg, bm_opts).upper_bound;
    const double cx = cache ? cache->get(x_space, q, cfg).value : estimate_constant(x_space, q, cfg).value;
    const double cy = cache ? cache->get(y_space, q, cfg).value : estimate_constant(y_space, q, cfg).value;
    const double dp = std::pow(d, p);
    AuditRecord r;
    r.theorem_id = "bm_stability";
    r.space_descr = describe(x_space) + " vs " + describe(y_space);
    r.params = {lambda, mu, p};
    r.regime = Regime::Relaxed;
    const double lower = cx / dp, upper = cx * dp;
    if (cy - lower <= upper - cy) {
      r.lhs = lower;
      r.rhs = cy;
    } else {
      r.lhs = cy;
      r.rhs = upper;
    }
    r.slack = r.rhs - r.lhs;
    r.passed = r.slack >= -opts.audit_relax;
    r.note = num(lower) + " <= C(Y)=" + num(cy) + " <= " + num(upper) + " with C(X)=" + num(cx) +
             ", d-hat=" + num(d) + " (an upper bound on d, which only loosens both sides)";
    return r;
  };
  AuditRecord r = compute(config);
  if (r.passed || !opts.rerun_on_failure) return r;
  AuditRecord again = compute(config.doubled());
  again.note += "; re-run at doubled grid after first-pass slack " + num(r.slack);
  return again;
}

}  // namespace skewvnj
