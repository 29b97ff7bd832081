#include "skewvnj/constants.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <vector>

#include "skewvnj/errors.hpp"

namespace skewvnj {
namespace {

struct KindName {
  ConstantKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {ConstantKind::CpMinusInf, "CP_MINUS_INF"}, {ConstantKind::CnjP, "CNJ_P"},
    {ConstantKind::Cnj, "CNJ"},                 {ConstantKind::James, "JAMES"},
    {ConstantKind::Lyj, "LYJ"},                 {ConstantKind::CMinusInf, "C_MINUS_INF"},
    {ConstantKind::CpMinusInfZuo, "CP_MINUS_INF_ZUO"},
};

double pow_p(double m, double p) {
  if (p == 1.0) return m;
  if (p == 2.0) return m * m;
  return std::pow(m, p);
}

// Everything about a query that the inner loop needs, precomputed once.
struct Objective {
  ConstantKind kind;
  double lambda;
  double mu;
  double p;
  double scale;  // 2^(p-3)(l^p + m^p), or l^2 + m^2 for LYJ
  bool unit_pairs;

  Objective(const Query& q, bool force_unit_pairs)
      : kind(q.kind), lambda(q.lambda), mu(q.mu), p(q.p),
        unit_pairs(force_unit_pairs || q.kind == ConstantKind::James) {
    if (kind == ConstantKind::Lyj)
      scale = lambda * lambda + mu * mu;
    else
      scale = std::pow(2.0, p - 3.0) * (pow_p(lambda, p) + pow_p(mu, p));
  }

  double denominator(double t) const {
    if (kind == ConstantKind::Lyj) return scale * (1.0 + t * t);
    return scale * (1.0 + pow_p(t, p));
  }

  // x, y on the unit sphere; den = denominator(t).
  double operator()(const Space& space, Vec2 x, Vec2 y, double t, double den) const {
    if (kind == ConstantKind::James) return std::min(space(x + y), space(x - y));
    const Vec2 ty = t * y;
    const double n1 = space(lambda * x + mu * ty);
    const double n2 = space(mu * x - lambda * ty);
    switch (kind) {
      case ConstantKind::CpMinusInf:
      case ConstantKind::CpMinusInfZuo:
        return pow_p(std::min(n1, n2), p) / den;
      case ConstantKind::CMinusInf:
        return 0.5 * (pow_p(std::min(n1, n2), p) / den);
      case ConstantKind::CnjP:
      case ConstantKind::Cnj:
        return ((pow_p(n1, p) + pow_p(n2, p)) / 2.0) / den;
      case ConstantKind::Lyj:
        return (n1 * n1 + n2 * n2) / den;
      case ConstantKind::James:
        break;
    }
    return 0.0;
  }

  double at(const Space& space, const Witness& w) const {
    const double t = unit_pairs ? 1.0 : w.t;
    return (*this)(space, sphere_point(space, w.theta_x), sphere_point(space, w.theta_y), t,
                   denominator(t));
  }
};

double t_node(int k, int n_t) { return static_cast<double>(k) / (n_t - 1); }
double theta_node(int i, int n) { return kTwoPi * i / n; }

void check_pair(Vec2 x, Vec2 y) {
  if (!is_finite(x) || !is_finite(y)) throw DomainError("vectors must be finite");
  if (x == Vec2{} && y == Vec2{}) throw DomainError("ratio undefined for (x, y) = (0, 0)");
}

void check_params(double lambda, double mu, double p) {
  if (!(lambda > 0.0) || !(mu > 0.0) || !std::isfinite(lambda) || !std::isfinite(mu))
    throw DomainError("lambda and mu must be positive and finite");
  if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("p must satisfy 1 <= p < inf");
}

struct GridShape {
  int n_theta;
  int n_theta_x;  // half period when the (x, y) -> (-x, -y) symmetry is exact on the grid
  int n_t;
};

GridShape grid_shape(const SearchConfig& config, bool unit_pairs) {
  const int n = config.grid_theta;
  return {n, n % 2 == 0 ? n / 2 : n, unit_pairs ? 1 : config.grid_t};
}

Witness decode(std::uint64_t index, const GridShape& g) {
  const auto k = static_cast<int>(index % static_cast<std::uint64_t>(g.n_t));
  const std::uint64_t ij = index / static_cast<std::uint64_t>(g.n_t);
  const auto j = static_cast<int>(ij % static_cast<std::uint64_t>(g.n_theta));
  const auto i = static_cast<int>(ij / static_cast<std::uint64_t>(g.n_theta));
  return {theta_node(i, g.n_theta), theta_node(j, g.n_theta), g.n_t == 1 ? 1.0 : t_node(k, g.n_t)};
}

Estimate run_search(const Space& space, const Objective& obj, const SearchConfig& config) {
  config.validate();
  const GridShape g = grid_shape(config, obj.unit_pairs);

  std::vector<Vec2> sphere(static_cast<std::size_t>(g.n_theta));
  for (int j = 0; j < g.n_theta; ++j) sphere[static_cast<std::size_t>(j)] = sphere_point(space, theta_node(j, g.n_theta));
  std::vector<double> ts(static_cast<std::size_t>(g.n_t));
  std::vector<double> dens(static_cast<std::size_t>(g.n_t));
  for (int k = 0; k < g.n_t; ++k) {
    ts[static_cast<std::size_t>(k)] = g.n_t == 1 ? 1.0 : t_node(k, g.n_t);
    dens[static_cast<std::size_t>(k)] = obj.denominator(ts[static_cast<std::size_t>(k)]);
  }

  const auto n_chunks = static_cast<std::size_t>(resolve_threads(config.threads));
  std::vector<TopCells> partial(std::min<std::size_t>(n_chunks, static_cast<std::size_t>(g.n_theta_x)),
                                TopCells(static_cast<std::size_t>(config.multistart)));
  parallel_chunks(static_cast<std::size_t>(g.n_theta_x), partial.size(),
                  [&](std::size_t begin, std::size_t end, std::size_t chunk) {
                    TopCells& top = partial[chunk];
                    for (std::size_t i = begin; i < end; ++i) {
                      const Vec2 x = sphere[i];
                      for (std::size_t j = 0; j < sphere.size(); ++j) {
                        const Vec2 y = sphere[j];
                        const std::uint64_t base = (i * sphere.size() + j) * ts.size();
                        for (std::size_t k = 0; k < ts.size(); ++k)
                          top.offer(obj(space, x, y, ts[k], dens[k]), base + k);
                      }
                    }
                  });
  TopCells top(static_cast<std::size_t>(config.multistart));
  for (const TopCells& part : partial) top.merge(part);

  Estimate best;
  best.samples_evaluated = static_cast<std::int64_t>(g.n_theta_x) * g.n_theta * g.n_t;
  const double step_theta = kTwoPi / g.n_theta;
  const double step_t = g.n_t > 1 ? 1.0 / (g.n_t - 1) : 0.0;
  bool first = true;
  for (const auto& cell : top.cells()) {
    const Witness start = decode(cell.index, g);
    Estimate cand;
    if (obj.unit_pairs) {
      const std::array<Axis, 2> axes{Axis{0.0, kTwoPi, true}, Axis{0.0, kTwoPi, true}};
      auto r = coordinate_refine<2>(
          [&](const std::array<double, 2>& a) { return obj.at(space, {a[0], a[1], 1.0}); },
          {start.theta_x, start.theta_y}, cell.value, {step_theta, step_theta}, axes,
          config.refine_rounds, config.tol);
      cand = {r.value, {r.x[0], r.x[1], 1.0}, r.evals, r.converged};
    } else {
      const std::array<Axis, 3> axes{Axis{0.0, kTwoPi, true}, Axis{0.0, kTwoPi, true},
                                     Axis{0.0, 1.0, false}};
      auto r = coordinate_refine<3>(
          [&](const std::array<double, 3>& a) { return obj.at(space, {a[0], a[1], a[2]}); },
          {start.theta_x, start.theta_y, start.t}, cell.value, {step_theta, step_theta, step_t},
          axes, config.refine_rounds, config.tol);
      cand = {r.value, {r.x[0], r.x[1], r.x[2]}, r.evals, r.converged};
    }
    best.samples_evaluated += cand.samples_evaluated;
    if (first || cand.value > best.value) {
      best.value = cand.value;
      best.witness = cand.witness;
      best.converged = cand.converged;
      first = false;
    }
  }
  return best;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view to_string(ConstantKind kind) {
  for (const auto& kn : kKindNames)
    if (kn.kind == kind) return kn.name;
  return "UNKNOWN";
}

ConstantKind parse_constant_kind(std::string_view name) {
  std::string norm;
  for (char c : name) norm += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const auto& kn : kKindNames)
    if (kn.name == norm) return kn.kind;
  throw ParseError("unknown constant kind '" + std::string(name) + "'");
}

Query Query::make(ConstantKind kind, double lambda, double mu, double p) {
  Query q{kind, lambda, mu, p};
  switch (kind) {
    case ConstantKind::Cnj:
    case ConstantKind::CMinusInf:
      q.lambda = q.mu = 1.0;
      q.p = 2.0;
      break;
    case ConstantKind::James:
      q.lambda = q.mu = q.p = 1.0;
      break;
    case ConstantKind::CpMinusInfZuo:
      q.lambda = q.mu = 1.0;
      break;
    case ConstantKind::Lyj:
      q.p = 2.0;
      break;
    default:
      break;
  }
  q.validate();
  return q;
}

void Query::validate() const { check_params(lambda, mu, p); }

double ratio_cp_minus_inf(double lambda, double mu, double p, Vec2 x, Vec2 y, const Space& space) {
  check_params(lambda, mu, p);
  check_pair(x, y);
  const double num = pow_p(std::min(space(lambda * x + mu * y), space(mu * x - lambda * y)), p);
  return num / (std::pow(2.0, p - 3.0) * (pow_p(lambda, p) + pow_p(mu, p)) *
                (pow_p(space(x), p) + pow_p(space(y), p)));
}

double ratio_cnj_p(double lambda, double mu, double p, Vec2 x, Vec2 y, const Space& space) {
  check_params(lambda, mu, p);
  check_pair(x, y);
  const double num = pow_p(space(lambda * x + mu * y), p) + pow_p(space(mu * x - lambda * y), p);
  return num / (std::pow(2.0, p - 2.0) * (pow_p(lambda, p) + pow_p(mu, p)) *
                (pow_p(space(x), p) + pow_p(space(y), p)));
}

double ratio_james(Vec2 x, Vec2 y, const Space& space) {
  if (!is_finite(x) || !is_finite(y)) throw DomainError("vectors must be finite");
  if (std::abs(space(x) - 1.0) > 1e-9 || std::abs(space(y) - 1.0) > 1e-9)
    throw DomainError("James ratio needs unit vectors");
  return std::min(space(x + y), space(x - y));
}

double ratio_lyj(double lambda, double mu, Vec2 x, Vec2 y, const Space& space) {
  check_params(lambda, mu, 2.0);
  check_pair(x, y);
  const double n1 = space(lambda * x + mu * y);
  const double n2 = space(mu * x - lambda * y);
  const double nx = space(x), ny = space(y);
  return (n1 * n1 + n2 * n2) / ((lambda * lambda + mu * mu) * (nx * nx + ny * ny));
}

double objective_at(const Space& space, const Query& query, const Witness& w) {
  query.validate();
  return Objective(query, false).at(space, w);
}

double cp_lower_bound(double lambda, double mu, double p) {
  check_params(lambda, mu, p);
  const double lp = pow_p(lambda, p), mp = pow_p(mu, p);
  return std::min(lp, mp) / (std::pow(2.0, p - 3.0) * (lp + mp));
}

std::pair<double, double> universal_bounds(const Query& q) {
  switch (q.kind) {
    case ConstantKind::CpMinusInf:
    case ConstantKind::CpMinusInfZuo:
      return {cp_lower_bound(q.lambda, q.mu, q.p), 2.0};
    case ConstantKind::CnjP:
      return {std::pow(2.0, 2.0 - q.p), 2.0};  // t = 0 corner
    case ConstantKind::Cnj:
    case ConstantKind::Lyj:
      return {1.0, 2.0};
    case ConstantKind::CMinusInf:
      return {0.5, 1.0};
    case ConstantKind::James:
      return {std::sqrt(2.0), 2.0};
  }
  return {0.0, 2.0};
}

Estimate estimate_constant(const Space& space, const Query& query, const SearchConfig& config) {
  query.validate();
  return run_search(space, Objective(query, false), config);
}

Estimate estimate_unit_pairs(const Space& space, double lambda, double mu, double p,
                             const SearchConfig& config) {
  const Query q{ConstantKind::CpMinusInf, lambda, mu, p};
  q.validate();
  return run_search(space, Objective(q, true), config);
}

namespace {

struct SharedAccumulator {
  Objective cp;
  SharedEstimates out{};
  bool any = false;

  void add(const Space& space, Vec2 x, Vec2 y, const Witness& w, double den) {
    const Vec2 ty = w.t * y;
    const double a = pow_p(space(cp.lambda * x + cp.mu * ty), cp.p);
    const double b = pow_p(space(cp.mu * x - cp.lambda * ty), cp.p);
    // Same expressions as the CP_MINUS_INF and CNJ_P objectives; min <= mean
    // survives rounding because fl(a + b) >= 2 min(a, b).
    const double v_min = std::min(a, b) / den;
    const double v_nj = ((a + b) / 2.0) / den;
    ++out.minus_inf.samples_evaluated;
    ++out.nj.samples_evaluated;
    if (!any || v_min > out.minus_inf.value) out.minus_inf.value = v_min, out.minus_inf.witness = w;
    if (!any || v_nj > out.nj.value) out.nj.value = v_nj, out.nj.witness = w;
    any = true;
  }
};

}  // namespace

SharedEstimates estimate_on_samples(const Space& space, double lambda, double mu, double p,
                                    std::span<const Witness> samples) {
  check_params(lambda, mu, p);
  if (samples.empty()) throw ConfigError("sample set is empty");
  SharedAccumulator acc{Objective(Query{ConstantKind::CpMinusInf, lambda, mu, p}, false)};
  for (const Witness& w : samples) {
    if (!(w.t >= 0.0 && w.t <= 1.0)) throw DomainError("sample t must lie in [0, 1]");
    acc.add(space, sphere_point(space, w.theta_x), sphere_point(space, w.theta_y), w,
            acc.cp.denominator(w.t));
  }
  acc.out.minus_inf.converged = acc.out.nj.converged = true;
  return acc.out;
}

SharedEstimates estimate_on_grid(const Space& space, double lambda, double mu, double p,
                                 const SearchConfig& config, std::span<const Witness> extra) {
  check_params(lambda, mu, p);
  config.validate();
  SharedAccumulator acc{Objective(Query{ConstantKind::CpMinusInf, lambda, mu, p}, false)};
  const GridShape g = grid_shape(config, false);
  std::vector<Vec2> sphere(static_cast<std::size_t>(g.n_theta));
  for (int j = 0; j < g.n_theta; ++j) sphere[static_cast<std::size_t>(j)] = sphere_point(space, theta_node(j, g.n_theta));
  std::vector<double> dens(static_cast<std::size_t>(g.n_t));
  for (int k = 0; k < g.n_t; ++k) dens[static_cast<std::size_t>(k)] = acc.cp.denominator(t_node(k, g.n_t));
  for (int i = 0; i < g.n_theta_x; ++i)
    for (int j = 0; j < g.n_theta; ++j)
      for (int k = 0; k < g.n_t; ++k)
        acc.add(space, sphere[static_cast<std::size_t>(i)], sphere[static_cast<std::size_t>(j)],
                {theta_node(i, g.n_theta), theta_node(j, g.n_theta), t_node(k, g.n_t)},
                dens[static_cast<std::size_t>(k)]);
  for (const Witness& w : extra)
    acc.add(space, sphere_point(space, w.theta_x), sphere_point(space, w.theta_y), w,
            acc.cp.denominator(w.t));
  acc.out.minus_inf.converged = acc.out.nj.converged = true;
  return acc.out;
}

std::map<std::string, double> derived_specializations(const Space& space, const SearchConfig& config,
                                                      double zuo_p) {
  const Estimate cp2 = estimate_constant(space, Query::make(ConstantKind::CpMinusInf, 1.0, 1.0, 2.0), config);
  const Estimate zuo = estimate_constant(space, Query::make(ConstantKind::CpMinusInfZuo, 1.0, 1.0, zuo_p), config);
  return {
      {"CP_MINUS_INF(1,1,2)", cp2.value},
      {"C_MINUS_INF", 0.5 * cp2.value},
      {"CP_MINUS_INF_ZUO", zuo.value},
  };
}

Estimate EstimateCache::get(const Space& space, const Query& query, const SearchConfig& config) {
  const std::string key = describe(space) + "|" + std::string(to_string(query.kind)) + "|" +
                          fmt17(query.lambda) + "|" + fmt17(query.mu) + "|" + fmt17(query.p) + "|" +
                          std::to_string(config.grid_theta) + "|" + std::to_string(config.grid_t) +
                          "|" + std::to_string(config.refine_rounds) + "|" +
                          std::to_string(config.multistart) + "|" + std::to_string(config.seed) +
                          "|" + fmt17(config.tol);
  {
    std::lock_guard lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end()) return it->second;
  }
  Estimate e = estimate_constant(space, query, config);
  std::lock_guard lock(mutex_);
  entries_.emplace(key, e);
  return e;
}

}  // namespace skewvnj
