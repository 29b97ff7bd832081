#include "skewvnj/norm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numbers>
#include <random>
#include <sstream>

#include "skewvnj/errors.hpp"

namespace skewvnj {
namespace {

double lp_value(double p, double a, double b) {
  a = std::abs(a);
  b = std::abs(b);
  if (p == 1.0) return a + b;
  if (p == 2.0) return std::sqrt(a * a + b * b);
  if (std::isinf(p)) return std::max(a, b);
  const double m = std::max(a, b);
  if (m == 0.0) return 0.0;
  return m * std::pow(std::pow(a / m, p) + std::pow(b / m, p), 1.0 / p);
}

void check_exponent(double p) {
  if (std::isnan(p) || p < 1.0) throw DomainError("norm exponent must satisfy p >= 1");
}

std::string fmt17(double v) {
  if (std::isinf(v)) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

Space Space::lp(double p) {
  check_exponent(p);
  return Space(LpNorm{p});
}

Space Space::weighted_lp(double p, double w1, double w2) {
  check_exponent(p);
  if (!(w1 > 0.0) || !(w2 > 0.0) || !std::isfinite(w1) || !std::isfinite(w2))
    throw DomainError("weights must be positive and finite");
  return Space(WeightedLpNorm{p, w1, w2});
}

Space Space::polytope(std::vector<Vec2> functionals) {
  if (functionals.empty()) throw ConfigError("polytope norm needs at least one functional");
  for (const Vec2& f : functionals)
    if (!is_finite(f)) throw ConfigError("polytope functional is not finite");
  return Space(PolytopeNorm{std::move(functionals)});
}

Space Space::linear_image(const Space& base, const Mat2& matrix) {
  if (!std::isfinite(matrix.det()) || std::abs(matrix.det()) <= kSingularDet)
    throw ConfigError("linear image matrix is singular (|det| <= 1e-12)");
  return Space(LinearImageNorm{std::make_shared<const Space>(base), matrix});
}

Space Space::regular_polygon(int n_functionals) {
  if (n_functionals < 2) throw ConfigError("regular polygon needs at least two functionals");
  std::vector<Vec2> fs;
  fs.reserve(static_cast<std::size_t>(n_functionals));
  for (int k = 0; k < n_functionals; ++k) {
    const double a = std::numbers::pi * k / n_functionals;
    fs.push_back({std::cos(a), std::sin(a)});
  }
  return polytope(std::move(fs));
}

double Space::operator()(Vec2 v) const {
  return std::visit(
      [v](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LpNorm>) {
          return lp_value(n.p, v.x1, v.x2);
        } else if constexpr (std::is_same_v<T, WeightedLpNorm>) {
          if (std::isinf(n.p)) return std::max(n.w1 * std::abs(v.x1), n.w2 * std::abs(v.x2));
          const double s = 1.0 / n.p;
          return lp_value(n.p, std::pow(n.w1, s) * v.x1, std::pow(n.w2, s) * v.x2);
        } else if constexpr (std::is_same_v<T, PolytopeNorm>) {
          double m = 0.0;
          for (const Vec2& f : n.functionals) m = std::max(m, std::abs(dot(f, v)));
          return m;
        } else {
          return (*n.base)(n.matrix(v));
        }
      },
      norm_);
}

double eval_norm(const Space& space, Vec2 v) { return space(v); }

Vec2 sphere_point(const Space& space, double theta) {
  const Vec2 dir{std::cos(theta), std::sin(theta)};
  return dir / space(dir);
}

double conjugate_exponent(double p) {
  check_exponent(p);
  if (p == 1.0) return kInfinity;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

Space dual_space(const Space& space) {
  if (const auto* n = std::get_if<LpNorm>(&space.norm())) return Space::lp(conjugate_exponent(n->p));
  if (const auto* n = std::get_if<WeightedLpNorm>(&space.norm())) {
    // Substituting z_i = w_i^(1/p) x_i gives weights w_i^(1-q) on the dual side;
    // the p = 1 and p = inf endpoints map onto the max-form with 1/w_i.
    if (n->p == 1.0) return Space::weighted_lp(kInfinity, 1.0 / n->w1, 1.0 / n->w2);
    if (std::isinf(n->p)) return Space::weighted_lp(1.0, 1.0 / n->w1, 1.0 / n->w2);
    const double q = conjugate_exponent(n->p);
    return Space::weighted_lp(q, std::pow(n->w1, 1.0 - q), std::pow(n->w2, 1.0 - q));
  }
  throw UnsupportedDualError("exact dual available only for lp and weighted lp norms");
}

double dual_eval(const Space& space, Vec2 f, const SearchConfig& config) {
  if (!is_finite(f)) throw DomainError("functional is not finite");
  if (std::holds_alternative<LpNorm>(space.norm()) ||
      std::holds_alternative<WeightedLpNorm>(space.norm()))
    return dual_space(space)(f);
  config.validate();
  auto res = maximize_on_interval(
      [&](double theta) { return dot(f, sphere_point(space, theta)); }, 0.0, kTwoPi, true,
      config.grid_theta, config.multistart, config.refine_rounds, config.tol);
  return std::max(0.0, res.value);
}

bool norm_axioms_check(const Space& space, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw ConfigError("n_samples must be >= 1");
  constexpr double kSlack = 1e-9;
  // Definiteness: compare the smallest and largest values on the circle.
  double lo = kInfinity, hi = 0.0;
  constexpr int kDirections = 720;
  for (int k = 0; k < kDirections; ++k) {
    const double a = kTwoPi * k / kDirections;
    const double v = space({std::cos(a), std::sin(a)});
    if (!std::isfinite(v)) return false;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(lo > kSlack * hi)) return false;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  std::uniform_real_distribution<double> scale(-5.0, 5.0);
  for (int i = 0; i < n_samples; ++i) {
    const Vec2 u{coord(rng), coord(rng)};
    const Vec2 v{coord(rng), coord(rng)};
    const double c = scale(rng);
    const double nu = space(u), nv = space(v);
    if (!(nu >= 0.0) || !(nv >= 0.0)) return false;
    if (std::abs(space(c * u) - std::abs(c) * nu) > kSlack * std::max(1.0, std::abs(c) * nu))
      return false;
    if (std::abs(space(-u) - nu) > kSlack * std::max(1.0, nu)) return false;
    if (space(u + v) > (nu + nv) * (1.0 + kSlack)) return false;
  }
  return true;
}

bool spans_plane(std::span<const Vec2> functionals) {
  double scale = 0.0;
  for (const Vec2& f : functionals) scale = std::max(scale, dot(f, f));
  for (std::size_t i = 0; i < functionals.size(); ++i)
    for (std::size_t j = i + 1; j < functionals.size(); ++j) {
      const Vec2 a = functionals[i], b = functionals[j];
      if (std::abs(a.x1 * b.x2 - a.x2 * b.x1) > kSingularDet * std::max(scale, 1e-300)) return true;
    }
  return false;
}

std::vector<Vec2> parse_polytope_text(std::istream& in) {
  std::vector<Vec2> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    Vec2 f;
    std::string extra;
    if (!(ls >> f.x1 >> f.x2) || (ls >> extra))
      throw ParseError("polytope file line " + std::to_string(lineno) +
                       ": expected two decimals, got '" + line + "'");
    if (!is_finite(f))
      throw ParseError("polytope file line " + std::to_string(lineno) + ": non-finite value");
    out.push_back(f);
  }
  return out;
}

std::vector<Vec2> load_polytope_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open polytope file '" + path.string() + "'");
  return parse_polytope_text(in);
}

std::string describe(const Space& space) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LpNorm>) {
          return "lp:" + fmt17(n.p);
        } else if constexpr (std::is_same_v<T, WeightedLpNorm>) {
          return "wlp:" + fmt17(n.p) + ":" + fmt17(n.w1) + ":" + fmt17(n.w2);
        } else if constexpr (std::is_same_v<T, PolytopeNorm>) {
          std::string s = "polyv:";
          for (std::size_t i = 0; i < n.functionals.size(); ++i) {
            if (i) s += ';';
            s += fmt17(n.functionals[i].x1) + "," + fmt17(n.functionals[i].x2);
          }
          return s;
        } else {
          const Mat2& m = n.matrix;
          return "img:" + fmt17(m.a) + "," + fmt17(m.b) + "," + fmt17(m.c) + "," + fmt17(m.d) +
                 ":" + describe(*n.base);
        }
      },
      space.norm());
}

}  // namespace skewvnj
