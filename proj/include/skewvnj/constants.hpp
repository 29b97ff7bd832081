#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>

#include "skewvnj/norm.hpp"
#include "skewvnj/search.hpp"

namespace skewvnj {

enum class ConstantKind {
  CpMinusInf,     // C^p_{-inf}(lambda, mu, X)
  CnjP,           // C^p_NJ(lambda, mu, X)
  Cnj,            // C_NJ(X)
  James,          // J(X)
  Lyj,            // L_YJ(lambda, mu, X)
  CMinusInf,      // C_{-inf}(X)
  CpMinusInfZuo,  // C^p_{-inf}(X), the lambda = mu = 1 case
};

std::string_view to_string(ConstantKind kind);
/// Accepts the upper-case names ("CP_MINUS_INF") case-insensitively, with
/// '-' and '_' interchangeable. Throws ParseError.
ConstantKind parse_constant_kind(std::string_view name);

struct Query {
  ConstantKind kind = ConstantKind::CpMinusInf;
  double lambda = 1.0;
  double mu = 1.0;
  double p = 2.0;

  /// Builds a validated query. CNJ, C_MINUS_INF use (1, 1, 2), JAMES uses
  /// (1, 1, 1) and CP_MINUS_INF_ZUO forces lambda = mu = 1.
  static Query make(ConstantKind kind, double lambda = 1.0, double mu = 1.0, double p = 2.0);
  void validate() const;

  friend bool operator==(const Query&, const Query&) = default;
};

/// A point of the search domain: x = u(theta_x), y = u(theta_y) on the unit
/// sphere and the scale t in [0, 1] applied to y.
struct Witness {
  double theta_x = 0.0;
  double theta_y = 0.0;
  double t = 0.0;
};

struct Estimate {
  double value = 0.0;  // objective at `witness`, hence a lower bound of the supremum
  Witness witness;
  std::int64_t samples_evaluated = 0;
  bool converged = false;
};

// Ratio objectives on arbitrary pairs. All throw DomainError when both
// vectors vanish.
double ratio_cp_minus_inf(double lambda, double mu, double p, Vec2 x, Vec2 y, const Space& space);
double ratio_cnj_p(double lambda, double mu, double p, Vec2 x, Vec2 y, const Space& space);
/// min(||x + y||, ||x - y||); both inputs must lie on the unit sphere (1e-9).
double ratio_james(Vec2 x, Vec2 y, const Space& space);
double ratio_lyj(double lambda, double mu, Vec2 x, Vec2 y, const Space& space);

/// Objective of `query` at a domain point (x = u(theta_x), second vector t*u(theta_y)).
double objective_at(const Space& space, const Query& query, const Witness& w);

/// Closed-form lower bound min(l^p, m^p) / (2^(p-3)(l^p + m^p)).
double cp_lower_bound(double lambda, double mu, double p);
/// Universal [lower, upper] envelope of each constant, used in reports.
std::pair<double, double> universal_bounds(const Query& query);

/// Grid over (theta_x, theta_y, t), then multistart coordinate-wise
/// golden-section refinement of the best `multistart` cells. JAMES searches
/// (theta_x, theta_y) with t = 1. Deterministic for a given config.
Estimate estimate_constant(const Space& space, const Query& query, const SearchConfig& config = {});

/// C^p_{-inf}(lambda, mu, X) restricted to unit pairs (t = 1).
Estimate estimate_unit_pairs(const Space& space, double lambda, double mu, double p,
                             const SearchConfig& config = {});

struct SharedEstimates {
  Estimate minus_inf;  // max of the C^p_{-inf} ratio over the sample set
  Estimate nj;         // max of the C^p_NJ ratio over the same set
};

/// Both ratios maximized over one explicit sample set, so
/// minus_inf.value <= nj.value holds exactly. Throws ConfigError if empty.
SharedEstimates estimate_on_samples(const Space& space, double lambda, double mu, double p,
                                    std::span<const Witness> samples);

/// Same, over the coarse grid of `config` plus the `extra` points.
SharedEstimates estimate_on_grid(const Space& space, double lambda, double mu, double p,
                                 const SearchConfig& config, std::span<const Witness> extra = {});

/// C_MINUS_INF = C^2_{-inf}(1,1,X)/2 and CP_MINUS_INF_ZUO(p) = C^p_{-inf}(1,1,X)
/// (both denominators reduce to 2^(p-2)(||x||^p + ||y||^p)).
std::map<std::string, double> derived_specializations(const Space& space,
                                                      const SearchConfig& config = {},
                                                      double zuo_p = 2.0);

/// Thread-safe memo of estimate_constant keyed by (descriptor, query, config).
class EstimateCache {
 public:
  Estimate get(const Space& space, const Query& query, const SearchConfig& config);

 private:
  std::mutex mutex_;
  std::map<std::string, Estimate> entries_;
};

}  // namespace skewvnj
