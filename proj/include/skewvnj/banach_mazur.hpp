#pragma once

#include <utility>

#include "skewvnj/audit.hpp"
#include "skewvnj/norm.hpp"
#include "skewvnj/search.hpp"

namespace skewvnj {

/// Invertible linear map of the plane.
class Transform2 {
 public:
  /// Throws ConfigError when |det m| <= 1e-12.
  explicit Transform2(const Mat2& m);
  static Transform2 identity() { return Transform2(Mat2::identity()); }
  /// R(alpha) diag(s, 1) R(beta), optionally preceded by the reflection diag(1, -1).
  static Transform2 rotation_stretch(double alpha, double s, double beta, bool reflect);

  const Mat2& matrix() const { return m_; }
  Transform2 inverse() const { return Transform2(m_.inverse()); }
  Vec2 operator()(Vec2 v) const { return m_(v); }

 private:
  Mat2 m_;
};

struct BmEstimate {
  double upper_bound = 1.0;  // ||T|| ||T^-1|| at best_transform, >= 1
  Transform2 best_transform = Transform2::identity();
  bool converged = false;
};

struct BmOptions {
  double s_max = 20.0;
  int grid_angle = 24;  // points on [0, pi) for each rotation angle
  int grid_scale = 16;  // points on [0, log s_max]
  int max_starts = 4;   // refined outer cells, capped by config.multistart
};

/// sup_{||u||_from = 1} ||T u||_to by angular grid + golden-section
/// refinement; a lower bound of the operator norm.
double operator_norm(const Space& from, const Space& to, const Transform2& t,
                     const SearchConfig& config = {});

/// Minimizes ||T|| ||T^-1|| over T = R(alpha) diag(s, 1) R(beta) [F] with
/// alpha, beta in [0, pi), s in [1, s_max] and F an optional reflection. The
/// identity is always a candidate, so bm_upper_bound(X, X) = 1.
BmEstimate bm_upper_bound(const Space& x_space, const Space& y_space,
                          const SearchConfig& config = {}, const BmOptions& opts = {});

/// (a, b) with a ||u||_2 <= ||u||_1 <= b ||u||_2, from refined extremes of
/// ||u||_1 / ||u||_2 over directions.
std::pair<double, double> equivalent_norm_ratio(const Space& space1, const Space& space2,
                                                const SearchConfig& config = {});

/// C(X)/d^p <= C(Y) <= C(X) d^p with d replaced by the upper bound d-hat;
/// that substitution only loosens both sides.
AuditRecord audit_bm_stability(const Space& x_space, const Space& y_space, double lambda,
                               double mu, double p, const SearchConfig& config = {},
                               const AuditOptions& opts = {}, const BmOptions& bm_opts = {},
                               EstimateCache* cache = nullptr);

}  // namespace skewvnj
