#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "skewvnj/search.hpp"
#include "skewvnj/vec2.hpp"

namespace skewvnj {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Below this |det| a linear map is treated as singular.
inline constexpr double kSingularDet = 1e-12;

class Space;

/// (|x1|^p + |x2|^p)^(1/p), or max(|x1|, |x2|) for p = inf.
struct LpNorm {
  double p;
};

/// (w1|x1|^p + w2|x2|^p)^(1/p); for p = inf the max-form max(w1|x1|, w2|x2|).
struct WeightedLpNorm {
  double p;
  double w1;
  double w2;
};

/// max_i |<f_i, x>|.
struct PolytopeNorm {
  std::vector<Vec2> functionals;
};

/// ||M x||_base.
struct LinearImageNorm {
  std::shared_ptr<const Space> base;
  Mat2 matrix;
};

using NormSpec = std::variant<LpNorm, WeightedLpNorm, PolytopeNorm, LinearImageNorm>;

/// The real plane with a norm. Immutable; cheap to copy (LinearImage bases
/// are shared).
class Space {
 public:
  static Space lp(double p);
  static Space weighted_lp(double p, double w1, double w2);
  /// Accepts non-spanning functional sets so that norm_axioms_check can
  /// report them; use spans_plane() to reject them up front.
  static Space polytope(std::vector<Vec2> functionals);
  static Space linear_image(const Space& base, const Mat2& matrix);
  /// Regular 2n-gon unit ball: n functionals at angles k*pi/n.
  static Space regular_polygon(int n_functionals);

  const NormSpec& norm() const { return norm_; }

  double operator()(Vec2 v) const;

 private:
  explicit Space(NormSpec norm) : norm_(std::move(norm)) {}
  NormSpec norm_;
};

double eval_norm(const Space& space, Vec2 v);

/// (cos t, sin t) scaled onto the unit sphere of `space`.
Vec2 sphere_point(const Space& space, double theta);

/// Dual norm sup_{||u|| = 1} <f, u>. Closed form for the Lp families,
/// grid + golden-section refinement otherwise (a lower bound then).
double dual_eval(const Space& space, Vec2 f, const SearchConfig& config = {});

/// Exact dual for Lp / WeightedLp; throws UnsupportedDualError otherwise.
Space dual_space(const Space& space);

/// Conjugate exponent q with 1/p + 1/q = 1.
double conjugate_exponent(double p);

/// Seeded sampled check of homogeneity, symmetry, the triangle inequality and
/// definiteness (on an angular grid that contains both axes).
bool norm_axioms_check(const Space& space, int n_samples, std::uint64_t seed);

/// True when some pair of functionals is linearly independent.
bool spans_plane(std::span<const Vec2> functionals);

/// One functional per line, two whitespace-separated decimals; blank lines
/// and lines starting with '#' are skipped.
std::vector<Vec2> parse_polytope_text(std::istream& in);
std::vector<Vec2> load_polytope_file(const std::filesystem::path& path);

/// Canonical descriptor ("lp:2", "wlp:...", "polyv:...", "img:...:<base>");
/// numbers carry 17 significant digits so parsing it back is lossless.
std::string describe(const Space& space);

}  // namespace skewvnj
