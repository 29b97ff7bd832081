#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "skewvnj/constants.hpp"
#include "skewvnj/norm.hpp"
#include "skewvnj/search.hpp"

namespace skewvnj {

struct AuditParams {
  double lambda = 1.0;
  double mu = 1.0;
  double p = 2.0;

  friend auto operator<=>(const AuditParams&, const AuditParams&) = default;
};

/// Tolerance regime of a record. Rigorous: both sides are exact or the
/// one-sided estimation error can only help, slack >= -audit_tol. Relaxed:
/// needs converged values on both sides, slack >= -audit_relax after at most
/// one re-run at doubled grid resolution.
enum class Regime { Rigorous, Relaxed, Predicate };

struct AuditRecord {
  std::string theorem_id;
  std::string space_descr;
  AuditParams params;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool passed = false;
  bool skipped = false;
  Regime regime = Regime::Rigorous;
  std::string note;
};

struct AuditReport {
  std::vector<AuditRecord> records;
  int n_passed = 0;
  int n_failed = 0;
};

struct AuditOptions {
  double audit_tol = 1e-6;
  double audit_relax = 1e-4;
  bool rerun_on_failure = true;
};

/// lower(l, m, p) <= C^p_{-inf} <= 2.
AuditRecord audit_universal_bounds(const Space& space, double lambda, double mu, double p,
                                   const SearchConfig& config = {}, const AuditOptions& opts = {},
                                   EstimateCache* cache = nullptr);

/// C^p_{-inf} <= C^p_NJ <= C^p_{-inf}/2 + 4 max(l^p, m^p)/(l^p + m^p). The left
/// side is checked exactly on shared samples, the right side relaxed.
AuditRecord audit_nj_sandwich(const Space& space, double lambda, double mu, double p,
                              const SearchConfig& config = {}, const AuditOptions& opts = {},
                              EstimateCache* cache = nullptr);

/// When the two shared-sample constants agree, the C^p_{-inf} witness must
/// have ||l x + m t y|| = ||m x - l t y|| (relative 1e-4).
AuditRecord audit_equality_witness(const Space& space, double lambda, double mu, double p,
                                   const SearchConfig& config = {}, const AuditOptions& opts = {},
                                   EstimateCache* cache = nullptr);

/// Two-sided bound between the constants of X and X*. Throws
/// UnsupportedDualError outside the Lp families.
AuditRecord audit_dual(const Space& space, double lambda, double mu, double p,
                       const SearchConfig& config = {}, const AuditOptions& opts = {},
                       EstimateCache* cache = nullptr);

/// [max(l,m) J - |l-m|]^p / D <= C^p_{-inf} <= [min(l,m) J + |l-m|]^p / D with
/// D = 2^(p-2)(l^p + m^p).
AuditRecord audit_james_bounds(const Space& space, double lambda, double mu, double p,
                               const SearchConfig& config = {}, const AuditOptions& opts = {},
                               EstimateCache* cache = nullptr);

/// Classifies X against the threshold (l+m)^p / (2^(p-2)(l^p+m^p)) and checks
/// the classification agrees with J < 2 and C_NJ < 2.
AuditRecord audit_nonsquare_threshold(const Space& space, double lambda, double mu, double p,
                                      const SearchConfig& config = {},
                                      const AuditOptions& opts = {},
                                      EstimateCache* cache = nullptr);

double nonsquare_threshold(double lambda, double mu, double p);

/// Right-hand side of the normal-structure condition; the bracket
/// min(l,m)(w^2+1) - |l-m| w is clamped at 0.
double normal_structure_bound(double omega, double lambda, double mu, double p);

/// True iff c < normal_structure_bound(omega, ...). Throws DomainError unless
/// 1 <= omega <= 3.
bool normal_structure_check(double c_value, double omega, double lambda, double mu, double p);

/// Every applicable audit for every (space, params) pair. Records are sorted
/// by (theorem_id, space_descr, params). Throws ConfigError on empty input.
AuditReport run_full_audit(const std::vector<Space>& corpus, const std::vector<AuditParams>& grid,
                           const SearchConfig& config = {}, const AuditOptions& opts = {});

/// Fills the counts and sorts the records.
void finalize_report(AuditReport& report);

std::string_view to_string(Regime regime);

}  // namespace skewvnj
