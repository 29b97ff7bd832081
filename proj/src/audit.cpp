#include "skewvnj/audit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>

#include "skewvnj/errors.hpp"

namespace skewvnj {
namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

Estimate estimate(const Space& space, const Query& q, const SearchConfig& config, EstimateCache* cache) {
  return cache ? cache->get(space, q, config) : estimate_constant(space, q, config);
}

double pw(double base, double p) { return std::pow(base, p); }

AuditRecord base_record(std::string id, const Space& space, double lambda, double mu, double p,
                        Regime regime) {
  AuditRecord r;
  r.theorem_id = std::move(id);
  r.space_descr = describe(space);
  r.params = {lambda, mu, p};
  r.regime = regime;
  return r;
}

// Two-sided chain lower <= value <= upper: keeps the tighter side.
void set_chain(AuditRecord& r, double lower, double value, double upper) {
  const double s_lo = value - lower;
  const double s_hi = upper - value;
  if (s_lo <= s_hi) {
    r.lhs = lower;
    r.rhs = value;
    r.slack = s_lo;
  } else {
    r.lhs = value;
    r.rhs = upper;
    r.slack = s_hi;
  }
}

AuditRecord with_rerun(const std::function<AuditRecord(const SearchConfig&)>& compute,
                       const SearchConfig& config, const AuditOptions& opts) {
  AuditRecord r = compute(config);
  if (r.passed || !opts.rerun_on_failure) return r;
  const SearchConfig finer = config.doubled();
  AuditRecord again = compute(finer);
  again.note += (again.note.empty() ? "" : "; ") + std::string("re-run at grid_theta=") +
                std::to_string(finer.grid_theta) + ", grid_t=" + std::to_string(finer.grid_t) +
                " after first-pass slack " + num(r.slack);
  return again;
}

}  // namespace

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Rigorous: return "rigorous";
    case Regime::Relaxed: return "relaxed";
    case Regime::Predicate: return "predicate";
  }
  return "unknown";
}

AuditRecord audit_universal_bounds(const Space& space, double lambda, double mu, double p,
                                   const SearchConfig& config, const AuditOptions& opts,
                                   EstimateCache* cache) {
  const double lower = cp_lower_bound(lambda, mu, p);
  const Estimate c = estimate(space, Query::make(ConstantKind::CpMinusInf, lambda, mu, p), config, cache);
  AuditRecord r = base_record("bounds", space, lambda, mu, p, Regime::Rigorous);
  set_chain(r, lower, c.value, 2.0);
  const bool lower_ok = c.value - lower >= -opts.audit_tol;
  const bool upper_ok = c.value <= 2.0 + 1e-9;
  r.passed = lower_ok && upper_ok;
  r.note = "chain " + num(lower) + " <= C=" + num(c.value) + " <= 2";
  if (!upper_ok) r.note += "; evaluated ratio above 2 indicates an implementation bug";
  return r;
}

AuditRecord audit_nj_sandwich(const Space& space, double lambda, double mu, double p,
                              const SearchConfig& config, const AuditOptions& opts,
                              EstimateCache* cache) {
  const double lp = pw(lambda, p), mp = pw(mu, p);
  const double offset = 4.0 * std::max(lp, mp) / (lp + mp);
  auto compute = [&](const SearchConfig& cfg) {
    const Estimate cp = estimate(space, Query::make(ConstantKind::CpMinusInf, lambda, mu, p), cfg, cache);
    const Estimate nj = estimate(space, Query::make(ConstantKind::CnjP, lambda, mu, p), cfg, cache);
    const std::array<Witness, 2> extra{cp.witness, nj.witness};
    const SharedEstimates shared = estimate_on_grid(space, lambda, mu, p, cfg, extra);
    const bool left_ok = shared.minus_inf.value <= shared.nj.value;
    AuditRecord r = base_record("nj_sandwich", space, lambda, mu, p, Regime::Relaxed);
    r.lhs = nj.value;
    r.rhs = 0.5 * cp.value + offset;
    r.slack = r.rhs - r.lhs;
    r.passed = left_ok && r.slack >= -opts.audit_relax;
    r.note = "left (shared samples, exact): " + num(shared.minus_inf.value) + " <= " +
             num(shared.nj.value) + (left_ok ? "" : " VIOLATED") + "; right (relaxed): C_NJ=" +
             num(nj.value) + " <= C/2 + " + num(offset);
    return r;
  };
  return with_rerun(compute, config, opts);
}

AuditRecord audit_equality_witness(const Space& space, double lambda, double mu, double p,
                                   const SearchConfig& config, const AuditOptions& opts,
                                   EstimateCache* cache) {
  constexpr double kRelTol = 1e-4;
  const Estimate cp = estimate(space, Query::make(ConstantKind::CpMinusInf, lambda, mu, p), config, cache);
  const Estimate nj = estimate(space, Query::make(ConstantKind::CnjP, lambda, mu, p), config, cache);
  const std::array<Witness, 2> extra{cp.witness, nj.witness};
  const SharedEstimates shared = estimate_on_grid(space, lambda, mu, p, config, extra);
  AuditRecord r = base_record("equality_witness", space, lambda, mu, p, Regime::Rigorous);
  if (std::abs(shared.minus_inf.value - shared.nj.value) > opts.audit_tol) {
    r.lhs = shared.minus_inf.value;
    r.rhs = shared.nj.value;
    r.slack = r.rhs - r.lhs;
    r.passed = true;
    r.note = "hypothesis not met: constants differ by " +
             num(shared.nj.value - shared.minus_inf.value) + ", nothing to check";
    return r;
  }
  const Witness& w = shared.minus_inf.witness;
  const Vec2 x = sphere_point(space, w.theta_x);
  const Vec2 ty = w.t * sphere_point(space, w.theta_y);
  const double n1 = space(lambda * x + mu * ty);
  const double n2 = space(mu * x - lambda * ty);
  const double rel = std::abs(n1 - n2) / std::max({n1, n2, 1e-300});
  r.lhs = rel;
  r.rhs = kRelTol;
  r.slack = kRelTol - rel;
  r.passed = rel <= kRelTol;
  r.note = "witness (" + num(w.theta_x) + ", " + num(w.theta_y) + ", t=" + num(w.t) +
           "): ||l x + m t y|| = " + num(n1) + ", ||m x - l t y|| = " + num(n2);
  return r;
}

AuditRecord audit_dual(const Space& space, double lambda, double mu, double p,
                       const SearchConfig& config, const AuditOptions& opts, EstimateCache* cache) {
  const Space dual = dual_space(space);
  const double lp = pw(lambda, p), mp = pw(mu, p);
  const double two_pm2 = std::pow(2.0, p - 2.0);
  const double ratio = pw(lambda + mu, p) / (lp + mp);
  auto compute = [&](const SearchConfig& cfg) {
    const Query q = Query::make(ConstantKind::CpMinusInf, lambda, mu, p);
    const double cx = estimate(space, q, cfg, cache).value;
    const double cd = estimate(dual, q, cfg, cache).value;
    const double lower = cx / two_pm2 - ratio / two_pm2;
    const double upper = two_pm2 * cx + ratio;
    AuditRecord r = base_record("dual", space, lambda, mu, p, Regime::Relaxed);
    set_chain(r, lower, cd, upper);
    r.passed = r.slack >= -opts.audit_relax;
    r.note = "dual " + describe(dual) + ": " + num(lower) + " <= C(X*)=" + num(cd) + " <= " +
             num(upper) + " with C(X)=" + num(cx);
    return r;
  };
  return with_rerun(compute, config, opts);
}

AuditRecord audit_james_bounds(const Space& space, double lambda, double mu, double p,
                               const SearchConfig& config, const AuditOptions& opts,
                               EstimateCache* cache) {
  const double lp = pw(lambda, p), mp = pw(mu, p);
  const double den = std::pow(2.0, p - 2.0) * (lp + mp);
  const double hi = std::max(lambda, mu), lo = std::min(lambda, mu), gap = std::abs(lambda - mu);
  auto compute = [&](const SearchConfig& cfg) {
    const double j = estimate(space, Query::make(ConstantKind::James), cfg, cache).value;
    const double c = estimate(space, Query::make(ConstantKind::CpMinusInf, lambda, mu, p), cfg, cache).value;
    const double lower = pw(std::max(0.0, hi * j - gap), p) / den;
    const double upper = pw(lo * j + gap, p) / den;
    AuditRecord r = base_record("james_bounds", space, lambda, mu, p, Regime::Relaxed);
    set_chain(r, lower, c, upper);
    r.passed = r.slack >= -opts.audit_relax;
    r.note = num(lower) + " <= C=" + num(c) + " <= " + num(upper) + " with J=" + num(j) +
             "; J and C are both lower estimates, so this is a convergence audit";
    if (!r.passed && upper - c < -opts.audit_relax) {
      const double c1 = estimate_unit_pairs(space, lambda, mu, p, cfg).value;
      r.note += "; upper side fails: unit-pair supremum C(t=1)=" + num(c1) +
                (c1 <= upper + opts.audit_relax ? " satisfies" : " also violates") +
                " the bound, the excess comes from pairs with ||y|| < ||x||";
    }
    return r;
  };
  return with_rerun(compute, config, opts);
}

double nonsquare_threshold(double lambda, double mu, double p) {
  return pw(lambda + mu, p) / (std::pow(2.0, p - 2.0) * (pw(lambda, p) + pw(mu, p)));
}

AuditRecord audit_nonsquare_threshold(const Space& space, double lambda, double mu, double p,
                                      const SearchConfig& config, const AuditOptions& opts,
                                      EstimateCache* cache) {
  const double threshold = nonsquare_threshold(lambda, mu, p);
  const double c = estimate(space, Query::make(ConstantKind::CpMinusInf, lambda, mu, p), config, cache).value;
  const double j = estimate(space, Query::make(ConstantKind::James), config, cache).value;
  const double cnj = estimate(space, Query::make(ConstantKind::Cnj), config, cache).value;
  const double tol = opts.audit_tol;
  const bool uns_c = c < threshold - tol;
  const bool uns_j = j < 2.0 - tol;
  const bool uns_nj = cnj < 2.0 - tol;
  const char* c_class = uns_c ? "uniformly non-square"
                        : std::abs(c - threshold) <= tol ? "at threshold" : "above threshold";

  AuditRecord r = base_record("nonsquare_threshold", space, lambda, mu, p, Regime::Predicate);
  r.lhs = c;
  r.rhs = threshold;
  r.slack = threshold - c;
  r.note = std::string("C classifies ") + c_class + "; J=" + num(j) +
           (uns_j ? " (< 2)" : " (= 2)") + "; C_NJ=" + num(cnj) + (uns_nj ? " (< 2)" : " (= 2)");
  if (p == 1.0 && lambda == mu) {
    // At p = 1, lambda = mu the constant is 2 for every space (it equals its
    // own lower bound), so the threshold test cannot separate spaces.
    r.passed = true;
    r.note += "; degenerate case p = 1, lambda = mu: C = threshold = 2 for every space";
    return r;
  }
  r.passed = uns_c == uns_j && uns_j == uns_nj;
  if (!r.passed) r.note += "; classifications disagree";
  return r;
}

double normal_structure_bound(double omega, double lambda, double mu, double p) {
  const double w2 = omega * omega;
  const double bracket = std::min(lambda, mu) * (w2 + 1.0) - std::abs(lambda - mu) * omega;
  const double wp = std::pow(omega, p);
  return std::pow(std::max(0.0, bracket), p) /
         (std::pow(2.0, p - 3.0) * (std::pow(lambda, p) + std::pow(mu, p)) * wp * (wp + 1.0));
}

bool normal_structure_check(double c_value, double omega, double lambda, double mu, double p) {
  if (!(omega >= 1.0 && omega <= 3.0)) throw DomainError("omega must lie in [1, 3]");
  if (!(lambda > 0.0) || !(mu > 0.0) || !(p >= 1.0) || !std::isfinite(p))
    throw DomainError("need lambda > 0, mu > 0, 1 <= p < inf");
  return c_value < normal_structure_bound(omega, lambda, mu, p);
}

void finalize_report(AuditReport& report) {
  std::sort(report.records.begin(), report.records.end(), [](const AuditRecord& a, const AuditRecord& b) {
    return std::tie(a.theorem_id, a.space_descr, a.params) < std::tie(b.theorem_id, b.space_descr, b.params);
  });
  report.n_passed = static_cast<int>(std::count_if(report.records.begin(), report.records.end(),
                                                   [](const AuditRecord& r) { return r.passed; }));
  report.n_failed = static_cast<int>(report.records.size()) - report.n_passed;
}

AuditReport run_full_audit(const std::vector<Space>& corpus, const std::vector<AuditParams>& grid,
                           const SearchConfig& config, const AuditOptions& opts) {
  if (corpus.empty()) throw ConfigError("audit corpus is empty");
  if (grid.empty()) throw ConfigError("audit parameter grid is empty");
  config.validate();
  EstimateCache cache;
  AuditReport report;
  for (const Space& space : corpus) {
    for (const AuditParams& ap : grid) {
      const double l = ap.lambda, m = ap.mu, p = ap.p;
      report.records.push_back(audit_universal_bounds(space, l, m, p, config, opts, &cache));
      report.records.push_back(audit_nj_sandwich(space, l, m, p, config, opts, &cache));
      report.records.push_back(audit_equality_witness(space, l, m, p, config, opts, &cache));
      try {
        report.records.push_back(audit_dual(space, l, m, p, config, opts, &cache));
      } catch (const UnsupportedDualError& e) {
        AuditRecord r = base_record("dual", space, l, m, p, Regime::Relaxed);
        r.passed = true;
        r.skipped = true;
        r.note = std::string("skipped: ") + e.what();
        report.records.push_back(std::move(r));
      }
      report.records.push_back(audit_james_bounds(space, l, m, p, config, opts, &cache));
      report.records.push_back(audit_nonsquare_threshold(space, l, m, p, config, opts, &cache));
    }
  }
  finalize_report(report);
  return report;
}

}  // namespace skewvnj
