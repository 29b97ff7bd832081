// skewvnj command line: compute / audit / bm / reproduce-paper / sweep.
#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "skewvnj/errors.hpp"
#include "skewvnj/report.hpp"

namespace {

struct Options {
  std::vector<std::string> norms;
  std::vector<std::string> constants;
  double lambda = 1.0;
  double mu = 1.0;
  double p = 2.0;
  skewvnj::SearchConfig config;
  std::string format = "table";
  std::string out;
  double sweep_lo = 0.5;
  double sweep_hi = 2.0;
  int sweep_steps = 7;
};

void add_common(CLI::App* sub, Options& o, bool with_norms) {
  if (with_norms)
    sub->add_option("--norm", o.norms, "norm descriptor, e.g. lp:2, wlp:3:1:2, poly:file.txt, img:1,0,0,2:lp:1");
  sub->add_option("--lambda", o.lambda, "first weight (> 0)");
  sub->add_option("--mu", o.mu, "second weight (> 0)");
  sub->add_option("--p", o.p, "exponent (>= 1)");
  sub->add_option("--grid", o.config.grid_theta, "angular grid points per period");
  sub->add_option("--grid-t", o.config.grid_t, "grid points on t in [0, 1]");
  sub->add_option("--refine", o.config.refine_rounds, "local refinement rounds");
  sub->add_option("--multistart", o.config.multistart, "refined grid cells");
  sub->add_option("--seed", o.config.seed, "seed for sampled checks");
  sub->add_option("--tol", o.config.tol, "refinement stopping tolerance");
  sub->add_option("--threads", o.config.threads, "worker threads (0 = hardware)");
  sub->add_option("--format", o.format, "table, json or csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  sub->add_option("--out", o.out, "write output to this file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Skew generalized Von Neumann-Jordan type constants of planar normed spaces"};
  app.require_subcommand(1, 1);
  Options o;

  auto* compute = app.add_subcommand("compute", "estimate constants");
  add_common(compute, o, true);
  compute->add_option("--constant", o.constants,
                      "CP_MINUS_INF, CNJ_P, CNJ, JAMES, LYJ, C_MINUS_INF or CP_MINUS_INF_ZUO");
  auto* audit = app.add_subcommand("audit", "check the inequalities on the given spaces");
  add_common(audit, o, true);
  auto* bm = app.add_subcommand("bm", "Banach-Mazur upper bound between two spaces");
  add_common(bm, o, true);
  auto* repro = app.add_subcommand("reproduce-paper", "recompute the worked values");
  add_common(repro, o, false);
  auto* sweep = app.add_subcommand("sweep", "CP_MINUS_INF over a (lambda, mu) grid");
  add_common(sweep, o, true);
  sweep->add_option("--from", o.sweep_lo, "smallest weight");
  sweep->add_option("--to", o.sweep_hi, "largest weight");
  sweep->add_option("--steps", o.sweep_steps, "grid points per axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  skewvnj::RunSpec spec;
  try {
    spec.command = skewvnj::parse_command(app.get_subcommands().front()->get_name());
    spec.format = skewvnj::parse_output_format(o.format);
    spec.norms = o.norms;
    spec.config = o.config;
    if (o.constants.empty()) {
      spec.queries.push_back(
          skewvnj::Query::make(skewvnj::ConstantKind::CpMinusInf, o.lambda, o.mu, o.p));
    } else {
      for (const auto& c : o.constants)
        spec.queries.push_back(
            skewvnj::Query::make(skewvnj::parse_constant_kind(c), o.lambda, o.mu, o.p));
    }
    if (!o.out.empty()) spec.output_path = o.out;
    spec.sweep = {o.sweep_lo, o.sweep_hi, o.sweep_steps};
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  const skewvnj::RunResult r = skewvnj::run(spec);
  if (!r.error.empty()) std::cerr << "error: " << r.error << '\n';
  if (!spec.output_path && r.exit_code != 2) std::cout << r.output;
  return r.exit_code;
}
