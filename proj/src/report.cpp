#include "skewvnj/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "skewvnj/errors.hpp"

namespace skewvnj {
namespace {

using nlohmann::ordered_json;

std::string fmt12(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

double parse_number(std::string_view token, std::string_view what) {
  const std::string t = trim(token);
  if (t == "inf" || t == "Inf" || t == "INF") return kInfinity;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v))
    throw ParseError("invalid " + std::string(what) + " '" + std::string(token) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

Space checked_polytope(std::vector<Vec2> fs, std::string_view origin) {
  if (!spans_plane(fs))
    throw ParseError("polytope functionals from '" + std::string(origin) + "' do not span the plane");
  return Space::polytope(std::move(fs));
}

ordered_json estimate_json(const std::string& descr, const Query& q, const Estimate& e) {
  const auto [lower, upper] = universal_bounds(q);
  ordered_json j;
  j["query"] = {{"kind", std::string(to_string(q.kind))},
                {"lambda", round12(q.lambda)},
                {"mu", round12(q.mu)},
                {"p", round12(q.p)},
                {"space", descr}};
  j["estimate"] = {{"value", round12(e.value)},
                   {"witness",
                    {{"theta_x", round12(e.witness.theta_x)},
                     {"theta_y", round12(e.witness.theta_y)},
                     {"t", round12(e.witness.t)}}},
                   {"samples", e.samples_evaluated},
                   {"converged", e.converged}};
  j["bounds"] = {{"lower", round12(lower)}, {"upper", round12(upper)}};
  return j;
}

ordered_json record_json(const AuditRecord& r) {
  return {{"theorem_id", r.theorem_id}, {"space", r.space_descr},
          {"lambda", round12(r.params.lambda)}, {"mu", round12(r.params.mu)},
          {"p", round12(r.params.p)}, {"lhs", round12(r.lhs)}, {"rhs", round12(r.rhs)},
          {"slack", round12(r.slack)}, {"passed", r.passed}, {"skipped", r.skipped},
          {"regime", std::string(to_string(r.regime))}, {"note", r.note}};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string pad(std::string s, std::size_t width) {
  s.append(s.size() < width ? width - s.size() : 1, ' ');
  return s;
}

std::string records_output(const AuditReport& report, OutputFormat format) {
  std::ostringstream out;
  switch (format) {
    case OutputFormat::Json: {
      ordered_json j;
      j["records"] = ordered_json::array();
      for (const auto& r : report.records) j["records"].push_back(record_json(r));
      j["n_passed"] = report.n_passed;
      j["n_failed"] = report.n_failed;
      out << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::Csv:
      out << "theorem_id,space,lambda,mu,p,lhs,rhs,slack,passed,skipped,regime,note\n";
      for (const auto& r : report.records)
        out << r.theorem_id << ',' << csv_field(r.space_descr) << ',' << fmt12(r.params.lambda)
            << ',' << fmt12(r.params.mu) << ',' << fmt12(r.params.p) << ',' << fmt12(r.lhs) << ','
            << fmt12(r.rhs) << ',' << fmt12(r.slack) << ',' << (r.passed ? "true" : "false") << ','
            << (r.skipped ? "true" : "false") << ',' << to_string(r.regime) << ','
            << csv_field(r.note) << '\n';
      break;
    case OutputFormat::Table:
      for (const auto& r : report.records)
        out << pad(r.passed ? (r.skipped ? "SKIP" : "PASS") : "FAIL", 6)
            << pad(r.theorem_id, 22) << pad(r.space_descr, 28) << " (" << fmt12(r.params.lambda)
            << ", " << fmt12(r.params.mu) << ", " << fmt12(r.params.p)
            << ")  slack=" << fmt12(r.slack) << "  [" << to_string(r.regime) << "] " << r.note
            << '\n';
      out << report.n_passed << " passed, " << report.n_failed << " failed\n";
      break;
  }
  return out.str();
}

std::string paper_output(const std::vector<PaperRow>& rows, OutputFormat format) {
  std::ostringstream out;
  switch (format) {
    case OutputFormat::Json: {
      ordered_json j = ordered_json::array();
      for (const auto& r : rows)
        j.push_back({{"label", r.label}, {"expected", round12(r.expected)},
                     {"computed", round12(r.computed)}, {"diff", round12(r.diff)},
                     {"pass", r.pass}});
      out << j.dump(2) << '\n';
      break;
    }
    case OutputFormat::Csv:
      out << "label,expected,computed,diff,pass\n";
      for (const auto& r : rows)
        out << csv_field(r.label) << ',' << fmt12(r.expected) << ',' << fmt12(r.computed) << ','
            << fmt12(r.diff) << ',' << (r.pass ? "true" : "false") << '\n';
      break;
    case OutputFormat::Table:
      out << pad("label", 52) << pad("expected", 12) << pad("computed", 18) << pad("|diff|", 14)
          << "pass\n";
      for (const auto& r : rows)
        out << pad(r.label, 52) << pad(fmt12(r.expected), 12) << pad(fmt12(r.computed), 18)
            << pad(fmt12(r.diff), 14) << (r.pass ? "yes" : "NO") << '\n';
      break;
  }
  return out.str();
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

RunResult execute(const RunSpec& spec) {
  spec.config.validate();
  std::vector<Space> spaces;
  for (const auto& d : spec.norms) spaces.push_back(parse_norm_descriptor(d));
  const Query first = spec.queries.empty() ? Query::make(ConstantKind::CpMinusInf) : spec.queries.front();
  first.validate();

  RunResult result;
  std::ostringstream out;
  switch (spec.command) {
    case Command::Compute: {
      if (spaces.empty()) throw UsageError("compute needs at least one --norm");
      const std::vector<Query> queries =
          spec.queries.empty() ? std::vector<Query>{first} : spec.queries;
      ordered_json arr = ordered_json::array();
      if (spec.format == OutputFormat::Csv)
        out << "space,kind,lambda,mu,p,value,theta_x,theta_y,t,samples,converged,lower,upper\n";
      for (std::size_t s = 0; s < spaces.size(); ++s) {
        for (const Query& q : queries) {
          const Estimate e = estimate_constant(spaces[s], q, spec.config);
          const auto [lower, upper] = universal_bounds(q);
          if (spec.format == OutputFormat::Json) {
            arr.push_back(estimate_json(spec.norms[s], q, e));
          } else if (spec.format == OutputFormat::Csv) {
            out << csv_field(spec.norms[s]) << ',' << to_string(q.kind) << ',' << fmt12(q.lambda)
                << ',' << fmt12(q.mu) << ',' << fmt12(q.p) << ',' << fmt12(e.value) << ','
                << fmt12(e.witness.theta_x) << ',' << fmt12(e.witness.theta_y) << ','
                << fmt12(e.witness.t) << ',' << e.samples_evaluated << ','
                << (e.converged ? "true" : "false") << ',' << fmt12(lower) << ',' << fmt12(upper)
                << '\n';
          } else {
            out << spec.norms[s] << "  " << to_string(q.kind) << "(lambda=" << fmt12(q.lambda)
                << ", mu=" << fmt12(q.mu) << ", p=" << fmt12(q.p) << ") = " << fmt12(e.value)
                << "  witness=(" << fmt12(e.witness.theta_x) << ", " << fmt12(e.witness.theta_y)
                << ", " << fmt12(e.witness.t) << ")  samples=" << e.samples_evaluated
                << "  converged=" << (e.converged ? "yes" : "no") << "  bounds=[" << fmt12(lower)
                << ", " << fmt12(upper) << "]\n";
          }
        }
      }
      if (spec.format == OutputFormat::Json)
        out << (arr.size() == 1 ? arr[0] : arr).dump(2) << '\n';
      break;
    }
    case Command::Audit: {
      if (spaces.empty()) throw UsageError("audit needs at least one --norm");
      const AuditReport report =
          run_full_audit(spaces, {{first.lambda, first.mu, first.p}}, spec.config);
      out << records_output(report, spec.format);
      result.exit_code = report.n_failed > 0 ? 1 : 0;
      break;
    }
    case Command::Bm: {
      if (spaces.size() != 2) throw UsageError("bm needs exactly two --norm options");
      const BmEstimate bm = bm_upper_bound(spaces[0], spaces[1], spec.config);
      AuditReport report;
      report.records.push_back(
          audit_bm_stability(spaces[0], spaces[1], first.lambda, first.mu, first.p, spec.config));
      finalize_report(report);
      const Mat2& m = bm.best_transform.matrix();
      if (spec.format == OutputFormat::Json) {
        ordered_json j;
        j["bm"] = {{"x", spec.norms[0]},
                   {"y", spec.norms[1]},
                   {"upper_bound", round12(bm.upper_bound)},
                   {"transform", {round12(m.a), round12(m.b), round12(m.c), round12(m.d)}},
                   {"converged", bm.converged}};
        j["stability"] = record_json(report.records.front());
        out << j.dump(2) << '\n';
      } else if (spec.format == OutputFormat::Csv) {
        out << "x,y,upper_bound,t11,t12,t21,t22,converged\n"
            << csv_field(spec.norms[0]) << ',' << csv_field(spec.norms[1]) << ','
            << fmt12(bm.upper_bound) << ',' << fmt12(m.a) << ',' << fmt12(m.b) << ','
            << fmt12(m.c) << ',' << fmt12(m.d) << ',' << (bm.converged ? "true" : "false") << '\n';
        out << records_output(report, OutputFormat::Csv);
      } else {
        out << "d(" << spec.norms[0] << ", " << spec.norms[1] << ") <= " << fmt12(bm.upper_bound)
            << "  T=[[" << fmt12(m.a) << ", " << fmt12(m.b) << "], [" << fmt12(m.c) << ", "
            << fmt12(m.d) << "]]  converged=" << (bm.converged ? "yes" : "no") << '\n';
        out << records_output(report, OutputFormat::Table);
      }
      result.exit_code = report.n_failed > 0 ? 1 : 0;
      break;
    }
    case Command::Sweep: {
      if (spaces.empty()) throw UsageError("sweep needs at least one --norm");
      if (spec.sweep.steps < 1 || !(spec.sweep.lo > 0.0) || spec.sweep.hi < spec.sweep.lo)
        throw UsageError("invalid sweep grid");
      ordered_json arr = ordered_json::array();
      if (spec.format != OutputFormat::Json) out << "lambda,mu,p,value,converged\n";
      const int n = spec.sweep.steps;
      auto node = [&](int i) {
        return n == 1 ? spec.sweep.lo : spec.sweep.lo + (spec.sweep.hi - spec.sweep.lo) * i / (n - 1);
      };
      for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
          const Query q = Query::make(ConstantKind::CpMinusInf, node(i), node(k), first.p);
          const Estimate e = estimate_constant(spaces.front(), q, spec.config);
          if (spec.format == OutputFormat::Json)
            arr.push_back({{"lambda", round12(q.lambda)}, {"mu", round12(q.mu)},
                           {"p", round12(q.p)}, {"value", round12(e.value)},
                           {"converged", e.converged}});
          else
            out << fmt12(q.lambda) << ',' << fmt12(q.mu) << ',' << fmt12(q.p) << ','
                << fmt12(e.value) << ',' << (e.converged ? "true" : "false") << '\n';
        }
      }
      if (spec.format == OutputFormat::Json) out << arr.dump(2) << '\n';
      break;
    }
    case Command::ReproducePaper: {
      const auto rows = reproduce_paper(spec.config);
      out << paper_output(rows, spec.format);
      result.exit_code = std::all_of(rows.begin(), rows.end(), [](const PaperRow& r) { return r.pass; }) ? 0 : 1;
      break;
    }
  }
  result.output = out.str();
  return result;
}

}  // namespace

double round12(double v) {
  if (!std::isfinite(v) || v == 0.0) return v;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

Space parse_norm_descriptor(std::string_view descriptor) {
  const std::string d = trim(descriptor);
  if (d.empty()) throw ParseError("empty norm descriptor");
  const auto colon = d.find(':');
  if (colon == std::string::npos) throw ParseError("norm descriptor '" + d + "' has no ':'");
  const std::string head = d.substr(0, colon);
  const std::string_view rest = std::string_view(d).substr(colon + 1);

  if (head == "lp") return Space::lp(parse_number(rest, "exponent"));
  if (head == "wlp") {
    const auto parts = split(rest, ':');
    if (parts.size() != 3) throw ParseError("wlp expects wlp:<p>:<w1>:<w2>, got '" + d + "'");
    return Space::weighted_lp(parse_number(parts[0], "exponent"), parse_number(parts[1], "weight"),
                              parse_number(parts[2], "weight"));
  }
  if (head == "poly") {
    if (rest.empty()) throw ParseError("poly expects a file path");
    return checked_polytope(load_polytope_file(std::string(rest)), rest);
  }
  if (head == "polyv") {
    std::vector<Vec2> fs;
    for (auto item : split(rest, ';')) {
      const auto xy = split(item, ',');
      if (xy.size() != 2) throw ParseError("polyv functional '" + std::string(item) + "' needs two coordinates");
      fs.push_back({parse_number(xy[0], "coordinate"), parse_number(xy[1], "coordinate")});
    }
    return checked_polytope(std::move(fs), d);
  }
  if (head == "regpoly") {
    const double n = parse_number(rest, "polygon size");
    if (n < 2 || n != std::floor(n) || n > 1e6) throw ParseError("regpoly size '" + std::string(rest) + "' must be an integer >= 2");
    return Space::regular_polygon(static_cast<int>(n));
  }
  if (head == "img") {
    const auto sep = rest.find(':');
    if (sep == std::string_view::npos) throw ParseError("img expects img:<a>,<b>,<c>,<d>:<base>");
    const auto entries = split(rest.substr(0, sep), ',');
    if (entries.size() != 4) throw ParseError("img matrix '" + std::string(rest.substr(0, sep)) + "' needs 4 entries");
    const Mat2 m{parse_number(entries[0], "matrix entry"), parse_number(entries[1], "matrix entry"),
                 parse_number(entries[2], "matrix entry"), parse_number(entries[3], "matrix entry")};
    return Space::linear_image(parse_norm_descriptor(rest.substr(sep + 1)), m);
  }
  throw ParseError("unknown norm family '" + head + "'");
}

std::vector<Space> standard_corpus(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> exponent(1.2, 4.0);
  std::uniform_real_distribution<double> weight(0.5, 2.0);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  const double wp = exponent(rng);
  const double w1 = weight(rng), w2 = weight(rng);
  Mat2 m;
  do {
    m = {entry(rng), entry(rng), entry(rng), entry(rng)};
  } while (std::abs(m.det()) < 0.25);
  const double ip = exponent(rng);
  return {Space::lp(1.0),
          Space::lp(1.5),
          Space::lp(2.0),
          Space::lp(3.0),
          Space::lp(kInfinity),
          Space::regular_polygon(4),
          Space::weighted_lp(wp, w1, w2),
          Space::linear_image(Space::lp(ip), m)};
}

Command parse_command(std::string_view name) {
  if (name == "compute") return Command::Compute;
  if (name == "audit") return Command::Audit;
  if (name == "bm") return Command::Bm;
  if (name == "reproduce-paper") return Command::ReproducePaper;
  if (name == "sweep") return Command::Sweep;
  throw ParseError("unknown command '" + std::string(name) + "'");
}

OutputFormat parse_output_format(std::string_view name) {
  if (name == "table") return OutputFormat::Table;
  if (name == "json") return OutputFormat::Json;
  if (name == "csv") return OutputFormat::Csv;
  throw ParseError("unknown output format '" + std::string(name) + "'");
}

std::vector<PaperRow> reproduce_paper(const SearchConfig& config) {
  std::vector<PaperRow> rows;
  auto add = [&](std::string label, double expected, const Space& space, double p) {
    const double v =
        estimate_constant(space, Query::make(ConstantKind::CpMinusInf, 1.0, 1.0, p), config).value;
    const double diff = std::abs(v - expected);
    rows.push_back({std::move(label), expected, v, diff, diff <= 1e-3});
  };
  for (double p : {1.0, 2.0, 3.0}) add("l1, p=" + fmt12(p) + ", lambda=mu=1", 2.0, Space::lp(1.0), p);
  for (double p : {1.0, 2.0, 3.0})
    add("linf, p=" + fmt12(p) + ", lambda=mu=1", 2.0, Space::lp(kInfinity), p);
  for (const Space& s : standard_corpus()) add("p=1 universality, " + describe(s), 2.0, s, 1.0);
  add("l2, p=2, lambda=mu=1 (derived)", 1.0, Space::lp(2.0), 2.0);
  return rows;
}

RunResult run(const RunSpec& spec) {
  RunResult result;
  try {
    result = execute(spec);
  } catch (const UsageError& e) {
    return {2, {}, e.what()};
  } catch (const ParseError& e) {
    return {2, {}, e.what()};
  } catch (const DomainError& e) {
    return {2, {}, e.what()};
  } catch (const ConfigError& e) {
    return {2, {}, e.what()};
  }
  if (spec.output_path) {
    std::ofstream f(*spec.output_path, std::ios::binary);
    if (!f || !(f << result.output) || !f.flush())
      return {2, result.output, "cannot write '" + spec.output_path->string() + "'"};
  }
  return result;
}

}  // namespace skewvnj
