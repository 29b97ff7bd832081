#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "skewvnj/audit.hpp"
#include "skewvnj/banach_mazur.hpp"
#include "skewvnj/constants.hpp"
#include "skewvnj/norm.hpp"
#include "skewvnj/search.hpp"

namespace skewvnj {

/// Grammar:
///   lp:<p>                      p a decimal >= 1 or "inf"
///   wlp:<p>:<w1>:<w2>
///   poly:<path>                 polytope functionals from a file
///   polyv:<x>,<y>;<x>,<y>;...   polytope functionals inline
///   regpoly:<n>                 regular 2n-gon unit ball
///   img:<a>,<b>,<c>,<d>:<base>  ||M x||_base, M row-major
/// Throws ParseError (naming the offending token) or DomainError for p < 1.
Space parse_norm_descriptor(std::string_view descriptor);

/// Lp(1), Lp(1.5), Lp(2), Lp(3), Lp(inf), the regular octagon, one seeded
/// WeightedLp and one seeded LinearImage.
std::vector<Space> standard_corpus(std::uint64_t seed = 0);

enum class Command { Compute, Audit, Bm, ReproducePaper, Sweep };
enum class OutputFormat { Table, Json, Csv };

Command parse_command(std::string_view name);
OutputFormat parse_output_format(std::string_view name);

struct SweepGrid {
  double lo = 0.5;
  double hi = 2.0;
  int steps = 7;  // per axis
};

struct RunSpec {
  Command command = Command::Compute;
  std::vector<std::string> norms;  // descriptors
  std::vector<Query> queries;      // compute; audit/bm/sweep use the first one's (lambda, mu, p)
  SearchConfig config;
  OutputFormat format = OutputFormat::Table;
  std::optional<std::filesystem::path> output_path;
  SweepGrid sweep;
};

struct RunResult {
  int exit_code = 0;   // 0 success, 1 audit failure, 2 usage or I/O error
  std::string output;  // what was (or would be) written
  std::string error;
};

/// Executes a RunSpec. When output_path is set the output is also written there.
RunResult run(const RunSpec& spec);

struct PaperRow {
  std::string label;
  double expected;
  double computed;
  double diff;
  bool pass;
};

/// Worked values: l1 and linf at p in {1, 2, 3}, p = 1 over the standard
/// corpus, and the Hilbert value at p = 2. Each row passes when |diff| <= 1e-3.
std::vector<PaperRow> reproduce_paper(const SearchConfig& config = {});

/// Rounds to 12 significant digits; every number the reports print goes
/// through this so output is byte-stable.
double round12(double v);

}  // namespace skewvnj
