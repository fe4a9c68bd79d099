#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sglb/analysis.hpp"

namespace sglb {

// Column order of every CSV the tools emit.
inline constexpr std::string_view kCsvHeader =
    "experiment,n,d,sigma,alpha,lambda,per_query_kl,kl_bound,tv_bound,psi1_lower,psi2_upper,"
    "minimax_lower,metric,value,stderr,seed,status";

// One long-format row: the bound columns describe the (n, d, sigma) cell and
// are left empty when the lower-bound construction is not admissible there.
struct CsvRow {
  std::string experiment;
  double n = 0.0;
  std::uint64_t d = 0;
  double sigma = 0.0;
  std::optional<BoundReport> bound;
  std::string metric;
  std::optional<double> value;
  std::optional<double> std_error;
  std::uint64_t seed = 0;
  std::string status = "ok";
};

// %.17g, which round-trips every double.
std::string format_number(double v);

// Header line plus one LF-terminated line per row.
std::string render_csv(const std::vector<CsvRow>& rows);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column, or nullopt.
  std::optional<std::size_t> column(std::string_view name) const;
};

// Minimal reader for the unquoted CSV the tools write. Throws ConfigError when
// the text has no header or a row has the wrong field count.
CsvTable parse_csv(std::string_view text);

}  // namespace sglb
