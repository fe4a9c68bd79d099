#include "sglb/csv.hpp"

#include <cstdio>
#include <sstream>

#include "sglb/errors.hpp"

namespace sglb {
namespace {

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      return out;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// Free text (status messages) must not break the column structure.
std::string sanitize(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = c == ',' ? ';' : ' ';
  return out;
}

}  // namespace

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string render_csv(const std::vector<CsvRow>& rows) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  auto num = [&](double v) { os << format_number(v) << ','; };
  for (const CsvRow& r : rows) {
    os << sanitize(r.experiment) << ',';
    num(r.n);
    os << r.d << ',';
    num(r.sigma);
    if (r.bound) {
      const BoundReport& b = *r.bound;
      for (double v : {b.alpha, b.lambda, b.per_query_kl, b.transcript_kl_bound, b.tv_bound,
                       b.psi1_lower, b.psi2_upper, b.minimax_lower})
        num(v);
    } else {
      os << ",,,,,,,,";
    }
    os << sanitize(r.metric) << ',';
    if (r.value) os << format_number(*r.value);
    os << ',';
    if (r.std_error) os << format_number(*r.std_error);
    os << ',' << r.seed << ',' << sanitize(r.status) << '\n';
  }
  return os.str();
}

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  return std::nullopt;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t start = 0;
  std::size_t line_no = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    auto fields = split(line);
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size())
      throw ConfigError("CSV line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                        " fields, header has " + std::to_string(table.header.size()));
    table.rows.push_back(std::move(fields));
  }
  if (table.header.empty()) throw ConfigError("CSV is empty (no header row)");
  return table;
}

}  // namespace sglb
