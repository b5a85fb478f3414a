// Serializable per-iteration diagnostics and their CSV / JSON-lines writers.
// Values are written with 17 significant digits so the files round-trip
// doubles losslessly.
#ifndef RCG_TRACE_HPP
#define RCG_TRACE_HPP

#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "rcg/core.hpp"

namespace rcg {

struct TraceRow {
  long k = 0;
  double f = 0.0;
  double grad_norm = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double ratio = 1.0;
  bool scaled = false;
  double x1 = 0.0;    // first component of the iterate, sphere problems
  double dist = 0.0;  // ambient distance to the matched optimum
  double zoutendijk_partial = 0.0;
};

enum class TraceFormat { Csv, Jsonl };

inline const char* trace_csv_header() {
  return "k,f,grad_norm,alpha,beta,ratio,scaled,x1,dist,zoutendijk_partial";
}

namespace detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// Writes rows as CSV. Metadata entries (seed, preset, ...) go first as
/// "# key=value" comment lines, then the fixed header row.
inline void write_trace_csv(std::ostream& out,
                            const std::vector<TraceRow>& rows,
                            const std::map<std::string, std::string>& meta = {}) {
  for (const auto& [key, value] : meta) {
    out << "# " << key << "=" << value << "\n";
  }
  out << trace_csv_header() << "\n";
  for (const TraceRow& r : rows) {
    out << r.k << ',' << detail::fmt17(r.f) << ',' << detail::fmt17(r.grad_norm)
        << ',' << detail::fmt17(r.alpha) << ',' << detail::fmt17(r.beta) << ','
        << detail::fmt17(r.ratio) << ',' << (r.scaled ? 1 : 0) << ','
        << detail::fmt17(r.x1) << ',' << detail::fmt17(r.dist) << ','
        << detail::fmt17(r.zoutendijk_partial) << "\n";
  }
}

inline void write_trace_jsonl(std::ostream& out,
                              const std::vector<TraceRow>& rows,
                              const std::map<std::string, std::string>& meta = {}) {
  if (!meta.empty()) {
    out << "{\"meta\":{";
    bool first = true;
    for (const auto& [key, value] : meta) {
      if (!first) out << ',';
      first = false;
      out << '"' << key << "\":\"" << value << '"';
    }
    out << "}}\n";
  }
  for (const TraceRow& r : rows) {
    out << "{\"k\":" << r.k << ",\"f\":" << detail::fmt17(r.f)
        << ",\"grad_norm\":" << detail::fmt17(r.grad_norm)
        << ",\"alpha\":" << detail::fmt17(r.alpha)
        << ",\"beta\":" << detail::fmt17(r.beta)
        << ",\"ratio\":" << detail::fmt17(r.ratio)
        << ",\"scaled\":" << (r.scaled ? "true" : "false")
        << ",\"x1\":" << detail::fmt17(r.x1)
        << ",\"dist\":" << detail::fmt17(r.dist)
        << ",\"zoutendijk_partial\":" << detail::fmt17(r.zoutendijk_partial)
        << "}\n";
  }
}

/// Parses CSV written by write_trace_csv (comment lines skipped).
inline std::vector<TraceRow> read_trace_csv(std::istream& in) {
  std::vector<TraceRow> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      if (line != trace_csv_header()) {
        throw shape_error("read_trace_csv: unexpected header");
      }
      header_seen = true;
      continue;
    }
    std::istringstream ls(line);
    TraceRow r;
    char comma = 0;
    int scaled_int = 0;
    ls >> r.k >> comma >> r.f >> comma >> r.grad_norm >> comma >> r.alpha >>
        comma >> r.beta >> comma >> r.ratio >> comma >> scaled_int >> comma >>
        r.x1 >> comma >> r.dist >> comma >> r.zoutendijk_partial;
    if (ls.fail()) throw shape_error("read_trace_csv: malformed row");
    r.scaled = scaled_int != 0;
    rows.push_back(r);
  }
  if (!header_seen) throw shape_error("read_trace_csv: missing header");
  return rows;
}

}  // namespace rcg

#endif  // RCG_TRACE_HPP
