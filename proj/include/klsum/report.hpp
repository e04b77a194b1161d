#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "klsum/arith.hpp"

namespace klsum {

// One row of a verification sweep. The CSV schema is fixed:
//   kind,f,N,q,a,eps,C,bands,lhs,rhs_1,rhs_2,rhs_3,rhs_total,ratio,flags
// Missing inputs are empty cells (null in JSON); flags join with ';' in CSV
// and are an array of strings in JSON. Rows sort by (N, q, a).
struct BoundReport {
  std::string kind;  // lemma1 | lemma2 | cauchy | gcd_pairs | theorem
  std::string f_id;
  std::optional<u64> N;
  std::optional<u64> q;
  std::optional<i64> a;  // holds b for lemma2 rows
  std::optional<double> eps;
  std::optional<double> C;
  std::string bands;  // band/window/range descriptor
  double lhs = 0;
  std::vector<std::pair<std::string, double>> rhs_terms;  // up to 3, named
  double rhs_total = 0;
  double ratio = 0;
  std::vector<std::string> flags;

  bool has_flag(const std::string& f) const;
};

// %.12g, the formatting the CSV schema pins.
std::string format_real(double x);

void sort_reports(std::vector<BoundReport>& reports);

// Header plus one line per row, sorted; '\n' line ends.
std::string format_csv(std::span<const BoundReport> reports);

// Array of objects with the same field names; flags as array of strings.
std::string format_json(std::span<const BoundReport> reports);

}  // namespace klsum
