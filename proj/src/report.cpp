#include "klsum/report.hpp"

#include <algorithm>
#include <cstdio>

#include "json.hpp"

namespace klsum {

bool BoundReport::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void sort_reports(std::vector<BoundReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(), [](const BoundReport& x, const BoundReport& y) {
    u64 nx = x.N.value_or(0), ny = y.N.value_or(0);
    if (nx != ny) return nx < ny;
    u64 qx = x.q.value_or(0), qy = y.q.value_or(0);
    if (qx != qy) return qx < qy;
    return x.a.value_or(0) < y.a.value_or(0);
  });
}

namespace {

std::string cell_u64(const std::optional<u64>& v) {
  return v ? std::to_string(*v) : std::string();
}

std::string cell_i64(const std::optional<i64>& v) {
  return v ? std::to_string(*v) : std::string();
}

std::string cell_real(const std::optional<double>& v) {
  return v ? format_real(*v) : std::string();
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string s;
  for (size_t i = 0; i < flags.size(); ++i) {
    if (i) s += ';';
    s += flags[i];
  }
  return s;
}

}  // namespace

std::string format_csv(std::span<const BoundReport> reports) {
  std::vector<BoundReport> rows(reports.begin(), reports.end());
  sort_reports(rows);
  std::string out = "kind,f,N,q,a,eps,C,bands,lhs,rhs_1,rhs_2,rhs_3,rhs_total,ratio,flags\n";
  for (const BoundReport& r : rows) {
    out += r.kind;
    out += ',';
    out += r.f_id;
    out += ',';
    out += cell_u64(r.N);
    out += ',';
    out += cell_u64(r.q);
    out += ',';
    out += cell_i64(r.a);
    out += ',';
    out += cell_real(r.eps);
    out += ',';
    out += cell_real(r.C);
    out += ',';
    out += r.bands;
    out += ',';
    out += format_real(r.lhs);
    for (size_t i = 0; i < 3; ++i) {
      out += ',';
      if (i < r.rhs_terms.size()) out += format_real(r.rhs_terms[i].second);
    }
    out += ',';
    out += format_real(r.rhs_total);
    out += ',';
    out += format_real(r.ratio);
    out += ',';
    out += join_flags(r.flags);
    out += '\n';
  }
  return out;
}

std::string format_json(std::span<const BoundReport> reports) {
  std::vector<BoundReport> rows(reports.begin(), reports.end());
  sort_reports(rows);
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const BoundReport& r : rows) {
    nlohmann::ordered_json o;
    o["kind"] = r.kind;
    o["f"] = r.f_id;
    if (r.N) o["N"] = *r.N; else o["N"] = nullptr;
    if (r.q) o["q"] = *r.q; else o["q"] = nullptr;
    if (r.a) o["a"] = *r.a; else o["a"] = nullptr;
    if (r.eps) o["eps"] = *r.eps; else o["eps"] = nullptr;
    if (r.C) o["C"] = *r.C; else o["C"] = nullptr;
    o["bands"] = r.bands;
    o["lhs"] = r.lhs;
    for (size_t i = 0; i < 3; ++i) {
      std::string key = "rhs_" + std::to_string(i + 1);
      if (i < r.rhs_terms.size())
        o[key] = r.rhs_terms[i].second;
      else
        o[key] = nullptr;
    }
    o["rhs_total"] = r.rhs_total;
    o["ratio"] = r.ratio;
    o["flags"] = r.flags;
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

}  // namespace klsum
