// klsum: twisted Kloosterman sums, their decomposition, and bound sweeps.
//
// Subcommands: sum, bands, lemma1, lemma2, gcd-pairs, cauchy, scan, identity,
// bench. Exit 0 on success with all assertions passing, 1 on assertion
// failure, 2 on configuration errors.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "klsum/decomp.hpp"
#include "klsum/verify.hpp"

using namespace klsum;

namespace {

constexpr double kIdentityTol = 1e-9;

std::string fmt(double x) { return format_real(x); }

std::string fmt_cplx(cplx z) { return "(" + fmt(z.real()) + "," + fmt(z.imag()) + ")"; }

double rel_residual(cplx a, cplx b) {
  double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) / scale;
}

std::vector<u64> parse_u64_list(const std::string& s) {
  std::vector<u64> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoull(item));
  }
  return out;
}

std::vector<i64> parse_i64_list(const std::string& s) {
  std::vector<i64> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoll(item));
  }
  return out;
}

std::vector<RangeSpec> parse_ranges(const std::string& s) {
  std::vector<RangeSpec> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto colon = item.find(':');
    if (colon == std::string::npos) throw config_error("bad range spec (want lo:hi): " + item);
    out.push_back({std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
  }
  if (out.empty()) throw config_error("empty range list");
  return out;
}

BandScheme parse_bands(const std::string& spec, u64 n_for_paper) {
  if (spec == "paper") return make_bands_paper(double(n_for_paper));
  std::vector<u64> bounds = parse_u64_list(spec);
  return make_bands_custom(std::move(bounds));
}

ARule parse_a_rule(const std::string& s) {
  if (s.rfind("rand:", 0) == 0) return ARule::random(std::stoull(s.substr(5)));
  return ARule::fixed_a(std::stoll(s));
}

void write_output(const std::string& content, const std::string& path) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot open output file: " + path);
  out << content;
}

std::string render(std::vector<BoundReport>& reports, const std::string& format) {
  if (format == "json") return format_json(reports);
  return format_csv(reports);
}

struct CommonOpts {
  std::string out;
  std::string format = "csv";
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  double eps = 0.01;
  double C = 1.0;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--out", c.out, "Output path (default stdout)");
  cmd->add_option("--format", c.format, "Output format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--workers", c.workers, "Worker thread count")->check(CLI::PositiveNumber);
  cmd->add_option("--eps", c.eps, "Epsilon in bound evaluators");
  cmd->add_option("--C", c.C, "Constant multiplier in bound evaluators");
}

// ---------------------------------------------------------------------------

int run_sum(const CommonOpts& c, const std::string& fspec, u64 q, i64 a, u64 N) {
  auto f = MultiplicativeFunction::from_spec(fspec);
  if (!theorem_q_in_range(q, N))
    std::cerr << "warning: q > N^2 is outside the three-term bound's stated range\n";
  SpfTable table = build_spf_table(std::max<u64>(N, 2));
  SumValue s = twisted_sum(f, a, q, N, table, c.workers);
  std::string out;
  out += "f=" + f.id() + " q=" + std::to_string(q) + " a=" + std::to_string(a) +
         " N=" + std::to_string(N) + "\n";
  out += "value = " + fmt_cplx(s.value()) + "\n";
  out += "modulus = " + fmt(s.abs()) + "\n";
  out += "terms = " + std::to_string(s.terms) + "\n";
  write_output(out, c.out);
  return 0;
}

int run_bands(const CommonOpts& c, u64 N, const std::string& bands_spec) {
  std::string out;
  PaperParams p = paper_params(double(N));
  out += "N = " + std::to_string(N) + "\n";
  out += "d0 = " + fmt(p.d0) + "\n";
  out += "D0 = " + fmt(p.D0) + "\n";
  out += "d1 = " + fmt(p.d1) + "\n";
  out += "D1 = " + fmt(p.D1) + "\n";
  out += "r_lo = " + std::to_string(p.r_lo) + "\n";
  out += "r_hi = " + std::to_string(p.r_hi) + "\n";
  BandScheme bands = parse_bands(bands_spec, N);
  if (bands.empty()) {
    out += bands.provenance == BandScheme::Provenance::PaperDefault
               ? "paper-default band range empty\n"
               : "band scheme empty\n";
  } else {
    out += "bands = " + bands.descriptor() + "\n";
    for (size_t r = 0; r < bands.band_count(); ++r) {
      BandPrimeCount bc = band_prime_count(bands, r);
      out += "band " + std::to_string(r) + ": [" + std::to_string(bands.lower(r)) + "," +
             std::to_string(bands.upper(r)) + ") primes=" + std::to_string(bc.count) +
             " pnt_ratio=" + fmt(bc.pnt_ratio) + "\n";
    }
  }
  write_output(out, c.out);
  return 0;
}

int run_lemma1(const CommonOpts& c, const std::string& n_grid) {
  std::vector<BoundReport> reports;
  for (u64 N : parse_u64_list(n_grid)) {
    PaperParams p = paper_params(double(N));
    u64 wlo = u64(std::ceil(p.D0));
    u64 whi = u64(std::ceil(p.D1));
    BandScheme window =
        whi > wlo ? make_bands_custom({wlo, whi}) : make_bands_custom({std::max<u64>(wlo, 2)});
    RoughCount rc = rough_count(N, window);
    BoundReport rep;
    rep.kind = "lemma1";
    rep.N = N;
    rep.bands = window.descriptor();
    rep.lhs = double(rc.count);
    rep.rhs_terms = {{"lemma1_bound", rc.lemma1_bound}};
    rep.rhs_total = rc.lemma1_bound;
    rep.ratio = rc.lemma1_bound > 0 ? double(rc.count) / rc.lemma1_bound : 0.0;
    if (rc.lemma1_bound >= double(N)) rep.flags.push_back("trivial_bound");
    if (window.empty()) rep.flags.push_back("empty_bands");
    reports.push_back(std::move(rep));
  }
  ConstantEstimate e = estimate_constant(reports);
  std::cerr << "lemma1 c_obs = " << fmt(e.c_obs) << "\n";
  write_output(render(reports, c.format), c.out);
  return 0;
}

int run_lemma2(const CommonOpts& c, size_t q_count, u64 q_max, const std::string& b_list,
               const std::string& ranges) {
  std::vector<u64> qs = log_spaced_moduli(3, q_max, q_count);
  std::vector<i64> bs = parse_i64_list(b_list);
  std::vector<RangeSpec> rs = parse_ranges(ranges);
  std::vector<BoundReport> reports = lemma2_sweep(qs, bs, rs, c.eps, c.C, c.workers);
  ConstantEstimate e = estimate_constant(reports);
  const BoundReport& argmax = reports[e.argmax];
  std::cerr << "lemma2 c_obs = " << fmt(e.c_obs) << " at q=" << argmax.q.value_or(0)
            << " b=" << argmax.a.value_or(0) << " range=" << argmax.bands << "\n";
  write_output(render(reports, c.format), c.out);
  return 0;
}

int run_gcd_pairs(const CommonOpts& c, size_t q_count, u64 q_max, u64 band_lo, u64 band_hi) {
  std::vector<u64> qs = log_spaced_moduli(3, q_max, q_count);
  std::vector<u64> primes = primes_in_range(band_lo, band_hi);
  std::vector<BoundReport> reports;
  bool ok = true;
  for (u64 q : qs) {
    BoundReport rep = gcd_pair_report(q, primes, band_hi);
    ok = ok && !rep.has_flag("truncation_violated") && !rep.has_flag("inverse_invariance_violated");
    reports.push_back(std::move(rep));
  }
  ConstantEstimate e = estimate_constant(reports);
  std::cerr << "gcd_pairs max ratio = " << fmt(e.c_obs) << "\n";
  write_output(render(reports, c.format), c.out);
  return ok ? 0 : 1;
}

int run_cauchy(const CommonOpts& c, const std::string& fspec, u64 q, i64 a, u64 N,
               const std::string& bands_spec) {
  auto f = MultiplicativeFunction::from_spec(fspec);
  BandScheme bands = parse_bands(bands_spec, N);
  SpfTable table = build_spf_table(std::max<u64>(N, 2));
  std::vector<BoundReport> reports;
  bool ok = true;
  for (size_t r = 0; r < bands.band_count(); ++r) {
    BoundReport rep = cauchy_check(f, a, q, r, N, bands, table, c.workers);
    ok = ok && rep.ratio <= 1.0 + kIdentityTol;
    reports.push_back(std::move(rep));
  }
  write_output(render(reports, c.format), c.out);
  if (!ok) std::cerr << "cauchy violation: ratio exceeds 1 + 1e-9\n";
  return ok ? 0 : 1;
}

int run_scan(const CommonOpts& c, const std::string& f_list, const std::string& n_grid,
             size_t q_count, const std::string& q_grid, const std::string& a_spec) {
  std::vector<MultiplicativeFunction> fs;
  {
    std::stringstream ss(f_list);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) fs.push_back(MultiplicativeFunction::from_spec(item));
    }
  }
  if (fs.empty()) throw config_error("scan: empty f list");
  std::vector<u64> Ns = parse_u64_list(n_grid);
  if (Ns.empty()) throw config_error("scan: empty N grid");
  ARule rule = parse_a_rule(a_spec);
  u64 n_max = *std::max_element(Ns.begin(), Ns.end());
  SpfTable table = build_spf_table(std::max<u64>(n_max, 2));
  std::vector<BoundReport> reports;
  if (!q_grid.empty()) {
    std::vector<u64> qs = parse_u64_list(q_grid);
    reports = theorem_scan(fs, Ns, qs, rule, c.eps, c.C, table, c.workers);
  } else {
    reports = theorem_scan_grid(fs, Ns, q_count, rule, c.eps, c.C, table, c.workers);
  }
  ConstantEstimate e = estimate_constant(reports);
  size_t trivial = 0;
  double nontrivial_max = 0;
  for (const auto& r : reports) {
    if (r.has_flag("trivial_bound"))
      ++trivial;
    else
      nontrivial_max = std::max(nontrivial_max, r.ratio);
  }
  std::cerr << "theorem c_obs = " << fmt(e.c_obs) << " over " << reports.size() << " cells ("
            << trivial << " flagged trivial); max over non-trivial cells = "
            << fmt(nontrivial_max) << "\n";
  write_output(render(reports, c.format), c.out);
  return 0;
}

int run_identity(const CommonOpts& c, const std::string& fspec, u64 q, i64 a, u64 N,
                 const std::string& bands_spec) {
  auto f = MultiplicativeFunction::from_spec(fspec);
  BandScheme bands = parse_bands(bands_spec, N);
  SpfTable table = build_spf_table(std::max<u64>(N, 2));

  std::string out;
  out += "identity f=" + f.id() + " q=" + std::to_string(q) + " a=" + std::to_string(a) +
         " N=" + std::to_string(N) + " bands=" + bands.descriptor() + "\n";

  bool ok = true;
  double max_residual = 0.0;
  auto note = [&](const std::string& name, double resid) {
    max_residual = std::max(max_residual, resid);
    out += name + " residual = " + fmt(resid) + "\n";
  };

  // partition completeness over all n <= N
  PartitionCounts pc = partition_counts(N, bands, table);
  bool partition_ok = pc.rough + pc.clean + pc.discard == N;
  out += "partition rough=" + std::to_string(pc.rough) + " clean=" + std::to_string(pc.clean) +
         " discard=" + std::to_string(pc.discard) + (partition_ok ? " ok" : " MISMATCH") + "\n";
  ok = ok && partition_ok;

  // clean + rough + discard == twisted_sum
  SumValue whole = twisted_sum(f, a, q, N, table, c.workers);
  Decomposition dec = decomposed_sum(f, a, q, N, bands, table, c.workers);
  cplx split_sum = dec.clean.value() + dec.rough.value() + dec.discard.value();
  note("three_way_split", rel_residual(split_sum, whole.value()));

  // band rearrangement
  note("rearrangement", rel_residual(dec.clean.value(), dec.rearranged_clean.value()));

  // sigma2 expansion and Cauchy per band; domination of the restricted sum;
  // the rearrangement -> Cauchy chain
  double sigma1_total = 0.0;
  for (size_t r = 0; r < bands.band_count(); ++r) {
    double s1 = sigma1(f, a, q, r, N, bands, table, false, c.workers);
    double s1_restricted = sigma1(f, a, q, r, N, bands, table, true, c.workers);
    Sigma2 s2 = sigma2(f, a, q, r, N, bands, table, c.workers);
    std::string tag = "@r" + std::to_string(r);
    note("sigma2_expansion" + tag,
         rel_residual(cplx(s2.direct, 0.0), s2.pair_expanded));
    double cauchy_rhs = std::sqrt(double(s2.y_limit)) * std::sqrt(std::max(0.0, s2.direct));
    bool cauchy_ok = s1 <= cauchy_rhs * (1.0 + kIdentityTol) + kIdentityTol;
    out += "cauchy" + tag + " sigma1=" + fmt(s1) + " rhs=" + fmt(cauchy_rhs) +
           (cauchy_ok ? " ok" : " VIOLATION") + "\n";
    ok = ok && cauchy_ok;
    bool dom_ok = s1_restricted <= s1 * (1.0 + kIdentityTol) + kIdentityTol;
    out += "domination" + tag + " restricted=" + fmt(s1_restricted) + " sigma1=" + fmt(s1) +
           (dom_ok ? " ok" : " VIOLATION") + "\n";
    ok = ok && dom_ok;
    sigma1_total += s1;
  }
  if (!bands.empty()) {
    double clean_abs = dec.clean.abs();
    bool chain_ok = clean_abs <= sigma1_total * (1.0 + kIdentityTol) + kIdentityTol;
    out += "chain |clean|=" + fmt(clean_abs) + " <= sum sigma1=" + fmt(sigma1_total) +
           (chain_ok ? " ok" : " VIOLATION") + "\n";
    ok = ok && chain_ok;
  }

  out += "max relative residual = " + fmt(max_residual) + "\n";
  ok = ok && max_residual < kIdentityTol;
  out += ok ? "PASS\n" : "FAIL\n";
  write_output(out, c.out);
  return ok ? 0 : 1;
}

int run_bench(const CommonOpts& c, const std::string& fspec, u64 q, i64 a, u64 N, int repeat) {
  auto f = MultiplicativeFunction::from_spec(fspec);
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  SpfTable table = build_spf_table(std::max<u64>(N, 2));
  auto t1 = clock::now();
  double spf_s = std::chrono::duration<double>(t1 - t0).count();
  double best = 1e300;
  SumValue s;
  for (int i = 0; i < std::max(1, repeat); ++i) {
    auto u0 = clock::now();
    s = twisted_sum(f, a, q, N, table, c.workers);
    auto u1 = clock::now();
    best = std::min(best, std::chrono::duration<double>(u1 - u0).count());
  }
  std::printf("bench f=%s q=%llu a=%lld N=%llu workers=%u\n", f.id().c_str(),
              (unsigned long long)q, (long long)a, (unsigned long long)N, c.workers);
  std::printf("spf_build_s = %.3f\n", spf_s);
  std::printf("sum_s = %.3f\n", best);
  std::printf("terms = %llu\n", (unsigned long long)s.terms);
  std::printf("mterms_per_s = %.2f\n", double(s.terms) / best / 1e6);
  std::printf("value = %s\n", fmt_cplx(s.value()).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"twisted Kloosterman sums with multiplicative coefficients"};
  app.require_subcommand(1);
  // config precedence: flags > config file > defaults. Given before the
  // subcommand, with one INI section per subcommand: klsum --config f.ini scan
  app.set_config("--config", "", "Config file (INI; [subcommand] sections)");

  CommonOpts c;

  // sum
  auto* sum_cmd = app.add_subcommand("sum", "Single twisted sum");
  std::string sum_f = "one";
  u64 sum_q = 1, sum_n = 1;
  i64 sum_a = 1;
  sum_cmd->add_option("--f", sum_f, "Coefficient function");
  sum_cmd->add_option("--q", sum_q, "Modulus")->required();
  sum_cmd->add_option("--a", sum_a, "Twist a (coprime to q)");
  sum_cmd->add_option("--n", sum_n, "Upper limit N")->required();
  add_common(sum_cmd, c);

  // bands
  auto* bands_cmd = app.add_subcommand("bands", "Paper parameters and band scheme for N");
  u64 bands_n = 1;
  std::string bands_spec = "paper";
  bands_cmd->add_option("--n", bands_n, "N")->required();
  bands_cmd->add_option("--bands", bands_spec, "paper | comma-separated boundaries");
  add_common(bands_cmd, c);

  // lemma1
  auto* l1_cmd = app.add_subcommand("lemma1", "Rough-count sweep");
  std::string l1_grid = "10000,100000,1000000";
  l1_cmd->add_option("--n-grid", l1_grid, "Comma-separated N values");
  add_common(l1_cmd, c);

  // lemma2
  auto* l2_cmd = app.add_subcommand("lemma2", "Incomplete-sum sweep");
  size_t l2_qcount = 200;
  u64 l2_qmax = 10000;
  std::string l2_blist = "0,1,2,3,4,5,6,7,8,9,12,16,24,30,36,60,120,210,420,2310";
  std::string l2_ranges = "0:1,0:0.5,0.25:0.75,0.5:1.5,0:2";
  l2_cmd->add_option("--q-count", l2_qcount, "Number of log-spaced moduli");
  l2_cmd->add_option("--q-max", l2_qmax, "Largest modulus");
  l2_cmd->add_option("--b-list", l2_blist, "Comma-separated b values");
  l2_cmd->add_option("--ranges", l2_ranges, "Comma-separated lo:hi range multipliers of q");
  add_common(l2_cmd, c);

  // gcd-pairs
  auto* gp_cmd = app.add_subcommand("gcd-pairs", "gcd-pair sums over a prime band");
  size_t gp_qcount = 100;
  u64 gp_qmax = 10000, gp_blo = 368, gp_bhi = 1000;
  gp_cmd->add_option("--q-count", gp_qcount, "Number of log-spaced moduli");
  gp_cmd->add_option("--q-max", gp_qmax, "Largest modulus");
  gp_cmd->add_option("--band-lo", gp_blo, "Band lower boundary");
  gp_cmd->add_option("--band-hi", gp_bhi, "Band upper boundary B");
  add_common(gp_cmd, c);

  // cauchy
  auto* ca_cmd = app.add_subcommand("cauchy", "Cauchy step check");
  std::string ca_f = "one", ca_bands = "8,21,55";
  u64 ca_q = 13, ca_n = 1000;
  i64 ca_a = 1;
  ca_cmd->add_option("--f", ca_f, "Coefficient function");
  ca_cmd->add_option("--q", ca_q, "Modulus")->required();
  ca_cmd->add_option("--a", ca_a, "Twist a");
  ca_cmd->add_option("--n", ca_n, "Upper limit N")->required();
  ca_cmd->add_option("--bands", ca_bands, "Band boundaries");
  add_common(ca_cmd, c);

  // scan
  auto* scan_cmd = app.add_subcommand("scan", "Three-term bound sweep");
  std::string scan_f = "mobius", scan_ngrid = "10000", scan_qgrid, scan_a = "1";
  size_t scan_qcount = 50;
  scan_cmd->add_option("--f-list", scan_f, "Comma-separated coefficient functions");
  scan_cmd->add_option("--n-grid", scan_ngrid, "Comma-separated N values");
  scan_cmd->add_option("--q-count", scan_qcount, "Moduli per N, log-spaced in [3, N^2]");
  scan_cmd->add_option("--q-grid", scan_qgrid, "Explicit comma-separated moduli (overrides count)");
  scan_cmd->add_option("--a", scan_a, "Fixed a or rand:<seed>");
  add_common(scan_cmd, c);

  // identity
  auto* id_cmd = app.add_subcommand("identity", "Exact-identity suite");
  std::string id_f = "one", id_bands = "8,21,55";
  u64 id_q = 13, id_n = 10000;
  i64 id_a = 1;
  id_cmd->add_option("--f", id_f, "Coefficient function");
  id_cmd->add_option("--q", id_q, "Modulus")->required();
  id_cmd->add_option("--a", id_a, "Twist a");
  id_cmd->add_option("--n", id_n, "Upper limit N")->required();
  id_cmd->add_option("--bands", id_bands, "Band boundaries");
  add_common(id_cmd, c);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Throughput of twisted_sum");
  std::string bench_f = "mobius";
  u64 bench_q = 999983, bench_n = 10000000;
  i64 bench_a = 1;
  int bench_repeat = 1;
  bench_cmd->add_option("--f", bench_f, "Coefficient function");
  bench_cmd->add_option("--q", bench_q, "Modulus");
  bench_cmd->add_option("--a", bench_a, "Twist a");
  bench_cmd->add_option("--n", bench_n, "Upper limit N");
  bench_cmd->add_option("--repeat", bench_repeat, "Repetitions (best time reported)");
  add_common(bench_cmd, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (sum_cmd->parsed()) return run_sum(c, sum_f, sum_q, sum_a, sum_n);
    if (bands_cmd->parsed()) return run_bands(c, bands_n, bands_spec);
    if (l1_cmd->parsed()) return run_lemma1(c, l1_grid);
    if (l2_cmd->parsed()) return run_lemma2(c, l2_qcount, l2_qmax, l2_blist, l2_ranges);
    if (gp_cmd->parsed()) return run_gcd_pairs(c, gp_qcount, gp_qmax, gp_blo, gp_bhi);
    if (ca_cmd->parsed()) return run_cauchy(c, ca_f, ca_q, ca_a, ca_n, ca_bands);
    if (scan_cmd->parsed())
      return run_scan(c, scan_f, scan_ngrid, scan_qcount, scan_qgrid, scan_a);
    if (id_cmd->parsed()) return run_identity(c, id_f, id_q, id_a, id_n, id_bands);
    if (bench_cmd->parsed()) return run_bench(c, bench_f, bench_q, bench_a, bench_n, bench_repeat);
  } catch (const config_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const resource_error& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 2;
  } catch (const validation_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
