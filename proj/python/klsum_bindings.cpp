#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "klsum/decomp.hpp"
#include "klsum/verify.hpp"

namespace py = pybind11;
using namespace klsum;

PYBIND11_MODULE(klsum, m) {
  m.doc() = "Twisted Kloosterman sums with multiplicative coefficients";

  py::register_exception<domain_error>(m, "DomainError");
  py::register_exception<resource_error>(m, "ResourceError");
  py::register_exception<config_error>(m, "ConfigError");
  py::register_exception<validation_error>(m, "ValidationError");

  // arith
  py::class_<SpfTable>(m, "SpfTable")
      .def_readonly("limit", &SpfTable::limit)
      .def("spf", [](const SpfTable& t, u64 n) { return t.spf.at(size_t(n)); })
      .def("is_prime", &SpfTable::is_prime);
  m.def("build_spf_table", &build_spf_table, py::arg("limit"));
  m.def(
      "factorize",
      [](u64 n, const SpfTable* t) { return factorize(n, t).pairs; },
      py::arg("n"), py::arg("table") = nullptr);
  m.def(
      "arithmetic_functions",
      [](u64 n) {
        ArithValues v = arithmetic_functions(n);
        return py::make_tuple(v.tau, v.phi, v.mu);
      },
      py::arg("n"));
  m.def("mod_inverse", &mod_inverse, py::arg("n"), py::arg("q"));
  m.def(
      "batch_mod_inverse",
      [](const std::vector<u64>& ns, u64 q) { return batch_mod_inverse(ns, q); },
      py::arg("ns"), py::arg("q"));
  m.def(
      "e_frac", [](i64 j, u64 q) { return e_frac(j, q); }, py::arg("j"), py::arg("q"));
  m.def("primes_in_range", &primes_in_range, py::arg("lo"), py::arg("hi"));

  // mult_func
  py::class_<MultiplicativeFunction>(m, "MultiplicativeFunction")
      .def_static("one", &MultiplicativeFunction::one)
      .def_static("mobius", &MultiplicativeFunction::mobius)
      .def_static("liouville", &MultiplicativeFunction::liouville)
      .def_static("nit", &MultiplicativeFunction::nit, py::arg("alpha"))
      .def_static("random_unimodular", &MultiplicativeFunction::random_unimodular,
                  py::arg("seed"), py::arg("per_prime_power") = false)
      .def_static(
          "custom",
          [](std::string id, MultiplicativeFunction::Rule rule, bool cm) {
            return MultiplicativeFunction::custom(std::move(id), std::move(rule), cm);
          },
          py::arg("id"), py::arg("rule"), py::arg("completely_multiplicative"))
      .def_static("from_spec",
                  [](const std::string& s) { return MultiplicativeFunction::from_spec(s); })
      .def_property_readonly("id", &MultiplicativeFunction::id)
      .def_property_readonly("completely_multiplicative",
                             &MultiplicativeFunction::completely_multiplicative)
      .def("prime_power", &MultiplicativeFunction::prime_power, py::arg("p"), py::arg("k"))
      .def("conjugated", &MultiplicativeFunction::conjugated);
  m.def("unit_draw", &unit_draw, py::arg("seed"), py::arg("p"), py::arg("k"));
  m.def(
      "eval_at",
      [](const MultiplicativeFunction& f, u64 n) { return eval_at(f, n); },
      py::arg("f"), py::arg("n"));
  m.def(
      "sieve_values",
      [](const MultiplicativeFunction& f, u64 N, const SpfTable& t) {
        return sieve_values(f, N, t);
      },
      py::arg("f"), py::arg("N"), py::arg("table"));

  // expsum
  py::class_<SumValue>(m, "SumValue")
      .def_property_readonly("value", &SumValue::value)
      .def_property_readonly("compensation", &SumValue::compensation)
      .def_readonly("terms", &SumValue::terms)
      .def("abs", &SumValue::abs)
      .def("__repr__", [](const SumValue& s) {
        return "SumValue(value=(" + format_real(s.value().real()) + "," +
               format_real(s.value().imag()) + "), terms=" + std::to_string(s.terms) + ")";
      });
  m.def("twisted_sum", &twisted_sum, py::arg("f"), py::arg("a"), py::arg("q"), py::arg("N"),
        py::arg("table"), py::arg("workers") = 1);
  m.def("incomplete_inverse_sum", &incomplete_inverse_sum, py::arg("b"), py::arg("q"),
        py::arg("X"), py::arg("Z"), py::arg("workers") = 1);
  m.def("lemma2_rhs", &lemma2_rhs, py::arg("b"), py::arg("q"), py::arg("X"), py::arg("Z"),
        py::arg("eps"), py::arg("C"));
  py::class_<PhiRatio>(m, "PhiRatio")
      .def_readonly("num", &PhiRatio::num)
      .def_readonly("den", &PhiRatio::den)
      .def_readonly("bound", &PhiRatio::bound)
      .def("holds", &PhiRatio::holds);
  m.def("phi_ratio", &phi_ratio, py::arg("b"), py::arg("q"));
  m.def("complete_kloosterman", &complete_kloosterman, py::arg("a"), py::arg("b"), py::arg("q"));
  py::class_<TheoremRhs>(m, "TheoremRhs")
      .def_readonly("term_sqrt", &TheoremRhs::term_sqrt)
      .def_readonly("term_q", &TheoremRhs::term_q)
      .def_readonly("term_tail", &TheoremRhs::term_tail)
      .def_readonly("epsilon", &TheoremRhs::epsilon)
      .def_readonly("constant", &TheoremRhs::constant)
      .def_readonly("total", &TheoremRhs::total);
  m.def("theorem_rhs", &theorem_rhs, py::arg("q"), py::arg("N"), py::arg("eps"), py::arg("C"));
  m.def("theorem_q_in_range", &theorem_q_in_range, py::arg("q"), py::arg("N"));

  // decomp
  py::class_<PaperParams>(m, "PaperParams")
      .def_readonly("d0", &PaperParams::d0)
      .def_readonly("D0", &PaperParams::D0)
      .def_readonly("d1", &PaperParams::d1)
      .def_readonly("D1", &PaperParams::D1)
      .def_readonly("r_lo", &PaperParams::r_lo)
      .def_readonly("r_hi", &PaperParams::r_hi)
      .def("empty", &PaperParams::empty);
  m.def("paper_params", &paper_params, py::arg("N"));
  py::class_<BandScheme>(m, "BandScheme")
      .def_readonly("boundaries", &BandScheme::boundaries)
      .def("band_count", &BandScheme::band_count)
      .def("empty", &BandScheme::empty)
      .def("band_of", &BandScheme::band_of, py::arg("p"))
      .def("descriptor", &BandScheme::descriptor);
  m.def("make_bands_paper", &make_bands_paper, py::arg("N"));
  m.def("make_bands_custom", &make_bands_custom, py::arg("boundaries"));
  py::enum_<Verdict>(m, "Verdict")
      .value("Rough", Verdict::Rough)
      .value("Clean", Verdict::Clean)
      .value("Discard", Verdict::Discard);
  py::class_<Classification>(m, "Classification")
      .def_readonly("verdict", &Classification::verdict)
      .def_readonly("band", &Classification::band)
      .def_readonly("band_prime", &Classification::band_prime)
      .def_readonly("n", &Classification::n);
  m.def("classify", &classify, py::arg("n"), py::arg("bands"), py::arg("table"));
  m.def("split", &split, py::arg("n"), py::arg("bands"), py::arg("table"));
  py::class_<RoughCount>(m, "RoughCount")
      .def_readonly("count", &RoughCount::count)
      .def_readonly("lemma1_bound", &RoughCount::lemma1_bound);
  m.def("rough_count", &rough_count, py::arg("N"), py::arg("bands"));
  py::class_<MertensProduct>(m, "MertensProduct")
      .def_readonly("product", &MertensProduct::product)
      .def_readonly("approx", &MertensProduct::approx);
  m.def("mertens_product", &mertens_product, py::arg("D0"), py::arg("D1"));
  py::class_<BandPrimeCount>(m, "BandPrimeCount")
      .def_readonly("count", &BandPrimeCount::count)
      .def_readonly("pnt_ratio", &BandPrimeCount::pnt_ratio);
  m.def("band_prime_count", &band_prime_count, py::arg("bands"), py::arg("r"));
  py::class_<Decomposition>(m, "Decomposition")
      .def_readonly("clean", &Decomposition::clean)
      .def_readonly("rough", &Decomposition::rough)
      .def_readonly("discard", &Decomposition::discard)
      .def_readonly("rearranged_clean", &Decomposition::rearranged_clean);
  m.def("decomposed_sum", &decomposed_sum, py::arg("f"), py::arg("a"), py::arg("q"), py::arg("N"),
        py::arg("bands"), py::arg("table"), py::arg("workers") = 1);
  m.def("sigma1", &sigma1, py::arg("f"), py::arg("a"), py::arg("q"), py::arg("r"), py::arg("N"),
        py::arg("bands"), py::arg("table"), py::arg("reinstate_y_condition") = false,
        py::arg("workers") = 1);
  py::class_<Sigma2>(m, "Sigma2")
      .def_readonly("direct", &Sigma2::direct)
      .def_readonly("pair_expanded", &Sigma2::pair_expanded)
      .def_readonly("y_limit", &Sigma2::y_limit);
  m.def("sigma2", &sigma2, py::arg("f"), py::arg("a"), py::arg("q"), py::arg("r"), py::arg("N"),
        py::arg("bands"), py::arg("table"), py::arg("workers") = 1);

  // verify / report
  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("kind", &BoundReport::kind)
      .def_readonly("f_id", &BoundReport::f_id)
      .def_readonly("N", &BoundReport::N)
      .def_readonly("q", &BoundReport::q)
      .def_readonly("a", &BoundReport::a)
      .def_readonly("eps", &BoundReport::eps)
      .def_readonly("C", &BoundReport::C)
      .def_readonly("bands", &BoundReport::bands)
      .def_readonly("lhs", &BoundReport::lhs)
      .def_readonly("rhs_terms", &BoundReport::rhs_terms)
      .def_readonly("rhs_total", &BoundReport::rhs_total)
      .def_readonly("ratio", &BoundReport::ratio)
      .def_readonly("flags", &BoundReport::flags);
  m.def("cauchy_check", &cauchy_check, py::arg("f"), py::arg("a"), py::arg("q"), py::arg("r"),
        py::arg("N"), py::arg("bands"), py::arg("table"), py::arg("workers") = 1);
  py::class_<GcdPairSum>(m, "GcdPairSum")
      .def_readonly("sum", &GcdPairSum::sum)
      .def_readonly("truncated_bound", &GcdPairSum::truncated_bound)
      .def_readonly("final_bound_ratio", &GcdPairSum::final_bound_ratio)
      .def_readonly("band_upper", &GcdPairSum::band_upper)
      .def_readonly("pair_count", &GcdPairSum::pair_count)
      .def_readonly("sum_le_truncated", &GcdPairSum::sum_le_truncated)
      .def_readonly("inverse_invariant", &GcdPairSum::inverse_invariant);
  m.def(
      "gcd_pair_sum",
      [](u64 q, const std::vector<u64>& primes, u64 upper) {
        return gcd_pair_sum(q, primes, upper);
      },
      py::arg("q"), py::arg("band_primes"), py::arg("band_upper"));
  py::class_<RangeSpec>(m, "RangeSpec")
      .def(py::init<double, double>(), py::arg("lo_mult"), py::arg("hi_mult"))
      .def_readwrite("lo_mult", &RangeSpec::lo_mult)
      .def_readwrite("hi_mult", &RangeSpec::hi_mult);
  m.def(
      "lemma2_sweep",
      [](const std::vector<u64>& qs, const std::vector<i64>& bs,
         const std::vector<RangeSpec>& ranges, double eps, double C, unsigned workers) {
        return lemma2_sweep(qs, bs, ranges, eps, C, workers);
      },
      py::arg("qs"), py::arg("bs"), py::arg("ranges"), py::arg("eps") = 0.01,
      py::arg("C") = 1.0, py::arg("workers") = 1);
  py::class_<ARule>(m, "ARule")
      .def_static("fixed_a", &ARule::fixed_a, py::arg("a"))
      .def_static("random", &ARule::random, py::arg("seed"));
  m.def("resolve_a", &resolve_a, py::arg("rule"), py::arg("q"));
  m.def("log_spaced_moduli", &log_spaced_moduli, py::arg("lo"), py::arg("hi"), py::arg("count"));
  m.def(
      "theorem_scan",
      [](const std::vector<MultiplicativeFunction>& fs, const std::vector<u64>& Ns,
         const std::vector<u64>& qs, const ARule& rule, double eps, double C,
         const SpfTable& table, unsigned workers) {
        return theorem_scan(fs, Ns, qs, rule, eps, C, table, workers);
      },
      py::arg("fs"), py::arg("Ns"), py::arg("qs"), py::arg("a_rule"), py::arg("eps"),
      py::arg("C"), py::arg("table"), py::arg("workers") = 1);
  py::class_<ConstantEstimate>(m, "ConstantEstimate")
      .def_readonly("c_obs", &ConstantEstimate::c_obs)
      .def_readonly("argmax", &ConstantEstimate::argmax);
  m.def(
      "estimate_constant",
      [](const std::vector<BoundReport>& reports) { return estimate_constant(reports); },
      py::arg("reports"));
  m.def(
      "format_csv",
      [](const std::vector<BoundReport>& reports) { return format_csv(reports); },
      py::arg("reports"));
  m.def(
      "format_json",
      [](const std::vector<BoundReport>& reports) { return format_json(reports); },
      py::arg("reports"));
}
