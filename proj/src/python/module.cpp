#include <memory>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "latglob/analytic.hpp"
#include "latglob/cli.hpp"
#include "latglob/errors.hpp"
#include "latglob/estimate.hpp"
#include "latglob/primes.hpp"
#include "latglob/systems.hpp"

namespace py = pybind11;
using namespace latglob;

namespace {

using Shared = std::shared_ptr<LocalSystem>;

std::pair<std::string, std::string> rational_pair(const Rational& q) {
  return {q.get_num().get_str(), q.get_den().get_str()};
}

py::dict bounded_dict(const TailBoundedValue& v) {
  py::dict d;
  d["partial"] = v.partial;
  d["tail_bound"] = v.tail_bound;
  d["lower"] = v.lower();
  d["upper"] = v.upper();
  d["terms_used"] = v.terms_used;
  d["cutoff_prime"] = v.cutoff_prime;
  return d;
}

py::dict estimate_dict(const ExactEstimate& e) {
  py::dict d;
  d["num"] = e.numerator.get_str();
  d["den"] = e.denominator.get_str();
  d["H"] = e.H;
  d["metadata"] = e.metadata;
  return d;
}

BoxSpec box_for(const LocalSystem& s, std::int64_t H) { return BoxSpec{H, s.dimension()}; }

EnumerationOptions opts(unsigned threads) {
  EnumerationOptions o;
  o.threads = threads;
  return o;
}

}  // namespace

PYBIND11_MODULE(_latglob, m) {
  m.doc() = "Native core: local systems, analytic predictors and exact box estimators";

  py::register_exception<BudgetError>(m, "BudgetError", PyExc_RuntimeError);
  py::register_exception<IntegrityError>(m, "IntegrityError", PyExc_RuntimeError);
  py::register_exception<IncompleteFactorization>(m, "IncompleteFactorization", PyExc_RuntimeError);
  py::register_exception<EmptyRestriction>(m, "EmptyRestriction", PyExc_RuntimeError);
  py::register_exception<DegenerateDenominator>(m, "DegenerateDenominator", PyExc_ArithmeticError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

  m.def("sieve_primes", [](std::uint64_t limit) {
    const PrimeTable t = sieve_primes(limit);
    return std::vector<std::uint64_t>(t.primes().begin(), t.primes().end());
  });
  m.def("nth_prime", [](std::uint64_t j) { return nth_prime(j); });

  py::class_<LocalSystem, Shared>(m, "System")
      .def_property_readonly("key", &LocalSystem::key)
      .def_property_readonly("dimension", &LocalSystem::dimension)
      .def("measure", [](const LocalSystem& s, std::uint64_t p) { return rational_pair(s.measure(p)); })
      .def("contains",
           [](const LocalSystem& s, const std::vector<std::int64_t>& a, std::uint64_t p) {
             if (a.size() != static_cast<std::size_t>(s.dimension())) throw DomainError("point has the wrong length");
             return s.contains(a, p);
           })
      .def("exceptional",
           [](const LocalSystem& s, const std::vector<std::int64_t>& a) {
             if (a.size() != static_cast<std::size_t>(s.dimension())) throw DomainError("point has the wrong length");
             return s.exceptional(a);
           })
      .def("place_count",
           [](const LocalSystem& s, const std::vector<std::int64_t>& a) {
             if (a.size() != static_cast<std::size_t>(s.dimension())) throw DomainError("point has the wrong length");
             return s.place_count(a);
           })
      .def("note", &LocalSystem::note);

  m.def("make_system", [](const std::string& key) { return Shared(make_system(key)); });
  m.def("system_key_forms", &system_key_forms);

  m.def("riemann_zeta", [](int s, double eps) { return bounded_dict(riemann_zeta(s, eps)); }, py::arg("s"),
        py::arg("eps") = kDefaultEps);
  m.def("prime_series", [](const LocalSystem& s, double eps) { return bounded_dict(prime_series(s, eps)); },
        py::arg("system"), py::arg("eps") = kDefaultEps);
  m.def("euler_product", [](const LocalSystem& s, double eps) { return bounded_dict(euler_product(s, eps)); },
        py::arg("system"), py::arg("eps") = kDefaultEps);
  m.def("predicted_density_T",
        [](const LocalSystem& s, double eps) { return bounded_dict(predicted_density_T(s, eps)); },
        py::arg("system"), py::arg("eps") = kDefaultEps);
  m.def("predicted_restricted_mean",
        [](const LocalSystem& s, double eps) { return bounded_dict(predicted_restricted_mean(s, eps)); },
        py::arg("system"), py::arg("eps") = kDefaultEps);
  m.def(
      "product_formula",
      [](const LocalSystem& s, const std::vector<std::uint64_t>& primes, bool infinity, double eps) {
        return bounded_dict(product_formula(s, PlaceSet{infinity, primes}, eps));
      },
      py::arg("system"), py::arg("primes"), py::arg("infinity") = false, py::arg("eps") = kDefaultEps);

  m.def(
      "empirical_mean",
      [](const LocalSystem& s, std::int64_t H, unsigned threads) {
        py::gil_scoped_release release;
        return empirical_mean(s, box_for(s, H), opts(threads));
      },
      py::arg("system"), py::arg("H"), py::arg("threads") = 0);
  m.def(
      "empirical_restricted_mean",
      [](const LocalSystem& s, std::int64_t H, unsigned threads) {
        py::gil_scoped_release release;
        return empirical_restricted_mean(s, box_for(s, H), opts(threads));
      },
      py::arg("system"), py::arg("H"), py::arg("threads") = 0);
  m.def(
      "empirical_density",
      [](const LocalSystem& s, std::uint64_t p, std::int64_t H, unsigned threads) {
        py::gil_scoped_release release;
        return empirical_density(s, p, box_for(s, H), opts(threads));
      },
      py::arg("system"), py::arg("p"), py::arg("H"), py::arg("threads") = 0);
  m.def(
      "empirical_P_inverse_density",
      [](const LocalSystem& s, const std::vector<std::uint64_t>& primes, std::int64_t H, bool infinity,
         unsigned threads) {
        py::gil_scoped_release release;
        return empirical_P_inverse_density(s, PlaceSet{infinity, primes}, box_for(s, H), opts(threads));
      },
      py::arg("system"), py::arg("primes"), py::arg("H"), py::arg("infinity") = false, py::arg("threads") = 0);

  py::class_<ExactEstimate>(m, "ExactEstimate")
      .def_property_readonly("num", [](const ExactEstimate& e) { return e.numerator.get_str(); })
      .def_property_readonly("den", [](const ExactEstimate& e) { return e.denominator.get_str(); })
      .def_readonly("H", &ExactEstimate::H)
      .def_readonly("metadata", &ExactEstimate::metadata)
      .def("as_dict", &estimate_dict);

  m.def(
      "run",
      [](const std::string& command, const std::string& system, std::optional<std::int64_t> H,
         std::vector<std::int64_t> h_list, double eps, double alpha, std::uint64_t M, double tol, unsigned threads,
         const std::string& which, const std::string& format) {
        cli::RunConfig cfg;
        const auto cmd = cli::parse_command(command);
        if (!cmd) throw DomainError("unknown command '" + command + "'");
        const auto fmt = cli::parse_format(format);
        if (!fmt) throw DomainError("unknown format '" + format + "'");
        cfg.command = *cmd;
        cfg.system_key = system;
        cfg.H = H;
        cfg.h_list = std::move(h_list);
        cfg.eps = eps;
        cfg.alpha = alpha;
        cfg.M = M;
        cfg.tol = tol;
        cfg.threads = threads;
        cfg.which = which;
        cfg.format = *fmt;
        cli::CommandOutput out;
        {
          py::gil_scoped_release release;
          out = cli::run(cfg);
        }
        return std::make_pair(out.exit_code, cli::render(out, cfg.format));
      },
      py::arg("command"), py::arg("system"), py::arg("H") = py::none(), py::arg("h_list") = std::vector<std::int64_t>{},
      py::arg("eps") = kDefaultEps, py::arg("alpha") = 1.0, py::arg("M") = 2, py::arg("tol") = 0.02,
      py::arg("threads") = 0, py::arg("which") = "mean", py::arg("format") = "json");
}
