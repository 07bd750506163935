#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "maltsev/catalog.hpp"
#include "maltsev/error.hpp"
#include "maltsev/finite_algebra.hpp"
#include "maltsev/lambda.hpp"
#include "maltsev/sdmeet.hpp"
#include "maltsev/sigma.hpp"
#include "maltsev/squares.hpp"

namespace py = pybind11;
using namespace maltsev;

namespace {

  using Quad = std::array<Elem, 4>;

  SquareSet to_set(std::vector<Quad> const& xs) {
    SquareSet s;
    for (auto const& q : xs) {
      s.insert({q[0], q[1], q[2], q[3]});
    }
    return s;
  }

  std::vector<Quad> from_set(SquareSet const& s) {
    std::vector<Quad> out;
    for (auto const& q : s.squares()) {
      out.push_back(q.entries());
    }
    return out;
  }

  py::dict verdict_dict(SdMeetVerdict const& v) {
    py::dict d;
    d["verdict"]         = to_string(v.verdict);
    d["minimal_level"]   = v.minimal_level ? py::cast(*v.minimal_level) : py::none();
    d["rounds"]          = v.rounds;
    d["free_size"]       = v.free_size;
    d["e_size"]          = v.e_size;
    d["level_sizes"]     = v.level_sizes;
    d["fixpoint_size"]   = v.fixpoint_size;
    d["tolerance_audit"] = v.tolerance_audit;
    d["budget_note"]     = v.budget_note;
    return d;
  }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-dimensional congruence machinery for finite idempotent algebras";

  py::register_exception<Error>(m, "Error");
  py::register_exception<InputError>(m, "InputError");
  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded");

  py::class_<FiniteAlgebra>(m, "Algebra")
      .def_property_readonly("size", &FiniteAlgebra::size)
      .def_property_readonly("symbols",
                             [](FiniteAlgebra const& a) {
                               std::vector<std::pair<std::string, std::uint32_t>> out;
                               for (auto const& s : a.signature().symbols()) {
                                 out.emplace_back(s.name, s.arity);
                               }
                               return out;
                             })
      .def("apply",
           [](FiniteAlgebra const& a, std::size_t op, std::vector<Elem> const& args) {
             if (op >= a.signature().size() || args.size() != a.signature()[op].arity) {
               throw InputError("bad operation index or arity");
             }
             return a.apply(op, args);
           })
      .def("is_idempotent", &FiniteAlgebra::is_idempotent)
      .def("__str__", &print_algebra);

  m.def("parse_algebra", &parse_algebra, py::arg("text"));

  auto cat = m.def_submodule("catalog", "Small example algebras");
  cat.def("semilattice_chain", &catalog::semilattice_chain, py::arg("n"));
  cat.def("majority2", &catalog::majority2);
  cat.def("affine2", &catalog::affine2);
  cat.def("lattice2", &catalog::lattice2);
  cat.def("trivial", &catalog::trivial);

  m.def(
      "h_compose",
      [](std::vector<Quad> const& s, unsigned workers) {
        return from_set(h_compose(to_set(s), {workers}));
      },
      py::arg("squares"), py::arg("workers") = 1);
  m.def(
      "v_compose",
      [](std::vector<Quad> const& s, unsigned workers) {
        return from_set(v_compose(to_set(s), {workers}));
      },
      py::arg("squares"), py::arg("workers") = 1);
  m.def(
      "eq2_closure",
      [](std::vector<Quad> const& s, unsigned workers) {
        return from_set(eq2_closure(to_set(s), {workers}));
      },
      py::arg("squares"), py::arg("workers") = 1);
  m.attr("square_convention") = std::string(square_convention);

  m.def(
      "decide_sdmeet",
      [](FiniteAlgebra const& a, std::size_t budget, unsigned workers) {
        SdMeetOptions o;
        o.budget_squares = budget;
        o.workers        = workers;
        py::gil_scoped_release release;
        auto                   v = decide_sdmeet(a, o).verdict;
        py::gil_scoped_acquire acquire;
        return verdict_dict(v);
      },
      py::arg("algebra"), py::arg("budget_squares") = 2'000'000, py::arg("workers") = 1);

  m.def(
      "sigma_witness",
      [](FiniteAlgebra const& a, std::size_t budget) {
        SdMeetOptions o;
        o.budget_squares = budget;
        o.provenance     = true;
        auto run         = decide_sdmeet(a, o);
        auto w           = extract_sigma_witness(run);
        auto c           = check_sigma_model(a, w.n, w.assignment);
        std::vector<std::string> terms;
        for (auto t : w.assignment.terms) {
          terms.push_back(print_term(w.assignment.pool, t));
        }
        py::dict d;
        d["n"]     = w.n;
        d["terms"] = terms;
        d["check"] = c.pass;
        return d;
      },
      py::arg("algebra"), py::arg("budget_squares") = 2'000'000);

  m.def(
      "delta_equals_rectangles",
      [](FiniteAlgebra const& a, unsigned workers) {
        return verify_delta_equals_rectangles(a, workers).pass;
      },
      py::arg("algebra"), py::arg("workers") = 1);

  m.def(
      "emit_sigma", [](std::size_t n) { return print_sigma(emit_sigma(n)); }, py::arg("n"));

  m.def(
      "lambda_identities",
      [](std::size_t l, std::optional<std::size_t> omit) {
        auto p = build_lambda(l);
        if (omit) {
          p = restrict_lambda(p, *omit);
        }
        std::vector<std::string> out;
        for (auto const& id : p.identities) {
          out.push_back(print_identity(p.pool, id));
        }
        return out;
      },
      py::arg("l"), py::arg("omit") = py::none());

  m.def(
      "check_projection_model",
      [](std::size_t l, std::size_t i, std::size_t m) {
        auto p = restrict_lambda(build_lambda(l), i);
        return check_identities(projection_model(l, i, m), p.pool, p.identities).pass;
      },
      py::arg("l"), py::arg("i"), py::arg("m"));

  py::class_<LambdaFree>(m, "LambdaFree")
      .def(py::init<std::size_t, std::size_t>(), py::arg("l"), py::arg("max_nodes") = 0)
      .def_property_readonly("size", &LambdaFree::size)
      .def_readonly_static("x", &LambdaFree::x)
      .def_readonly_static("y", &LambdaFree::y)
      .def("apply", &LambdaFree::apply, py::arg("symbol"), py::arg("args"))
      .def("level", &LambdaFree::level)
      .def("repr", &LambdaFree::repr)
      .def("build",
           [](LambdaFree& f, std::size_t k) {
             auto r = f.build(k);
             return py::make_tuple(r.complete_level, r.partial);
           })
      .def("dump", &LambdaFree::dump);

  m.def(
      "validate_lambda_on_free",
      [](std::size_t l, std::size_t k) {
        LambdaFree f(l);
        auto       v = validate_lambda_on_free(f, k);
        py::dict   d;
        d["pass"]      = v.pass;
        d["instances"] = v.instances;
        d["domain"]    = v.domain;
        d["failure"]   = v.failure;
        return d;
      },
      py::arg("l"), py::arg("k"));

  m.def(
      "search_sigma_in_lambda",
      [](std::size_t l, std::size_t rounds, std::size_t depth, std::size_t budget,
         unsigned workers, bool override_margin) {
        LambdaSearchOptions o{budget, workers, override_margin};
        py::gil_scoped_release release;
        auto                   r = search_sigma_in_lambda(l, rounds, depth, o);
        py::gil_scoped_acquire acquire;
        py::dict               d;
        d["outcome"]  = to_string(r.outcome);
        d["label"]    = r.label;
        d["expected"] = r.expected;
        d["found_at"] = r.found_at ? py::cast(*r.found_at) : py::none();
        d["sizes"]    = r.sizes;
        return d;
      },
      py::arg("l"), py::arg("rounds"), py::arg("depth"), py::arg("budget_squares") = 5'000'000,
      py::arg("workers") = 1, py::arg("override_margin") = false);

  m.def(
      "lemma5_reduction_check",
      [](std::size_t l, std::size_t i, std::vector<std::size_t> const& roots,
         std::size_t samples, std::size_t depth, std::uint64_t seed) {
        auto     r = lemma5_reduction_check(l, i, roots, {samples, depth, 6, seed});
        py::dict d;
        d["pass"]        = r.pass;
        d["equal_pairs"] = r.equal_pairs;
        d["pairs"]       = r.pairs;
        d["failure"]     = r.failure;
        return d;
      },
      py::arg("l"), py::arg("i"), py::arg("roots"), py::arg("samples") = 1000,
      py::arg("depth") = 1, py::arg("seed") = 1);
}
