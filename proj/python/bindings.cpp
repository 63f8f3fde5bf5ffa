#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pseudofin/bilinear.hpp"
#include "pseudofin/comprehensive.hpp"
#include "pseudofin/error.hpp"
#include "pseudofin/groups.hpp"
#include "pseudofin/modelcheck.hpp"
#include "pseudofin/report.hpp"
#include "pseudofin/suite.hpp"
#include "pseudofin/textio.hpp"

namespace py = pybind11;
using namespace pseudofin;

namespace {

// Reports cross the boundary as plain dicts through their JSON form.
py::object to_py(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

VectorFp vec(const PrimeField& f, const std::vector<std::int64_t>& xs) {
  return VectorFp(f, xs);
}

std::vector<Residue> coords(const VectorFp& v) {
  return {v.coords().begin(), v.coords().end()};
}

CheckMode mode_from(const std::string& mode, std::uint64_t samples, std::uint64_t seed) {
  if (mode == "exhaustive") return CheckMode::exhaustive();
  if (mode == "sample") return CheckMode::sample(samples, seed);
  throw PreconditionError("mode must be 'exhaustive' or 'sample'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite-stage checks for class-2 p-groups and bilinear structures";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

  py::class_<BilinearStructure>(m, "BilinearStructure")
      .def(py::init([](std::uint32_t p, std::size_t n, std::size_t d,
                       std::vector<Residue> gram) {
             if (gram.empty()) return BilinearStructure(PrimeField(p), n, d);
             return BilinearStructure(PrimeField(p), n, d, std::move(gram));
           }),
           py::arg("p"), py::arg("n"), py::arg("d"), py::arg("gram") = std::vector<Residue>{})
      .def_static("symplectic",
                  [](std::uint32_t p, std::size_t k) {
                    return BilinearStructure::symplectic(PrimeField(p), k);
                  })
      .def_static("parse", [](const std::string& text) { return parse_structure(text); })
      .def_property_readonly("p", [](const BilinearStructure& s) { return s.field().p(); })
      .def_property_readonly("n", &BilinearStructure::n)
      .def_property_readonly("d", &BilinearStructure::d)
      .def_property_readonly("gram", &BilinearStructure::gram)
      .def("beta",
           [](const BilinearStructure& s, const std::vector<std::int64_t>& a,
              const std::vector<std::int64_t>& b) {
             return coords(beta_eval(s, vec(s.field(), a), vec(s.field(), b)));
           })
      .def("is_alternating", [](const BilinearStructure& s) { return is_alternating(s); })
      .def("radical_dim", [](const BilinearStructure& s) { return radical(s).dim(); })
      .def("format", [](const BilinearStructure& s) { return format_structure(s); })
      .def("__eq__", [](const BilinearStructure& a, const BilinearStructure& b) { return a == b; });

  m.def("psi_check", [](const BilinearStructure& s) { return to_py(to_json(psi_check(s))); });
  m.def("sigma_check", [](const BilinearStructure& s, std::size_t k) {
    return to_py(to_json(sigma_check(s, k)));
  });
  m.def(
      "sigma_failure_density",
      [](const BilinearStructure& s, std::size_t k, unsigned threads) {
        return to_py(to_json(sigma_failure_density(s, k, threads)));
      },
      py::arg("s"), py::arg("k"), py::arg("threads") = 1);
  m.def(
      "lemma_bil_exhaust",
      [](std::uint32_t p, std::size_t n, std::size_t d, std::uint64_t budget, unsigned threads) {
        return to_py(to_json(lemma_bil_exhaust(p, n, d, budget, threads)));
      },
      py::arg("p"), py::arg("n"), py::arg("d"), py::arg("budget") = kDefaultMapBudget,
      py::arg("threads") = 1);
  m.def("counting_bound", [](std::uint32_t p, std::size_t n, std::size_t d) {
    return to_py(to_json(counting_bound(p, n, d)));
  });

  py::class_<Class2Group>(m, "Class2Group")
      .def(py::init<BilinearStructure>())
      .def_property_readonly("structure", &Class2Group::structure)
      .def_property_readonly("order", &Class2Group::order_u64)
      .def("multiply",
           [](const Class2Group& g, std::uint64_t a, std::uint64_t b) {
             return g.index_of(g.multiply(g.element_at(a), g.element_at(b)));
           })
      .def("inverse",
           [](const Class2Group& g, std::uint64_t a) {
             return g.index_of(g.inverse(g.element_at(a)));
           })
      .def("commutator",
           [](const Class2Group& g, std::uint64_t a, std::uint64_t b) {
             return g.index_of(g.commutator(g.element_at(a), g.element_at(b)));
           })
      .def("is_central",
           [](const Class2Group& g, std::uint64_t a) { return g.is_central(g.element_at(a)); })
      .def("format", [](const Class2Group& g) { return format_group(g); });

  m.def("extraspecial", &extraspecial, py::arg("p"), py::arg("k"));
  m.def("heisenberg", &heisenberg, py::arg("p"), py::arg("n"), py::arg("m") = 1);
  m.def("central_product", &central_product, py::arg("g"), py::arg("copies"));
  m.def("group_from_bilinear", &group_from_bilinear);
  m.def("reduce_to_bilinear", &reduce_to_bilinear);
  m.def(
      "certify",
      [](const Class2Group& g, std::uint64_t seed, std::uint64_t samples, unsigned threads) {
        return to_py(to_json(certify(g, seed, samples, threads)));
      },
      py::arg("g"), py::arg("seed") = 1, py::arg("samples") = 200'000, py::arg("threads") = 1);
  m.def("rho_check", [](const Class2Group& g) { return to_py(to_json(rho_check(g))); });
  m.def("sigma_on_group", [](const Class2Group& g, std::size_t k) {
    return to_py(to_json(sigma_on_group(g, k)));
  });
  m.def("sop_chain_direct_power", [](const Class2Group& g, std::size_t k) {
    return to_py(to_json(sop_chain_direct_power(g, k)));
  });
  m.def("finite_stage_maximality", [](const Class2Group& g, std::size_t k) {
    return to_py(to_json(finite_stage_maximality(g, k)));
  });
  m.def(
      "commutator_power_check",
      [](const Class2Group& g, const std::vector<std::uint64_t>& exponents,
         const std::string& mode, std::uint64_t samples, std::uint64_t seed) {
        return to_py(to_json(commutator_power_check(g, exponents, mode_from(mode, samples, seed))));
      },
      py::arg("g"), py::arg("exponents"), py::arg("mode") = "exhaustive",
      py::arg("samples") = 100'000, py::arg("seed") = 1);
  m.def(
      "star_scan",
      [](const Class2Group& g, std::size_t max_rank, std::uint64_t max_instances) {
        return to_py(to_json(star_scan(g, max_rank, max_instances)));
      },
      py::arg("g"), py::arg("max_rank"), py::arg("max_instances") = kDefaultStarInstances);

  py::class_<TableGroup>(m, "TableGroup")
      .def_static("from_cayley_table", &TableGroup::from_cayley_table)
      .def_property_readonly("order", &TableGroup::order)
      .def("mul", &TableGroup::mul)
      .def("inv", &TableGroup::inv)
      .def("cayley_table", &TableGroup::cayley_table, py::arg("max_entries") = 1ULL << 24);

  m.def("as_table", [](const Class2Group& g) { return as_table(g); });
  m.def("direct_power", [](const Class2Group& g, std::size_t k) { return direct_power(g, k); });
  m.def("ut_group", [](std::uint32_t p, std::size_t dim) { return ut_group(p, dim); });
  m.def("lower_central_series",
        [](const TableGroup& g) { return to_py(to_json(lower_central_series(g))); });
  m.def(
      "hall_witt_check",
      [](const TableGroup& g, const std::string& mode, std::uint64_t samples,
         std::uint64_t seed, unsigned threads) {
        return to_py(to_json(hall_witt_check(g, mode_from(mode, samples, seed), threads)));
      },
      py::arg("g"), py::arg("mode") = "exhaustive", py::arg("samples") = 100'000,
      py::arg("seed") = 1, py::arg("threads") = 1);
  m.def("laurent_bound_check",
        [](const TableGroup& g) { return to_py(to_json(laurent_bound_check(g))); });

  // Heights return None for the identity (infinite height).
  m.def("height", [](std::uint32_t p, const std::vector<std::size_t>& exponents,
                     const std::vector<std::uint64_t>& element) -> py::object {
    const std::size_t h = height(AbelianPGroup(p, exponents), element);
    if (h == kInfiniteHeight) return py::none();
    return py::int_(h);
  });
  m.def("is_pure", [](std::uint32_t p, const std::vector<std::size_t>& exponents,
                      const std::vector<std::vector<std::uint64_t>>& generators) {
    const AbelianPGroup a(p, exponents);
    return is_pure(a, AbelianSubgroup(a, generators));
  });

  m.def(
      "run_suite",
      [](const std::string& name, unsigned threads, std::uint64_t seed) {
        Json out = Json::array();
        for (const auto& r : run_suite(name, {threads, seed})) out.push_back(to_json(r));
        return to_py(out);
      },
      py::arg("name"), py::arg("threads") = 1, py::arg("seed") = 1);
}
