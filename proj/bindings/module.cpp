#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "equimaps/error.hpp"
#include "equimaps/json_io.hpp"

namespace py = pybind11;
using namespace equimaps;

namespace {

// Python-side handle for the immutable shared g-set.
struct PyGSet {
  GSetPtr ptr;
};

Point point_from(const std::tuple<int, long long, int>& t) {
  return Point{std::get<0>(t), std::get<1>(t), std::get<2>(t)};
}

std::tuple<int, long long, int> point_to(const Point& p) { return {p.stratum, p.orbit, p.coset}; }

PyGSet build_from_specs(const FiniteGroup& g,
                        const std::vector<std::pair<std::vector<int>, std::optional<long long>>>& orbits) {
  std::vector<OrbitSpec> specs;
  for (const auto& [members, count] : orbits) {
    Subgroup h = make_subgroup(g, members);
    specs.push_back(count ? OrbitSpec::finite(std::move(h), *count)
                          : OrbitSpec::infinite(std::move(h)));
  }
  return PyGSet{build_gset(g, specs)};
}

std::string case_name(CaseTag tag) {
  switch (tag) {
    case CaseTag::AllFinite: return "all-finite";
    case CaseTag::Case1: return "case1";
    case CaseTag::Case2: return "case2";
    default: return "unsupported-infinite";
  }
}

GeneratorSet default_gens(const GSetPtr& gs) {
  return gs->all_finite() ? build_W(gs) : build_V(gs);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Finite-group actions, equivariant-map monoids, relative rank, factorization";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(PyExc_ValueError, (e.code() + ": " + e.what()).c_str());
    }
  });

  py::class_<FiniteGroup>(m, "FiniteGroup")
      .def_static("from_cayley", &FiniteGroup::from_cayley)
      .def_static("from_permutation_generators", &FiniteGroup::from_permutation_generators,
                  py::arg("degree"), py::arg("generators"), py::arg("order_cap") = 10000)
      .def_property_readonly("order", &FiniteGroup::order)
      .def("mul", &FiniteGroup::mul)
      .def("inv", &FiniteGroup::inv)
      .def("cayley", &FiniteGroup::cayley);

  m.def("all_subgroups", [](const FiniteGroup& g) {
    std::vector<std::vector<int>> out;
    for (const auto& h : all_subgroups(g)) out.push_back(h.members);
    return out;
  });
  m.def("normalizer", [](const FiniteGroup& g, const std::vector<int>& members) {
    return normalizer(g, make_subgroup(g, members)).members;
  });
  m.def("conj_classes_of_subgroups", [](const FiniteGroup& g) {
    std::vector<std::vector<std::vector<int>>> out;
    for (const auto& cls : conj_classes_of_subgroups(g)) {
      std::vector<std::vector<int>> members;
      for (const auto& h : cls.members) members.push_back(h.members);
      out.push_back(std::move(members));
    }
    return out;
  });
  m.def("n_conj_class",
        [](const FiniteGroup& g, const std::vector<int>& h, const std::vector<int>& n) {
          std::vector<std::vector<int>> out;
          for (const auto& k : n_conj_class(g, make_subgroup(g, h), make_subgroup(g, n)))
            out.push_back(k.members);
          return out;
        });

  py::class_<PyGSet>(m, "GSet")
      .def_property_readonly("case", [](const PyGSet& gs) { return case_name(gs.ptr->case_tag()); })
      .def_property_readonly("stratum_count", [](const PyGSet& gs) { return gs.ptr->stratum_count(); })
      .def_property_readonly("all_finite", [](const PyGSet& gs) { return gs.ptr->all_finite(); })
      .def("total_points", [](const PyGSet& gs) { return gs.ptr->total_points(); })
      .def("stratum_stabilizer",
           [](const PyGSet& gs, int i) { return gs.ptr->stratum(i).stabilizer.members; })
      .def("stratum_orbit_count", [](const PyGSet& gs, int i) -> std::optional<long long> {
        return gs.ptr->stratum(i).orbit_count;
      })
      .def("act", [](const PyGSet& gs, int g, const std::tuple<int, long long, int>& p) {
        return point_to(gs.ptr->act(g, point_from(p)));
      })
      .def("stabilizer_of", [](const PyGSet& gs, const std::tuple<int, long long, int>& p) {
        return gs.ptr->stabilizer_of(point_from(p)).members;
      });

  m.def("build_gset", &build_from_specs, py::arg("group"), py::arg("orbits"),
        "orbits: list of (stabilizer member ids, count or None for the infinite family)");

  py::class_<EquivariantMap>(m, "EquivariantMap")
      .def_static("identity",
                  [](const PyGSet& gs) { return EquivariantMap::identity(gs.ptr); })
      .def("evaluate", [](const EquivariantMap& f, const std::tuple<int, long long, int>& p) {
        return point_to(f.evaluate(point_from(p)));
      })
      .def("tail_eval_index", [](const EquivariantMap& f, long long n) {
        return point_to(f.tail_eval_index(n));
      })
      .def("is_identity", &EquivariantMap::is_identity)
      .def("__eq__", [](const EquivariantMap& f, const EquivariantMap& g) { return maps_equal(f, g); })
      .def("to_json", [](const EquivariantMap& f) { return emit_map(f).dump(); });

  m.def("map_from_json", [](const PyGSet& gs, const std::string& doc) {
    return parse_map(gs.ptr, Json::parse(doc));
  });
  m.def("compose", [](const EquivariantMap& f, const EquivariantMap& g) { return compose(f, g); });
  m.def("metrics_json", [](const EquivariantMap& f) { return emit_metrics(metrics(f)).dump(); });
  m.def("check_equivariance", [](const PyGSet& gs, const std::vector<int>& table) {
    return check_equivariance(*gs.ptr, table);
  });

  m.def("count_end", [](const PyGSet& gs) { return count_end(*gs.ptr); });
  m.def("enumerate_end", [](const PyGSet& gs, long long cap) { return enumerate_end(gs.ptr, cap); },
        py::arg("gset"), py::arg("cap") = 10'000'000);
  m.def("enumerate_aut", [](const PyGSet& gs, long long cap) { return enumerate_aut(gs.ptr, cap); },
        py::arg("gset"), py::arg("cap") = 10'000'000);

  m.def("collapse_type_count", [](const PyGSet& gs) { return collapse_type_count(*gs.ptr); });
  m.def("kappa_classes", [](const PyGSet& gs) { return kappa_classes(*gs.ptr); });
  m.def("u_sizes", [](const PyGSet& gs) {
    std::vector<size_t> out;
    for (int i = 0; i < gs.ptr->stratum_count(); ++i) out.push_back(u_set(*gs.ptr, i).size());
    return out;
  });
  m.def("relative_rank_formula", [](const PyGSet& gs) { return relative_rank_formula(*gs.ptr); });
  m.def("stab_classes", [](const PyGSet& gs) {
    auto [stab, classes] = gs.ptr->stab_classes();
    std::vector<std::vector<int>> stab_out;
    for (const auto& h : stab) stab_out.push_back(h.members);
    std::vector<std::vector<std::vector<int>>> class_out;
    for (const auto& cls : classes) {
      std::vector<std::vector<int>> members;
      for (const auto& h : cls.members) members.push_back(h.members);
      class_out.push_back(std::move(members));
    }
    return std::make_pair(stab_out, class_out);
  });
  m.def("generator_names", [](const PyGSet& gs) {
    std::vector<std::string> names;
    for (const auto& g : default_gens(gs.ptr).named) names.push_back(g.name);
    return names;
  });

  m.def("monoid_closure_size",
        [](const PyGSet& gs, const std::vector<EquivariantMap>& gens, long long cap) {
          return monoid_closure(gs.ptr, gens, cap).size;
        },
        py::arg("gset"), py::arg("generators"), py::arg("cap") = 100000);
  m.def("relative_rank_bruteforce",
        [](const PyGSet& gs, int max_k, long long cap) {
          return relative_rank_bruteforce(gs.ptr, max_k, cap).rank;
        },
        py::arg("gset"), py::arg("max_k") = 3, py::arg("cap") = 100000);

  m.def("factorize_json", [](const PyGSet& gs, const std::string& map_doc) {
    EquivariantMap tau = parse_map(gs.ptr, Json::parse(map_doc));
    return report_doc(factor(tau, default_gens(gs.ptr))).dump();
  });
  m.def("verify_json", [](const PyGSet& gs, const std::string& map_doc, const std::string& word_doc) {
    EquivariantMap tau = parse_map(gs.ptr, Json::parse(map_doc));
    Word word = parse_word(gs.ptr, Json::parse(word_doc));
    return maps_equal(recompose(word, default_gens(gs.ptr)), tau);
  });
  m.def("window_table", [](const PyGSet& gs, const std::string& map_doc, long long n) {
    EquivariantMap f = parse_map(gs.ptr, Json::parse(map_doc));
    std::vector<std::tuple<int, long long, int>> out;
    for (long long i = 0; i < n; ++i) out.push_back(point_to(f.tail_eval_index(i)));
    return out;
  });
  m.def("analyze_json", [](const PyGSet& gs) { return analyze_doc(gs.ptr).dump(); });
}
