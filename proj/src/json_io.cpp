#include "equimaps/json_io.hpp"

#include "equimaps/error.hpp"

namespace equimaps {

namespace {

[[noreturn]] void malformed(const std::string& message) { fail("malformed-input", message); }

long long get_count(const Json& v) {
  if (v.is_number_integer()) return v.get<long long>();
  malformed("count must be an integer or \"inf\"");
}

Json emit_ext(const ExtCount& c) {
  if (c.infinite) return Json("inf");
  return Json(c.value);
}

Json emit_subgroup(const Subgroup& h) { return Json(h.members); }

Json emit_class(const SubgroupConjClass& cls) {
  Json members = Json::array();
  for (const auto& m : cls.members) members.push_back(emit_subgroup(m));
  return members;
}

}  // namespace

FiniteGroup parse_group(const Json& doc) {
  if (!doc.is_object()) malformed("group document must be an object");
  if (doc.contains("cayley")) {
    if (!doc["cayley"].is_array()) malformed("cayley must be an array of rows");
    return FiniteGroup::from_cayley(doc["cayley"].get<std::vector<std::vector<int>>>());
  }
  if (doc.contains("degree") && doc.contains("generators")) {
    return FiniteGroup::from_permutation_generators(
        doc["degree"].get<int>(), doc["generators"].get<std::vector<std::vector<int>>>());
  }
  malformed("group document needs \"cayley\" or \"degree\"+\"generators\"");
}

Json emit_group(const FiniteGroup& g) { return Json{{"cayley", g.cayley()}}; }

GSetPtr parse_gset(const Json& doc) {
  if (!doc.is_object() || !doc.contains("group") || !doc.contains("orbits"))
    malformed("g-set document needs \"group\" and \"orbits\"");
  FiniteGroup g = parse_group(doc["group"]);
  std::vector<OrbitSpec> orbits;
  for (const auto& entry : doc["orbits"]) {
    if (!entry.is_object() || !entry.contains("stabilizer") || !entry.contains("count"))
      malformed("orbit entry needs \"stabilizer\" and \"count\"");
    Subgroup h = make_subgroup(g, entry["stabilizer"].get<std::vector<int>>());
    if (entry["count"].is_string() && entry["count"] == "inf")
      orbits.push_back(OrbitSpec::infinite(std::move(h)));
    else
      orbits.push_back(OrbitSpec::finite(std::move(h), get_count(entry["count"])));
  }
  return build_gset(std::move(g), orbits);
}

Json emit_gset(const GSet& gs) {
  Json orbits = Json::array();
  for (const auto& s : gs.strata()) {
    Json entry;
    entry["stabilizer"] = s.stabilizer.members;
    entry["count"] = s.orbit_count ? Json(*s.orbit_count) : Json("inf");
    orbits.push_back(std::move(entry));
  }
  return Json{{"group", emit_group(gs.group())}, {"orbits", std::move(orbits)}};
}

Point parse_point(const Json& doc) {
  if (!doc.is_array() || doc.size() != 3) malformed("point must be [stratum, orbit, coset]");
  return Point{doc[0].get<int>(), doc[1].get<long long>(), doc[2].get<int>()};
}

Json emit_point(const Point& p) { return Json::array({p.stratum, p.orbit, p.coset}); }

namespace {

TailAtom parse_atom(const Json& doc) {
  if (doc.is_string()) {
    if (doc == "mu") return MuAtom{};
    if (doc == "nu") return NuAtom{};
    malformed("unknown tail atom");
  }
  if (doc.is_object() && doc.contains("patch")) {
    FinitePatch patch;
    for (const auto& entry : doc["patch"]) {
      if (!entry.is_array() || entry.size() != 2) malformed("patch entry must be [index, point]");
      patch.entries.emplace(entry[0].get<long long>(), parse_point(entry[1]));
    }
    return patch;
  }
  if (doc.is_object() && doc.contains("rule")) {
    const Json& r = doc["rule"];
    RuleBijection rule;
    if (r.contains("base")) {
      if (r["base"] == "sigma0")
        rule.base = RuleBijection::Base::Sigma0;
      else if (r["base"] != "identity")
        malformed("rule base must be \"identity\" or \"sigma0\"");
    }
    if (r.contains("post"))
      for (const auto& entry : r["post"])
        rule.post.emplace(entry[0].get<long long>(), entry[1].get<long long>());
    return rule;
  }
  malformed("unknown tail atom");
}

Json emit_atom(const TailAtom& atom) {
  if (std::holds_alternative<MuAtom>(atom)) return Json("mu");
  if (std::holds_alternative<NuAtom>(atom)) return Json("nu");
  if (const auto* p = std::get_if<FinitePatch>(&atom)) {
    Json entries = Json::array();
    for (const auto& [n, q] : p->entries) entries.push_back(Json::array({n, emit_point(q)}));
    return Json{{"patch", std::move(entries)}};
  }
  const auto& r = std::get<RuleBijection>(atom);
  Json post = Json::array();
  for (const auto& [a, b] : r.post) post.push_back(Json::array({a, b}));
  return Json{{"rule", Json{{"base", r.base == RuleBijection::Base::Sigma0 ? "sigma0" : "identity"},
                            {"post", std::move(post)}}}};
}

}  // namespace

EquivariantMap parse_map(const GSetPtr& gs, const Json& doc) {
  if (!doc.is_object() || !doc.contains("finite")) malformed("map document needs \"finite\"");
  std::vector<Point> images;
  for (const auto& entry : doc["finite"]) images.push_back(parse_point(entry));
  TailWord tail;
  if (doc.contains("tail"))
    for (const auto& entry : doc["tail"]) tail.push_back(parse_atom(entry));
  return EquivariantMap::from_parts(gs, std::move(images), std::move(tail));
}

Json emit_map(const EquivariantMap& f) {
  Json finite = Json::array();
  for (const auto& q : f.rep_images()) finite.push_back(emit_point(q));
  Json doc{{"finite", std::move(finite)}};
  if (!f.tail().empty()) {
    Json tail = Json::array();
    for (const auto& atom : f.tail()) tail.push_back(emit_atom(atom));
    doc["tail"] = std::move(tail);
  }
  return doc;
}

Word parse_word(const GSetPtr& gs, const Json& doc) {
  if (!doc.is_object() || !doc.contains("factors")) malformed("word document needs \"factors\"");
  Word w;
  for (const auto& entry : doc["factors"]) {
    if (entry.is_object() && entry.contains("name"))
      w.factors.push_back(Factor::named(entry["name"].get<std::string>()));
    else if (entry.is_object() && entry.contains("aut"))
      w.factors.push_back(Factor::explicit_aut(parse_map(gs, entry["aut"])));
    else
      malformed("word factor needs \"name\" or \"aut\"");
  }
  return w;
}

Json emit_word(const Word& w) {
  Json factors = Json::array();
  for (const auto& f : w.factors) {
    if (!f.name.empty())
      factors.push_back(Json{{"name", f.name}});
    else
      factors.push_back(Json{{"aut", emit_map(*f.aut)}});
  }
  return Json{{"factors", std::move(factors)}};
}

Json emit_metrics(const MapMetrics& m) {
  Json doc{{"range", emit_ext(m.range)},
           {"defect", emit_ext(m.defect)},
           {"contraction", emit_ext(m.contraction)},
           {"injective", m.injective},
           {"surjective", m.surjective}};
  if (!m.kernel.empty()) doc["kernel"] = m.kernel;
  return doc;
}

Json analyze_doc(const GSetPtr& gs) {
  const char* tag = nullptr;
  switch (gs->case_tag()) {
    case CaseTag::AllFinite: tag = "all-finite"; break;
    case CaseTag::Case1: tag = "case1"; break;
    case CaseTag::Case2: tag = "case2"; break;
    case CaseTag::UnsupportedInfinite:
      fail("unsupported-case", "infinite stratum at an intermediate subgroup");
  }

  Json strata = Json::array();
  for (int i = 0; i < gs->stratum_count(); ++i) {
    const StratumInfo& s = gs->stratum(i);
    Json targets = Json::array();
    for (const auto& t : s.collapse_targets)
      targets.push_back(Json{{"ordinal", t.ordinal}, {"k", t.k.members}, {"y", emit_point(t.y)}});
    strata.push_back(Json{{"index", i},
                          {"stabilizer", s.stabilizer.members},
                          {"normalizer", s.normalizer.members},
                          {"orbit_count", s.orbit_count ? Json(*s.orbit_count) : Json("inf")},
                          {"points", emit_ext(gs->stratum_size(i))},
                          {"u_size", s.u_classes.size()},
                          {"collapse_targets", std::move(targets)}});
  }

  auto [stab, classes] = gs->stab_classes();
  Json stab_doc = Json::array();
  for (const auto& h : stab) stab_doc.push_back(emit_subgroup(h));
  Json classes_doc = Json::array();
  for (const auto& cls : classes) classes_doc.push_back(emit_class(cls));

  Json generators = Json::array();
  const GeneratorSet gens = gs->all_finite() ? build_W(gs) : build_V(gs);
  for (const auto& g : gens.named) generators.push_back(g.name);

  return Json{{"case", tag},
              {"strata", std::move(strata)},
              {"stab", std::move(stab_doc)},
              {"conj_classes", std::move(classes_doc)},
              {"kappa", kappa_classes(*gs)},
              {"collapse_types", collapse_type_count(*gs)},
              {"relative_rank", relative_rank_formula(*gs)},
              {"generators", std::move(generators)}};
}

Json report_doc(const FactorizationReport& report) {
  Json stages = Json::array();
  for (const auto& s : report.stages) {
    stages.push_back(Json{{"stratum", s.stratum},
                          {"tau_i", emit_map(s.tau_i)},
                          {"tau_prime", emit_map(s.tau_prime)},
                          {"tau_dprime", emit_map(s.tau_dprime)},
                          {"preserving_factors", s.preserving_factors},
                          {"raising_factors", s.raising_factors}});
  }
  return Json{{"word", emit_word(report.word)},
              {"length", report.length},
              {"verified", report.verified},
              {"stages", std::move(stages)}};
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace equimaps
