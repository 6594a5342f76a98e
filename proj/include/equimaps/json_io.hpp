#pragma once

#include <string>

#include <json.hpp>

#include "equimaps/closure.hpp"
#include "equimaps/factorize.hpp"

namespace equimaps {

using Json = nlohmann::json;

FiniteGroup parse_group(const Json& doc);
Json emit_group(const FiniteGroup& g);

GSetPtr parse_gset(const Json& doc);
Json emit_gset(const GSet& gs);

EquivariantMap parse_map(const GSetPtr& gs, const Json& doc);
Json emit_map(const EquivariantMap& f);

Word parse_word(const GSetPtr& gs, const Json& doc);
Json emit_word(const Word& w);

Json emit_point(const Point& p);
Point parse_point(const Json& doc);

Json emit_metrics(const MapMetrics& m);

/// The `analyze` report: strata table, Stab/Conj classes, U sizes, kappa,
/// collapse-type count, rank formula, generator roster.
Json analyze_doc(const GSetPtr& gs);

Json report_doc(const FactorizationReport& report);

std::string dump(const Json& doc);

}  // namespace equimaps
