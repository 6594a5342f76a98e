#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "equimaps/error.hpp"
#include "equimaps/json_io.hpp"

namespace {

using equimaps::Json;

Json read_input(const std::string& path) {
  std::string text;
  if (path.empty()) {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    text = buf.str();
  } else {
    std::ifstream in(path);
    if (!in) equimaps::fail("malformed-input", "cannot open input file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  try {
    return Json::parse(text);
  } catch (const std::exception& e) {
    equimaps::fail("malformed-input", std::string("invalid JSON: ") + e.what());
  }
}

int exit_code_for(const std::string& code) {
  if (code == "unsupported-case" || code == "cap-exceeded" || code == "unsupported-tail" ||
      code == "internal" || code == "collapse-target-missing")
    return 2;
  return 1;
}

equimaps::GSetPtr gset_from(const Json& doc) {
  // Accept either a bare g-set document or an envelope with a "gset" field.
  if (doc.is_object() && doc.contains("gset")) return equimaps::parse_gset(doc["gset"]);
  return equimaps::parse_gset(doc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-group actions, equivariant-map monoids, relative rank, factorization"};
  app.require_subcommand(1);

  std::string input_path;
  bool oracle = false;
  long long window_size = 1000;
  long long cap = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", input_path, "input file (default: stdin)");
    sub->add_option("--cap", cap, "enumeration/closure cap override");
    return sub;
  };

  auto* cmd_analyze = add_common(app.add_subcommand("analyze", "strata, classes, counts, rank, roster"));
  auto* cmd_enum = add_common(app.add_subcommand("enumerate", "|End| and |Aut| of a finite g-set"));
  auto* cmd_relrank = add_common(app.add_subcommand("relrank", "relative-rank formula value"));
  cmd_relrank->add_flag("--oracle", oracle, "also run the brute-force search");
  auto* cmd_factorize = add_common(app.add_subcommand("factorize", "factor a map over Aut and the named generators"));
  auto* cmd_verify = add_common(app.add_subcommand("verify", "recompose a word and compare against a map"));
  auto* cmd_window = add_common(app.add_subcommand("window", "evaluate a map on infinite-stratum indices"));
  cmd_window->add_option("--window", window_size, "number of indices (default 1000)");

  CLI11_PARSE(app, argc, argv);

  try {
    Json doc = read_input(input_path);
    Json out;

    if (cmd_analyze->parsed()) {
      out = equimaps::analyze_doc(gset_from(doc));
    } else if (cmd_enum->parsed()) {
      auto gs = gset_from(doc);
      if (!gs->all_finite()) equimaps::fail("unsupported-case", "enumerate needs a finite g-set");
      long long c = cap > 0 ? cap : 10'000'000;
      out["end"] = static_cast<long long>(equimaps::enumerate_end(gs, c).size());
      out["aut"] = static_cast<long long>(equimaps::enumerate_aut(gs, c).size());
    } else if (cmd_relrank->parsed()) {
      auto gs = gset_from(doc);
      out["formula"] = equimaps::relative_rank_formula(*gs);
      if (oracle) {
        long long c = cap > 0 ? cap : 100000;
        auto result = equimaps::relative_rank_bruteforce(gs, 3, c);
        out["bruteforce"] = result.rank;
        out["agree"] = (result.rank == out["formula"].get<long long>());
      }
    } else if (cmd_factorize->parsed()) {
      auto gs = gset_from(doc);
      if (!doc.contains("map")) equimaps::fail("malformed-input", "factorize needs a \"map\" field");
      auto tau = equimaps::parse_map(gs, doc["map"]);
      auto gens = gs->all_finite() ? equimaps::build_W(gs) : equimaps::build_V(gs);
      out = equimaps::report_doc(equimaps::factor(tau, gens));
    } else if (cmd_verify->parsed()) {
      auto gs = gset_from(doc);
      if (!doc.contains("map") || !doc.contains("word"))
        equimaps::fail("malformed-input", "verify needs \"map\" and \"word\" fields");
      auto tau = equimaps::parse_map(gs, doc["map"]);
      auto word = equimaps::parse_word(gs, doc["word"]);
      auto gens = gs->all_finite() ? equimaps::build_W(gs) : equimaps::build_V(gs);
      auto recomposed = equimaps::recompose(word, gens);
      bool equal = equimaps::maps_equal(recomposed, tau);
      out["equal"] = equal;
      out["first_difference"] = nullptr;
      if (!equal) {
        for (size_t r = 0; r < tau.rep_images().size(); ++r) {
          if (recomposed.rep_images()[r] != tau.rep_images()[r]) {
            const auto& [i, l] = gs->finite_reps()[r];
            out["first_difference"] =
                Json{{"point", equimaps::emit_point(equimaps::Point{i, l, 0})},
                     {"lhs", equimaps::emit_point(recomposed.rep_images()[r])},
                     {"rhs", equimaps::emit_point(tau.rep_images()[r])}};
            break;
          }
        }
        if (out["first_difference"].is_null() && gs->infinite_stratum() >= 0) {
          long long w = 2 * std::max(recomposed.tail_touch_bound(), tau.tail_touch_bound()) + 64;
          for (long long n = 0; n < w; ++n) {
            auto lhs = recomposed.tail_eval_index(n);
            auto rhs = tau.tail_eval_index(n);
            if (lhs != rhs) {
              out["first_difference"] =
                  Json{{"point", equimaps::emit_point(equimaps::Point{gs->infinite_stratum(), n, 0})},
                       {"lhs", equimaps::emit_point(lhs)},
                       {"rhs", equimaps::emit_point(rhs)}};
              break;
            }
          }
        }
      }
    } else if (cmd_window->parsed()) {
      auto gs = gset_from(doc);
      if (gs->infinite_stratum() < 0)
        equimaps::fail("unsupported-case", "window needs an infinite stratum");
      if (!doc.contains("map")) equimaps::fail("malformed-input", "window needs a \"map\" field");
      auto f = equimaps::parse_map(gs, doc["map"]);
      Json table = Json::array();
      for (long long n = 0; n < window_size; ++n)
        table.push_back(Json::array({n, equimaps::emit_point(f.tail_eval_index(n))}));
      out["window"] = std::move(table);
    }

    std::cout << equimaps::dump(out);
    return 0;
  } catch (const equimaps::Error& e) {
    Json err{{"error", {{"code", e.code()}, {"message", e.what()}}}};
    std::cerr << equimaps::dump(err);
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    Json err{{"error", {{"code", "internal"}, {"message", e.what()}}}};
    std::cerr << equimaps::dump(err);
    return 2;
  }
}
