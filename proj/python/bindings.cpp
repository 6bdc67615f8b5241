// Python bindings for the core operations: parsing, proof search, proof and
// model checking. Structured values cross the boundary as JSON strings.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "jseq/calculus.hpp"
#include "jseq/logic.hpp"
#include "jseq/models.hpp"
#include "jseq/parse.hpp"
#include "jseq/search.hpp"

namespace py = pybind11;

namespace {

jseq::LogicConfig config_for(const std::string& logic, bool fk_mode) {
  auto cfg = jseq::logic_preset(logic);
  if (!cfg) throw std::invalid_argument("unknown logic '" + logic + "'");
  if (fk_mode) cfg->seriality_mode = jseq::SerialityMode::AxiomEBot;
  if (auto err = cfg->validate()) throw std::invalid_argument(*err);
  return *cfg;
}

jseq::ConstantSpec cs_from_text(const jseq::LogicConfig& cfg, const std::string& cs_text) {
  jseq::ConstantSpec cs = jseq::parse_cs_file(cs_text);
  auto report = jseq::validate_cs(cfg, cs);
  if (!report.ok()) {
    std::string msg = "invalid constant specification:";
    for (const auto& v : report.violations) msg += "\n  " + v;
    throw std::invalid_argument(msg);
  }
  return cs;
}

jseq::Sequent goal_from_text(const std::string& text) {
  if (text.find("=>") != std::string::npos) return jseq::parse_sequent(text);
  jseq::Sequent s;
  s.insert_succ(jseq::SequentItem::labeled("w", jseq::parse_formula(text)));
  return s;
}

}  // namespace

PYBIND11_MODULE(_jseq, m) {
  m.doc() = "labeled-sequent prover and countermodel builder for justification logics";

  m.def("parse_formula",
        [](const std::string& text) { return to_string(jseq::parse_formula(text)); },
        py::arg("text"), "Parse a formula and return its canonical rendering.");
  m.def("parse_term", [](const std::string& text) { return to_string(jseq::parse_term(text)); },
        py::arg("text"));
  m.def("parse_sequent",
        [](const std::string& text) { return to_string(jseq::parse_sequent(text)); },
        py::arg("text"));
  m.def("forgetful_projection",
        [](const std::string& text) {
          return to_string(jseq::forgetful_projection(jseq::parse_formula(text)));
        },
        py::arg("formula"), "Replace every t: with [].");
  m.def("term_rank",
        [](const std::string& text) { return jseq::rank(jseq::parse_term(text)); },
        py::arg("term"));
  m.def("known_presets", &jseq::known_presets);

  m.def(
      "prove",
      [](const std::string& goal, const std::string& logic, const std::string& cs_text,
         std::optional<long> fuel, bool serial_once, bool fk) {
        jseq::LogicConfig cfg = config_for(logic, fk);
        jseq::ConstantSpec cs = cs_from_text(cfg, cs_text);
        jseq::SearchOptions opts;
        opts.serial_once = serial_once;
        if (fuel) opts.fuel = *fuel;
        jseq::SearchResult result = jseq::search(cfg, cs, goal_from_text(goal), opts);
        py::dict out;
        switch (result.status) {
          case jseq::SearchStatus::Derivable:
            out["status"] = "derivable";
            out["derivation"] = jseq::derivation_to_json(*result.derivation);
            out["height"] = result.derivation->height();
            break;
          case jseq::SearchStatus::NotDerivable:
            out["status"] = "not_derivable";
            out["model"] = jseq::model_to_json(*result.model);
            break;
          case jseq::SearchStatus::Unknown:
            out["status"] = "unknown";
            out["reason"] = result.unknown_reason;
            break;
        }
        out["fuel_used"] = result.stats.fuel_used;
        return out;
      },
      py::arg("goal"), py::arg("logic") = "J", py::arg("cs") = "",
      py::arg("fuel") = std::nullopt, py::arg("serial_once") = false, py::arg("fk") = false,
      "Backward proof search; returns a dict with a derivation or a countermodel.");

  m.def(
      "check_proof",
      [](const std::string& derivation_json, const std::string& logic,
         const std::string& cs_text) {
        jseq::LogicConfig cfg = config_for(logic, false);
        jseq::ConstantSpec cs = cs_from_text(cfg, cs_text);
        jseq::Derivation d = jseq::derivation_from_json(derivation_json);
        auto result = jseq::check_derivation(cfg, cs, d);
        py::dict out;
        out["ok"] = result.ok;
        if (!result.ok) {
          out["node"] = result.node_path;
          out["error"] = result.error;
        }
        return out;
      },
      py::arg("derivation_json"), py::arg("logic") = "J", py::arg("cs") = "");

  m.def(
      "check_model",
      [](const std::string& model_json, const std::string& goal, const std::string& logic,
         const std::string& cs_text) {
        jseq::FittingModel model = jseq::model_from_json(model_json);
        if (!logic.empty()) model.logic = config_for(logic, false);
        jseq::ConstantSpec cs = cs_from_text(model.logic, cs_text);
        jseq::Sequent s = goal_from_text(goal);
        auto report =
            jseq::check_conditions(model, jseq::default_audit_universe(model, s), cs);
        bool valid = jseq::validates_sequent(model, jseq::identity_interpretation(s), s);
        py::dict out;
        out["conditions_ok"] = report.pass();
        out["violations"] = report.to_string();
        out["goal_valid"] = valid;
        out["countermodel"] = report.pass() && !valid;
        return out;
      },
      py::arg("model_json"), py::arg("goal"), py::arg("logic") = "", py::arg("cs") = "");

  m.def(
      "forces",
      [](const std::string& model_json, const std::string& world, const std::string& formula) {
        jseq::FittingModel model = jseq::model_from_json(model_json);
        return jseq::forces(model, world, jseq::parse_formula(formula));
      },
      py::arg("model_json"), py::arg("world"), py::arg("formula"));
}
