#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "frame_align/povm.hpp"

namespace frame_align {

// File layout:
// {"n_spins": 2,
//  "reference": [{"two_j": 0, "amps": [[re, im], ...]}, ...],
//  "outcomes": [{"alpha": a, "beta": b, "gamma": c, "weight": w}, ...],
//  "completeness": {"dimension": 4, "residual_norm": r, "is_projective": true,
//                   "pairwise_residual": p}}
// Angles in radians; doubles are written in shortest round-trip form.

inline nlohmann::json povm_to_json(const FinitePovm& p) {
  nlohmann::json j;
  j["n_spins"] = p.n_spins;
  j["reference"] = nlohmann::json::array();
  for (const auto& block : p.reference.blocks) {
    nlohmann::json amps = nlohmann::json::array();
    for (const auto& a : block.amps) amps.push_back({a.real(), a.imag()});
    j["reference"].push_back({{"two_j", block.two_j}, {"amps", amps}});
  }
  j["outcomes"] = nlohmann::json::array();
  for (const auto& o : p.outcomes) {
    j["outcomes"].push_back(
        {{"alpha", o.g.alpha}, {"beta", o.g.beta}, {"gamma", o.g.gamma}, {"weight", o.weight}});
  }
  return j;
}

inline nlohmann::json report_to_json(const CompletenessReport& r) {
  return {{"dimension", r.dimension},
          {"residual_norm", r.residual_norm},
          {"is_projective", r.is_projective},
          {"pairwise_residual", r.pairwise_residual}};
}

inline FinitePovm povm_from_json(const nlohmann::json& j) {
  try {
    FinitePovm p;
    p.n_spins = j.at("n_spins").get<int>();
    p.reference.n_spins = p.n_spins;
    for (const auto& block : j.at("reference")) {
      IrrepBlock b(block.at("two_j").get<int>());
      const auto& amps = block.at("amps");
      if (amps.size() != b.amps.size()) throw std::invalid_argument("amplitude count does not match two_j");
      for (std::size_t i = 0; i < b.amps.size(); ++i) {
        b.amps[i] = {amps.at(i).at(0).get<double>(), amps.at(i).at(1).get<double>()};
      }
      p.reference.blocks.push_back(std::move(b));
    }
    detail::require_same_ladder(p.reference, p.n_spins, "povm_from_json");
    for (const auto& o : j.at("outcomes")) {
      p.outcomes.push_back({{o.at("alpha").get<double>(), o.at("beta").get<double>(), o.at("gamma").get<double>()},
                            o.at("weight").get<double>()});
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("povm_from_json: ") + e.what());
  }
}

}  // namespace frame_align
