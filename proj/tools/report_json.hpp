#pragma once

// JSON forms of the library reports. Key order is fixed by ordered_json so
// identical runs print identical bytes.

#include <cmath>

#include "json.hpp"
#include "reflect/reflect.hpp"

namespace reflect::json {

using Json = nlohmann::ordered_json;

/// Non-finite values become null; -0.0 prints as 0.0.
inline Json number(double v) { return std::isfinite(v) ? Json(v + 0.0) : Json(nullptr); }

inline Json to_json(const PointValue& p) { return Json{{"t", p.t}, {"s", p.s}, {"value", p.value}}; }

inline Json to_json(const SignReport& r) {
  Json j;
  j["classification"] = to_string(r.classification);
  j["m"] = r.m;
  j["T"] = r.T;
  j["alpha"] = r.alpha;
  j["grid_n"] = r.grid_n;
  j["resonance_k"] = r.resonance_k;
  if (r.classification != SignClass::Resonant) {
    j["grid_min"] = r.grid_min;
    j["grid_max"] = r.grid_max;
  }
  j["witnesses"] = Json::array();
  for (const auto& w : r.witnesses) j["witnesses"].push_back(to_json(w));
  if (!r.vanishing_set.empty()) {
    j["vanishing_set"] = Json::array();
    for (const auto& w : r.vanishing_set) j["vanishing_set"].push_back(to_json(w));
  }
  return j;
}

inline Json to_json(const ComparisonReport& r) {
  Json j;
  j["m1"] = r.m1;
  j["m2"] = r.m2;
  j["T"] = r.T;
  j["n"] = r.n;
  j["grid_n"] = r.grid_n;
  j["positive_window"] = r.positive_window;
  j["negative_window"] = r.negative_window;
  j["solutions_ordered"] = r.solutions_ordered;
  j["min_solution_gap"] = Json{{"t", r.min_solution_gap.t}, {"value", r.min_solution_gap.value}};
  j["kernels_ordered"] = r.kernels_ordered;
  j["min_kernel_gap"] = to_json(r.min_kernel_gap);
  return j;
}

inline Json to_json(const Residual& r) {
  return Json{{"equation", r.equation}, {"boundary", r.boundary}, {"worst_t", r.worst_t}, {"total", r.total()}};
}

inline Json to_json(const FilterVerdict& v) {
  return Json{{"verdict", v.genuine ? "Genuine" : "Spurious"},
              {"reflection_defect", v.reflection_defect},
              {"reflection_t", v.reflection_t},
              {"boundary_defect", v.boundary_defect}};
}

inline Json to_json(const std::vector<NewtonIterate>& trace) {
  Json a = Json::array();
  for (const auto& it : trace)
    a.push_back(Json{{"a", it.a}, {"b", it.b}, {"defect_norm", it.defect_norm}, {"damping", it.damping}});
  return a;
}

inline Json to_json(const SolutionCheck& c) {
  Json j{{"valid", c.valid}, {"min_margin", number(c.min_margin)}};
  j["violations"] = Json::array();
  for (const auto& v : c.violations)
    j["violations"].push_back(Json{{"t", v.t}, {"margin", v.margin}, {"what", v.what}});
  return j;
}

inline Json to_json(const LipschitzCheck& c) {
  Json j{{"holds", c.holds}, {"samples", c.samples}, {"min_margin", number(c.min_margin)}};
  j["worst"] = Json{{"t", c.t}, {"x", c.x}, {"y", c.y}};
  if (!c.reason.empty()) j["reason"] = c.reason;
  return j;
}

inline Json to_json(const IterationReport& r) {
  Json j;
  j["ordering"] = to_string(r.ordering);
  j["m_used"] = r.m_used;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["converged_at"] = r.converged_at < 0 ? Json(nullptr) : Json(r.converged_at);
  j["final_gap"] = r.final_gap;
  j["monotone"] = r.monotone;
  j["inside_bracket"] = r.inside_bracket;
  j["residual_lower"] = r.residual_lower;
  j["residual_upper"] = r.residual_upper;
  j["residual"] = r.residual;
  j["gaps"] = r.gaps;
  j["increments"] = r.increments;
  j["note"] = "limits approximate the extremal solutions; extremality is not certified";
  return j;
}

inline Json to_json(const Witness& w) {
  return Json{{"t", w.t}, {"x", w.x}, {"y", w.y}, {"margin", w.margin}, {"inequality", w.inequality}};
}

inline Json to_json(const InequalityResult& r) {
  Json j;
  j["name"] = r.inequality.name;
  j["relation"] = to_string(r.inequality.rel);
  j["coefficient"] = r.inequality.coefficient;
  j["interval"] = Json::array({r.inequality.lo, r.inequality.hi});
  j["samples"] = r.samples;
  j["min_margin"] = number(r.min_margin);
  j["holds"] = r.holds;
  if (!r.holds) j["worst"] = to_json(r.worst);
  return j;
}

inline Json to_json(const ExistenceReport& r) {
  Json j;
  j["theorem"] = to_string(r.theorem);
  j["m"] = r.bounds.m;
  j["T"] = r.bounds.T;
  j["M"] = r.bounds.M;
  j["L"] = r.bounds.L;
  j["r"] = r.bounds.r;
  j["R"] = r.bounds.R;
  j["sample_density"] = r.sample_density;
  j["verdict"] = r.hypotheses_hold ? "HypothesesHoldOnSamples" : "ViolatedAt";
  j["branch"] = r.branch_held == 0 ? Json(nullptr) : Json(r.branch_held);
  j["min_margin"] = number(r.min_margin);
  j["zero_margin"] = r.zero_margin;
  if (r.violation) j["violation"] = to_json(*r.violation);
  j["sign_condition"] = to_json(r.sign_condition);
  j["branches"] = Json::array();
  for (const auto& b : r.branches) {
    Json bj{{"branch", b.branch}, {"holds", b.holds}};
    bj["inequalities"] = Json::array();
    for (const auto& i : b.inequalities) bj["inequalities"].push_back(to_json(i));
    j["branches"].push_back(bj);
  }
  if (r.pairs_tried > 0) j["pairs_tried"] = r.pairs_tried;
  j["note"] = "sampling evidence, not a proof";
  return j;
}

inline Json to_json(const AsymptoticReport& r) {
  Json j;
  j["theorem"] = to_string(ConeTheorem::EasyCorollary);
  j["cone"] = to_string(r.cone);
  j["m"] = r.m;
  j["T"] = r.T;
  j["precondition_holds"] = r.precondition_holds;
  if (!r.precondition_note.empty()) j["precondition_note"] = r.precondition_note;
  j["limit_at_zero"] = to_string(r.near_zero);
  j["limit_at_infinity"] = to_string(r.near_infinity);
  j["slopes"] = Json{{"zero_sup", number(r.slope_zero_sup)},
                     {"zero_inf", number(r.slope_zero_inf)},
                     {"infinity_sup", number(r.slope_inf_sup)},
                     {"infinity_inf", number(r.slope_inf_inf)}};
  j["condition"] = r.condition == 0 ? Json(nullptr) : Json(r.condition);
  j["verdict"] = r.verdict;
  j["note"] = "limits estimated from probes, not proved";
  return j;
}

inline Json error_json(const std::string& code, const std::string& message) {
  return Json{{"error", Json{{"code", code}, {"message", message}}}};
}

}  // namespace reflect::json
