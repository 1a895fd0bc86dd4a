#include "phasestab/report.hpp"

namespace phasestab {

Json scalar_json(Complex z, ScalarField field) {
  if (field == ScalarField::real) return z.real();
  return Json::array({z.real(), z.imag()});
}

Json vector_json(const HVector& v, ScalarField field) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(scalar_json(v(i), field));
  return out;
}

namespace {

Json pair_json(const VectorPair& p, ScalarField field) {
  Json out;
  out["f"] = vector_json(p.first, field);
  out["g"] = vector_json(p.second, field);
  return out;
}

Json subset_json(const std::vector<Index>& subset) {
  Json out = Json::array();
  for (Index i : subset) out.push_back(i + 1);
  return out;
}

}  // namespace

Json to_report(const CPReport& report, ScalarField field) {
  Json out;
  out["status"] = std::string(to_string(report.status));
  out["exhaustive"] = report.exhaustive;
  out["splits_scanned"] = report.splits_scanned;
  if (report.status == CPStatus::fails) {
    out["witness_subset"] = subset_json(report.witness_subset);
    if (report.counterexample) out["counterexample"] = pair_json(*report.counterexample, field);
  }
  return out;
}

Json to_report(const PRVerdict& verdict, ScalarField field) {
  Json out;
  out["verdict"] = std::string(to_string(verdict.verdict));
  out["method"] = verdict.method;
  if (verdict.witness) out["witness"] = pair_json(*verdict.witness, field);
  if (!verdict.witness_subset.empty()) out["witness_subset"] = subset_json(verdict.witness_subset);
  if (verdict.verdict == Verdict::heuristic_yes) out["confidence"] = verdict.confidence;
  if (verdict.lifted_dim > 0) {
    out["lifted_rank"] = verdict.lifted_rank;
    out["lifted_dim"] = verdict.lifted_dim;
  }
  return out;
}

Json to_report(const LiftedGain& gain, ScalarField field) {
  Json out;
  out["c"] = gain.c;
  out["t"] = gain.t;
  out["u"] = vector_json(gain.u, field);
  out["v"] = vector_json(gain.v, field);
  out["restart_values"] = gain.restart_values;
  return out;
}

Json to_report(const WitnessPair& w, ScalarField field) {
  Json out;
  out["generator"] = w.generator;
  out["N"] = w.N;
  out["k"] = w.k;
  out["m"] = w.m;
  out["epsilon"] = w.epsilon;
  out["delta"] = w.delta;
  out["verified"] = w.verified;
  out["distance"] = w.distance;
  out["norm_f"] = w.norm_f;
  out["norm_g"] = w.norm_g;
  out["gap_value"] = w.gap_value;
  out["gap_tail_bound"] = w.gap_tail_bound;
  out["gap_certified"] = w.gap_value + w.gap_tail_bound;
  out["gap_window"] = w.gap_window;
  out["block_residual"] = w.block_residual;
  Json psi;
  psi["mode"] = w.psi_mode;
  psi["support"] = w.psi_support;
  Json coords = Json::array();
  for (Complex z : w.psi_coords) coords.push_back(scalar_json(z, field));
  psi["coords"] = coords;
  psi["u_coeff"] = scalar_json(w.psi_u, field);
  out["psi"] = psi;
  out["support"] = w.support;
  Json f = Json::array(), g = Json::array();
  for (Complex z : w.f) f.push_back(scalar_json(z, field));
  for (Complex z : w.g) g.push_back(scalar_json(z, field));
  out["f"] = f;
  out["g"] = g;
  out["coord_tail_sq"] = w.coord_tail_sq;
  return out;
}

Json to_report(const PerturbationResult& r, double eps) {
  Json out;
  out["epsilon"] = eps;
  out["k"] = r.k;
  out["removed_mass"] = r.removed_mass;
  out["head_rank"] = r.head_rank;
  out["tail_rank"] = r.tail_rank;
  out["cp_failure_certified"] = r.cp_failure_certified;
  out["perturbed_lower_bound"] = r.perturbed_lower_bound;
  out["frame_degraded"] = r.frame_degraded;
  return out;
}

Json to_report(const HolderRun& run) {
  Json out;
  Json cfg;
  cfg["blocks"] = run.config.blocks;
  cfg["eps"] = run.config.eps;
  cfg["gamma"] = run.config.gamma;
  cfg["radius"] = run.config.radius;
  cfg["trials"] = run.config.trials;
  cfg["seed"] = run.config.seed;
  out["config"] = cfg;
  out["G"] = run.G;
  out["B"] = run.B;
  Json c;
  c["C1"] = run.constants.C1;
  c["C2"] = run.constants.C2;
  c["Cprime"] = run.constants.Cprime;
  c["C"] = run.constants.C;
  out["constants"] = c;
  out["pairs"] = run.pairs;
  out["violations"] = run.violations;
  out["worst_ratio"] = run.worst_ratio;
  return out;
}

std::string dump_report(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace phasestab
