#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phasestab/frames.hpp"
#include "phasestab/generated_frame.hpp"

namespace phasestab {

inline constexpr std::uint64_t kDefaultSeed = 20150601;

using VectorPair = std::pair<HVector, HVector>;

enum class CPStatus { holds, fails, unknown };
enum class CPMode { automatic, exhaustive, randomized };

std::string_view to_string(CPStatus status);

struct CPReport {
  CPStatus status = CPStatus::unknown;
  bool exhaustive = false;
  std::uint64_t splits_scanned = 0;
  std::vector<Index> witness_subset;        // 0-based indices of S, set iff status == fails
  std::optional<VectorPair> counterexample;  // (u + v, u - v)

  bool holds() const { return status == CPStatus::holds; }
};

/// Exhaustive for N <= 24 (automatic mode picks it there); randomized mode
/// samples `samples` splits and can only report fails or unknown.
/// Throws std::invalid_argument for exhaustive mode with N > 24.
CPReport complement_property(const FiniteFrame& frame, CPMode mode = CPMode::automatic,
                             std::uint64_t seed = kDefaultSeed, std::uint64_t samples = 1U << 16);

/// (u + v, u - v) with u orthogonal to {phi_n : n in S} and v orthogonal to the
/// rest. Requires that neither side spans.
VectorPair complement_counterexample(const FiniteFrame& frame, const std::vector<Index>& subset);

/// min over splits of max(lambda_min(S), lambda_min(S^c)); N <= 24.
double strong_cp_sigma(const FiniteFrame& frame);

struct LiftedGain {
  double c = 0.0;
  HermitianOperator minimizer;  // u u^* + t v v^*, unit operator norm
  HVector u, v;
  double t = 0.0;
  std::vector<double> restart_values;
};

/// Multi-start descent for min ||lifted_analysis(X)|| over Hermitian X of rank
/// <= 2 and operator norm 1. The returned c is attained, hence an upper bound
/// on the true minimum.
LiftedGain min_lifted_gain(const FiniteFrame& frame, Index restarts = 32, std::uint64_t seed = kDefaultSeed);

/// Dense grid plus local refinement over the same feasible set. Available for
/// real frames with M <= 3 and complex frames with M <= 2.
std::optional<LiftedGain> grid_lifted_gain(const FiniteFrame& frame);

/// 4 max_n ||phi_n|| / c; throws std::invalid_argument unless c > 0.
double lipschitz_constant(const FiniteFrame& frame, double c);

enum class Verdict { yes, no, heuristic_yes };
enum class PRMethod { automatic, complement, lifted };

std::string_view to_string(Verdict v);
std::string_view to_string(PRMethod m);

struct PRVerdict {
  Verdict verdict = Verdict::heuristic_yes;
  std::string method;
  std::optional<VectorPair> witness;
  std::vector<Index> witness_subset;
  double confidence = 0.0;  // achieved min lifted gain for heuristic_yes
  Index lifted_rank = 0;
  Index lifted_dim = 0;
};

PRVerdict does_phase_retrieval(const FiniteFrame& frame, PRMethod method = PRMethod::automatic,
                               std::uint64_t seed = kDefaultSeed, Index restarts = 32);

/// Greedy: keeps index n iff lift(psi_n) enlarges the span of the kept lifts.
std::vector<Index> select_pr_subset(const std::vector<HVector>& vectors, ScalarField field);

struct Comparison {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// (||measure(f) - measure(g)||, B^{1/2} d(f, g)).
Comparison upper_lipschitz_check(const FiniteFrame& frame, const HVector& f, const HVector& g);

/// Smallest observed ||measure(f) - measure(g)|| / d(f, g) over seeded
/// samples after local refinement.
double empirical_lower_lipschitz(const FiniteFrame& frame, Index trials = 2000, std::uint64_t seed = kDefaultSeed);

struct LipschitzVerification {
  Index trials = 0;
  Index passed = 0;
  double worst_ratio = 0.0;  // max d / (C ||delta measure||)
};

/// Samples ||f|| = 1, ||g|| <= 1 pairs and counts d(f,g) <= C ||measure(f) - measure(g)||.
LipschitzVerification verify_lipschitz(const FiniteFrame& frame, double constant, Index trials, std::uint64_t seed);

/// Certifier for riesz_frame blocks: exhaustive complement property for real
/// blocks, lifted-kernel triviality for complex ones.
BlockCertifier pr_certifier();

}  // namespace phasestab
