#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "phasestab/generated_frame.hpp"

namespace phasestab {

struct SearchBudgetExhausted : std::runtime_error {
  SearchBudgetExhausted(const std::string& what, double best) : std::runtime_error(what), best_bound(best) {}
  double best_bound;  // smallest certified quantity reached before giving up
};

struct SearchBudget {
  Index k_scan = 10'000'000;      // candidates k tried after N
  Index m_limit = Index{1} << 42;  // largest m considered
};

struct LemmaResult {
  Index k = 0;
  Index m = 0;
  double head_sum = 0.0;    // sum_{n <= N} |<phi_k, phi_n>|^2, summed directly
  double tail_bound = 0.0;  // certified bound on sum_{n > m} |<phi_k, phi_n>|^2
  double certified_sum() const { return head_sum + tail_bound; }
};

/// Finds N < k < m with sum_{n outside N+1..m} |<phi_k, phi_n>|^2 < eps:
/// k is the first index whose projection onto span{phi_1..phi_N} has squared
/// norm below eps/(2B), m the first index past k whose cross tail is below eps/2.
LemmaResult lemma_search(const GeneratedFrame& gen, double eps, Index N, const SearchBudget& budget = {});

/// f = u + psi, g = u - psi with u = phi_k/||phi_k|| and psi a unit vector
/// orthogonal to u. psi = sum_l psi_coords[i] e_{psi_support[i]} + psi_u * u.
struct WitnessPair {
  std::string generator;
  Index N = 0, k = 0, m = 0;
  double epsilon = 0.0, delta = 0.0;
  std::string psi_mode;  // "complement" or "far_field"

  std::vector<Index> psi_support;
  std::vector<Complex> psi_coords;
  Complex psi_u{0.0, 0.0};

  // Coordinates of f and g on `support`; the rest has squared norm <= coord_tail_sq.
  std::vector<Index> support;
  std::vector<Complex> f, g;
  double coord_tail_sq = 0.0;

  double norm_f = 0.0, norm_g = 0.0, distance = 0.0;
  double gap_value = 0.0;       // measurement gap over n <= gap_window
  double gap_tail_bound = 0.0;  // bound on the gap contributed by n > gap_window
  Index gap_window = 0;
  double block_residual = 0.0;  // max over the block of |<psi, phi_n>|
  bool verified = false;
};

struct WitnessOptions {
  Index dense_cap = 1024;  // largest block solved by an explicit orthogonal complement
  int far_field_attempts = 6;
  SearchBudget budget;
};

/// Throws std::invalid_argument for delta <= 0 or a generator without a
/// positive lower norm bound, and SearchBudgetExhausted when no certified pair
/// is found.
WitnessPair build_witness(const GeneratedFrame& gen, double delta, Index N, const WitnessOptions& options = {});

}  // namespace phasestab
