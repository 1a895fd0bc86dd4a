#pragma once

#include <cstdint>
#include <vector>

#include "phasestab/frames.hpp"
#include "phasestab/generated_frame.hpp"
#include "phasestab/stability.hpp"

namespace phasestab {

/// Nested subspaces V_1 < V_2 < ... of a fixed coordinate space, each with a
/// local stability constant G(m). G is kept non-decreasing as a running max.
class SubspaceChain {
 public:
  SubspaceChain(Index ambient, double gamma, double radius);

  /// Orthonormal columns spanning V_{levels()+1}; throws std::invalid_argument
  /// unless the dimension strictly exceeds the previous level's.
  void push(CMatrix basis, double g);

  Index ambient() const { return ambient_; }
  Index levels() const { return static_cast<Index>(bases_.size()); }
  double gamma() const { return gamma_; }
  double radius() const { return radius_; }
  const CMatrix& basis(Index m) const { return bases_.at(static_cast<std::size_t>(m - 1)); }  // 1-based
  double G(Index m) const { return g_.at(static_cast<std::size_t>(m - 1)); }
  HVector project(Index m, const HVector& f) const;

 private:
  Index ambient_;
  double gamma_;
  double radius_;
  std::vector<CMatrix> bases_;
  std::vector<double> g_;
};

struct HolderConstants {
  double C1 = 0.0;
  double C2 = 0.0;
  double Cprime = 0.0;
  double C = 0.0;
};

/// Throws std::invalid_argument unless gamma > 1 and B, R, G1 > 0.
HolderConstants holder_constants(double B, double R, double gamma, double G1);

/// ||f - P_m f|| <= G(m+1)^{-gamma} R ||f|| for m = 1..m_max-1. Throws
/// std::invalid_argument when f is not in V_{m_max}.
bool ball_membership(const HVector& f, const SubspaceChain& chain, Index m_max);

struct HolderCheck {
  double lhs = 0.0;  // d(f, g)
  double rhs = 0.0;  // C (||f|| + ||g||)^{1/gamma} ||measure(f) - measure(g)||^{(gamma-1)/gamma}
  bool violated = false;
};

/// Throws std::invalid_argument when f or g is outside the ball.
HolderCheck holder_check(const HVector& f, const HVector& g, const FiniteFrame& frame, const SubspaceChain& chain,
                         const HolderConstants& constants);

struct RieszChain {
  GeneratedFrame frame;
  FiniteFrame measurement;  // enough of the frame to measure anything in V_{m_max} exactly
  SubspaceChain chain;
};

/// V_m = span{e_1..e_m} for m = 1..m_max with G(m) the running max of the
/// inverse empirical lower Lipschitz bound of {P_m phi_n} on V_m.
RieszChain build_riesz_chain(Index m_max, double eps, double gamma, double radius, std::uint64_t seed,
                             Index trials = 400);

struct HolderConfig {
  Index blocks = 6;
  double eps = 0.1;
  double gamma = 2.0;
  double radius = 1.0;
  Index trials = 500;
  std::uint64_t seed = kDefaultSeed;
};

struct HolderRun {
  HolderConfig config;
  std::vector<double> G;
  double B = 0.0;
  HolderConstants constants;
  Index pairs = 0;
  Index violations = 0;
  double worst_ratio = 0.0;  // max lhs / rhs
};

/// Samples pairs in the ball of the Riesz chain and checks the Holder bound on each.
HolderRun run_holder_experiment(const HolderConfig& config);

}  // namespace phasestab
