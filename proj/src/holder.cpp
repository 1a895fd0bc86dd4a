#include "phasestab/holder.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "phasestab/linalg.hpp"

namespace phasestab {

SubspaceChain::SubspaceChain(Index ambient, double gamma, double radius)
    : ambient_(ambient), gamma_(gamma), radius_(radius) {
  if (!(gamma > 1.0)) throw std::invalid_argument("SubspaceChain: gamma must exceed 1");
  if (!(radius > 0.0)) throw std::invalid_argument("SubspaceChain: R must be positive");
}

void SubspaceChain::push(CMatrix basis, double g) {
  if (basis.rows() != ambient_) throw std::invalid_argument("SubspaceChain: basis has the wrong ambient dimension");
  if (!bases_.empty() && basis.cols() <= bases_.back().cols()) {
    throw std::invalid_argument("SubspaceChain: dimensions must strictly increase");
  }
  if (!(g > 0.0)) throw std::invalid_argument("SubspaceChain: G must be positive");
  bases_.push_back(std::move(basis));
  g_.push_back(g_.empty() ? g : std::max(g_.back(), g));
}

HVector SubspaceChain::project(Index m, const HVector& f) const {
  const CMatrix& q = basis(m);
  return q * (q.adjoint() * f);
}

HolderConstants holder_constants(double B, double R, double gamma, double G1) {
  if (!(gamma > 1.0)) throw std::invalid_argument("holder_constants: gamma must exceed 1");
  if (!(B > 0.0) || !(R > 0.0) || !(G1 > 0.0)) throw std::invalid_argument("holder_constants: B, R, G1 must be positive");
  HolderConstants h;
  h.C1 = std::pow(std::pow(G1, gamma) / (R * std::sqrt(B)), (gamma - 1.0) / gamma);
  h.C2 = std::pow(R, 1.0 / gamma) * std::pow(B, 1.0 / (2.0 * gamma)) * (1.0 / (std::sqrt(B) * G1) + 1.0);
  h.Cprime = std::max(h.C1, h.C2);
  h.C = h.Cprime * gamma * std::pow(gamma - 1.0, (1.0 - gamma) / gamma);
  return h;
}

bool ball_membership(const HVector& f, const SubspaceChain& chain, Index m_max) {
  if (m_max < 1 || m_max > chain.levels()) throw std::invalid_argument("ball_membership: m_max outside the chain");
  const double nf = f.norm();
  if ((f - chain.project(m_max, f)).norm() > 1e-12 * std::max(1.0, nf)) {
    throw std::invalid_argument("ball_membership: f is not in V_m_max");
  }
  for (Index m = 1; m < m_max; ++m) {
    const double residual = (f - chain.project(m, f)).norm();
    const double allowed = std::pow(chain.G(m + 1), -chain.gamma()) * chain.radius() * nf;
    if (residual > allowed * (1.0 + 1e-12)) return false;
  }
  return true;
}

HolderCheck holder_check(const HVector& f, const HVector& g, const FiniteFrame& frame, const SubspaceChain& chain,
                         const HolderConstants& constants) {
  const Index top = chain.levels();
  if (!ball_membership(f, chain, top) || !ball_membership(g, chain, top)) {
    throw std::invalid_argument("holder_check: pair is not in the ball");
  }
  const double gamma = chain.gamma();
  const double gap = measurement_gap(measure(frame, f), measure(frame, g));
  HolderCheck h;
  h.lhs = quotient_distance(f, g, frame.field());
  h.rhs = constants.C * std::pow(f.norm() + g.norm(), 1.0 / gamma) * std::pow(gap, (gamma - 1.0) / gamma);
  h.violated = h.lhs > h.rhs * (1.0 + 1e-9);
  return h;
}

RieszChain build_riesz_chain(Index m_max, double eps, double gamma, double radius, std::uint64_t seed, Index trials) {
  const auto blocks = gaussian_blocks(m_max, ScalarField::real, split_seed(seed, 0xB1));
  GeneratedFrame gen = riesz_frame(eps, blocks, pr_certifier());
  // Past the last perturbed vector phi_n = e_n, which is orthogonal to V_m_max once n > m_max.
  Index count = 1;
  for (const auto& b : blocks) count += b.size();
  count = std::max(count, m_max);
  FiniteFrame measurement = gen.truncated(count, m_max);

  SubspaceChain chain(m_max, gamma, radius);
  for (Index m = 1; m <= m_max; ++m) {
    const FiniteFrame local(ScalarField::real, measurement.synthesis().topRows(m));
    const double ratio = empirical_lower_lipschitz(local, trials, split_seed(seed, static_cast<std::uint64_t>(m)));
    chain.push(CMatrix::Identity(m_max, m), 1.0 / ratio);
  }
  return {std::move(gen), std::move(measurement), std::move(chain)};
}

namespace {

// Coefficient j (1-based) is z_j G(j)^{-gamma} R |a_1| 2^{-j-1}, z_j uniform in
// [-1, 1], which keeps every residual below G(m+1)^{-gamma} R ||f||.
HVector sample_ball(const SubspaceChain& chain, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Index m = chain.levels();
  HVector f = HVector::Zero(chain.ambient());
  double a1 = u(rng);
  if (a1 == 0.0) a1 = 1.0;
  f(0) = a1;
  for (Index j = 2; j <= m; ++j) {
    f(j - 1) = u(rng) * std::pow(chain.G(j), -chain.gamma()) * chain.radius() * std::abs(a1) * std::ldexp(1.0, -static_cast<int>(j) - 1);
  }
  return f;
}

}  // namespace

HolderRun run_holder_experiment(const HolderConfig& config) {
  if (config.blocks < 1) throw std::invalid_argument("holder: blocks must be positive");
  if (!(config.eps > 0.0 && config.eps < 1.0)) throw std::invalid_argument("holder: eps must be in (0, 1)");
  if (config.trials < 0) throw std::invalid_argument("holder: trials must be non-negative");
  const RieszChain rc = build_riesz_chain(config.blocks, config.eps, config.gamma, config.radius, config.seed);
  HolderRun run;
  run.config = config;
  for (Index m = 1; m <= rc.chain.levels(); ++m) run.G.push_back(rc.chain.G(m));
  run.B = rc.frame.upper_bound;
  run.constants = holder_constants(run.B, config.radius, config.gamma, rc.chain.G(1));

  Rng rng(split_seed(config.seed, 0xA9));
  std::uniform_real_distribution<double> small(-1e-3, 1e-3);
  for (Index t = 0; t < config.trials; ++t) {
    const HVector f = sample_ball(rc.chain, rng);
    HVector g;
    switch (t % 4) {
      case 0:  // close to f
        g = f;
        g(0) += small(rng) * std::abs(f(0));
        break;
      case 1:  // close to -f
        g = -f;
        g(0) += small(rng) * std::abs(f(0));
        break;
      default:
        g = sample_ball(rc.chain, rng);
    }
    if (!ball_membership(f, rc.chain, rc.chain.levels()) || !ball_membership(g, rc.chain, rc.chain.levels())) continue;
    const HolderCheck h = holder_check(f, g, rc.measurement, rc.chain, run.constants);
    ++run.pairs;
    if (h.violated) ++run.violations;
    if (h.rhs > 0.0) run.worst_ratio = std::max(run.worst_ratio, h.lhs / h.rhs);
  }
  return run;
}

}  // namespace phasestab
