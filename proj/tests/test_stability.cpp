#include <gtest/gtest.h>

#include "phasestab/stability.hpp"
#include "test_support.hpp"

using namespace phasestab;
using oracle::vec;

namespace {

// sigma* by enumerating every subset with a generic eigensolver.
double brute_sigma(const FiniteFrame& fr) {
  const Index n = fr.size();
  double best = 1e300;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double side[2];
    for (int s = 0; s < 2; ++s) {
      CMatrix op = CMatrix::Zero(fr.dim(), fr.dim());
      for (Index j = 0; j < n; ++j) {
        if (((mask >> j) & 1U) == static_cast<unsigned>(s)) op += fr.vector(j) * fr.vector(j).adjoint();
      }
      side[s] = Eigen::SelfAdjointEigenSolver<CMatrix>(op).eigenvalues()(0);
    }
    best = std::min(best, std::max(side[0], side[1]));
  }
  return std::max(best, 0.0);
}

bool neither_side_spans(const FiniteFrame& fr, const std::vector<Index>& subset) {
  std::vector<Index> rest;
  for (Index n = 0; n < fr.size(); ++n) {
    if (std::find(subset.begin(), subset.end(), n) == subset.end()) rest.push_back(n);
  }
  auto rank = [&](const std::vector<Index>& idx) {
    if (idx.empty()) return Index{0};
    return numerical_rank(fr.subset(idx).synthesis());
  };
  return rank(subset) < fr.dim() && rank(rest) < fr.dim();
}

TEST(ComplementProperty, Examples) {
  const CPReport a = complement_property(oracle::e12_frame());
  EXPECT_EQ(a.status, CPStatus::fails);
  EXPECT_TRUE(a.exhaustive);
  EXPECT_EQ(a.witness_subset, std::vector<Index>{0});
  ASSERT_TRUE(a.counterexample.has_value());
  EXPECT_EQ(a.counterexample->first, vec({1, 1}));
  EXPECT_EQ(a.counterexample->second, vec({-1, 1}));
  const FiniteFrame e12 = oracle::e12_frame();
  EXPECT_EQ(measure(e12, a.counterexample->first).values, measure(e12, a.counterexample->second).values);
  EXPECT_NEAR(quotient_distance(a.counterexample->first, a.counterexample->second, ScalarField::real), 2.0, 1e-15);

  EXPECT_TRUE(complement_property(oracle::e123_frame()).holds());
  const FiniteFrame dup = oracle::frame(ScalarField::real, {vec({1, 0}), vec({1, 0})});
  EXPECT_EQ(complement_property(dup).status, CPStatus::fails);
}

TEST(ComplementProperty, ModesAndLimits) {
  Rng rng(1);
  const FiniteFrame big = oracle::random_frame(2, 25, ScalarField::real, rng);
  EXPECT_THROW(complement_property(big, CPMode::exhaustive), std::invalid_argument);
  EXPECT_EQ(complement_property(big).status, CPStatus::unknown);
  CMatrix s = CMatrix::Zero(2, 30);
  s.row(0).setOnes();
  const CPReport r = complement_property(FiniteFrame(ScalarField::real, s));
  EXPECT_EQ(r.status, CPStatus::fails);
  EXPECT_FALSE(r.exhaustive);
  EXPECT_TRUE(neither_side_spans(FiniteFrame(ScalarField::real, s), r.witness_subset));
}

TEST(ComplementProperty, FailureCarriesValidCounterexample) {
  Rng rng(2);
  int failures = 0;
  for (int t = 0; t < 200; ++t) {
    const Index m = 2 + t % 2;
    const ScalarField field = t % 3 == 0 ? ScalarField::complex : ScalarField::real;
    const FiniteFrame fr = oracle::random_frame(m, 2 * m - 2 + t % 3, field, rng);
    const CPReport r = complement_property(fr);
    if (r.holds()) continue;
    ++failures;
    EXPECT_TRUE(neither_side_spans(fr, r.witness_subset));
    ASSERT_TRUE(r.counterexample.has_value());
    const auto& [f, g] = *r.counterexample;
    EXPECT_LE((oracle::intensities(fr, f) - oracle::intensities(fr, g)).norm(), 1e-10);
    EXPECT_GT(quotient_distance(f, g, field), 1e-6);
  }
  EXPECT_GT(failures, 10);
}

TEST(StrongCP, ExactValues) {
  EXPECT_EQ(strong_cp_sigma(oracle::e12_frame()), 0.0);
  EXPECT_NEAR(strong_cp_sigma(oracle::e123_frame()), (3.0 - std::sqrt(5.0)) / 2.0, 1e-12);
  const FiniteFrame doubled =
      oracle::frame(ScalarField::real, {vec({1, 0}), vec({1, 0}), vec({0, 1}), vec({0, 1})});
  // {e1, e1} against {e2, e2}: neither side spans.
  EXPECT_EQ(strong_cp_sigma(doubled), 0.0);
  EXPECT_EQ(brute_sigma(doubled), 0.0);
  EXPECT_FALSE(complement_property(doubled).holds());
}

TEST(StrongCP, AgreesWithEnumerationAndComplementProperty) {
  Rng rng(3);
  for (int t = 0; t < 60; ++t) {
    const Index m = 2 + t % 2;
    const ScalarField field = t % 2 ? ScalarField::complex : ScalarField::real;
    const FiniteFrame fr = oracle::random_frame(m, 2 * m - 2 + t % 4, field, rng);
    const double sigma = strong_cp_sigma(fr);
    EXPECT_EQ(sigma > 0.0, complement_property(fr).holds());
    if (sigma > 0.0) EXPECT_NEAR(sigma, brute_sigma(fr), 1e-10);
    // Literal definition: one side of every split has lambda_min >= sigma*.
    const Index n = fr.size();
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      double best_side = 0.0;
      for (int s = 0; s < 2; ++s) {
        CMatrix op = CMatrix::Zero(m, m);
        for (Index j = 0; j < n; ++j) {
          if (((mask >> j) & 1U) == static_cast<unsigned>(s)) op += fr.vector(j) * fr.vector(j).adjoint();
        }
        best_side = std::max(best_side, Eigen::SelfAdjointEigenSolver<CMatrix>(op).eigenvalues()(0));
      }
      EXPECT_GE(best_side, sigma - 1e-12);
    }
  }
}

TEST(PhaseRetrieval, Verdicts) {
  const PRVerdict no = does_phase_retrieval(oracle::e12_frame());
  EXPECT_EQ(no.verdict, Verdict::no);
  ASSERT_TRUE(no.witness.has_value());
  EXPECT_EQ(no.witness->first, vec({1, 1}));
  EXPECT_EQ(does_phase_retrieval(oracle::e123_frame()).verdict, Verdict::yes);

  const PRVerdict lifted_no = does_phase_retrieval(oracle::e12_frame(), PRMethod::lifted);
  EXPECT_EQ(lifted_no.verdict, Verdict::no);
  ASSERT_TRUE(lifted_no.witness.has_value());
  const auto& [f, g] = *lifted_no.witness;
  EXPECT_LE((oracle::intensities(oracle::e12_frame(), f) - oracle::intensities(oracle::e12_frame(), g)).norm(), 1e-6);
  EXPECT_GT(quotient_distance(f, g, ScalarField::real), 0.5);
}

TEST(PhaseRetrieval, GenericComplexFourVectors) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const FiniteFrame fr = oracle::random_frame(2, 4, ScalarField::complex, rng);
    const PRVerdict v = does_phase_retrieval(fr, PRMethod::automatic, seed);
    EXPECT_NE(v.verdict, Verdict::no);
    if (v.verdict == Verdict::heuristic_yes) EXPECT_GT(v.confidence, 0.1);
  }
}

TEST(PhaseRetrieval, ComplexThreeVectorsIsNo) {
  Rng rng(4);
  const FiniteFrame fr = oracle::random_frame(2, 3, ScalarField::complex, rng);
  const PRVerdict v = does_phase_retrieval(fr);
  EXPECT_EQ(v.verdict, Verdict::no);
  ASSERT_TRUE(v.witness.has_value());
  const auto& [f, g] = *v.witness;
  EXPECT_LE((oracle::intensities(fr, f) - oracle::intensities(fr, g)).norm(), 1e-5);
  EXPECT_GT(quotient_distance(f, g, ScalarField::complex), 0.1);
}

TEST(LiftedGain, Examples) {
  const LiftedGain z = min_lifted_gain(oracle::e12_frame());
  EXPECT_LT(z.c, 1e-8);
  EXPECT_NEAR(z.minimizer.op_norm(), 1.0, 1e-9);
  EXPECT_LT(lifted_analysis(oracle::e12_frame(), z.minimizer).norm(), 1e-8);
  EXPECT_NEAR(std::abs(z.minimizer(0, 1).real()), 1.0, 1e-6);
  EXPECT_NEAR(z.minimizer(0, 0).real(), 0.0, 1e-6);

  const FiniteFrame one = oracle::frame(ScalarField::real, {vec({1})});
  EXPECT_NEAR(min_lifted_gain(one).c, 1.0, 1e-15);

  const LiftedGain g = min_lifted_gain(oracle::e123_frame());
  const auto grid = grid_lifted_gain(oracle::e123_frame());
  ASSERT_TRUE(grid.has_value());
  EXPECT_NEAR(g.c, grid->c, 0.05 * grid->c);
}

TEST(LiftedGain, AgreesWithGridOnSmallFrames) {
  Rng rng(5);
  for (int t = 0; t < 12; ++t) {
    const ScalarField field = t % 3 == 2 ? ScalarField::complex : ScalarField::real;
    const Index m = field == ScalarField::complex ? 2 : 2 + t % 2;
    const FiniteFrame fr = oracle::random_frame(m, 2 * m + 1 + (field == ScalarField::complex ? 2 : 0), field, rng);
    const LiftedGain g = min_lifted_gain(fr, 32, t);
    const auto grid = grid_lifted_gain(fr);
    ASSERT_TRUE(grid.has_value());
    EXPECT_NEAR(g.c, grid->c, 0.05 * std::max(g.c, grid->c)) << "trial " << t;
  }
}

TEST(LiftedGain, NonIncreasingInRestarts) {
  Rng rng(6);
  for (int t = 0; t < 5; ++t) {
    const FiniteFrame fr = oracle::random_frame(4, 9, t % 2 ? ScalarField::complex : ScalarField::real, rng);
    double prev = 1e300;
    for (Index r : {1, 4, 16, 64}) {
      const double c = min_lifted_gain(fr, r, 77).c;
      EXPECT_LE(c, prev);
      prev = c;
    }
  }
}

TEST(LiftedGain, Deterministic) {
  Rng rng(7);
  const FiniteFrame fr = oracle::random_frame(3, 7, ScalarField::complex, rng);
  const LiftedGain a = min_lifted_gain(fr, 8, 1), b = min_lifted_gain(fr, 8, 1);
  EXPECT_EQ(a.c, b.c);
  EXPECT_EQ(a.restart_values, b.restart_values);
}

TEST(LipschitzConstant, FormulaAndScaling) {
  EXPECT_DOUBLE_EQ(lipschitz_constant(oracle::e12_frame(), 1.0), 4.0);
  EXPECT_THROW(lipschitz_constant(oracle::e12_frame(), 0.0), std::invalid_argument);
  const FiniteFrame fr = oracle::e123_frame();
  const double c = min_lifted_gain(fr).c;
  const double C = lipschitz_constant(fr, c);
  const FiniteFrame scaled(ScalarField::real, 3.0 * fr.synthesis());
  const double cs = min_lifted_gain(scaled).c;
  EXPECT_NEAR(cs, 9.0 * c, 1e-9 * cs);
  EXPECT_NEAR(lipschitz_constant(scaled, cs), C / 3.0, 1e-9 * C);
  const LipschitzVerification v = verify_lipschitz(fr, C, 1000, 3);
  EXPECT_EQ(v.passed, v.trials);
}

TEST(LipschitzConstant, CompositionInequalities) {
  Rng rng(8);
  for (int t = 0; t < 8; ++t) {
    const ScalarField field = t % 2 ? ScalarField::complex : ScalarField::real;
    const FiniteFrame fr = oracle::random_frame(2 + t % 2, 9, field, rng);
    double c = min_lifted_gain(fr, 32, t).c;
    if (auto grid = grid_lifted_gain(fr)) c = std::min(c, grid->c);
    ASSERT_GT(c, 0.0);
    const double phimax = fr.max_norm();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int p = 0; p < 200; ++p) {
      const HVector f = random_unit(fr.dim(), field, rng);
      const HVector g = unit(rng) * random_unit(fr.dim(), field, rng);
      const HermitianOperator x = lift(f) - lift(g);
      const Eigen::VectorXd a2 = lifted_analysis(fr, x);
      EXPECT_LE(x.op_norm(), a2.norm() / c + 1e-9);
      const double gap = (oracle::intensities(fr, f) - oracle::intensities(fr, g)).norm();
      EXPECT_LE(a2.squaredNorm(), 4.0 * phimax * phimax * gap * gap + 1e-9);
    }
  }
}

TEST(SelectSubset, Examples) {
  Rng rng(9);
  std::vector<HVector> six;
  for (int i = 0; i < 6; ++i) six.push_back(random_gaussian(2, ScalarField::real, rng));
  EXPECT_EQ(select_pr_subset(six, ScalarField::real).size(), 3U);
  EXPECT_EQ(select_pr_subset({vec({1, 0}), vec({0, 1})}, ScalarField::real), (std::vector<Index>{0, 1}));
  EXPECT_EQ(select_pr_subset({vec({1, 2}), vec({1, 2}), vec({1, 2})}, ScalarField::real).size(), 1U);
}

TEST(SelectSubset, PreservesLiftedSpan) {
  Rng rng(10);
  for (int t = 0; t < 50; ++t) {
    const ScalarField field = t % 2 ? ScalarField::complex : ScalarField::real;
    const Index m = 2 + t % 3;
    std::vector<HVector> vs;
    const Index n = 1 + t % 11;
    for (Index i = 0; i < n; ++i) vs.push_back(random_gaussian(m, field, rng));
    if (t % 5 == 0) vs.push_back(vs.front());
    const auto kept = select_pr_subset(vs, field);
    EXPECT_LE(static_cast<Index>(kept.size()), lifted_dimension(m, field));
    Eigen::MatrixXd all(static_cast<Index>(vs.size()), lifted_dimension(m, field));
    Eigen::MatrixXd sub(static_cast<Index>(kept.size()), lifted_dimension(m, field));
    for (std::size_t i = 0; i < vs.size(); ++i) all.row(static_cast<Index>(i)) = lifted_coords(vs[i], field);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      sub.row(static_cast<Index>(i)) = lifted_coords(vs[static_cast<std::size_t>(kept[i])], field);
    }
    EXPECT_EQ(numerical_rank(sub), numerical_rank(all));
    EXPECT_EQ(static_cast<Index>(kept.size()), numerical_rank(all));
  }
}

TEST(UpperLipschitz, ExamplesAndRandomSuite) {
  const FiniteFrame fr = oracle::e123_frame();
  const Comparison zero = upper_lipschitz_check(fr, vec({1, 2}), vec({0, 0}));
  EXPECT_NEAR(zero.lhs, analysis(fr, vec({1, 2})).norm(), 1e-14);
  EXPECT_LE(zero.lhs, std::sqrt(fr.bounds().upper) * std::sqrt(5.0) + 1e-12);
  const Comparison same = upper_lipschitz_check(fr, vec({1, 2}), vec({1, 2}));
  EXPECT_EQ(same.lhs, 0.0);
  EXPECT_EQ(same.rhs, 0.0);
  Rng rng(11);
  for (int t = 0; t < 1000; ++t) {
    const ScalarField field = t % 2 ? ScalarField::complex : ScalarField::real;
    const FiniteFrame f = oracle::random_frame(2 + t % 5, 3 + t % 9, field, rng);
    const Comparison c = upper_lipschitz_check(f, random_gaussian(f.dim(), field, rng), random_gaussian(f.dim(), field, rng));
    EXPECT_LE(c.lhs, c.rhs + 1e-9);
  }
}

TEST(EmpiricalLower, Examples) {
  EXPECT_LT(empirical_lower_lipschitz(oracle::e12_frame(), 200), 1e-8);
  const FiniteFrame onb3 = oracle::frame(ScalarField::real, {vec({1, 0, 0}), vec({0, 1, 0}), vec({0, 0, 1})});
  EXPECT_LT(empirical_lower_lipschitz(onb3, 200), 1e-8);
  EXPECT_NEAR(empirical_lower_lipschitz(oracle::frame(ScalarField::real, {vec({1})}), 200), 1.0, 1e-12);
  EXPECT_EQ(empirical_lower_lipschitz(oracle::e123_frame(), 300, 5), empirical_lower_lipschitz(oracle::e123_frame(), 300, 5));
}

TEST(EmpiricalLower, ComplementPropertyCrossCheck) {
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    const Index m = 2 + t % 2;
    const FiniteFrame fr = oracle::random_frame(m, 2 * m - 2 + t % 3, ScalarField::real, rng);
    const CPReport r = complement_property(fr);
    if (r.holds()) {
      EXPECT_GE(empirical_lower_lipschitz(fr, 500, t), 1e-8);
    } else {
      const auto& [f, g] = *r.counterexample;
      EXPECT_LE(measurement_gap(measure(fr, f), measure(fr, g)), 1e-10);
      EXPECT_GE(quotient_distance(f, g, ScalarField::real), 1e-3);
      EXPECT_LT(empirical_lower_lipschitz(fr, 200, t), 1e-8);
    }
  }
}

TEST(Certifier, BlocksOfBothFields) {
  const BlockCertifier cert = pr_certifier();
  EXPECT_TRUE(cert(oracle::e123_frame()));
  EXPECT_FALSE(cert(oracle::e12_frame()));
  Rng rng(13);
  EXPECT_TRUE(cert(oracle::random_frame(2, 8, ScalarField::complex, rng)));
}

}  // namespace
