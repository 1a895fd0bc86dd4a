// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <Eigen/SVD>

#include "commands.hpp"
#include "phasestab/frame_io.hpp"
#include "phasestab/holder.hpp"
#include "phasestab/instability.hpp"
#include "phasestab/sinc_example.hpp"
#include "phasestab/stability.hpp"
#include "test_support.hpp"

using namespace phasestab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

Index svd_rank(const CMatrix& a) {
  if (a.cols() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& s = svd.singularValues();
  const double tol = std::max(a.rows(), a.cols()) * 1e-12 * std::max(s(0), 1.0);
  Index r = 0;
  for (Index i = 0; i < s.size(); ++i) r += s(i) > tol;
  return r;
}

Outcome sinc_growth() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<GrowthRow> rows = growth_table(8);
  double min_incr = 1e300, max_incr = -1e300;
  for (const GrowthRow& r : rows) {
    const BigInt b = oracle::binom(2 * r.m, r.m);
    const double bd = static_cast<double>(b);
    o.require(sinc_pair(r.m).dist_sq == 4 * b, "dist^2 != 4 binom at m=" + std::to_string(r.m));
    o.require(r.gap * r.gap + r.gap_tail <= 32.0 / (std::numbers::pi * std::numbers::pi * bd * bd),
              "gap bound fails at m=" + std::to_string(r.m));
    o.require(r.ratio >= std::numbers::pi / std::sqrt(8.0) * std::pow(bd, 1.5),
              "ratio bound fails at m=" + std::to_string(r.m));
    if (r.m >= 4 && r.log2_incr) {
      min_incr = std::min(min_incr, *r.log2_incr);
      max_incr = std::max(max_incr, *r.log2_incr);
    }
  }
  o.require(min_incr >= 2.5 && max_incr <= 3.5, "increment outside [2.5, 3.5]");
  const double secs = seconds_since(t0);
  o.require(secs <= 60.0, "runtime " + num(secs) + " s");
  if (o.pass) o.detail = "m=1..8, increments in [" + num(min_incr) + ", " + num(max_incr) + "], " + num(secs) + " s";
  return o;
}

Outcome witnesses() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::pair<std::string, GeneratedFrame>> gens{
      {"onb", onb_frame()},
      {"sinc", sinc_frame()},
      {"riesz",
       riesz_frame(0.1, gaussian_blocks(6, ScalarField::real, split_seed(kDefaultSeed, 0xB2)), pr_certifier())}};
  double worst = 0.0;
  for (const auto& [name, gen] : gens) {
    for (double delta : {1e-1, 1e-2, 1e-3}) {
      const WitnessPair w = build_witness(gen, delta, 8);
      const std::string tag = name + " delta=" + num(delta);
      o.require(std::abs(w.distance - 2.0) <= 1e-9, tag + ": distance " + num(w.distance));
      o.require(std::abs(w.norm_f - std::sqrt(2.0)) <= 1e-9, tag + ": ||f||");
      o.require(std::abs(w.norm_g - std::sqrt(2.0)) <= 1e-9, tag + ": ||g||");
      o.require(w.gap_value + w.gap_tail_bound <= delta, tag + ": certified gap above delta");
      worst = std::max(worst, (w.gap_value + w.gap_tail_bound) / delta);
    }
  }
  const double secs = seconds_since(t0);
  o.require(secs <= 120.0, "runtime " + num(secs) + " s");
  if (o.pass) o.detail = "9 witnesses, worst certified gap / delta = " + num(worst) + ", " + num(secs) + " s";
  return o;
}

Outcome central_binomial_growth() {
  Outcome o;
  for (unsigned m = 1; m <= 30; ++m) {
    const BigInt lhs = 4 * oracle::binom(2 * m, m) * (m + 1);
    const BigInt rhs = BigInt(4) << (2 * m);
    o.require(lhs >= rhs, "fails at m=" + std::to_string(m));
    o.require(sinc_pair(m).dist_sq == 4 * oracle::binom(2 * m, m), "dist_sq mismatch at m=" + std::to_string(m));
  }
  if (o.pass) o.detail = "m=1..30, exact integers";
  return o;
}

Outcome upper_lipschitz() {
  Outcome o;
  Rng rng(split_seed(kDefaultSeed, 4));
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const ScalarField field = t % 2 ? ScalarField::complex : ScalarField::real;
    const Index dim = 2 + t % 5;
    const FiniteFrame fr = oracle::random_frame(dim, dim + 1 + t % 7, field, rng);
    const HVector f = random_gaussian(dim, field, rng);
    const HVector g = random_gaussian(dim, field, rng);
    const Comparison c = upper_lipschitz_check(fr, f, g);
    o.require(c.lhs <= c.rhs + 1e-9, "violation at trial " + std::to_string(t));
    const double lhs = (oracle::intensities(fr, f) - oracle::intensities(fr, g)).norm();
    const double B = Eigen::SelfAdjointEigenSolver<CMatrix>(fr.synthesis() * fr.synthesis().adjoint()).eigenvalues().maxCoeff();
    const double rhs = std::sqrt(B) * oracle::brute_distance(f, g, field);
    o.require(lhs <= rhs + 1e-9, "oracle violation at trial " + std::to_string(t));
    worst = std::max(worst, lhs / rhs);
  }
  if (o.pass) o.detail = "1000 pairs, dims 2..6, both fields, max lhs/rhs = " + num(worst);
  return o;
}

Outcome complement_cross_validation() {
  Outcome o;
  Rng rng(split_seed(kDefaultSeed, 5));
  int holds = 0;
  double min_ratio = 1e300;
  for (int t = 0; t < 100; ++t) {
    const Index m = 2 + t % 2;
    const FiniteFrame fr = oracle::random_frame(m, 2 * m - 2 + t % 3, ScalarField::real, rng);
    const CPReport r = complement_property(fr);
    if (r.holds()) {
      ++holds;
      const double ratio = empirical_lower_lipschitz(fr, 10'000, static_cast<std::uint64_t>(t));
      min_ratio = std::min(min_ratio, ratio);
      o.require(ratio >= 1e-8, "CP holds but ratio " + num(ratio) + " at frame " + std::to_string(t));
    } else {
      if (!r.counterexample) {
        o.require(false, "no counterexample at frame " + std::to_string(t));
        continue;
      }
      const auto& [f, g] = *r.counterexample;
      o.require((oracle::intensities(fr, f) - oracle::intensities(fr, g)).norm() <= 1e-10,
                "counterexample gap too large at frame " + std::to_string(t));
      o.require(oracle::brute_distance(f, g, ScalarField::real) >= 1e-3,
                "counterexample too close at frame " + std::to_string(t));
    }
  }
  if (o.pass) {
    o.detail = std::to_string(holds) + " hold (min ratio " + num(min_ratio) + "), " + std::to_string(100 - holds) +
               " fail with counterexamples";
  }
  return o;
}

Outcome finite_constant() {
  Outcome o;
  std::vector<FiniteFrame> frames{oracle::e123_frame()};
  Rng rng(split_seed(kDefaultSeed, 6));
  while (frames.size() < 21) {
    const Index m = 2 + static_cast<Index>(frames.size() % 2);
    FiniteFrame fr = oracle::random_frame(m, 2 * m - 1 + static_cast<Index>(frames.size() % 3), ScalarField::real, rng);
    if (complement_property(fr).holds()) frames.push_back(std::move(fr));
  }
  double worst_grid = 0.0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const FiniteFrame& fr = frames[i];
    const LiftedGain gain = min_lifted_gain(fr);
    const auto grid = grid_lifted_gain(fr);
    o.require(grid.has_value(), "no grid for frame " + std::to_string(i));
    if (!grid) continue;
    const double rel = std::abs(gain.c - grid->c) / std::max(gain.c, grid->c);
    worst_grid = std::max(worst_grid, rel);
    o.require(rel <= 0.05, "grid disagreement " + num(rel) + " at frame " + std::to_string(i));
    const double C = lipschitz_constant(fr, gain.c);
    o.require(std::abs(C - 4.0 * fr.max_norm() / gain.c) <= 1e-12 * C, "C formula");
    const LipschitzVerification v = verify_lipschitz(fr, C, 1000, split_seed(kDefaultSeed, 60 + i));
    o.require(v.trials == 1000 && v.passed == 1000,
              std::to_string(v.trials - v.passed) + " violations at frame " + std::to_string(i));
  }
  if (o.pass) o.detail = "21 frames x 1000 pairs, worst descent/grid gap " + num(100.0 * worst_grid) + "%";
  return o;
}

Outcome holder_approximation() {
  Outcome o;
  double worst = 0.0;
  for (double gamma : {1.5, 2.0, 4.0}) {
    HolderConfig cfg;
    cfg.gamma = gamma;
    cfg.radius = 1.0;
    cfg.trials = 500;
    const HolderRun run = run_holder_experiment(cfg);
    o.require(run.pairs == 500, "pair count at gamma=" + num(gamma));
    o.require(run.violations == 0, std::to_string(run.violations) + " violations at gamma=" + num(gamma));
    worst = std::max(worst, run.worst_ratio);
  }
  if (o.pass) o.detail = "gamma in {1.5, 2, 4}, 500 pairs each, max lhs/rhs = " + num(worst);
  return o;
}

Outcome perturbation() {
  Outcome o;
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Index blocks = 3 + static_cast<Index>(seed % 2);
    const FiniteFrame fr = nested_block_frame(gaussian_blocks(blocks, ScalarField::real, seed), 0.01);
    o.require(complement_property(fr).holds(), "frame " + std::to_string(seed) + " is not certified PR");
    for (double eps : {1e-2, 1e-4}) {
      const PerturbationResult r = perturb_destroy_pr(fr, eps);
      const std::string tag = "frame " + std::to_string(seed) + " eps=" + num(eps);
      const double mass = (r.perturbed.synthesis() - fr.synthesis()).squaredNorm();
      o.require(mass < eps, tag + ": removed mass " + num(mass));
      o.require(r.cp_failure_certified, tag + ": CP failure not certified");
      const CMatrix& s = r.perturbed.synthesis();
      o.require(svd_rank(s.leftCols(r.k)) < fr.dim() && svd_rank(s.rightCols(s.cols() - r.k)) < fr.dim(),
                tag + ": split spans on one side");
      o.require(!complement_property(r.perturbed).holds(), tag + ": perturbed frame still has CP");
      if (eps == 1e-4) {
        const double lower = Eigen::SelfAdjointEigenSolver<CMatrix>(s * s.adjoint()).eigenvalues().minCoeff();
        o.require(lower > 0.0 && r.perturbed_lower_bound > 0.0, tag + ": lower frame bound lost");
      }
      ++checked;
    }
  }
  if (o.pass) o.detail = std::to_string(checked) + " perturbations, all rank-certified";
  return o;
}

Outcome exact_values() {
  Outcome o;
  const FiniteFrame e123 = oracle::e123_frame();
  o.require(std::abs(strong_cp_sigma(e123) - (3.0 - std::sqrt(5.0)) / 2.0) <= 1e-10, "strong CP sigma");
  const FrameBounds b = frame_bounds(e123);
  o.require(std::abs(b.lower - 1.0) <= 1e-12 && std::abs(b.upper - 3.0) <= 1e-12, "frame bounds");
  for (unsigned k = 0; k <= 10; ++k) {
    for (unsigned n = 0; n <= k; ++n) {
      o.require(s_k_eval(k, -static_cast<double>(n)) == static_cast<double>(oracle::binom(k, n)),
                "s_k(-n) at k=" + std::to_string(k) + " n=" + std::to_string(n));
    }
  }
  if (o.pass) o.detail = "sigma*, (A, B) and s_k(-n) for 0 <= n <= k <= 10";
  return o;
}

Outcome determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / ("phasestab_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto put = [&](const std::string& name, const std::string& text) {
    std::ofstream((dir / name).string()) << text;
    return (dir / name).string();
  };
  Rng rng(split_seed(kDefaultSeed, 10));
  const std::string complex_frame = put("c.json", format_frame(oracle::random_frame(3, 7, ScalarField::complex, rng)));
  const std::string real_frame = put("r.json", format_frame(oracle::e123_frame()));
  const std::string nested =
      put("n.json", format_frame(nested_block_frame(gaussian_blocks(3, ScalarField::real, 3), 0.01)));
  const std::string cfg = put("h.json", R"({"blocks": 4, "trials": 100})");
  const std::vector<std::vector<std::string>> commands{
      {"pr-check", complex_frame},
      {"pr-check", real_frame, "--method", "lifted"},
      {"lipschitz", real_frame, "--trials", "200"},
      {"witness", "--generator", "sinc", "--delta", "1e-2"},
      {"witness", "--generator", "riesz"},
      {"sinc-table", "--m-max", "6"},
      {"holder", "--config", cfg},
      {"perturb", "--frame", nested, "--frame-out", (dir / "p.json").string()},
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  for (const auto& base : commands) {
    std::string out[2], file[2];
    int code[2];
    for (int r = 0; r < 2; ++r) {
      std::vector<std::string> args = base;
      args.insert(args.end(), {"--seed", "12345", "--out", (dir / "report.json").string(), "--quiet"});
      std::ostringstream so, se;
      code[r] = cli::run_cli(args, so, se);
      out[r] = so.str();
      file[r] = slurp(dir / "report.json") + (base[0] == "perturb" ? slurp(dir / "p.json") : "");
    }
    o.require(code[0] == code[1] && out[0] == out[1] && file[0] == file[1] && !file[0].empty(),
              base[0] + " output differs between runs");
  }
  fs::remove_all(dir);
  if (o.pass) o.detail = std::to_string(commands.size()) + " invocations covering all 6 subcommands";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"sinc growth table", sinc_growth},
      {"unstable witnesses", witnesses},
      {"central binomial lower bound", central_binomial_growth},
      {"upper Lipschitz bound", upper_lipschitz},
      {"complement property cross-validation", complement_cross_validation},
      {"finite-dimensional Lipschitz constant", finite_constant},
      {"Holder stability on the Riesz chain", holder_approximation},
      {"perturbation destroys phase retrieval", perturbation},
      {"exact small values", exact_values},
      {"CLI determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failed += !o.pass;
    std::printf("criterion %2zu %s: %s (%s)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
