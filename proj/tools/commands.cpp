#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "phasestab/frame_io.hpp"
#include "phasestab/holder.hpp"
#include "phasestab/instability.hpp"
#include "phasestab/linalg.hpp"
#include "phasestab/report.hpp"
#include "phasestab/sinc_example.hpp"
#include "phasestab/stability.hpp"

namespace phasestab::cli {

namespace {

struct Common {
  std::uint64_t seed = kDefaultSeed;
  std::string out_path;
  bool quiet = false;
};

struct Emitter {
  const Common& common;
  std::ostream& out;

  void operator()(const std::string& doc, const std::string& summary) const {
    if (common.out_path.empty()) {
      out << doc;
      return;
    }
    write_file_atomic(common.out_path, doc);
    if (!common.quiet) out << summary << '\n';
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Seed for every random choice")->capture_default_str();
  sub->add_option("--out", c.out_path, "Report path (stdout when omitted)");
  sub->add_flag("--quiet", c.quiet, "No summary line");
}

Json frame_header(const FiniteFrame& frame) {
  Json h;
  h["field"] = std::string(to_string(frame.field()));
  h["dim"] = frame.dim();
  h["size"] = frame.size();
  return h;
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

int pr_check(const std::string& path, const std::string& method_name, Index restarts, const Common& c,
             const Emitter& emit) {
  static const std::map<std::string, PRMethod> methods{
      {"auto", PRMethod::automatic}, {"complement", PRMethod::complement}, {"lifted", PRMethod::lifted}};
  const FiniteFrame frame = read_frame_file(path);
  const PRMethod method = methods.at(method_name);

  Json doc;
  doc["command"] = "pr-check";
  doc["seed"] = c.seed;
  doc["frame"] = frame_header(frame);
  const PRVerdict verdict = does_phase_retrieval(frame, method, c.seed, restarts);
  if (verdict.method == "complement") {
    doc["complement_property"] = to_report(complement_property(frame, CPMode::automatic, c.seed), frame.field());
  }
  doc["result"] = to_report(verdict, frame.field());
  emit(dump_report(doc), "pr-check: " + std::string(to_string(verdict.verdict)) + " (" + verdict.method + ")");
  switch (verdict.verdict) {
    case Verdict::yes: return kOk;
    case Verdict::no: return kNegative;
    case Verdict::heuristic_yes: return kHeuristic;
  }
  return kUnverified;
}

int lipschitz(const std::string& path, Index restarts, Index trials, const Common& c, const Emitter& emit) {
  const FiniteFrame frame = read_frame_file(path);
  const LiftedGain gain = min_lifted_gain(frame, restarts, c.seed);
  const std::optional<LiftedGain> grid = grid_lifted_gain(frame);

  Json doc;
  doc["command"] = "lipschitz";
  doc["seed"] = c.seed;
  doc["frame"] = frame_header(frame);
  doc["restarts"] = restarts;
  doc["c"] = gain.c;
  doc["grid_checked"] = grid.has_value();
  double c_min = gain.c;
  if (grid) {
    doc["c_grid"] = grid->c;
    const double scale = std::max({gain.c, grid->c, 1e-300});
    doc["grid_agrees"] = std::abs(gain.c - grid->c) <= 0.05 * scale;
    c_min = std::min(c_min, grid->c);
  }
  doc["minimizer"] = to_report(gain, frame.field());
  const double scale = frame.max_norm() * frame.max_norm();
  if (c_min <= 1e-7 * scale) {
    doc["stable"] = false;
    emit(dump_report(doc), "lipschitz: not certifiably stable, c = " + fmt(c_min));
    return kNegative;
  }
  const double C = lipschitz_constant(frame, c_min);
  const LipschitzVerification v = verify_lipschitz(frame, C, trials, split_seed(c.seed, 0x11));
  doc["stable"] = true;
  doc["C"] = C;
  Json ver;
  ver["trials"] = v.trials;
  ver["passed"] = v.passed;
  ver["pass_rate"] = v.trials > 0 ? static_cast<double>(v.passed) / static_cast<double>(v.trials) : 1.0;
  ver["worst_ratio"] = v.worst_ratio;
  doc["verification"] = ver;
  emit(dump_report(doc), "lipschitz: c = " + fmt(c_min) + ", C = " + fmt(C) + ", passed " + std::to_string(v.passed) +
                             "/" + std::to_string(v.trials));
  return v.passed == v.trials ? kOk : kUnverified;
}

GeneratedFrame make_generator(const std::string& name, std::uint64_t seed) {
  if (name == "onb") return onb_frame();
  if (name == "sinc") return sinc_frame();
  return riesz_frame(0.1, gaussian_blocks(6, ScalarField::real, split_seed(seed, 0xB2)), pr_certifier());
}

int witness(const std::string& generator, double delta, Index N, const Common& c, const Emitter& emit) {
  if (!(delta > 0.0)) throw std::invalid_argument("--delta must be positive");
  if (N < 1) throw std::invalid_argument("--N must be at least 1");
  const GeneratedFrame gen = make_generator(generator, c.seed);
  const WitnessPair w = build_witness(gen, delta, N);
  Json doc;
  doc["command"] = "witness";
  doc["seed"] = c.seed;
  doc["pair"] = to_report(w, gen.field);
  emit(dump_report(doc), "witness: " + generator + " k = " + std::to_string(w.k) + ", certified gap " +
                             fmt(w.gap_value + w.gap_tail_bound) + (w.verified ? "" : " (NOT verified)"));
  return w.verified ? kOk : kUnverified;
}

int sinc_table(unsigned m_max, std::optional<Index> window, const Common&, const Emitter& emit) {
  const std::vector<GrowthRow> rows = growth_table(m_max, window);
  bool ok = true;
  for (const GrowthRow& r : rows) ok = ok && r.checks_pass();
  emit(format_growth_table(rows), "sinc-table: " + std::to_string(rows.size()) + " rows" + (ok ? "" : ", checks FAILED"));
  return ok ? kOk : kUnverified;
}

HolderConfig read_holder_config(const std::string& path, std::uint64_t seed) {
  HolderConfig cfg;
  cfg.seed = seed;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "blocks") cfg.blocks = value.get<Index>();
      else if (key == "eps") cfg.eps = value.get<double>();
      else if (key == "gamma") cfg.gamma = value.get<double>();
      else if (key == "radius") cfg.radius = value.get<double>();
      else if (key == "trials") cfg.trials = value.get<Index>();
      else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
      else throw std::invalid_argument("unknown config key " + key);
    }
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("bad config value: ") + e.what());
  }
  if (cfg.blocks < 1 || cfg.trials < 1 || !(cfg.eps > 0.0) || !(cfg.eps < 1.0) || !(cfg.gamma > 1.0) ||
      !(cfg.radius > 0.0)) {
    throw std::invalid_argument("config out of range (blocks, trials >= 1; 0 < eps < 1; gamma > 1; radius > 0)");
  }
  return cfg;
}

int holder(const std::string& config_path, bool seed_given, const Common& c, const Emitter& emit) {
  HolderConfig cfg = read_holder_config(config_path, c.seed);
  if (seed_given) cfg.seed = c.seed;
  const HolderRun run = run_holder_experiment(cfg);
  Json doc;
  doc["command"] = "holder";
  doc["run"] = to_report(run);
  emit(dump_report(doc), "holder: " + std::to_string(run.violations) + " violations in " + std::to_string(run.pairs) +
                             " pairs");
  return run.violations == 0 ? kOk : kUnverified;
}

int perturb(const std::string& path, double eps, const std::string& frame_out, const Common&, const Emitter& emit) {
  if (!(eps > 0.0)) throw std::invalid_argument("--epsilon must be positive");
  const FiniteFrame frame = read_frame_file(path);
  const PerturbationResult r = perturb_destroy_pr(frame, eps);
  const std::string frame_doc = format_frame(r.perturbed);
  Json doc;
  doc["command"] = "perturb";
  doc["frame"] = frame_header(frame);
  doc["result"] = to_report(r, eps);
  doc["perturbed_frame"] = Json::parse(frame_doc);
  if (!frame_out.empty()) write_file_atomic(frame_out, frame_doc);
  emit(dump_report(doc), "perturb: k = " + std::to_string(r.k) + ", removed mass " + fmt(r.removed_mass) +
                             (r.cp_failure_certified ? ", CP failure certified" : ", CP failure NOT certified"));
  return r.cp_failure_certified ? kOk : kUnverified;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase retrieval stability experiments", "phasestab"};
  app.require_subcommand(1, 1);
  Common common;
  const Emitter emit{common, out};

  std::string frame_path, method = "auto", generator = "sinc", config_path, frame_out;
  Index restarts = 32, trials = 1000, N = 8;
  double delta = 1e-2, epsilon = 1e-4;
  unsigned m_max = 8;
  Index window = 0;

  auto* pr = app.add_subcommand("pr-check", "Decide phase retrieval for a finite frame");
  pr->add_option("frame", frame_path, "Frame file")->required();
  pr->add_option("--method", method)->check(CLI::IsMember({"auto", "complement", "lifted"}))->capture_default_str();
  pr->add_option("--restarts", restarts)->check(CLI::PositiveNumber)->capture_default_str();
  add_common(pr, common);

  auto* lip = app.add_subcommand("lipschitz", "Lower Lipschitz constant of a finite frame");
  lip->add_option("frame", frame_path, "Frame file")->required();
  lip->add_option("--restarts", restarts)->check(CLI::PositiveNumber)->capture_default_str();
  lip->add_option("--trials", trials, "Verification pairs")->check(CLI::NonNegativeNumber)->capture_default_str();
  add_common(lip, common);

  auto* wit = app.add_subcommand("witness", "Unstable pair for a countable frame");
  wit->add_option("--generator", generator)->check(CLI::IsMember({"onb", "sinc", "riesz"}))->capture_default_str();
  wit->add_option("--delta", delta)->capture_default_str();
  wit->add_option("--N", N)->capture_default_str();
  add_common(wit, common);

  auto* tab = app.add_subcommand("sinc-table", "Growth table of the sinc example");
  tab->add_option("--m-max", m_max)->capture_default_str();
  tab->add_option("--window", window, "Sample window (automatic when omitted)");
  add_common(tab, common);

  auto* hol = app.add_subcommand("holder", "Holder stability on the Riesz chain");
  hol->add_option("--config", config_path, "JSON config (blocks, eps, gamma, radius, trials, seed)");
  add_common(hol, common);

  auto* per = app.add_subcommand("perturb", "Small perturbation that destroys phase retrieval");
  per->add_option("--frame", frame_path, "Frame file")->required();
  per->add_option("--epsilon", epsilon)->capture_default_str();
  per->add_option("--frame-out", frame_out, "Also write the perturbed frame here");
  add_common(per, common);

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInvalidInput;
  }

  try {
    if (pr->parsed()) return pr_check(frame_path, method, restarts, common, emit);
    if (lip->parsed()) return lipschitz(frame_path, restarts, trials, common, emit);
    if (wit->parsed()) return witness(generator, delta, N, common, emit);
    if (tab->parsed()) {
      return sinc_table(m_max, tab->count("--window") ? std::optional<Index>(window) : std::nullopt, common, emit);
    }
    if (hol->parsed()) return holder(config_path, hol->count("--seed") > 0, common, emit);
    if (per->parsed()) return perturb(frame_path, epsilon, frame_out, common, emit);
  } catch (const FrameFormatError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const SearchBudgetExhausted& e) {
    err << "error: " << e.what() << " (best certified bound " << e.best_bound << ")\n";
    return kUnverified;
  } catch (const WindowTooSmall& e) {
    err << "error: " << e.what() << '\n';
    return kUnverified;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUnverified;
  }
  return kInvalidInput;
}

}  // namespace phasestab::cli
