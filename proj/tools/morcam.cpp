#include "morcam/czd.hpp"
#include "morcam/generate.hpp"
#include "morcam/io.hpp"
#include "morcam/maximal.hpp"
#include "morcam/seminorms.hpp"
#include "morcam/suite.hpp"
#include "morcam/weights.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using morcam::Scalar;
using ordered_json = nlohmann::ordered_json;

// Relative outputs land in MORCAM_OUT_DIR when it is set.
std::string resolve_out(const std::string& path) {
  if (path.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  if (const char* dir = std::getenv("MORCAM_OUT_DIR")) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / p).string();
  }
  return path;
}

void emit_json(const ordered_json& j, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(resolve_out(out_path));
  if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
  out << j.dump(2) << "\n";
}

std::vector<Scalar> parse_scalar_list(const std::string& text) {
  std::vector<Scalar> out;
  std::istringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ',')) out.push_back(std::stod(piece));
  return out;
}

std::array<int, 2> parse_index_pair(const std::string& text) {
  std::array<int, 2> out{0, 0};
  std::istringstream in(text);
  std::string piece;
  int k = 0;
  while (std::getline(in, piece, ',') && k < 2) out[k++] = std::stoi(piece);
  if (k == 1) out[1] = 0;
  return out;
}

morcam::CubeFamily make_family(const morcam::Domain& dom, const std::string& name,
                               int stride, const std::string& scales,
                               const std::optional<morcam::Cube>& base) {
  if (name == "auto") return morcam::default_family(dom, base);
  if (name == "dyadic") return morcam::enumerate_cubes(dom, morcam::DyadicPolicy{}, base);
  if (name == "anchored")
    return morcam::enumerate_cubes(dom, morcam::AnchoredExhaustivePolicy{}, base);
  if (name == "sliding") {
    morcam::SlidingPolicy p;
    p.stride = stride;
    for (Scalar s : parse_scalar_list(scales)) p.scales.push_back(static_cast<int>(s));
    return morcam::enumerate_cubes(dom, p, base);
  }
  throw std::runtime_error("unknown family policy: " + name);
}

morcam::SeminormKind parse_kind(const std::string& name) {
  using K = morcam::SeminormKind;
  if (name == "morrey") return K::Morrey;
  if (name == "campanato") return K::Campanato;
  if (name == "barred") return K::Barred;
  if (name == "tilde") return K::Tilde;
  if (name == "abs_minus_mean") return K::AbsMinusMean;
  if (name == "abs_plus_mean") return K::AbsPlusMean;
  if (name == "inf_nonneg") return K::InfNonneg;
  if (name == "inf_nonpos") return K::InfNonpos;
  throw std::runtime_error("unknown seminorm kind: " + name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid-based oscillation classes, maximal operators and weight diagnostics"};
  app.require_subcommand(1);

  // ---- generate ------------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "synthesize a grid function");
  std::string gen_kind = "constant", gen_out, gen_format;
  int gen_n = 1, gen_res = 64;
  Scalar gen_side = 1.0;
  morcam::GenParams gp;
  std::string gen_x0 = "0.5,0.5";
  gen->add_option("--kind", gen_kind,
                  "constant|step|power_cusp|log_singularity|random_signs|lognormal_weight");
  gen->add_option("--n", gen_n, "dimension (1 or 2)");
  gen->add_option("--res", gen_res, "cells per axis");
  gen->add_option("--side", gen_side, "box side length");
  gen->add_option("--value", gp.value, "constant / amplitude");
  gen->add_option("--beta", gp.beta, "cusp exponent in (0,1]");
  gen->add_option("--x0", gen_x0, "kernel center, comma-separated");
  gen->add_option("--scale", gp.scale, "kernel multiplier (-1 flips sign)");
  gen->add_option("--sigma", gp.sigma, "lognormal width");
  gen->add_option("--seed", gp.seed, "rng seed");
  gen->add_option("--out", gen_out, "output path")->required();
  gen->add_option("--format", gen_format, "csv|json (default: from extension)");

  // ---- compute -------------------------------------------------------------
  auto* compute = app.add_subcommand("compute", "evaluate one operation");
  compute->require_subcommand(1);

  std::string in_path, in2_path, b_path, b2_path, weight_path, out_path;
  std::string family_name = "auto", scales, base_lo, base_hi, cube_lo, cube_hi;
  int stride = 1;
  bool per_cube = false;

  auto add_family_flags = [&](CLI::App* cmd) {
    cmd->add_option("--family", family_name, "auto|dyadic|anchored|sliding");
    cmd->add_option("--stride", stride, "sliding stride");
    cmd->add_option("--scales", scales, "sliding scales, comma-separated");
    cmd->add_option("--base-lo", base_lo, "base cube lower cell indices");
    cmd->add_option("--base-hi", base_hi, "base cube upper cell indices");
  };

  auto* sem = compute->add_subcommand("seminorm", "oscillation seminorm over a family");
  std::string sem_kind = "barred", sem_norm = "volume";
  Scalar sem_p = 1.0, sem_lambda = 1.0;
  sem->add_option("--in", in_path, "grid function")->required();
  sem->add_option("--kind", sem_kind, "oscillation kind");
  sem->add_option("--p", sem_p, "exponent p > 0");
  sem->add_option("--lambda", sem_lambda, "scale lambda >= 0");
  sem->add_option("--normalization", sem_norm, "radius|volume");
  sem->add_flag("--per-cube", per_cube, "include per-cube values");
  sem->add_option("--out", out_path, "report path (json)");
  add_family_flags(sem);

  auto* max = compute->add_subcommand("maximal", "maximal operators and commutators");
  std::string max_op = "global";
  Scalar max_alpha = 0.0, max_beta = 0.0, max_p = 1.0;
  max->add_option("--op", max_op,
                  "local|global|bilinear|commutator|bilinear_commutator|char");
  max->add_option("--in", in_path, "grid function f")->required();
  max->add_option("--in2", in2_path, "second function (bilinear)");
  max->add_option("--b", b_path, "symbol b (commutators)");
  max->add_option("--b2", b2_path, "second symbol (bilinear commutator)");
  max->add_option("--alpha", max_alpha, "fractional order in [0,n)");
  max->add_option("--beta", max_beta, "threshold scale beta >= 0");
  max->add_option("--p", max_p, "char-statistic exponent");
  max->add_option("--cube-lo", cube_lo, "local base cube lower cells");
  max->add_option("--cube-hi", cube_hi, "local base cube upper cells");
  max->add_option("--out", out_path, "output path");
  add_family_flags(max);

  auto* czd = compute->add_subcommand("czd", "stopping-time decompositions and tails");
  std::string czd_op = "decompose", fit_range;
  Scalar czd_tau = 2.718281828459045, czd_p = 1.0;
  int czd_depth = 3, n_thresholds = 32;
  czd->add_option("--op", czd_op, "decompose|generations|distribution|fit");
  czd->add_option("--in", in_path, "grid function")->required();
  czd->add_option("--tau", czd_tau, "selection level");
  czd->add_option("--p", czd_p, "exponent in (0,1] for generations");
  czd->add_option("--depth", czd_depth, "generation depth");
  czd->add_option("--thresholds", n_thresholds, "profile grid size");
  czd->add_option("--range", fit_range, "fit range t_lo,t_hi");
  czd->add_option("--out", out_path, "output path");
  add_family_flags(czd);

  auto* wgt = compute->add_subcommand("weight", "Muckenhoupt diagnostics");
  std::string wgt_op = "constant", wgt_class = "ap", q_grid = "1.1,1.25,1.5,2,2.5,3";
  Scalar wgt_p = 2.0, wgt_q = 2.0, wgt_alpha = 0.0, wgt_C = 1.0, wgt_B = 0.0;
  int wgt_K = 16, subset_count = 64;
  std::uint64_t subset_seed = 0;
  wgt->add_option("--op", wgt_op,
                  "constant|reverse_holder|comparison|rubio|weighted_char");
  wgt->add_option("--in", in_path, "weight samples")->required();
  wgt->add_option("--b", b_path, "symbol for weighted_char");
  wgt->add_option("--class", wgt_class, "a1|ap|apq");
  wgt->add_option("--p", wgt_p, "exponent p");
  wgt->add_option("--q", wgt_q, "exponent q");
  wgt->add_option("--alpha", wgt_alpha, "fractional order");
  wgt->add_option("--C", wgt_C, "reverse Holder constant");
  wgt->add_option("--q-grid", q_grid, "reverse Holder exponent grid");
  wgt->add_option("--B", wgt_B, "iteration bound (0 = measured ratio)");
  wgt->add_option("--K", wgt_K, "iteration depth");
  wgt->add_option("--subsets", subset_count, "random subsets per cube");
  wgt->add_option("--subset-seed", subset_seed, "subset sampling seed");
  wgt->add_option("--out", out_path, "output path");
  add_family_flags(wgt);

  // ---- suite ---------------------------------------------------------------
  auto* suite = app.add_subcommand("suite", "run registered checks from a config");
  std::string cfg_path, suite_out, suite_format = "json";
  bool timings = false;
  suite->add_option("--config", cfg_path, "suite config json")->required();
  suite->add_option("--out", suite_out, "report path (default: stdout)");
  suite->add_option("--format", suite_format, "json|csv");
  suite->add_flag("--timings", timings, "include wall-clock timings in the report");
  std::string suite_out_dir, suite_family;
  long long suite_seed = -1;
  int suite_trials = 0, suite_res1d = 0, suite_resfine = 0;
  double suite_tau = 0.0;
  suite->add_option("--out-dir", suite_out_dir, "override config out_dir");
  suite->add_option("--seed", suite_seed, "override config seed");
  suite->add_option("--trials", suite_trials, "override config trials");
  suite->add_option("--family", suite_family, "override config family policy");
  suite->add_option("--res-1d", suite_res1d, "override config res_1d");
  suite->add_option("--res-fine", suite_resfine, "override config res_fine");
  suite->add_option("--tau", suite_tau, "override config tau");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      const auto x0 = parse_scalar_list(gen_x0);
      gp.x0 = {x0[0], x0.size() > 1 ? x0[1] : 0.5};
      const morcam::GridFunction f = morcam::generate(
          morcam::generator_kind_from_string(gen_kind), gp, gen_n, gen_res, gen_side);
      const std::string path = resolve_out(gen_out);
      if (gen_format.empty())
        morcam::write_grid_function(f, path);
      else
        morcam::write_grid_function(f, path, morcam::format_from_string(gen_format));
      return 0;
    }

    if (compute->parsed()) {
      const morcam::GridFunction f = morcam::read_grid_function(in_path);
      const morcam::Domain& dom = f.domain();
      std::optional<morcam::Cube> base;
      if (!base_lo.empty())
        base = morcam::make_cube(dom, parse_index_pair(base_lo), parse_index_pair(base_hi));

      if (sem->parsed()) {
        morcam::SeminormSpec spec;
        spec.p = sem_p;
        spec.lambda = sem_lambda;
        spec.kind = parse_kind(sem_kind);
        spec.normalization = sem_norm == "radius" ? morcam::Normalization::Radius
                                                  : morcam::Normalization::Volume;
        const auto fam = make_family(dom, family_name, stride, scales, base);
        const auto rep = morcam::seminorm(f, spec, fam, per_cube);
        emit_json(morcam::to_json(rep), out_path);
        return 0;
      }

      if (max->parsed()) {
        const auto fam = make_family(dom, family_name, stride, scales, base);
        if (max_op == "char") {
          const auto st = morcam::char_statistic(f, fam, max_alpha, max_beta, max_p);
          emit_json(morcam::to_json(st), out_path);
          return 0;
        }
        morcam::GridFunction out = [&] {
          if (max_op == "local") {
            morcam::Cube q = cube_lo.empty()
                                 ? morcam::full_cube(dom)
                                 : morcam::make_cube(dom, parse_index_pair(cube_lo),
                                                     parse_index_pair(cube_hi));
            return morcam::local_maximal(f, q, max_alpha);
          }
          if (max_op == "global") return morcam::global_maximal(f, fam, max_alpha);
          if (max_op == "bilinear")
            return morcam::bilinear_maximal(f, morcam::read_grid_function(in2_path), fam);
          if (max_op == "commutator")
            return morcam::commutator(morcam::read_grid_function(b_path), f, max_alpha, fam);
          if (max_op == "bilinear_commutator")
            return morcam::bilinear_commutator(
                morcam::read_grid_function(b_path), morcam::read_grid_function(b2_path), f,
                morcam::read_grid_function(in2_path), fam);
          throw std::runtime_error("unknown maximal op: " + max_op);
        }();
        if (out_path.empty())
          morcam::write_grid_function(out, std::cout, morcam::FileFormat::Json);
        else
          morcam::write_grid_function(out, resolve_out(out_path));
        return 0;
      }

      if (czd->parsed()) {
        const morcam::Cube q0 = base ? *base : morcam::full_cube(dom);
        if (czd_op == "decompose") {
          emit_json(morcam::to_json(morcam::cz_decompose(f, q0, czd_tau)), out_path);
          return 0;
        }
        if (czd_op == "generations") {
          emit_json(morcam::to_json(morcam::jn_generations(f, q0, czd_p, czd_tau, czd_depth)),
                    out_path);
          return 0;
        }
        const auto ts = morcam::default_thresholds(f, q0, n_thresholds);
        const auto prof = morcam::distribution(f, q0, ts);
        if (czd_op == "distribution") {
          if (!out_path.empty() &&
              morcam::format_from_path(out_path) == morcam::FileFormat::Csv)
            morcam::write_profile_csv(prof, resolve_out(out_path));
          else
            emit_json(morcam::to_json(prof), out_path);
          return 0;
        }
        if (czd_op == "fit") {
          Scalar lo = ts.front(), hi = ts.back();
          if (!fit_range.empty()) {
            const auto r = parse_scalar_list(fit_range);
            lo = r[0];
            hi = r.size() > 1 ? r[1] : ts.back();
          }
          emit_json(morcam::to_json(morcam::fit_exponential_decay(prof, lo, hi)), out_path);
          return 0;
        }
        throw std::runtime_error("unknown czd op: " + czd_op);
      }

      if (wgt->parsed()) {
        const auto fam = make_family(dom, family_name, stride, scales, base);
        const morcam::Weight w{f};
        if (wgt_op == "constant") {
          morcam::WeightClass cls = morcam::ApTag{wgt_p};
          if (wgt_class == "a1") cls = morcam::A1Tag{};
          if (wgt_class == "apq") cls = morcam::ApqTag{wgt_p, wgt_q};
          emit_json(morcam::to_json(morcam::muckenhoupt_constant(w, cls, fam)), out_path);
          return 0;
        }
        if (wgt_op == "reverse_holder") {
          const auto q = morcam::reverse_holder_exponent(w, fam, wgt_C,
                                                         parse_scalar_list(q_grid));
          ordered_json j;
          j["C"] = wgt_C;
          j["exponent"] = q ? ordered_json(*q) : ordered_json(nullptr);
          emit_json(j, out_path);
          return 0;
        }
        if (wgt_op == "comparison") {
          morcam::SubsetPolicy policy;
          policy.random_count = subset_count;
          policy.seed = subset_seed;
          const auto fit = morcam::measure_comparison_exponents(w, fam, policy);
          ordered_json j;
          j["epsilon"] = fit.epsilon;
          j["L"] = fit.L;
          j["C"] = fit.C;
          j["pairs"] = fit.pairs;
          emit_json(j, out_path);
          return 0;
        }
        if (wgt_op == "rubio") {
          Scalar B = wgt_B;
          if (B <= 0) {
            const morcam::GridFunction mg = morcam::global_maximal(
                morcam::GridFunction(f.domain_ptr(), f.samples().abs()), fam, 0.0);
            B = mg.samples().maxCoeff() / f.samples().abs().maxCoeff();
          }
          const auto rw = morcam::rubio_de_francia(f, B, wgt_K, fam);
          if (out_path.empty())
            morcam::write_grid_function(rw.weight.values(), std::cout,
                                        morcam::FileFormat::Json);
          else
            morcam::write_grid_function(rw.weight.values(), resolve_out(out_path));
          std::cerr << "B=" << rw.B << " tail=" << rw.tail_bound
                    << " step_ratio=" << rw.measured_step_ratio << "\n";
          return 0;
        }
        if (wgt_op == "weighted_char") {
          const morcam::GridFunction b = morcam::read_grid_function(b_path);
          const auto st =
              morcam::weighted_char_statistic(b, w, wgt_p, wgt_q, wgt_alpha, fam);
          emit_json(morcam::to_json(st), out_path);
          return 0;
        }
        throw std::runtime_error("unknown weight op: " + wgt_op);
      }
    }

    if (suite->parsed()) {
      std::ifstream in(cfg_path);
      if (!in) throw std::runtime_error("cannot open config: " + cfg_path);
      ordered_json j;
      in >> j;
      morcam::SuiteConfig cfg = morcam::suite_config_from_json(j);
      if (!suite_out_dir.empty()) cfg.out_dir = suite_out_dir;
      if (suite_seed >= 0) cfg.seed = static_cast<std::uint64_t>(suite_seed);
      if (suite_trials > 0) cfg.trials = suite_trials;
      if (!suite_family.empty()) cfg.family = suite_family;
      if (suite_res1d > 0) cfg.res_1d = suite_res1d;
      if (suite_resfine > 0) cfg.res_fine = suite_resfine;
      if (suite_tau > 0) cfg.tau = suite_tau;
      const auto results = morcam::run_suite(cfg);
      for (const auto& r : results)
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.tag
                  << (r.witness.empty() ? "" : "  [" + r.witness + "]") << "\n";
      const auto fmt = morcam::format_from_string(suite_format);
      if (suite_out.empty()) {
        morcam::emit_report(results, std::cout, fmt, timings);
      } else {
        std::string path = suite_out;
        if (!cfg.out_dir.empty() && !std::filesystem::path(path).is_absolute()) {
          std::filesystem::create_directories(cfg.out_dir);
          path = (std::filesystem::path(cfg.out_dir) / path).string();
        }
        std::ofstream out(resolve_out(path));
        if (!out) throw std::runtime_error("cannot open for writing: " + path);
        morcam::emit_report(results, out, fmt, timings);
      }
      return morcam::all_passed(results) ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
