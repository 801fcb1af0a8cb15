// samap: generate matrix sequences, build sparsity patterns and compute sparse approximate maps.
//
//   samap gen cd2d --m 64 --out seq/
//   samap gen shifted --m 30 --shift-count 10 --shift-step 1 --out shifted/
//   samap run --seq seq/sequence.txt --recipe target --recipe col:0.8@level1 --out results/
//   samap closure-check A1.mtx A0.mtx
//   samap exactmap-study --seq shifted/sequence.txt --drop-tol 1e-2 --drop-tol 1e-4 --out results/
//   samap sparsify A.mtx --recipe lfil:5@level1 --out pattern.mtx
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "samap/samap.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

struct Cd2dFlags {
  samap::Cd2dConfig cfg;

  void add_to(CLI::App& app) {
    app.add_option("--m", cfg.m, "Interior grid points per side (n = m^2)")->capture_default_str();
    app.add_option("--eta", cfg.eta, "Base diffusivity")->capture_default_str();
    app.add_option("--gamma", cfg.gamma, "Nonlinear diffusivity coefficient")->capture_default_str();
    app.add_option("--r", cfg.r, "Convection in x")->capture_default_str();
    app.add_option("--s", cfg.s, "Convection in y")->capture_default_str();
    app.add_option("--t-coef", cfg.t_coef, "Reaction coefficient")->capture_default_str();
    app.add_option("--f-rhs", cfg.f_rhs, "Constant source term")->capture_default_str();
    app.add_option("--newton-tol", cfg.newton_tol, "Stop when ||F||_2 falls below this")->capture_default_str();
    app.add_option("--max-newton", cfg.max_newton, "Newton step limit")->capture_default_str();
    app.add_option("--armijo-c", cfg.armijo_c, "Armijo sufficient-decrease constant")->capture_default_str();
    app.add_option("--backtrack", cfg.backtrack_factor, "Step reduction factor")->capture_default_str();
  }
};

struct ShiftedFlags {
  std::size_t m = 30;
  std::vector<double> shifts;
  std::size_t shift_count = 10;
  double shift_step = 1.0;
  std::string mass = "diagonal";

  void add_to(CLI::App& app) {
    app.add_option("--m", m, "Interior grid points per side (n = m^2)")->capture_default_str();
    app.add_option("--shifts", shifts, "Explicit shifts (overrides --shift-count/--shift-step)")->delimiter(',');
    app.add_option("--shift-count", shift_count, "Number of shifts sigma_k = step * k")->capture_default_str();
    app.add_option("--shift-step", shift_step, "Shift increment")->capture_default_str();
    app.add_option("--mass", mass, "Mass matrix kind")
        ->check(CLI::IsMember({"diagonal", "tridiagonal"}))
        ->capture_default_str();
  }

  samap::ShiftedConfig config() const {
    samap::ShiftedConfig c;
    c.m = m;
    c.shifts = shifts.empty() ? samap::ShiftedConfig::linear_shifts(shift_count, shift_step) : shifts;
    c.mass_kind = mass == "tridiagonal" ? samap::ShiftedConfig::MassKind::tridiagonal
                                         : samap::ShiftedConfig::MassKind::diagonal;
    return c;
  }
};

// A sequence given either as a manifest or as an inline generator with default settings.
struct SourceFlags {
  std::string manifest;
  std::string generate;
  std::optional<std::size_t> m;
  ShiftedFlags shifted;

  void add_to(CLI::App& app) {
    app.add_option("--seq", manifest, "Sequence manifest (one Matrix Market path per line)");
    app.add_option("--generate", generate, "Generate the sequence instead of reading it")
        ->check(CLI::IsMember({"cd2d", "shifted"}));
    app.add_option("--m", m, "Grid side for --generate (default 64 for cd2d, 30 for shifted)");
    app.add_option("--shift-count", shifted.shift_count, "Shift count for --generate shifted")->capture_default_str();
    app.add_option("--shift-step", shifted.shift_step, "Shift step for --generate shifted")->capture_default_str();
  }

  samap::SequenceSource source() const {
    if (!manifest.empty() && !generate.empty())
      throw samap::InvalidArgument("give either --seq or --generate, not both");
    if (!manifest.empty()) return fs::path(manifest);
    if (generate == "cd2d") {
      samap::Cd2dConfig c;
      c.m = m.value_or(c.m);
      return c;
    }
    if (generate == "shifted") {
      ShiftedFlags s = shifted;
      s.m = m.value_or(s.m);
      return s.config();
    }
    throw samap::InvalidArgument("a sequence is required: --seq <manifest> or --generate <cd2d|shifted>");
  }
};

std::vector<samap::PatternRecipe> parse_recipes(const std::vector<std::string>& specs) {
  std::vector<samap::PatternRecipe> recipes;
  for (const auto& s : specs) recipes.push_back(samap::parse_recipe(s));
  return recipes;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse approximate maps between matrices of a linear-system sequence"};
  app.set_config("--config", "", "INI/TOML config file; sections name subcommands, e.g. [run] or [gen.cd2d]");
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a matrix sequence as Matrix Market files plus a manifest");
  gen->require_subcommand(1);
  std::string gen_out = ".";
  Cd2dFlags gen_cd2d;
  auto* gen_cd2d_cmd = gen->add_subcommand("cd2d", "Newton Jacobians of 2D nonlinear convection-diffusion");
  gen_cd2d.add_to(*gen_cd2d_cmd);
  gen_cd2d_cmd->add_option("--out", gen_out, "Output directory")->capture_default_str();
  ShiftedFlags gen_shifted;
  auto* gen_shifted_cmd = gen->add_subcommand("shifted", "Shifted Laplacian systems K + sigma_k M");
  gen_shifted.add_to(*gen_shifted_cmd);
  gen_shifted_cmd->add_option("--out", gen_out, "Output directory")->capture_default_str();

  // run
  auto* run = app.add_subcommand("run", "Compute SAMs for every (k, recipe) and write report.csv");
  SourceFlags run_src;
  run_src.add_to(*run);
  std::size_t target = 0;
  std::vector<std::string> recipe_specs;
  std::string out_dir = ".";
  std::size_t dense_cap = samap::kDefaultDenseCap;
  unsigned threads = 1;
  run->add_option("--target", target, "Target matrix index")->capture_default_str();
  run->add_option("--recipe", recipe_specs, "Pattern recipe, repeatable")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--dense-cap", dense_cap, "Largest n for dense computations")->capture_default_str();
  run->add_option("--threads", threads, "Worker threads per SAM")->capture_default_str();

  // closure-check
  auto* closure = app.add_subcommand("closure-check", "Compare exact-map pattern with the transitive closure");
  std::string closure_source, closure_target;
  std::size_t closure_cap = samap::kDefaultClosureCap;
  closure->add_option("source", closure_source, "Source matrix A (Matrix Market)")->required();
  closure->add_option("target", closure_target, "Target matrix B (Matrix Market)")->required();
  closure->add_option("--closure-cap", closure_cap, "Largest n accepted")->capture_default_str();

  // exactmap-study
  auto* study = app.add_subcommand("exactmap-study", "nnz of dense exact maps after magnitude dropping");
  SourceFlags study_src;
  study_src.add_to(*study);
  std::size_t study_target = 0;
  std::vector<double> drop_tols;
  std::string study_out = ".";
  std::size_t study_cap = samap::kDefaultDenseCap;
  study->add_option("--target", study_target, "Target matrix index")->capture_default_str();
  study->add_option("--drop-tol", drop_tols, "Drop tolerance, repeatable")->required();
  study->add_option("--out", study_out, "Output directory")->capture_default_str();
  study->add_option("--dense-cap", study_cap, "Largest n for dense computations")->capture_default_str();

  // sparsify
  auto* sparsify = app.add_subcommand("sparsify", "Apply one recipe to a matrix and dump the pattern");
  std::string sparsify_in, sparsify_recipe, sparsify_out;
  sparsify->add_option("matrix", sparsify_in, "Matrix Market file")->required();
  sparsify->add_option("--recipe", sparsify_recipe, "Pattern recipe")->required();
  sparsify->add_option("--out", sparsify_out, "Write the pattern as a Matrix Market pattern file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*gen_cd2d_cmd) {
      const auto result = samap::generate_cd2d_sequence(gen_cd2d.cfg);
      if (!result.converged)
        std::cerr << "warning: Newton did not converge in " << gen_cd2d.cfg.max_newton
                  << " steps; writing the partial sequence\n";
      const auto manifest = samap::write_sequence(result.sequence, gen_out);
      std::cout << "wrote " << result.sequence.size() << " matrices (n = " << result.sequence.dimension()
                << ", final ||F|| = " << result.residual_norms.back() << ") to " << manifest.string() << '\n';
    } else if (*gen_shifted_cmd) {
      const auto seq = samap::generate_shifted_sequence(gen_shifted.config());
      const auto manifest = samap::write_sequence(seq, gen_out);
      std::cout << "wrote " << seq.size() << " matrices (n = " << seq.dimension() << ") to " << manifest.string()
                << '\n';
    } else if (*run) {
      samap::MatrixSequence seq = samap::load_sequence(run_src.source());
      samap::ExperimentConfig cfg;
      cfg.recipes = parse_recipes(recipe_specs);
      cfg.target_index = target;
      cfg.dense_cap = dense_cap;
      cfg.threads = threads;
      const auto chain = samap::check_sequence(seq);
      const auto rows = samap::run_experiment(seq, cfg);
      const fs::path csv = fs::path(out_dir) / "report.csv";
      samap::write_report_csv(rows, csv);
      std::cout << "subset chain: "
                << (chain.holds() ? std::string("holds") : "violated at index " + std::to_string(chain.index))
                << "\nwrote " << rows.size() << " rows to " << csv.string() << '\n';
    } else if (*closure) {
      const auto a = samap::read_matrix_market(fs::path(closure_source));
      const auto b = samap::read_matrix_market(fs::path(closure_target));
      const auto v = samap::run_closure_check(a, b, closure_cap);
      std::cout << "subset S(target) in S(source): " << (v.subset_holds ? "yes" : "no") << '\n'
                << "exact map nnz (drop " << samap::kClosureDropTol << "): " << v.map_nnz << '\n'
                << "transitive closure nnz: " << v.closure_nnz << '\n'
                << "patterns equal: " << (v.patterns_equal ? "yes" : "no") << '\n'
                << "verdict: " << (v.pass() ? "PASS" : "FAIL") << '\n';
    } else if (*study) {
      const auto seq = samap::load_sequence(study_src.source());
      const auto rows = samap::run_exactmap_study(seq, study_target, drop_tols, study_cap);
      const fs::path csv = fs::path(study_out) / "exactmap.csv";
      samap::write_exactmap_csv(rows, csv);
      std::cout << "wrote " << rows.size() << " rows to " << csv.string() << '\n';
    } else if (*sparsify) {
      const auto a = samap::read_matrix_market(fs::path(sparsify_in));
      const auto recipe = samap::parse_recipe(sparsify_recipe);
      const auto p = recipe.build(a, a);
      std::cout << "nnz: " << p.nnz() << '\n';
      if (!sparsify_out.empty()) samap::write_matrix_market(p, fs::path(sparsify_out));
    }
  } catch (const samap::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
