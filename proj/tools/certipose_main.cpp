#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "certipose/dual_certifier.hpp"
#include "certipose/g2o_io.hpp"
#include "certipose/graph_matrices.hpp"
#include "certipose/local_refinement.hpp"
#include "certipose/synthetic_bench.hpp"

namespace {

using namespace certipose;

constexpr int kExitOptimal = 0;
constexpr int kExitError = 1;
constexpr int kExitUnknown = 2;
constexpr int kExitUsage = 64;

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream file(path);
  if (!file) throw Error("cannot open input file: " + path);
  std::ostringstream os;
  os << file.rdbuf();
  return os.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream file(path);
  if (!file) throw Error("cannot open output file: " + path);
  file << content;
}

ParsedGraph load_graph(const std::string& path, bool strict) {
  ParseOptions opts;
  opts.strict = strict;
  ParsedGraph parsed = parse_g2o(read_input(path), opts);
  for (const auto& w : parsed.warnings) std::cerr << "warning: " << w << "\n";
  return parsed;
}

nlohmann::json certificate_report(const Certificate& cert) {
  nlohmann::json j;
  j["status"] =
      cert.status == CertificateStatus::Optimal ? "optimal" : "unknown";
  j["szep"] = cert.szep;
  j["zero_count"] = cert.zero_count;
  j["dual_value"] = cert.dual_value;
  j["primal_value"] = cert.primal_value;
  j["gap"] = cert.gap;
  j["lambda"] = std::vector<double>(
      cert.dual.lambda.data(), cert.dual.lambda.data() + cert.dual.lambda.size());

  const auto& mu = cert.dual.penalized_spectrum.eigenvalues;
  const int head = std::min<int>(6, static_cast<int>(mu.size()));
  std::vector<double> spectrum_head(mu.data(), mu.data() + head);
  j["penalized_spectrum_head"] = spectrum_head;

  j["poses"] = nlohmann::json::array();
  for (const auto& p : cert.estimate.realized.poses)
    j["poses"].push_back(
        {{"x", p.position.x()}, {"y", p.position.y()}, {"theta", p.angle}});

  j["solver_stats"] = {{"newton_iterations", cert.dual.iterations},
                       {"barrier_final", cert.dual.barrier_final},
                       {"converged", cert.dual.converged},
                       {"monotone", cert.dual.monotone}};
  return j;
}

int run_certify(const std::string& input, const std::string& json_out,
                const std::string& solution_out, const SolverOptions& opts) {
  const ParsedGraph parsed = load_graph(input, false);
  const ValidatedPoseGraph graph = validate_graph(parsed.graph);
  const Certificate cert = certify(graph, opts);

  std::cout << "status: "
            << (cert.status == CertificateStatus::Optimal ? "optimal"
                                                          : "unknown")
            << "\nszep: " << (cert.szep ? "true" : "false")
            << "\nzero_count: " << cert.zero_count
            << "\ndual_value: " << cert.dual_value
            << "\nprimal_value: " << cert.primal_value << "\ngap: " << cert.gap
            << "\n";

  if (!json_out.empty())
    write_output(json_out, certificate_report(cert).dump(2) + "\n");
  if (!solution_out.empty())
    write_output(solution_out, write_g2o(graph, &cert.estimate.realized));

  return cert.status == CertificateStatus::Optimal ? kExitOptimal
                                                   : kExitUnknown;
}

int run_spectrum(const std::string& input) {
  const ParsedGraph parsed = load_graph(input, false);
  const ValidatedPoseGraph graph = validate_graph(parsed.graph);
  const SpectrumReport report = hermitian_eigen(build_complex_matrix(graph));
  const int head =
      std::min<int>(6, static_cast<int>(report.eigenvalues.size()));
  std::cout.precision(17);
  for (int k = 0; k < head; ++k)
    std::cout << "mu_" << (k + 1) << " " << report.eigenvalues(k) << "\n";
  std::cout << "zero_count " << report.zero_count << "\n";
  return kExitOptimal;
}

GeneratorConfig config_from_json(const nlohmann::json& j) {
  GeneratorConfig config;
  config.n = j.value("n", config.n);
  config.pc = j.value("pc", config.pc);
  config.sigma_delta = j.value("sigma_delta", config.sigma_delta);
  config.sigma_r = j.value("sigma_r", config.sigma_r);
  config.rotation_uniform = j.value("rotation_uniform", config.rotation_uniform);
  config.translation_uniform =
      j.value("translation_uniform", config.translation_uniform);
  if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
  return config;
}

int monte_carlo_threads(int runs) {
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads <= 0) threads = 1;
  if (const char* cap = std::getenv("CERTIPOSE_THREADS"))
    threads = std::min(threads, std::max(1, std::atoi(cap)));
  return std::min(threads, runs);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar pose graph optimization with duality-based optimality "
               "certificates"};
  app.require_subcommand(1);

  // certify
  std::string certify_input = "-";
  std::string certify_json, certify_solution;
  SolverOptions solver_opts;
  solver_opts.gauge_fix = true;
  bool no_gauge_fix = false;
  auto* certify_cmd =
      app.add_subcommand("certify", "solve the dual and certify optimality");
  certify_cmd->add_option("input", certify_input, "input .g2o file or -");
  certify_cmd->add_option("--json", certify_json, "write a JSON report");
  certify_cmd->add_option("--solution", certify_solution,
                          "write the estimate as .g2o");
  certify_cmd->add_option("--eps-dual", solver_opts.eps_dual,
                          "dual solver tolerance");
  certify_cmd->add_flag("--no-gauge-fix", no_gauge_fix,
                        "keep the arbitrary global rotation of the estimate");

  // spectrum
  std::string spectrum_input = "-";
  auto* spectrum_cmd = app.add_subcommand(
      "spectrum", "print the smallest eigenvalues of the pose graph matrix");
  spectrum_cmd->add_option("input", spectrum_input, "input .g2o file or -");

  // generate
  GeneratorConfig gen_config;
  std::string gen_output = "-";
  auto* generate_cmd =
      app.add_subcommand("generate", "sample a random pose graph");
  generate_cmd->add_option("--n", gen_config.n, "number of poses");
  generate_cmd->add_option("--pc", gen_config.pc, "loop closure probability");
  generate_cmd->add_option("--sigma-delta", gen_config.sigma_delta,
                           "translation noise std (m)");
  generate_cmd->add_option("--sigma-r", gen_config.sigma_r,
                           "rotation noise std (rad)");
  generate_cmd->add_flag("--rotation-uniform", gen_config.rotation_uniform,
                         "rotation noise uniform on (-pi, pi]");
  generate_cmd->add_flag("--translation-uniform",
                         gen_config.translation_uniform,
                         "translation noise uniform on [-5, 5]^2");
  generate_cmd
      ->add_option("--seed", gen_config.seed,
                   "generator seed (required; no wall-clock seeding)")
      ->required();
  generate_cmd->add_option("-o,--output", gen_output, "output .g2o file or -");

  // montecarlo
  std::string mc_config_path;
  std::string mc_output = "-";
  std::string mc_json_output;
  std::string mc_baselines = "gn";
  int mc_runs = 0;
  std::uint64_t mc_seed = 0;
  bool mc_seed_set = false;
  auto* montecarlo_cmd = app.add_subcommand(
      "montecarlo", "run repeated generate+certify experiments");
  montecarlo_cmd->add_option("--config", mc_config_path,
                             "JSON generator config");
  montecarlo_cmd->add_option("--runs", mc_runs, "number of runs")->required();
  montecarlo_cmd->add_option("-o,--output", mc_output, "CSV report path or -");
  montecarlo_cmd->add_option("--json", mc_json_output, "JSON report path");
  montecarlo_cmd->add_option(
      "--baselines", mc_baselines,
      "comma list among ns,eig,sdp,gn,eigr (default gn)");
  montecarlo_cmd->add_option_function<std::uint64_t>(
      "--seed",
      [&](std::uint64_t s) {
        mc_seed = s;
        mc_seed_set = true;
      },
      "seed override (required when the config has none)");

  // fixture
  std::string fixture_output = "-";
  int fixture_remove = -1;
  double fixture_scale = 1.0;
  auto* fixture_cmd = app.add_subcommand(
      "fixture", "emit the 5-node chain counterexample (0-based node ids)");
  fixture_cmd->add_option("--remove-node", fixture_remove,
                          "delete a chain node, composing its edges");
  fixture_cmd->add_option("--scale", fixture_scale,
                          "scale all translation measurements");
  fixture_cmd->add_option("-o,--output", fixture_output,
                          "output .g2o file or -");

  // refine
  std::string refine_input = "-";
  std::string refine_init = "tree";
  std::string refine_solution;
  auto* refine_cmd =
      app.add_subcommand("refine", "Gauss-Newton from a chosen initial guess");
  refine_cmd->add_option("input", refine_input, "input .g2o file or -");
  refine_cmd
      ->add_option("--init", refine_init, "initial guess: vertices|tree|eigr")
      ->check(CLI::IsMember({"vertices", "tree", "eigr"}));
  refine_cmd->add_option("--solution", refine_solution,
                         "write the refined poses as .g2o");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (certify_cmd->parsed()) {
      solver_opts.gauge_fix = !no_gauge_fix;
      return run_certify(certify_input, certify_json, certify_solution,
                         solver_opts);
    }
    if (spectrum_cmd->parsed()) return run_spectrum(spectrum_input);
    if (generate_cmd->parsed()) {
      const GeneratedGraph generated = generate_random_graph(gen_config);
      const ValidatedPoseGraph graph = validate_graph(generated.graph);
      write_output(gen_output, write_g2o(graph, &generated.ground_truth));
      return kExitOptimal;
    }
    if (montecarlo_cmd->parsed()) {
      GeneratorConfig config;
      bool have_seed = false;
      if (!mc_config_path.empty()) {
        const nlohmann::json j =
            nlohmann::json::parse(read_input(mc_config_path));
        config = config_from_json(j);
        have_seed = j.contains("seed");
      }
      if (mc_seed_set) {
        config.seed = mc_seed;
        have_seed = true;
      }
      if (!have_seed) {
        std::cerr << "montecarlo needs a seed (config file or --seed)\n";
        return kExitUsage;
      }
      std::set<Baseline> baselines;
      std::stringstream names(mc_baselines);
      std::string name;
      while (std::getline(names, name, ',')) {
        if (name.empty()) continue;
        if (name == "ns") baselines.insert(Baseline::NullSpace);
        else if (name == "eig") baselines.insert(Baseline::Eigvec);
        else if (name == "sdp") baselines.insert(Baseline::Sdp);
        else if (name == "gn") baselines.insert(Baseline::GaussNewton);
        else if (name == "eigr") baselines.insert(Baseline::EigR);
        else {
          std::cerr << "unknown baseline: " << name << "\n";
          return kExitUsage;
        }
      }
      const MonteCarloReport report = monte_carlo(
          config, mc_runs, baselines, monte_carlo_threads(mc_runs));
      write_output(mc_output, report.to_csv());
      if (!mc_json_output.empty())
        write_output(mc_json_output, report.to_json() + "\n");
      std::cerr << "szep_fraction " << report.szep_fraction << "\n";
      return kExitOptimal;
    }
    if (fixture_cmd->parsed()) {
      PoseGraph graph = counterexample_fixture().graph;
      if (fixture_remove >= 0) graph = remove_node_compose(graph, fixture_remove);
      if (fixture_scale != 1.0) graph = scale_translations(graph, fixture_scale);
      const ValidatedPoseGraph validated = validate_graph(graph);
      write_output(fixture_output, write_g2o(validated));
      return kExitOptimal;
    }
    if (refine_cmd->parsed()) {
      const ParsedGraph parsed = load_graph(refine_input, false);
      const ValidatedPoseGraph graph = validate_graph(parsed.graph);
      PoseAssignment initial;
      if (refine_init == "vertices") {
        if (!parsed.initial) {
          std::cerr << "input has no vertex poses for --init vertices\n";
          return kExitUsage;
        }
        initial = *parsed.initial;
      } else if (refine_init == "tree") {
        initial = spanning_tree_solution(graph);
      } else {
        initial = rotation_first_init(graph).assignment;
      }
      const RefinementResult result = gauss_newton(graph, initial);
      std::cout << "final_cost: " << result.final_cost
                << "\niterations: " << result.iterations << "\nconverged: "
                << (result.converged ? "true" : "false") << "\n";
      if (!refine_solution.empty())
        write_output(refine_solution, write_g2o(graph, &result.poses));
      return kExitOptimal;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}
