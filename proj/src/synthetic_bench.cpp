#include "certipose/synthetic_bench.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "certipose/graph_matrices.hpp"
#include "certipose/local_refinement.hpp"
#include "certipose/nullspace_recovery.hpp"
#include "certipose/rng.hpp"
#include "certipose/sdp_relaxation.hpp"

namespace certipose {

GeneratedGraph generate_random_graph(const GeneratorConfig& config) {
  if (config.n < 2)
    throw Error("generator needs at least 2 nodes, got " +
                std::to_string(config.n));
  if (config.sigma_delta < 0.0 || config.sigma_r < 0.0)
    throw Error("noise standard deviations must be nonnegative");
  if (config.pc < 0.0 || config.pc > 1.0)
    throw Error("loop-closure probability must lie in [0, 1]");
  SplitMix64 rng(config.seed);
  const int n = config.n;

  GeneratedGraph out;
  out.graph.node_count = n;
  out.ground_truth.poses.resize(n);

  std::vector<Eigen::Vector2d> positions(n);
  std::vector<double> angles(n);
  for (int i = 0; i < n; ++i)
    positions[i] = {rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0)};
  for (int i = 0; i < n; ++i) angles[i] = rng.angle();
  for (int i = 0; i < n; ++i)
    out.ground_truth.poses[i] = Pose2D(positions[i], angles[i]);

  // Odometric path, then Bernoulli loop closures over the remaining pairs.
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i + 1 < n; ++i) pairs.emplace_back(i, i + 1);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (j != i + 1 && rng.next_double() < config.pc) pairs.emplace_back(i, j);

  for (const auto& [i, j] : pairs) {
    const Eigen::Matrix2d ri = Pose2D(positions[i], angles[i]).rotation();
    Eigen::Vector2d delta = ri.transpose() * (positions[j] - positions[i]);
    if (config.translation_uniform) {
      delta.x() += rng.uniform(-5.0, 5.0);
      delta.y() += rng.uniform(-5.0, 5.0);
    } else {
      delta.x() += config.sigma_delta * rng.gaussian();
      delta.y() += config.sigma_delta * rng.gaussian();
    }
    double theta = angles[j] - angles[i];
    theta += config.rotation_uniform ? rng.angle()
                                     : config.sigma_r * rng.gaussian();
    out.graph.edges.emplace_back(i, j, delta, wrap_angle(theta));
  }
  return out;
}

GeneratedGraph counterexample_fixture() {
  GeneratedGraph out;
  out.graph.node_count = 5;
  out.ground_truth.poses = {
      Pose2D(0.0000, -5.0000, 0.2451),  Pose2D(4.7553, -1.5451, -0.4496),
      Pose2D(2.9389, 4.0451, 0.7361),   Pose2D(-2.9389, 4.0451, 0.3699),
      Pose2D(-4.7553, -1.5451, -1.7225)};
  out.graph.edges = {
      RelativeMeasurement(0, 1, {4.6606, 1.2177}, 2.8186),
      RelativeMeasurement(1, 2, {-4.4199, 4.8043}, 0.1519),
      RelativeMeasurement(2, 3, {-4.1169, 4.9322}, 0.5638),
      RelativeMeasurement(3, 4, {-3.6351, -5.0908}, -0.5855),
      RelativeMeasurement(4, 0, {3.4744, 5.9425}, 2.5775)};
  return out;
}

PoseGraph remove_node_compose(const PoseGraph& graph, int k) {
  if (k < 0 || k >= graph.node_count)
    throw IndexOutOfRangeError("node " + std::to_string(k) + " out of range");
  std::vector<int> incident;
  for (int e = 0; e < static_cast<int>(graph.edges.size()); ++e)
    if (graph.edges[e].tail == k || graph.edges[e].head == k)
      incident.push_back(e);
  if (incident.size() != 2)
    throw NotAChainNodeError("node " + std::to_string(k) + " has " +
                             std::to_string(incident.size()) +
                             " incident edges, expected 2");

  const RelativeMeasurement& e1 = graph.edges[incident[0]];
  const RelativeMeasurement& e2 = graph.edges[incident[1]];

  // Chain orientation (a,k),(k,b) composes directly; otherwise traverse
  // whichever edge is reversed through its inverse.
  int a, b;
  Pose2D into_k, out_of_k;
  if (e1.head == k && e2.tail == k) {
    a = e1.tail;
    b = e2.head;
    into_k = e1.as_pose();
    out_of_k = e2.as_pose();
  } else if (e2.head == k && e1.tail == k) {
    a = e2.tail;
    b = e1.head;
    into_k = e2.as_pose();
    out_of_k = e1.as_pose();
  } else {
    a = (e1.tail == k) ? e1.head : e1.tail;
    b = (e2.tail == k) ? e2.head : e2.tail;
    into_k = (e1.tail == a) ? e1.as_pose() : inverse(e1.as_pose());
    out_of_k = (e2.head == b) ? e2.as_pose() : inverse(e2.as_pose());
  }
  const Pose2D composed = compose(into_k, out_of_k);

  const auto reindex = [k](int v) { return v > k ? v - 1 : v; };
  PoseGraph out;
  out.node_count = graph.node_count - 1;
  bool placed = false;
  for (int e = 0; e < static_cast<int>(graph.edges.size()); ++e) {
    if (e == incident[0] || e == incident[1]) {
      if (!placed) {
        out.edges.emplace_back(reindex(a), reindex(b), composed.position,
                               composed.angle);
        placed = true;
      }
      continue;
    }
    const auto& edge = graph.edges[e];
    out.edges.emplace_back(reindex(edge.tail), reindex(edge.head), edge.delta,
                           edge.angle);
  }
  return out;
}

PoseGraph scale_translations(const PoseGraph& graph, double s) {
  if (!(s > 0.0))
    throw NonPositiveScaleError("scale must be positive, got " +
                                std::to_string(s));
  PoseGraph out = graph;
  for (auto& e : out.edges) e.delta *= s;
  return out;
}

namespace {

constexpr double kNotRun = std::numeric_limits<double>::quiet_NaN();

RunRecord execute_run(const GeneratorConfig& config, int run,
                      const std::set<Baseline>& baselines) {
  RunRecord rec;
  rec.run = run;
  rec.seed = config.seed + static_cast<std::uint64_t>(run);
  rec.cost_ns = rec.cost_eig = rec.cost_sdp = rec.cost_gn = rec.cost_eigr =
      kNotRun;

  GeneratorConfig run_config = config;
  run_config.seed = rec.seed;

  try {
    const GeneratedGraph generated = generate_random_graph(run_config);
    const ValidatedPoseGraph graph = validate_graph(generated.graph);

    const auto t0 = std::chrono::steady_clock::now();
    const Certificate cert = certify(graph);
    rec.certify_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    rec.szep = cert.szep;
    rec.zero_count = cert.zero_count;
    rec.dual_value = cert.dual_value;
    rec.primal_value = cert.primal_value;
    rec.gap = cert.gap;

    if (baselines.count(Baseline::NullSpace)) {
      const Eigen::MatrixXcd basis = null_space_basis(
          cert.dual.penalized_spectrum,
          classify_zeros(cert.dual.penalized_spectrum).threshold);
      const NullSpaceSolution ns =
          solve_nullspace_program(make_nullspace_program(basis));
      rec.cost_ns =
          evaluate_cost(graph, normalize_estimate(basis * ns.z).realized);
    }
    if (baselines.count(Baseline::Eigvec)) {
      rec.cost_eig = evaluate_cost(
          graph, eigenvector_heuristic(cert.dual.penalized_spectrum).realized);
    }
    if (baselines.count(Baseline::Sdp)) {
      const RelaxationSolution relaxed =
          solve_sdp_relaxation(build_complex_matrix(graph));
      rec.cost_sdp =
          evaluate_cost(graph, rank_one_extract(relaxed).first.realized);
    }
    if (baselines.count(Baseline::GaussNewton)) {
      rec.cost_gn =
          gauss_newton(graph, generated.ground_truth).final_cost;
    }
    if (baselines.count(Baseline::EigR)) {
      rec.cost_eigr =
          gauss_newton(graph, rotation_first_init(graph).assignment)
              .final_cost;
    }
  } catch (const std::exception& ex) {
    rec.failed = true;
    rec.failure = ex.what();
  }
  return rec;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::string MonteCarloReport::to_csv() const {
  std::ostringstream os;
  os << "run,seed,szep,zero_count,dual_value,primal_value,gap,"
        "cost_ns,cost_eig,cost_sdp,cost_gn,cost_eigr\n";
  for (const auto& r : records) {
    os << r.run << ',' << r.seed << ',' << (r.szep ? 1 : 0) << ','
       << r.zero_count << ',' << format_double(r.dual_value) << ','
       << format_double(r.primal_value) << ',' << format_double(r.gap) << ','
       << format_double(r.cost_ns) << ',' << format_double(r.cost_eig) << ','
       << format_double(r.cost_sdp) << ',' << format_double(r.cost_gn) << ','
       << format_double(r.cost_eigr) << '\n';
  }
  return os.str();
}

std::string MonteCarloReport::to_json() const {
  nlohmann::json j;
  j["runs"] = runs;
  j["szep_fraction"] = szep_fraction;
  j["records"] = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json row;
    row["run"] = r.run;
    row["seed"] = r.seed;
    row["szep"] = r.szep;
    row["zero_count"] = r.zero_count;
    row["dual_value"] = r.dual_value;
    row["primal_value"] = r.primal_value;
    row["gap"] = r.gap;
    const auto put = [&row](const char* key, double v) {
      if (std::isnan(v))
        row[key] = nullptr;
      else
        row[key] = v;
    };
    put("cost_ns", r.cost_ns);
    put("cost_eig", r.cost_eig);
    put("cost_sdp", r.cost_sdp);
    put("cost_gn", r.cost_gn);
    put("cost_eigr", r.cost_eigr);
    if (r.failed) row["failure"] = r.failure;
    j["records"].push_back(row);
  }
  return j.dump(2);
}

MonteCarloReport monte_carlo(const GeneratorConfig& config, int runs,
                             const std::set<Baseline>& baselines,
                             int threads) {
  MonteCarloReport report;
  report.runs = runs;
  report.records.resize(runs);

  threads = std::max(1, std::min(threads, runs));
  std::atomic<int> next{0};
  const auto worker = [&]() {
    for (int run = next.fetch_add(1); run < runs; run = next.fetch_add(1))
      report.records[run] = execute_run(config, run, baselines);
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  int szep_count = 0;
  int counted = 0;
  for (const auto& r : report.records) {
    if (r.failed) continue;
    ++counted;
    szep_count += r.szep ? 1 : 0;
  }
  report.szep_fraction =
      counted > 0 ? static_cast<double>(szep_count) / counted : 0.0;
  return report;
}

}  // namespace certipose
