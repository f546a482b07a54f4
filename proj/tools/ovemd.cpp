// Command-line front end: generate instances, run the matching and Boolean
// solvers, build and decode the reductions, and run the verification checks.
//
// Exit codes: 0 success, 1 a verification check failed, 2 bad usage or bad
// input files, 3 an internal consistency guarantee was violated.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ovemd/errors.hpp"
#include "ovemd/exact_reduction.hpp"
#include "ovemd/gadgets.hpp"
#include "ovemd/generate.hpp"
#include "ovemd/io.hpp"
#include "ovemd/matching.hpp"
#include "ovemd/ov_suite.hpp"
#include "ovemd/pipeline.hpp"
#include "ovemd/verify.hpp"

namespace {

using ovemd::Json;

void emit(const Json& j, const std::string& out_path) {
  if (out_path.empty() || out_path == "-")
    std::cout << j.dump(2) << '\n';
  else
    ovemd::write_json_file(out_path, j);
}

ovemd::Instance load_instance(const std::string& path) {
  return ovemd::instance_from_json(ovemd::read_json_file(path));
}

ovemd::BinaryPair load_binary(const std::string& path) {
  auto inst = load_instance(path);
  if (!std::holds_alternative<ovemd::BinaryPair>(inst))
    throw ovemd::param_error("this command needs a binary instance");
  return std::get<ovemd::BinaryPair>(inst);
}

ovemd::IntPair load_integer(const std::string& path) {
  auto inst = load_instance(path);
  if (std::holds_alternative<ovemd::IntPair>(inst)) return std::get<ovemd::IntPair>(inst);
  // Binary instances are valid integer instances; promote them.
  const auto& p = std::get<ovemd::BinaryPair>(inst);
  ovemd::IntPair q;
  q.dim = p.dim;
  auto promote = [&](const ovemd::BinaryVector& v) {
    std::vector<ovemd::Int> coords(v.dim());
    for (int i = 0; i < v.dim(); ++i) coords[i] = v.bit(i) ? 1 : 0;
    return ovemd::IntVector(std::move(coords));
  };
  for (const auto& v : p.left) q.left.push_back(promote(v));
  for (const auto& v : p.right) q.right.push_back(promote(v));
  return q;
}

void write_trace_csv(const std::string& path, const std::vector<ovemd::HsPhaseTrace>& trace) {
  std::ofstream out(path);
  if (!out) throw ovemd::param_error("cannot open for writing: " + path);
  out << "phase,r_size,p_multi,p_distinct,verdict\n";
  for (const auto& row : trace)
    out << row.phase << ',' << row.r_size << ',' << row.p_multi << ',' << row.p_distinct << ','
        << row.verdict << '\n';
}

Json trace_to_json(const std::vector<ovemd::HsPhaseTrace>& trace) {
  Json rows = Json::array();
  for (const auto& row : trace) {
    Json r;
    r["phase"] = row.phase;
    r["r_size"] = row.r_size;
    r["p_multi"] = row.p_multi;
    r["p_distinct"] = row.p_distinct;
    r["verdict"] = row.verdict;
    rows.push_back(std::move(r));
  }
  return rows;
}

const char* verdict_name(ovemd::HsVerdict v) {
  return v == ovemd::HsVerdict::hitting_vector_exists ? "hitting-vector-exists"
                                                      : "no-hitting-vector";
}

int run(int argc, char** argv) {
  CLI::App app{"reductions between geometric matching and Boolean vector problems"};
  app.require_subcommand(1);

  // ---- gen -----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a seeded instance");
  ovemd::GeneratorSpec gspec;
  std::string gen_out, gen_density = "1/2";
  std::int64_t gen_seed = 0;
  gen->add_option("--family", gspec.family,
                  "uniform-binary | planted-orthogonal | planted-hitting | "
                  "complement-matched | clustered-integer");
  gen->add_option("--n", gspec.n, "points per side");
  gen->add_option("--d", gspec.d, "dimension");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--density", gen_density, "one-probability for binary families (p/q)");
  gen->add_option("--planted", gspec.planted_count, "planted orthogonal pairs");
  gen->add_option("--coord-bound", gspec.coord_bound, "coordinate range for clustered-integer");
  gen->add_option("--out", gen_out, "output file (default stdout)");
  gen->callback([&] {
    gspec.seed = static_cast<std::uint64_t>(gen_seed);
    gspec.density = ovemd::parse_ratio(gen_density);
    emit(ovemd::instance_to_json(ovemd::generate(gspec)), gen_out);
  });

  // ---- solve ---------------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "run a solver on an instance file");
  solve->require_subcommand(1);
  std::string in_path, out_path, algo = "oracle", trace_path;
  std::string alpha = "1/2", delta = "1/2", epsilon = "7/10", mom_backend = "exact";
  std::int64_t solve_seed = 0;
  int floor_opt = 64;
  auto add_common = [&](CLI::App* cmd, bool with_algo) {
    cmd->add_option("--in", in_path, "instance file")->required();
    cmd->add_option("--out", out_path, "output file (default stdout)");
    if (with_algo) {
      cmd->add_option("--algo", algo, "solver choice");
      cmd->add_option("--seed", solve_seed, "solver seed");
    }
  };

  auto* s_emd = solve->add_subcommand("emd", "min-cost Euclidean bijection");
  add_common(s_emd, false);
  s_emd->callback([&] { emit(ovemd::matching_to_json(ovemd::emd(load_integer(in_path))), out_path); });

  auto* s_asym = solve->add_subcommand("asym-emd", "min-cost Euclidean injection");
  add_common(s_asym, false);
  s_asym->callback(
      [&] { emit(ovemd::matching_to_json(ovemd::asymmetric_emd(load_integer(in_path))), out_path); });

  auto* s_sq = solve->add_subcommand("sqemd", "min-cost squared-Euclidean bijection");
  add_common(s_sq, false);
  s_sq->callback([&] { emit(ovemd::matching_to_json(ovemd::sqemd(load_integer(in_path))), out_path); });

  auto* s_ov = solve->add_subcommand("ov", "orthogonal pair (oracle | promise)");
  add_common(s_ov, true);
  s_ov->add_option("--delta", delta, "promise route exponent (p/q)");
  s_ov->callback([&] {
    ovemd::BinaryPair p = load_binary(in_path);
    std::optional<std::pair<int, int>> pair;
    if (algo == "oracle")
      pair = ovemd::ov_oracle(p);
    else if (algo == "promise")
      pair = ovemd::ov_via_promise_findov(p, ovemd::parse_ratio(delta),
                                          ovemd::scan_promise_solver());
    else
      throw ovemd::param_error("ov solvers: oracle, promise");
    Json j;
    j["problem"] = "ov";
    j["algo"] = algo;
    if (pair)
      j["pair"] = Json::array({pair->first, pair->second});
    else
      j["pair"] = nullptr;
    emit(j, out_path);
  });

  auto* s_hs = solve->add_subcommand("hs", "hitting set (oracle | phased | promise)");
  add_common(s_hs, true);
  s_hs->add_option("--findov", mom_backend, "phased backend: oracle | sampling | emd");
  s_hs->add_option("--alpha", alpha, "sampling exponent (p/q)");
  s_hs->add_option("--epsilon", epsilon, "promise route exponent (p/q)");
  s_hs->add_option("--floor", floor_opt, "brute-force floor for sampling backends");
  s_hs->add_option("--trace", trace_path, "write phase trace CSV here");
  s_hs->callback([&] {
    ovemd::BinaryPair p = load_binary(in_path);
    Json j;
    j["problem"] = "hs";
    j["algo"] = algo;
    auto seed = static_cast<std::uint64_t>(solve_seed);
    if (algo == "oracle") {
      auto hit = ovemd::hs_oracle(p);
      j["verdict"] = hit ? "hitting-vector-exists" : "no-hitting-vector";
      if (hit) j["witness"] = *hit;
    } else if (algo == "phased") {
      ovemd::FindOvSolver solver;
      if (mom_backend == "oracle")
        solver = ovemd::oracle_findov_solver();
      else if (mom_backend == "sampling")
        solver = ovemd::sampling_findov_solver(ovemd::parse_ratio(alpha), floor_opt,
                                               ovemd::exact_mom_solver());
      else if (mom_backend == "emd")
        solver = ovemd::sampling_findov_solver(ovemd::parse_ratio(alpha), floor_opt,
                                               ovemd::emd_mom_solver());
      else
        throw ovemd::param_error("phased backends: oracle, sampling, emd");
      auto [verdict, trace] = ovemd::hitting_set_phased(p, solver, seed);
      j["verdict"] = verdict_name(verdict);
      j["trace"] = trace_to_json(trace);
      if (!trace_path.empty()) write_trace_csv(trace_path, trace);
    } else if (algo == "promise") {
      auto verdict = ovemd::hs_via_promise_findov(p, ovemd::parse_ratio(epsilon), seed,
                                                  ovemd::scan_promise_solver());
      j["verdict"] = verdict_name(verdict);
    } else {
      throw ovemd::param_error("hs solvers: oracle, phased, promise");
    }
    emit(j, out_path);
  });

  auto* s_fov = solve->add_subcommand("find-ov", "find orthogonal lefts (oracle | sampling)");
  add_common(s_fov, true);
  s_fov->add_option("--alpha", alpha, "sampling exponent (p/q)");
  s_fov->add_option("--mom", mom_backend, "sampling backend: exact | emd");
  s_fov->add_option("--floor", floor_opt, "brute-force floor");
  s_fov->callback([&] {
    ovemd::BinaryPair p = load_binary(in_path);
    ovemd::FindOvResult res;
    if (algo == "oracle") {
      res = ovemd::find_ov_oracle(p);
    } else if (algo == "sampling") {
      ovemd::FindOvConfig cfg;
      cfg.alpha = ovemd::parse_ratio(alpha);
      cfg.seed = static_cast<std::uint64_t>(solve_seed);
      cfg.brute_force_floor = floor_opt;
      res = ovemd::find_ov_sampling(
          p, cfg, mom_backend == "emd" ? ovemd::emd_mom_solver() : ovemd::exact_mom_solver());
    } else {
      throw ovemd::param_error("find-ov solvers: oracle, sampling");
    }
    Json j;
    j["problem"] = "find-ov";
    j["algo"] = algo;
    j["found"] = res.found;
    j["witness"] = res.witness;
    j["missed_budget"] = res.missed_budget;
    emit(j, out_path);
  });

  auto* s_mom = solve->add_subcommand("mom", "maximum orthogonal matching (oracle | emd)");
  add_common(s_mom, true);
  s_mom->callback([&] {
    ovemd::BinaryPair p = load_binary(in_path);
    Json j;
    j["problem"] = "mom";
    j["algo"] = algo;
    std::vector<std::pair<int, int>> pairs;
    if (algo == "oracle") {
      auto res = ovemd::mom_oracle(p);
      pairs = res.orthogonal_pairs;
      j["m_opt"] = res.m_opt;
    } else if (algo == "emd") {
      pairs = ovemd::emd_mom_solver()(p);
      j["m_opt"] = static_cast<int>(pairs.size());
    } else {
      throw ovemd::param_error("mom solvers: oracle, emd");
    }
    Json arr = Json::array();
    for (auto [l, r] : pairs) arr.push_back(Json::array({l, r}));
    j["pairs"] = std::move(arr);
    emit(j, out_path);
  });

  // ---- reduce --------------------------------------------------------------
  auto* reduce = app.add_subcommand("reduce", "build a reduced instance plus sidecar");
  reduce->require_subcommand(1);
  std::string red_in, red_out, red_sidecar, red_k = "1", red_mode = "desk";
  auto add_red_common = [&](CLI::App* cmd) {
    cmd->add_option("--in", red_in, "input instance")->required();
    cmd->add_option("--out", red_out, "reduced instance file")->required();
    cmd->add_option("--sidecar", red_sidecar, "sidecar file")->required();
  };
  auto parse_mode = [&] {
    if (red_mode == "desk") return ovemd::ScaleMode::desk;
    if (red_mode == "paper") return ovemd::ScaleMode::paper;
    throw ovemd::param_error("mode must be desk or paper");
  };

  auto* r_exact = reduce->add_subcommand("exact-emd", "closest pair -> Euclidean matching");
  add_red_common(r_exact);
  r_exact->add_option("--k", red_k, "coordinate-bound exponent (p/q)");
  r_exact->add_option("--mode", red_mode, "desk | paper");
  r_exact->callback([&] {
    auto inst = ovemd::build_exact_reduction(load_integer(red_in), ovemd::parse_ratio(red_k),
                                             parse_mode());
    emit(ovemd::instance_to_json(inst.pair), red_out);
    emit(ovemd::exact_sidecar_to_json(inst, parse_mode()), red_sidecar);
  });

  auto* r_rank = reduce->add_subcommand("lowrank", "closest pair -> low-rank assignment");
  add_red_common(r_rank);
  r_rank->add_option("--k", red_k, "coordinate-bound exponent (p/q)");
  r_rank->add_option("--mode", red_mode, "desk | paper");
  r_rank->callback([&] {
    auto [fact, inst] = ovemd::build_lowrank_assignment(load_integer(red_in),
                                                        ovemd::parse_ratio(red_k), parse_mode());
    emit(ovemd::lowrank_to_json(fact), red_out);
    emit(ovemd::exact_sidecar_to_json(inst, parse_mode()), red_sidecar);
  });

  auto* r_mom = reduce->add_subcommand("mom-gadget", "Boolean pair -> distance gadget");
  add_red_common(r_mom);
  r_mom->callback([&] {
    auto g = ovemd::build_mom_gadget(load_binary(red_in));
    emit(ovemd::instance_to_json(g.pair), red_out);
    emit(ovemd::mom_sidecar_to_json(g), red_sidecar);
  });

  auto* r_sym = reduce->add_subcommand("symmetrize", "injection instance -> bijection instance");
  add_red_common(r_sym);
  r_sym->callback([&] {
    auto s = ovemd::symmetrize(load_binary(red_in));
    emit(ovemd::instance_to_json(s.pair), red_out);
    emit(ovemd::symmetrize_sidecar_to_json(s), red_sidecar);
  });

  // ---- decode --------------------------------------------------------------
  auto* decode = app.add_subcommand("decode", "translate a matching back through a reduction");
  decode->require_subcommand(1);
  std::string dec_matching, dec_sidecar, dec_instance, dec_out;
  auto add_dec_common = [&](CLI::App* cmd, bool with_instance) {
    cmd->add_option("--matching", dec_matching, "matching file")->required();
    cmd->add_option("--sidecar", dec_sidecar, "sidecar file")->required();
    if (with_instance) cmd->add_option("--instance", dec_instance, "reduced instance file")->required();
    cmd->add_option("--out", dec_out, "output file (default stdout)");
  };

  auto* d_exact = decode->add_subcommand("exact-emd", "recover the closest-pair distance");
  add_dec_common(d_exact, false);
  d_exact->callback([&] {
    auto inst = ovemd::exact_sidecar_from_json(ovemd::read_json_file(dec_sidecar));
    auto m = ovemd::matching_from_json(ovemd::read_json_file(dec_matching));
    Json j;
    j["reduction"] = "exact-emd";
    long double lifted = ovemd::recover_closest_pair(m.cost, inst);
    j["lifted_distance"] = ovemd::format_cost(lifted);
    j["distance"] = ovemd::format_cost(lifted / 2.0L);
    emit(j, dec_out);
  });

  auto* d_sym = decode->add_subcommand("symmetrize", "project a bijection to the injection");
  add_dec_common(d_sym, true);
  d_sym->callback([&] {
    Json side = ovemd::read_json_file(dec_sidecar);
    if (side.value("reduction", "") != std::string("symmetrize"))
      throw ovemd::param_error("not a symmetrize sidecar");
    ovemd::SymmetrizedInstance s;
    s.pair = load_binary(dec_instance);
    s.original_left = side.at("original_left").get<int>();
    s.input_dim = side.at("input_dim").get<int>();
    auto m = ovemd::matching_from_json(ovemd::read_json_file(dec_matching));
    auto [projected, report] = ovemd::decode_symmetrized(s, m);
    Json j = ovemd::matching_to_json(projected);
    j["expected_total"] = ovemd::format_cost(report.expected);
    j["relative_deviation"] = ovemd::format_cost(report.rel_dev);
    emit(j, dec_out);
  });

  auto* d_mom = decode->add_subcommand("mom", "read orthogonal pairs off a gadget matching");
  add_dec_common(d_mom, true);
  d_mom->callback([&] {
    Json side = ovemd::read_json_file(dec_sidecar);
    if (side.value("reduction", "") != std::string("mom-gadget"))
      throw ovemd::param_error("not a mom-gadget sidecar");
    ovemd::MomGadget g;
    g.pair = load_binary(dec_instance);
    g.d = side.at("d").get<int>();
    g.a_count = side.at("a_count").get<int>();
    g.b_count = side.at("b_count").get<int>();
    auto m = ovemd::matching_from_json(ovemd::read_json_file(dec_matching));
    auto dec = ovemd::decode_mom(g, m);
    Json j;
    j["reduction"] = "mom-gadget";
    j["orthogonal_count"] = dec.orthogonal_count;
    Json arr = Json::array();
    for (auto [l, r] : dec.orthogonal_pairs) arr.push_back(Json::array({l, r}));
    j["orthogonal_pairs"] = std::move(arr);
    j["assignment"] = dec.assignment;
    emit(j, dec_out);
  });

  // ---- verify --------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "run verification checks");
  std::string verify_name = "all", verify_out;
  int verify_trials = 0;
  std::int64_t verify_seed = 20240817;
  verify->add_option("check", verify_name, "check name or 'all'");
  verify->add_option("--trials", verify_trials, "override trial count (0 = default)");
  verify->add_option("--seed", verify_seed, "verification seed");
  verify->add_option("--out", verify_out, "also write a JSON report here");
  int verify_failures = 0;
  verify->callback([&] {
    Json rows = Json::array();
    auto run_one = [&](const ovemd::CheckEntry& entry) {
      ovemd::VerificationReport rep =
          entry.run(verify_trials > 0 ? verify_trials : entry.default_trials,
                    static_cast<std::uint64_t>(verify_seed));
      verify_failures += rep.failures;
      std::printf("%-26s %s  instances=%d failures=%d max_dev=%.3Lg  %lld ms%s%s\n",
                  rep.check.c_str(), rep.failures == 0 ? "PASS" : "FAIL", rep.instances,
                  rep.failures, rep.max_deviation, rep.runtime_ms, rep.note.empty() ? "" : "  ",
                  rep.note.c_str());
      Json r;
      r["check"] = rep.check;
      r["instances"] = rep.instances;
      r["failures"] = rep.failures;
      r["max_deviation"] = ovemd::format_cost(rep.max_deviation);
      r["runtime_ms"] = rep.runtime_ms;
      r["failing_seeds"] = rep.failing_seeds;
      if (!rep.note.empty()) r["note"] = rep.note;
      rows.push_back(std::move(r));
    };
    bool matched = false;
    for (const auto& entry : ovemd::verification_checks()) {
      if (verify_name == "all" || verify_name == entry.name) {
        matched = true;
        run_one(entry);
      }
    }
    if (!matched) throw ovemd::param_error("unknown check: " + verify_name);
    if (!verify_out.empty()) ovemd::write_json_file(verify_out, rows);
  });

  // ---- pipeline ------------------------------------------------------------
  auto* pipe = app.add_subcommand("pipeline", "hitting set through the full geometric chain");
  std::string pipe_in, pipe_out, pipe_trace;
  std::int64_t pipe_seed = 0;
  int pipe_floor = 8;
  pipe->add_option("--in", pipe_in, "binary instance")->required();
  pipe->add_option("--seed", pipe_seed, "pipeline seed");
  pipe->add_option("--floor", pipe_floor, "brute-force floor inside Find-OV");
  pipe->add_option("--trace", pipe_trace, "write phase trace CSV here");
  pipe->add_option("--out", pipe_out, "output file (default stdout)");
  pipe->callback([&] {
    ovemd::BinaryPair p = load_binary(pipe_in);
    auto res = ovemd::pipeline_hs_via_emd(p, static_cast<std::uint64_t>(pipe_seed), pipe_floor);
    Json j;
    j["problem"] = "hs";
    j["algo"] = "pipeline-emd";
    j["verdict"] = verdict_name(res.verdict);
    j["trace"] = trace_to_json(res.trace);
    if (!pipe_trace.empty()) write_trace_csv(pipe_trace, res.trace);
    emit(j, pipe_out);
  });

  // ---- bench ---------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "timing table for the main solvers");
  std::string bench_out;
  std::int64_t bench_seed = 1;
  bench->add_option("--out", bench_out, "CSV output (default stdout)");
  bench->add_option("--seed", bench_seed, "bench seed");
  bench->callback([&] {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!bench_out.empty()) {
      file.open(bench_out);
      if (!file) throw ovemd::param_error("cannot open for writing: " + bench_out);
      os = &file;
    }
    *os << "op,n,d,ms\n";
    auto time_one = [&](const char* op, int n, int d, auto&& fn) {
      ovemd::detail::Timer timer;
      fn();
      *os << op << ',' << n << ',' << d << ',' << timer.ms() << '\n';
    };
    for (int n : {8, 16, 32, 64}) {
      ovemd::GeneratorSpec spec;
      spec.family = "clustered-integer";
      spec.n = n;
      spec.d = 4;
      spec.coord_bound = 64;
      spec.seed = static_cast<std::uint64_t>(bench_seed) + n;
      ovemd::IntPair p = std::get<ovemd::IntPair>(ovemd::generate(spec));
      time_one("emd", n, 4, [&] { ovemd::emd(p); });
      time_one("sqemd", n, 4, [&] { ovemd::sqemd(p); });
    }
    for (int n : {4, 8}) {
      ovemd::GeneratorSpec spec;
      spec.n = n;
      spec.d = 6;
      spec.seed = static_cast<std::uint64_t>(bench_seed) + 100 + n;
      ovemd::BinaryPair p = std::get<ovemd::BinaryPair>(ovemd::generate(spec));
      time_one("mom-oracle", n, 6, [&] { ovemd::mom_oracle(p); });
      time_one("mom-emd", n, 6, [&] { ovemd::emd_mom_solver()(p); });
    }
    for (int n : {64, 128, 256}) {
      ovemd::GeneratorSpec spec;
      spec.family = "planted-orthogonal";
      spec.n = n;
      spec.d = 32;
      spec.planted_count = 8;
      spec.seed = static_cast<std::uint64_t>(bench_seed) + 200 + n;
      ovemd::BinaryPair p = std::get<ovemd::BinaryPair>(ovemd::generate(spec));
      time_one("find-ov-sampling", n, 32, [&] {
        ovemd::FindOvConfig cfg;
        cfg.seed = 7;
        ovemd::find_ov_sampling(p, cfg, ovemd::exact_mom_solver());
      });
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints the message or the help text
    return code == 0 ? 0 : 2;
  }
  return verify_failures > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ovemd::internal_error& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 3;
  } catch (const ovemd::inconsistency_error& e) {
    std::cerr << "inconsistency: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
