#include <atomic>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hcwalk/embedded.hpp"
#include "hcwalk/environment.hpp"
#include "hcwalk/errors.hpp"
#include "hcwalk/experiments.hpp"
#include "hcwalk/io.hpp"
#include "hcwalk/lattice_walk.hpp"
#include "hcwalk/oracle.hpp"
#include "hcwalk/skeleton.hpp"

namespace {

using hcwalk::EnvironmentSpec;
using hcwalk::Error;
using hcwalk::ErrorCode;
namespace io = hcwalk::io;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError:
      return 3;
    case ErrorCode::ResourceLimit:
      return 4;
    default:
      return 2;
  }
}

std::vector<int> parse_f(const std::string& s) {
  std::vector<int> f;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "+1" || tok == "1")
      f.push_back(+1);
    else if (tok == "-1")
      f.push_back(-1);
    else
      throw Error(ErrorCode::ConfigError, "f entries must be +1 or -1, got '" + tok + "'");
  }
  return f;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-")
    std::cout << content;
  else
    io::write_file(out_path, content);
}

// Fixed-order deterministic parallel map: results land in a vector indexed by
// task, regardless of worker count.
template <typename Fn>
void parallel_for(int64_t n_tasks, int workers, Fn&& fn) {
  if (workers <= 1 || n_tasks <= 1) {
    for (int64_t i = 0; i < n_tasks; ++i) fn(i);
    return;
  }
  std::atomic<int64_t> next{0};
  std::vector<std::thread> pool;
  const int n_threads = static_cast<int>(
      std::min<int64_t>(workers, n_tasks));
  pool.reserve(static_cast<size_t>(n_threads));
  for (int w = 0; w < n_threads; ++w)
    pool.emplace_back([&] {
      for (int64_t i = next.fetch_add(1); i < n_tasks; i = next.fetch_add(1))
        fn(i);
    });
  for (auto& t : pool) t.join();
}

struct EnvArgs {
  bool rademacher = false, periodic = false, perturbed = false;
  int64_t q = 0;
  std::string f_str;
  uint64_t seed = 0;
  double c = 0.0, beta = 1.0;
  std::string out, materialize, materialize_out = "env_materialized.csv";
};

int cmd_env(const EnvArgs& a, const std::string& cmdline) {
  EnvironmentSpec spec;
  if (a.rademacher)
    spec = EnvironmentSpec::rademacher(a.seed);
  else if (a.periodic)
    spec = EnvironmentSpec::periodic(a.q, parse_f(a.f_str));
  else if (a.perturbed) {
    auto f = a.f_str.empty() ? std::vector<int>{+1, -1} : parse_f(a.f_str);
    const int64_t q = a.q > 0 ? a.q : static_cast<int64_t>(f.size());
    spec = EnvironmentSpec::perturbed(q, f, a.c, a.beta, a.seed);
  } else
    throw Error(ErrorCode::ConfigError,
                "choose one of --rademacher/--periodic/--perturbed");
  hcwalk::validate(spec);

  nlohmann::json j = io::env_to_json(spec);
  const auto manifest = io::RunManifest::make("env", j.dump(), a.seed);
  j["manifest"] = manifest.to_json();
  emit(a.out, j.dump(2) + "\n");

  if (!a.materialize.empty()) {
    const auto colon = a.materialize.find(':');
    if (colon == std::string::npos)
      throw Error(ErrorCode::ConfigError, "--materialize wants lo:hi");
    const int64_t lo = std::stoll(a.materialize.substr(0, colon));
    const int64_t hi = std::stoll(a.materialize.substr(colon + 1));
    const auto mat = hcwalk::materialize(spec, lo, hi);
    std::ostringstream csv;
    csv << manifest.csv_comment() << "y,orientation\n";
    for (int64_t y = lo; y <= hi; ++y) csv << y << "," << mat.at(y) << "\n";
    csv << "# digest: " << hcwalk::to_hex(mat.digest) << "\n";
    emit(a.materialize_out, csv.str());
  }
  return 0;
}

struct SimArgs {
  std::string env_path;
  double steps = 1e6;
  int64_t walks = 1;
  uint64_t seed = 0;
  int workers = 1;
  std::string out;
};

int cmd_simulate(const SimArgs& a) {
  const auto spec = io::env_from_json(nlohmann::json::parse(io::read_file(a.env_path)));
  const int64_t n_steps = static_cast<int64_t>(a.steps);
  const auto manifest = io::RunManifest::make(
      "simulate", io::env_to_json(spec).dump() + "|steps=" +
                      std::to_string(n_steps) + "|walks=" + std::to_string(a.walks),
      a.seed);
  std::vector<std::string> lines(static_cast<size_t>(a.walks));
  parallel_for(a.walks, a.workers, [&](int64_t i) {
    const uint64_t walk_seed = hcwalk::rng::keyed(a.seed, static_cast<uint64_t>(i));
    const auto trace = hcwalk::lattice::simulate_walk(spec, n_steps, walk_seed);
    nlohmann::json j{{"task", i},
                     {"seed", walk_seed},
                     {"n_steps", trace.n_steps},
                     {"n_returns", trace.n_returns},
                     {"first_return", trace.first_return},
                     {"n_vertical", trace.n_vertical}};
    lines[static_cast<size_t>(i)] = j.dump();
  });
  std::ostringstream out;
  out << nlohmann::json{{"manifest", manifest.to_json()}}.dump() << "\n";
  for (const auto& l : lines) out << l << "\n";
  emit(a.out, out.str());
  return 0;
}

struct ExactArgs {
  std::string what, env_path, f_str;
  int64_t n = 1, q = 2, t_max = 16;
  double tail_tol = 1e-12;
  std::string out;
};

int cmd_exact(const ExactArgs& a) {
  std::ostringstream csv;
  const auto manifest = io::RunManifest::make(
      "exact --what " + a.what, a.what + "|n=" + std::to_string(a.n), 0);
  csv << manifest.csv_comment();
  if (a.what == "yreturn") {
    csv << "n,p_exact,sqrt_n_times_p\n";
    for (int64_t n = 1; n <= a.n; ++n) {
      const double p = hcwalk::skeleton::return_prob_exact(n);
      csv << n << "," << io::format_double(p) << ","
          << io::format_double(std::sqrt(static_cast<double>(n)) * p) << "\n";
    }
  } else if (a.what == "wbar") {
    const auto f = a.f_str.empty()
                       ? [&] {
                           std::vector<int> v(static_cast<size_t>(a.q));
                           for (size_t i = 0; i < v.size(); ++i)
                             v[i] = i % 2 == 0 ? +1 : -1;
                           return v;
                         }()
                       : parse_f(a.f_str);
    const auto law = hcwalk::oracle::wbar_distribution_exact(a.q, f, a.n);
    const auto law1 = hcwalk::oracle::wbar_distribution_exact(a.q, f, a.n + 1);
    hcwalk::oracle::WbarDistribution avg{a.q, law.mass};
    for (size_t i = 0; i < avg.mass.size(); ++i)
      avg.mass[i] = 0.5 * (law.mass[i] + law1.mass[i]);
    const double tv =
        hcwalk::oracle::total_variation(avg, hcwalk::oracle::wbar_stationary(a.q));
    csv << "Q,n,tv_to_pi\n"
        << a.q << "," << a.n << "," << io::format_double(tv) << "\n";
  } else if (a.what == "pn") {
    const auto spec =
        io::env_from_json(nlohmann::json::parse(io::read_file(a.env_path)));
    const auto r = hcwalk::oracle::joint_pn_exact(spec, a.n, a.tail_tol);
    csv << "n,p_n,deficit\n"
        << a.n << "," << io::format_double(r.p_n) << ","
        << io::format_double(r.deficit) << "\n";
  } else if (a.what == "fullwalk") {
    const auto spec =
        io::env_from_json(nlohmann::json::parse(io::read_file(a.env_path)));
    const auto ps = hcwalk::oracle::full_walk_distribution(spec, a.t_max);
    csv << "t,p_at_origin\n";
    for (size_t t = 0; t < ps.size(); ++t)
      csv << t << "," << io::format_double(ps[t]) << "\n";
  } else
    throw Error(ErrorCode::ConfigError,
                "--what must be pn|yreturn|wbar|fullwalk");
  emit(a.out, csv.str());
  return 0;
}

struct ExperimentArgs {
  std::string config_path, out, summary_out;
  int workers = 1;
};

int cmd_experiment(const ExperimentArgs& a) {
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(io::read_file(a.config_path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("config parse: ") + e.what());
  }
  const auto need = [&](const char* field) -> const nlohmann::json& {
    if (!cfg.contains(field))
      throw Error(ErrorCode::ConfigError, std::string("missing field: ") + field);
    return cfg.at(field);
  };
  const auto manifest =
      io::RunManifest::make("experiment", cfg.dump(),
                            cfg.value("seed", uint64_t{0}));
  const std::string mode = cfg.value("mode", std::string("recurrence"));
  nlohmann::json summary{{"manifest", manifest.to_json()}, {"mode", mode}};

  if (mode == "recurrence") {
    const auto base_spec = io::env_from_json(need("environment"));
    std::vector<int64_t> n_grid;
    try {
      n_grid = need("n_grid").get<std::vector<int64_t>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ConfigError, std::string("n_grid: ") + e.what());
    }
    const std::string method_s = cfg.value("method", std::string("exact"));
    const auto method = method_s == "mc"
                            ? hcwalk::experiments::Method::MonteCarlo
                            : hcwalk::experiments::Method::ExactDP;
    const int64_t mc_samples = cfg.value("mc_samples", int64_t{200000});
    std::vector<uint64_t> seeds =
        cfg.contains("seeds") ? cfg.at("seeds").get<std::vector<uint64_t>>()
                              : std::vector<uint64_t>{cfg.value("seed", uint64_t{0})};
    std::vector<hcwalk::experiments::RecurrenceDiagnostic> diags(seeds.size());
    parallel_for(static_cast<int64_t>(seeds.size()), a.workers, [&](int64_t i) {
      auto spec = base_spec;
      if (spec.regime != hcwalk::Regime::Periodic)
        spec.seed = seeds[static_cast<size_t>(i)];
      diags[static_cast<size_t>(i)] = hcwalk::experiments::recurrence_diagnostic(
          spec, n_grid, method, seeds[static_cast<size_t>(i)], mc_samples);
    });
    std::ostringstream csv;
    csv << manifest.csv_comment() << "n,p,stderr,method,env_digest\n";
    nlohmann::json per_seed = nlohmann::json::array();
    std::vector<double> exps;
    for (size_t si = 0; si < seeds.size(); ++si) {
      auto spec = base_spec;
      if (spec.regime != hcwalk::Regime::Periodic) spec.seed = seeds[si];
      const std::string digest = hcwalk::to_hex(hcwalk::spec_digest(spec));
      for (const auto& row : diags[si].rows)
        csv << row.n << "," << io::format_double(row.p) << ","
            << io::format_double(row.stderr_p) << "," << method_s << ","
            << digest << "\n";
      per_seed.push_back({{"seed", seeds[si]},
                          {"exponent", diags[si].exponent},
                          {"ci_low", diags[si].ci_low},
                          {"ci_high", diags[si].ci_high}});
      exps.push_back(diags[si].exponent);
    }
    std::sort(exps.begin(), exps.end());
    const double median = exps.size() % 2 == 1
                              ? exps[exps.size() / 2]
                              : 0.5 * (exps[exps.size() / 2 - 1] + exps[exps.size() / 2]);
    summary["per_seed"] = per_seed;
    summary["median_exponent"] = median;
    emit(a.out, csv.str());
  } else if (mode == "conditional_s") {
    const int64_t q = need("Q").get<int64_t>();
    const auto f = need("f").get<std::vector<int>>();
    const auto r = hcwalk::experiments::conditional_s_probability(
        q, f, need("n").get<int64_t>(), cfg.value("C", 4.0),
        cfg.value("n_samples", int64_t{100000}), cfg.value("seed", uint64_t{0}));
    summary["estimate"] = r.estimate;
    summary["stderr"] = r.stderr_p;
    summary["z_acceptance_rate"] = r.z_acceptance_rate;
    summary["n_accepted"] = r.n_accepted;
  } else
    throw Error(ErrorCode::ConfigError, "mode must be recurrence|conditional_s");
  emit(a.summary_out, summary.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Honeycomb-lattice walk toolkit"};
  app.require_subcommand(1);

  EnvArgs ea;
  auto* env = app.add_subcommand("env", "Write an environment description");
  env->add_flag("--rademacher", ea.rademacher);
  env->add_flag("--periodic", ea.periodic);
  env->add_flag("--perturbed", ea.perturbed);
  env->add_option("--Q", ea.q);
  env->add_option("--f", ea.f_str);
  env->add_option("--seed", ea.seed);
  env->add_option("--c", ea.c);
  env->add_option("--beta", ea.beta);
  env->add_option("--out", ea.out);
  env->add_option("--materialize", ea.materialize);
  env->add_option("--materialize-out", ea.materialize_out);

  SimArgs sa;
  auto* sim = app.add_subcommand("simulate", "Run independent walk traces");
  sim->add_option("--env", sa.env_path)->required();
  sim->add_option("--steps", sa.steps);
  sim->add_option("--walks", sa.walks);
  sim->add_option("--seed", sa.seed);
  sim->add_option("--workers", sa.workers);
  sim->add_option("--out", sa.out);

  ExactArgs xa;
  auto* exact = app.add_subcommand("exact", "Exact distribution tables");
  exact->add_option("--what", xa.what)->required();
  exact->add_option("--env", xa.env_path);
  exact->add_option("--n", xa.n);
  exact->add_option("--Q", xa.q);
  exact->add_option("--f", xa.f_str);
  exact->add_option("--tmax", xa.t_max);
  exact->add_option("--tail-tol", xa.tail_tol);
  exact->add_option("--out", xa.out);

  ExperimentArgs pa;
  auto* exp = app.add_subcommand("experiment", "Batch diagnostics from a config");
  exp->add_option("--config", pa.config_path)->required();
  exp->add_option("--out", pa.out);
  exp->add_option("--summary-out", pa.summary_out);
  exp->add_option("--workers", pa.workers);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*env) return cmd_env(ea, "env");
    if (*sim) return cmd_simulate(sa);
    if (*exact) return cmd_exact(xa);
    if (*exp) return cmd_experiment(pa);
  } catch (const Error& e) {
    std::cerr << "error: " << hcwalk::to_string(e.code()) << ": " << e.what()
              << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
