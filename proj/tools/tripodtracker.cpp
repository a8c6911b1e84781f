#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tripod/generator.hpp"
#include "tripod/harness.hpp"
#include "tripod/io.hpp"
#include "tripod/metric.hpp"
#include "tripod/offline.hpp"
#include "tripod/potential.hpp"
#include "tripod/simulator.hpp"

using namespace tripod;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;

template <class S>
int do_run(const std::string& file, const std::string& eps,
           const std::string& trace_out) {
  auto m = load_instance<S>(file);
  auto rep = validate_metric(m);
  if (!rep.ok()) {
    for (const auto& v : rep.violations)
      std::fprintf(stderr, "%s\n", v.describe().c_str());
    return kExitInput;
  }
  auto c = AlgoConstants<S>::from_epsilon(S::parse(eps));
  AugmentedMetric<S> am(m);
  Simulator<S> sim(am, c);
  auto res = sim.run();
  std::printf("requests: %zu\n", res.traces.size());
  std::printf("simulated_cost: %s\n", res.simulated_cost.str().c_str());
  std::printf("realized_cost: %s\n", res.realized_cost.str().c_str());
  for (const auto& tr : res.traces)
    std::printf("  t=%zu r=%zu s=%zu server=%d cost=%s segments=%zu\n",
                tr.index, tr.r, tr.s, tr.server, tr.cost.str().c_str(),
                tr.segments.size());
  if (!trace_out.empty())
    write_file(trace_out, run_to_json(res).dump(2) + "\n");
  return kExitOk;
}

template <class S>
int do_audit(const std::string& file, const std::string& eps,
             const std::string& kappa_arg, const std::string& report_out) {
  auto m = load_instance<S>(file);
  auto rep = validate_metric(m);
  if (!rep.ok()) {
    for (const auto& v : rep.violations)
      std::fprintf(stderr, "%s\n", v.describe().c_str());
    return kExitInput;
  }
  auto c = AlgoConstants<S>::from_epsilon(S::parse(eps));
  S kappa = kappa_arg.empty() ? default_kappa(c) : S::parse(kappa_arg);
  AugmentedMetric<S> am(m);
  Simulator<S> sim(am, c);
  auto res = sim.run();
  OfflineSolver<S> solver(m);
  auto sched = solver.opt_dp();
  Auditor<S> auditor(am, c, kappa);
  auto audit = auditor.audit_run(res, sched);
  std::printf("cost: %s\nopt: %s\n", res.simulated_cost.str().c_str(),
              sched.total.str().c_str());
  if (audit.max_min_kappa)
    std::printf("max_min_kappa: %s\n", audit.max_min_kappa->str().c_str());
  std::size_t bad = 0;
  for (const auto& row : audit.rows)
    if (!row.all_pass()) ++bad;
  std::printf("audit: %s (%zu/%zu requests violated)\n",
              audit.all_pass ? "pass" : "FAIL", bad, audit.rows.size());
  if (!report_out.empty())
    write_file(report_out, audit_to_json(audit).dump(2) + "\n");
  return audit.all_pass ? kExitOk : kExitViolation;
}

int do_bench(const std::string& spec_file) {
  std::ifstream in(spec_file);
  if (!in) throw InputError("cannot open bench spec: " + spec_file);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError(std::string("bench spec parse error: ") + e.what());
  }
  auto c = AlgoConstants<Rat>::from_epsilon(
      Rat::parse(j.value("epsilon", "1/100")));
  Rat kappa = j.contains("kappa") ? Rat::parse(j.at("kappa").get<std::string>())
                                  : default_kappa(c);
  std::vector<MetricInstance<Rat>> ms;
  for (const auto& g : j.at("instances")) {
    GeneratorSpec spec;
    spec.family = family_from_string(g.value("family", "line"));
    spec.n = g.value("n", std::size_t(6));
    spec.T = g.value("T", std::size_t(5));
    spec.seed = g.value("seed", std::uint64_t(0));
    spec.range = g.value("range", 20L);
    spec.dim = g.value("dim", std::size_t(2));
    spec.norm = g.value("norm", "l1");
    ms.push_back(generate<Rat>(spec));
  }
  auto res = run_experiment(ms, c, kappa);
  std::fputs(experiment_report(res).c_str(), stdout);
  return res.failures == 0 && res.violations == 0 ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TripodTracker: 3-taxi online algorithm, offline optimum and "
               "potential audit"};
  app.require_subcommand(1);

  std::string file, eps = "1/100", mode = "rational";
  std::string trace_out, kappa_arg, report_out, spec_file, out_file;
  bool brute = false;

  auto* validate = app.add_subcommand("validate", "check a metric instance");
  validate->add_option("file", file)->required();

  auto* run = app.add_subcommand("run", "simulate the online algorithm");
  run->add_option("file", file)->required();
  run->add_option("--epsilon", eps, "speed/potential knob in (0,1)");
  run->add_option("--mode", mode)->check(CLI::IsMember({"rational", "float"}));
  run->add_option("--trace", trace_out, "write the full trace document");

  auto* opt = app.add_subcommand("opt", "offline optimum");
  opt->add_option("file", file)->required();
  opt->add_flag("--brute", brute, "cross-check against full enumeration");

  auto* audit = app.add_subcommand("audit", "verify potential inequalities");
  audit->add_option("file", file)->required();
  audit->add_option("--epsilon", eps);
  audit->add_option("--mode", mode)->check(CLI::IsMember({"rational", "float"}));
  audit->add_option("--kappa", kappa_arg, "aggregate ratio bound");
  audit->add_option("--report", report_out, "write the audit document");

  auto* gen = app.add_subcommand("gen", "generate an instance");
  std::string family = "line", norm = "l1";
  std::size_t n = 6, T = 5, dim = 2;
  std::uint64_t seed = 0;
  long range = 20;
  gen->add_option("--family", family)
      ->check(CLI::IsMember({"line", "euclidean", "graph", "ultrametric",
                             "adversarial-cycle"}));
  gen->add_option("--n", n);
  gen->add_option("--T", T);
  gen->add_option("--seed", seed);
  gen->add_option("--range", range);
  gen->add_option("--dim", dim);
  gen->add_option("--norm", norm)->check(CLI::IsMember({"l1", "l2", "linf"}));
  gen->add_option("-o,--output", out_file);

  auto* bench = app.add_subcommand("bench", "run a generated instance batch");
  bench->add_option("--spec", spec_file)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) {
      auto m = load_instance<Rat>(file);
      auto rep = validate_metric(m);
      if (rep.ok()) {
        std::printf("ok: %zu points, %zu requests\n", m.size(),
                    m.requests.size());
        return kExitOk;
      }
      for (const auto& v : rep.violations)
        std::printf("%s\n", v.describe().c_str());
      return kExitInput;
    }
    if (run->parsed())
      return mode == "float" ? do_run<Fp>(file, eps, trace_out)
                             : do_run<Rat>(file, eps, trace_out);
    if (opt->parsed()) {
      auto m = load_instance<Rat>(file);
      auto rep = validate_metric(m);
      if (!rep.ok()) {
        for (const auto& v : rep.violations)
          std::fprintf(stderr, "%s\n", v.describe().c_str());
        return kExitInput;
      }
      OfflineSolver<Rat> solver(m);
      auto sched = solver.opt_dp();
      std::fputs(schedule_to_json(sched).dump(2).c_str(), stdout);
      std::fputs("\n", stdout);
      if (brute) {
        OfflineSolver<Rat> check(m);
        if (check.opt_bruteforce() != sched.total) {
          std::fprintf(stderr, "dp and brute force disagree\n");
          return kExitViolation;
        }
        std::printf("brute force agrees\n");
      }
      return kExitOk;
    }
    if (audit->parsed())
      return mode == "float" ? do_audit<Fp>(file, eps, kappa_arg, report_out)
                             : do_audit<Rat>(file, eps, kappa_arg, report_out);
    if (gen->parsed()) {
      GeneratorSpec spec;
      spec.family = family_from_string(family);
      spec.n = n;
      spec.T = T;
      spec.seed = seed;
      spec.range = range;
      spec.dim = dim;
      spec.norm = norm;
      auto m = generate<Rat>(spec);
      std::string bytes = instance_to_json(m).dump(2) + "\n";
      if (out_file.empty())
        std::fputs(bytes.c_str(), stdout);
      else
        write_file(out_file, bytes);
      return kExitOk;
    }
    if (bench->parsed()) return do_bench(spec_file);
  } catch (const InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInput;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitViolation;
  }
  return kExitInput;
}
