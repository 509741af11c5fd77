// Copyright 2026 The QSSP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qssp/cli.hpp"
#include "qssp/parallel.hpp"
#include "qssp/sweep.hpp"

namespace qssp::cli {

namespace {

struct Options {
  std::string model;
  double theta = 0.0;
  double phi = 0.0;
  std::string povm;
  std::size_t n = 0;
  std::size_t n_phi = 1;
  std::vector<double> anchors;
  std::size_t length = 1'000'000;
  std::size_t burn_in = 10'000;
  std::size_t sample = 2'000'000;
  std::uint64_t seed = 0;
  double merge_tol = 1e-9;
  std::size_t max_states = 10'000;
  double eps_min = 0x1p-12;
  double eps_max = 0x1p-3;
  std::string objective = "max-hmu";
  std::size_t budget = 200;
  std::string out;
  unsigned jobs = default_jobs();
};

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

class Runner {
 public:
  Runner(std::string subcommand, Options& o, bool seed_given, std::ostream& out, std::ostream& err)
      : o_(o), out_(out), err_(err) {
    manifest_.subcommand = std::move(subcommand);
    if (!seed_given)
      if (const char* env = std::getenv("QSSP_SEED")) {
        try {
          o_.seed = std::stoull(env);
        } catch (const std::exception&) {
          throw Error(ErrorCode::InvalidArgument, "QSSP_SEED is not an unsigned integer", env);
        }
      }
    manifest_.seed = o_.seed;
    manifest_.config["seed"] = o_.seed;
    manifest_.config["jobs"] = o_.jobs;
  }

  Model model() {
    if (o_.model.empty()) throw Error(ErrorCode::InvalidArgument, "--model is required");
    manifest_.inputs.emplace_back(o_.model);
    manifest_.config["model"] = o_.model;
    return load_model(o_.model);
  }

  // Measured machine for quantum models, the model itself for classical ones.
  LabeledHMC machine(const Model& m) {
    if (!m.is_quantum()) {
      validate(m.hmc).throw_if_invalid();
      return m.hmc;
    }
    return measure(m).hmc;
  }

  MeasuredHMC measure(const Model& m) {
    const CCQS source = m.source();
    validate_source(source);
    Provenance prov{m.name, "", {}};
    if (o_.povm.empty()) {
      manifest_.config["measurement"] = {{"kind", "projective"}, {"theta", o_.theta}, {"phi", o_.phi}};
      prov.measurement = "projective";
      prov.parameters = {{"theta", o_.theta}, {"phi", o_.phi}};
      return derive_measured_hmc(source, projective_basis(o_.theta, o_.phi), prov);
    }
    const auto& q = source.quantum_alphabet;
    std::vector<std::size_t> distinct;
    for (std::size_t i = 0; i < q.size(); ++i)
      if (std::none_of(distinct.begin(), distinct.end(), [&](std::size_t d) { return q[d].same_state(q[i]); }))
        distinct.push_back(i);
    if (distinct.size() != 2)
      throw Error(ErrorCode::InvalidArgument, "--povm needs exactly two distinct quantum states");
    const QubitPureState& a = q[distinct[0]];
    const QubitPureState& b = q[distinct[1]];
    if (o_.povm == "usd") {
      manifest_.config["measurement"] = {{"kind", "povm"}, {"name", "usd"}};
      prov.measurement = "usd";
      return derive_measured_hmc(source, usd_povm(a, b), prov);
    }
    if (o_.povm == "memoryless") {
      const BlochAngles ang = memoryless_angles(a, b);
      manifest_.config["measurement"] = {{"kind", "projective"}, {"name", "memoryless"},
                                         {"theta", ang.theta}, {"phi", ang.phi}};
      prov.measurement = "projective";
      prov.parameters = {{"theta", ang.theta}, {"phi", ang.phi}};
      return derive_measured_hmc(source, projective_basis(ang.theta, ang.phi), prov);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown --povm value", o_.povm);
  }

  MspOptions msp_options() {
    manifest_.config["merge_tol"] = o_.merge_tol;
    manifest_.config["max_states"] = o_.max_states;
    manifest_.config["mass_threshold"] = MspOptions{}.mass_threshold;
    MspOptions opts;
    opts.merge_tol = o_.merge_tol;
    opts.max_states = o_.max_states;
    return opts;
  }

  EstimatorConfig estimator() {
    EstimatorConfig c;
    c.length = o_.length;
    c.burn_in = o_.burn_in;
    c.sample = o_.sample;
    c.seed = o_.seed;
    c.msp = msp_options();
    c.eps = eps_grid(o_.eps_max, o_.eps_min);
    c.jobs = o_.jobs;
    manifest_.config["length"] = c.length;
    manifest_.config["burn_in"] = c.burn_in;
    manifest_.config["sample"] = c.sample;
    manifest_.config["eps_max"] = o_.eps_max;
    manifest_.config["eps_min"] = o_.eps_min;
    manifest_.config["eps_points"] = c.eps.size();
    return c;
  }

  Json& config() { return manifest_.config; }

  void emit(const std::string& body, const std::string& summary = {}) {
    const Json manifest = manifest_.to_json();
    if (o_.out.empty()) {
      out_ << body;
      if (!summary.empty()) err_ << summary << "\n";
      err_ << manifest.dump() << "\n";
      return;
    }
    write_file(o_.out, body);
    write_file(o_.out + ".manifest.json", pretty(manifest));
    if (!summary.empty()) out_ << summary << "\n";
  }

 private:
  static void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::InputError, "cannot write file", path);
    f << text;
  }

  Options& o_;
  std::ostream& out_;
  std::ostream& err_;
  RunManifest manifest_;
};

void cmd_validate(Runner& r) {
  const Model m = r.model();
  std::vector<std::string> warnings;
  if (m.is_quantum())
    warnings = validate_source(m.source());
  else
    validate(m.hmc).throw_if_invalid();
  const Json j = {{"valid", true},
                  {"name", m.name},
                  {"states", m.hmc.num_states()},
                  {"alphabet", m.hmc.alphabet_size()},
                  {"quantum", m.is_quantum()},
                  {"unifilar", unifilarity(m.hmc).unifilar},
                  {"stationary", m.hmc.stationary()},
                  {"warnings", warnings}};
  r.emit(pretty(j));
}

void cmd_measure(Runner& r) {
  const Model m = r.model();
  if (!m.is_quantum()) throw Error(ErrorCode::InvalidArgument, "measure needs a model with a quantum alphabet");
  const MeasuredHMC measured = r.measure(m);
  const UnifilarityReport u = unifilarity(measured.hmc);
  r.emit(pretty(measured_to_json(measured)), std::string("unifilar=") + (u.unifilar ? "true" : "false"));
}

void cmd_msp(Runner& r, const Options& o, bool sampling) {
  const Model m = r.model();
  const LabeledHMC hmc = r.machine(m);
  if (sampling) {
    r.config()["sample"] = o.sample;
    r.config()["burn_in"] = o.burn_in;
    const BeliefTrajectory traj = sample_blackwell(hmc, o.sample, o.burn_in, o.seed);
    std::string body = "symbol";
    for (const auto& s : hmc.states()) body += "," + s;
    body += "\n";
    char buf[64];
    for (std::size_t t = 0; t < traj.size(); ++t) {
      body += hmc.alphabet()[traj.symbols[t]];
      for (double v : traj.belief(t)) {
        std::snprintf(buf, sizeof buf, ",%.17g", v);
        body += buf;
      }
      body += "\n";
    }
    r.emit(body);
    return;
  }
  const MixedStatePresentation msp = build_msp(hmc, r.msp_options());
  const std::string summary = "kind=" + std::string(to_string(msp.kind)) + ", states=" +
                              std::to_string(msp.size()) + ", leak=" + fmt6(msp.truncation_mass);
  r.emit(pretty(msp_to_json(msp)), summary);
}

void cmd_metrics(Runner& r) {
  const Model m = r.model();
  const LabeledHMC hmc = r.machine(m);
  const EstimatorConfig e = r.estimator();
  MetricsConfig c;
  c.length = e.length;
  c.burn_in = e.burn_in;
  c.sample = e.sample;
  c.seed = e.seed;
  c.msp = e.msp;
  c.eps = e.eps;
  const MetricsReport rep = compute_metrics(hmc, c);
  std::string summary = "hmu=" + fmt6(rep.hmu) + " cmu=" + (rep.cmu ? fmt6(*rep.cmu) : "divergent") +
                        " dmu=" + fmt6(rep.dmu) + " class=" + std::string(to_string(rep.cardinality));
  r.emit(pretty(metrics_to_json(rep)), summary);
}

void cmd_sweep(Runner& r, Options& o) {
  const Model m = r.model();
  const CCQS source = m.source();
  validate_source(source);
  if (o.n == 0) o.n = 300;
  const EstimatorConfig e = r.estimator();
  r.config()["n"] = o.n;
  r.config()["n_phi"] = o.n_phi;
  r.config()["phi"] = o.phi;
  r.config()["anchors"] = o.anchors;
  const SweepResult res =
      o.n_phi > 1 ? sweep_grid(source, o.n, o.n_phi, e) : sweep_theta(source, o.phi, o.n, e, o.anchors);
  std::size_t errors = 0;
  for (const auto& row : res.rows) errors += row.error.has_value();
  r.emit(sweep_csv(res), "rows=" + std::to_string(res.rows.size()) + " errors=" + std::to_string(errors) +
                             " baseline_hmu=" + fmt6(res.baseline.hmu) + " baseline_cmu=" + fmt6(res.baseline.cmu));
}

Json row_json(const SweepRow& row) {
  return {{"theta", row.theta},
          {"phi", row.phi},
          {"hmu", row.hmu},
          {"hmu_stderr", row.hmu_stderr},
          {"structure_metric", row.structure_metric},
          {"structure_value", row.structure_value},
          {"msp_kind", row.msp_kind},
          {"error", row.error ? Json(*row.error) : Json(nullptr)}};
}

void cmd_optimize(Runner& r, const Options& o) {
  const Model m = r.model();
  const CCQS source = m.source();
  validate_source(source);
  Objective obj;
  if (o.objective == "max-hmu")
    obj = Objective::MaxHmu;
  else if (o.objective == "min-structure")
    obj = Objective::MinStructure;
  else
    throw Error(ErrorCode::InvalidArgument, "objective must be max-hmu or min-structure", o.objective);
  const EstimatorConfig e = r.estimator();
  r.config()["objective"] = o.objective;
  r.config()["budget"] = o.budget;
  const OptimizeResult res = optimize_measurement(source, obj, o.budget, e);
  Json trace = Json::array();
  for (const auto& ev : res.trace) {
    Json j = row_json(ev.row);
    j["stage"] = ev.stage;
    trace.push_back(std::move(j));
  }
  const Json j = {{"theta", res.theta}, {"phi", res.phi},         {"value", res.value},
                  {"value_stderr", res.value_stderr}, {"mode", res.mode}, {"warnings", res.warnings},
                  {"trace", std::move(trace)}};
  r.emit(pretty(j), "theta=" + fmt6(res.theta) + " phi=" + fmt6(res.phi) + " " + res.mode + "=" + fmt6(res.value));
}

void cmd_usd(Runner& r, Options& o) {
  if (o.n == 0) o.n = 100;
  r.config()["n"] = o.n;
  r.config()["max_states"] = o.max_states;
  r.config()["merge_tol"] = o.merge_tol;
  std::vector<double> alphas;
  for (std::size_t i = 1; i <= o.n; ++i) alphas.push_back(std::numbers::pi * static_cast<double>(i) / static_cast<double>(o.n));
  const auto rows = usd_alpha_study(alphas, o.max_states, o.merge_tol, o.jobs);
  std::string body = "alpha,hmu,cmu,msp_states,msp_kind\n";
  char buf[256];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%zu,%s\n", row.alpha, row.hmu, row.cmu, row.msp_states,
                  row.error ? "error" : std::string(to_string(row.kind)).c_str());
    body += buf;
  }
  r.emit(body);
}

void cmd_sample(Runner& r, const Options& o) {
  const Model m = r.model();
  const LabeledHMC hmc = r.machine(m);
  r.config()["length"] = o.length;
  const Word w = sample_sequence(hmc, o.length, o.seed);
  std::string body;
  for (std::size_t t = 0; t < w.size(); ++t) {
    if (t) body += ' ';
    body += hmc.alphabet()[w[t]];
  }
  body += "\n";
  r.emit(body);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Measured qubit-source analysis", "qssp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QSSP_VERSION);

  std::vector<CLI::Option*> seed_opts;
  auto common = [&](CLI::App* sub) {
    seed_opts.push_back(sub->add_option("--seed", o.seed, "Random seed (default: QSSP_SEED or 0)"));
    sub->add_option("--out", o.out, "Output file; a manifest is written beside it");
    sub->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto model = [&](CLI::App* sub) { sub->add_option("--model", o.model, "Model JSON file")->required(); };
  auto measurement = [&](CLI::App* sub) {
    sub->add_option("--theta", o.theta, "Basis polar angle");
    sub->add_option("--phi", o.phi, "Basis azimuthal angle");
    sub->add_option("--povm", o.povm, "usd or memoryless instead of a projective basis");
  };
  auto msp_flags = [&](CLI::App* sub) {
    sub->add_option("--merge-tol", o.merge_tol, "Belief merge tolerance (L-infinity)");
    sub->add_option("--max-states", o.max_states, "Mixed-state cap");
  };
  auto estimator = [&](CLI::App* sub) {
    sub->add_option("--length", o.length, "Trajectory length for the entropy rate");
    sub->add_option("--burn-in", o.burn_in, "Discarded initial steps");
    sub->add_option("--sample", o.sample, "Belief samples for the dimension estimate");
    sub->add_option("--eps-min", o.eps_min, "Finest box size");
    sub->add_option("--eps-max", o.eps_max, "Coarsest box size");
    msp_flags(sub);
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check a model file");
  model(validate_cmd);
  common(validate_cmd);

  auto* measure_cmd = app.add_subcommand("measure", "Derive the measured machine");
  model(measure_cmd);
  measurement(measure_cmd);
  common(measure_cmd);

  auto* msp_cmd = app.add_subcommand("msp", "Build the mixed-state presentation or sample beliefs");
  model(msp_cmd);
  measurement(msp_cmd);
  msp_flags(msp_cmd);
  msp_cmd->add_option("--sample", o.sample, "Emit this many sampled beliefs as CSV");
  msp_cmd->add_option("--burn-in", o.burn_in, "Discarded initial steps when sampling");
  common(msp_cmd);

  auto* metrics_cmd = app.add_subcommand("metrics", "Entropy rate, statistical complexity and dimension");
  model(metrics_cmd);
  measurement(metrics_cmd);
  estimator(metrics_cmd);
  common(metrics_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "Metrics over projective bases");
  model(sweep_cmd);
  sweep_cmd->add_option("--phi", o.phi, "Fixed azimuthal angle");
  sweep_cmd->add_option("--n", o.n, "Number of theta values (default 300)");
  sweep_cmd->add_option("--n-phi", o.n_phi, "Number of phi values; above 1 sweeps the full grid");
  sweep_cmd->add_option("--theta", o.anchors, "Extra theta values to include")->allow_extra_args(false);
  estimator(sweep_cmd);
  common(sweep_cmd);

  auto* optimize_cmd = app.add_subcommand("optimize", "Search for an optimal projective basis");
  model(optimize_cmd);
  optimize_cmd->add_option("--objective", o.objective, "max-hmu or min-structure");
  optimize_cmd->add_option("--budget", o.budget, "Number of evaluations");
  estimator(optimize_cmd);
  common(optimize_cmd);

  auto* usd_cmd = app.add_subcommand("usd-study", "USD POVM on the two-state source over alpha");
  usd_cmd->add_option("--n", o.n, "Number of alpha values in (0, pi] (default 100)");
  usd_cmd->add_option("--max-states", o.max_states, "Mixed-state truncation (default 500)");
  usd_cmd->add_option("--merge-tol", o.merge_tol, "Belief merge tolerance");
  common(usd_cmd);

  auto* sample_cmd = app.add_subcommand("sample", "Sample a symbol sequence");
  model(sample_cmd);
  measurement(sample_cmd);
  sample_cmd->add_option("--length", o.length, "Sequence length");
  common(sample_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  bool seed_given = false;
  for (auto* opt : seed_opts) seed_given = seed_given || opt->count() > 0;
  CLI::App* sub = app.get_subcommands().front();
  if (sub == usd_cmd && usd_cmd->get_option("--max-states")->count() == 0) o.max_states = 500;
  if (sub == sample_cmd && sample_cmd->get_option("--length")->count() == 0) o.length = 1000;

  try {
    Runner r(sub->get_name(), o, seed_given, out, err);
    if (sub == validate_cmd) cmd_validate(r);
    else if (sub == measure_cmd) cmd_measure(r);
    else if (sub == msp_cmd) cmd_msp(r, o, msp_cmd->get_option("--sample")->count() > 0);
    else if (sub == metrics_cmd) cmd_metrics(r);
    else if (sub == sweep_cmd) cmd_sweep(r, o);
    else if (sub == optimize_cmd) cmd_optimize(r, o);
    else if (sub == usd_cmd) cmd_usd(r, o);
    else if (sub == sample_cmd) cmd_sample(r, o);
  } catch (const Error& e) {
    err << error_to_json(e).dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << error_to_json(Error(ErrorCode::InputError, e.what())).dump() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace qssp::cli
