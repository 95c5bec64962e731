// Copyright 2026 The DQNN Authors
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

#include "dqnn/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dqnn/gates.hpp"
#include "dqnn/noise_sweep.hpp"
#include "dqnn/random.hpp"
#include "dqnn/tomography.hpp"

namespace dqnn::runner {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

template <typename T>
T field(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument("config field '" + key + "': " + e.what());
  }
}

void requirePositive(double v, const std::string& key) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("config field '" + key + "' must be positive");
}

void rejectUnknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw std::invalid_argument("unknown config field '" + key + "' in " + where);
  }
}

/// Collects the artifacts of one command under "<out>.partial".
class ArtifactDir {
 public:
  explicit ArtifactDir(fs::path out) : out_(std::move(out)), partial_(out_.string() + ".partial") {
    if (out_.empty()) throw std::invalid_argument("output directory is empty");
    fs::remove_all(partial_);
    fs::create_directories(partial_);
  }
  ArtifactDir(const ArtifactDir&) = delete;
  ArtifactDir& operator=(const ArtifactDir&) = delete;
  ~ArtifactDir() {
    if (!committed_) {
      std::error_code ec;
      fs::remove_all(partial_, ec);
    }
  }

  void write(const std::string& rel, const std::string& content) {
    const fs::path p = partial_ / rel;
    fs::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    os << content;
    if (!os) throw std::runtime_error("cannot write " + p.string());
    files_.insert(rel);
  }
  void writeJson(const std::string& rel, const json& j) { write(rel, j.dump(2) + "\n"); }

  fs::path commit(const std::string& command) {
    json index{{"format_version", kFormatVersion}, {"command", command}, {"files", files_}};
    writeJson("index.json", index);
    fs::remove_all(out_);
    if (out_.has_parent_path()) fs::create_directories(out_.parent_path());
    fs::rename(partial_, out_);
    committed_ = true;
    return out_;
  }

 private:
  fs::path out_;
  fs::path partial_;
  std::set<std::string> files_;
  bool committed_ = false;
};

json metadata(const RunConfig& config, const std::string& command, double wallSeconds) {
  return {{"format_version", kFormatVersion}, {"command", command},     {"config", toJson(config)},
          {"config_hash", configHash(config)}, {"seed", config.seed}, {"wall_time_s", wallSeconds}};
}

std::string runName(int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "run_%03d", i);
  return buf;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void auditCurve(const std::vector<double>& curve, double lo, double hi, const std::string& what) {
  for (std::size_t e = 0; e < curve.size(); ++e) {
    if (!std::isfinite(curve[e]) || curve[e] < lo || curve[e] > hi) {
      throw AuditError(what + " at epoch " + std::to_string(e) + " is " + fmt(curve[e]) + ", outside [" + fmt(lo) +
                       ", " + fmt(hi) + "]");
    }
  }
}

json runParamsJson(const TrainRun& run) {
  return {{"seed", run.seed},
          {"initial", paramsToJson(run.initialParams)},
          {"final", paramsToJson(run.finalParams)},
          {"final_loss", run.finalLoss},
          {"converged", run.converged},
          {"converged_epoch", run.convergedEpoch}};
}

DensityMatrix namedState(const TomographySettings& t) {
  if (t.numQubits < 1 || t.numQubits > 4) throw std::invalid_argument("tomography.num_qubits must be in [1, 4]");
  if (t.state == "random") {
    Rng rng(t.seed ^ 0x5eedULL);
    ComplexVector psi(Eigen::Index{1} << t.numQubits);
    for (Eigen::Index i = 0; i < psi.size(); ++i) psi(i) = Complex(rng.normal(), rng.normal());
    return DensityMatrix::fromKet(psi / psi.norm());
  }
  ComplexVector single;
  if (t.state == "zero") {
    single = ket::zero();
  } else if (t.state == "one") {
    single = ket::one();
  } else if (t.state == "plus") {
    single = ket::plus();
  } else if (t.state == "minus") {
    single = ket::minus();
  } else if (t.state == "plus_i") {
    single = ket::plusI();
  } else {
    throw std::invalid_argument("unknown tomography state '" + t.state + "'");
  }
  ComplexMatrix psi = ComplexMatrix::Ones(1, 1);
  for (int q = 0; q < t.numQubits; ++q) psi = kron(psi, single);
  return DensityMatrix::fromKet(psi.col(0));
}

}  // namespace

NetworkTopology RunConfig::topology() const {
  NetworkTopology topo;
  if (topologyName == "dqnn1") {
    topo = order == "hardware" ? NetworkTopology::dqnn1HardwareOrder() : NetworkTopology::dqnn1();
  } else if (topologyName == "dqnn2") {
    topo = NetworkTopology::dqnn2();
  } else {
    if (order == "hardware") throw std::invalid_argument("hardware order is only defined for dqnn1");
    topo = NetworkTopology::fromWidths(widths);
  }
  topo.validate();
  return topo;
}

NetworkParams RunConfig::phaseTemplate() const {
  const NetworkTopology topo = topology();
  NetworkParams p = NetworkParams::uniform(topo);
  return phases == "hardware" ? withHardwarePhases(topo, std::move(p)) : p;
}

BackwardTerm RunConfig::hamiltonian() const {
  const NetworkTopology topo = topology();
  if (coefficients) {
    if (topo.outputWidth() != 2) throw std::invalid_argument("molecular Hamiltonian needs a two-qubit output layer");
    return buildMolecularHamiltonian(*coefficients);
  }
  if (hamiltonianPreset == "z") {
    ComplexMatrix h = pauli::z();
    for (int q = 1; q < topo.outputWidth(); ++q) h = kron(h, pauli::identity());
    return BackwardTerm(h);
  }
  throw std::invalid_argument("ground-state task needs hamiltonian.coefficients or hamiltonian.preset");
}

std::optional<NoiseModel> RunConfig::noiseModel() const {
  if (!noise || noise->model == "none") return std::nullopt;
  const NetworkTopology topo = topology();
  NoiseModel m = noise->model == "processor"
                     ? NoiseModel::processorBaseline(topo, noise->zzStrength)
                     : NoiseModel::uniform(topo, noise->t1Us, noise->t2Us, noise->zzStrength, noise->twoQubitNs);
  m.timeScale = noise->timeScale;
  m.singleGateNs = noise->singleGateNs;
  m.validate(topo);
  return m;
}

TrainOptions RunConfig::trainOptions() const {
  TrainOptions o;
  o.learningRate = learningRate;
  o.epochs = epochs;
  o.scheme = gradient;
  o.noise = noiseModel();
  o.tomographyShots = tomographic ? shots : 0;
  o.tomographySeed = seed;
  return o;
}

NoiseSettings parseNoise(const json& j) {
  rejectUnknown(j,
                {"model", "zz_strength", "time_scale", "t1_us", "t2_us", "two_qubit_ns", "single_gate_ns",
                 "time_scales", "zz_strengths"},
                "noise");
  NoiseSettings n;
  if (j.contains("model")) n.model = field<std::string>(j, "model");
  if (n.model != "processor" && n.model != "uniform" && n.model != "none") {
    throw std::invalid_argument("noise.model must be processor, uniform or none");
  }
  if (j.contains("zz_strength")) n.zzStrength = field<double>(j, "zz_strength");
  if (j.contains("time_scale")) n.timeScale = field<double>(j, "time_scale");
  if (j.contains("t1_us")) n.t1Us = field<double>(j, "t1_us");
  if (j.contains("t2_us")) n.t2Us = field<double>(j, "t2_us");
  if (j.contains("two_qubit_ns")) n.twoQubitNs = field<double>(j, "two_qubit_ns");
  if (j.contains("single_gate_ns")) n.singleGateNs = field<double>(j, "single_gate_ns");
  if (j.contains("time_scales")) n.timeScales = field<std::vector<double>>(j, "time_scales");
  if (j.contains("zz_strengths")) n.zzStrengths = field<std::vector<double>>(j, "zz_strengths");
  if (!(n.zzStrength >= 0.0)) throw std::invalid_argument("noise.zz_strength must be non-negative");
  requirePositive(n.timeScale, "noise.time_scale");
  requirePositive(n.t1Us, "noise.t1_us");
  requirePositive(n.t2Us, "noise.t2_us");
  requirePositive(n.twoQubitNs, "noise.two_qubit_ns");
  requirePositive(n.singleGateNs, "noise.single_gate_ns");
  for (double s : n.timeScales) requirePositive(s, "noise.time_scales");
  for (double z : n.zzStrengths) {
    if (!(z >= 0.0)) throw std::invalid_argument("noise.zz_strengths must be non-negative");
  }
  return n;
}

RunConfig parseConfig(const json& j) {
  rejectUnknown(j,
                {"format_version", "topology", "order", "phases", "task", "seed", "target_seed", "learning_rate",
                 "epochs", "gradient", "restarts", "tomographic", "shots", "hamiltonian", "local_minimum_gap",
                 "fidelity_threshold", "noise", "generalization", "tomography", "out"},
                "config");
  RunConfig c;
  if (j.contains("format_version") && field<int>(j, "format_version") != kFormatVersion) {
    throw std::invalid_argument("unsupported config format_version");
  }
  if (j.contains("topology")) {
    const json& t = j.at("topology");
    if (t.is_string()) {
      c.topologyName = t.get<std::string>();
      if (c.topologyName == "dqnn1") {
        c.widths = {2, 2, 2};
      } else if (c.topologyName == "dqnn2") {
        c.widths = {1, 1, 1, 1, 1, 1};
      } else {
        throw std::invalid_argument("topology must be dqnn1, dqnn2 or a list of widths");
      }
    } else {
      c.topologyName = "custom";
      c.widths = field<std::vector<int>>(j, "topology");
    }
  }
  if (j.contains("order")) c.order = field<std::string>(j, "order");
  if (c.order != "default" && c.order != "hardware") throw std::invalid_argument("order must be default or hardware");
  if (j.contains("phases")) c.phases = field<std::string>(j, "phases");
  if (c.phases != "pi" && c.phases != "hardware") throw std::invalid_argument("phases must be pi or hardware");
  if (j.contains("task")) {
    const auto task = field<std::string>(j, "task");
    if (task == "channel") {
      c.task = Task::Channel;
    } else if (task == "ground-state") {
      c.task = Task::GroundState;
    } else {
      throw std::invalid_argument("task must be channel or ground-state");
    }
  }
  c.epochs = c.task == Task::Channel ? 200 : 100;
  if (j.contains("seed")) c.seed = field<std::uint64_t>(j, "seed");
  if (j.contains("target_seed")) c.targetSeed = field<std::uint64_t>(j, "target_seed");
  if (j.contains("learning_rate")) c.learningRate = field<double>(j, "learning_rate");
  requirePositive(c.learningRate, "learning_rate");
  if (j.contains("epochs")) c.epochs = field<int>(j, "epochs");
  if (c.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (j.contains("gradient")) c.gradient = parseGradientScheme(field<std::string>(j, "gradient"));
  if (j.contains("restarts")) c.restarts = field<int>(j, "restarts");
  if (c.restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (j.contains("tomographic")) c.tomographic = field<bool>(j, "tomographic");
  if (j.contains("shots")) c.shots = field<long>(j, "shots");
  if (c.shots < 1) throw std::invalid_argument("shots must be >= 1");
  if (j.contains("hamiltonian")) {
    const json& h = j.at("hamiltonian");
    rejectUnknown(h, {"coefficients", "preset"}, "hamiltonian");
    if (h.contains("coefficients")) c.coefficients = field<std::array<double, 6>>(h, "coefficients");
    if (h.contains("preset")) c.hamiltonianPreset = field<std::string>(h, "preset");
    if (c.coefficients && !c.hamiltonianPreset.empty()) {
      throw std::invalid_argument("hamiltonian takes either coefficients or a preset");
    }
    if (!c.hamiltonianPreset.empty() && c.hamiltonianPreset != "z") {
      throw std::invalid_argument("hamiltonian.preset must be z");
    }
  }
  if (j.contains("local_minimum_gap")) c.localMinimumGap = field<double>(j, "local_minimum_gap");
  if (!(c.localMinimumGap >= 0.0)) throw std::invalid_argument("local_minimum_gap must be non-negative");
  if (j.contains("fidelity_threshold")) c.fidelityThreshold = field<double>(j, "fidelity_threshold");
  if (j.contains("noise") && !j.at("noise").is_null()) c.noise = parseNoise(j.at("noise"));
  if (j.contains("generalization")) {
    const json& g = j.at("generalization");
    rejectUnknown(g, {"num_states", "seed", "bins", "params", "target_params", "run"}, "generalization");
    auto& s = c.generalization;
    if (g.contains("num_states")) s.numStates = field<int>(g, "num_states");
    if (g.contains("seed")) s.seed = field<std::uint64_t>(g, "seed");
    if (g.contains("bins")) s.bins = field<int>(g, "bins");
    if (g.contains("params")) s.params = field<std::string>(g, "params");
    if (g.contains("target_params")) s.targetParams = field<std::string>(g, "target_params");
    if (g.contains("run")) s.run = field<int>(g, "run");
    if (s.numStates < 1 || s.bins < 1 || s.run < 0) {
      throw std::invalid_argument("generalization: num_states and bins must be >= 1 and run >= 0");
    }
  }
  if (j.contains("tomography")) {
    const json& t = j.at("tomography");
    rejectUnknown(t, {"state", "num_qubits", "shots", "exact", "seed"}, "tomography");
    auto& s = c.tomography;
    if (t.contains("state")) s.state = field<std::string>(t, "state");
    if (t.contains("num_qubits")) s.numQubits = field<int>(t, "num_qubits");
    if (t.contains("shots")) s.shots = field<long>(t, "shots");
    if (t.contains("exact")) s.exact = field<bool>(t, "exact");
    if (t.contains("seed")) s.seed = field<std::uint64_t>(t, "seed");
    if (s.shots < 1) throw std::invalid_argument("tomography.shots must be >= 1");
  }
  if (j.contains("out")) c.out = field<std::string>(j, "out");

  c.topology();
  c.phaseTemplate();
  if (c.noise) c.noiseModel();
  return c;
}

RunConfig loadConfig(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(is);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return parseConfig(j);
}

json toJson(const RunConfig& c) {
  json j;
  j["format_version"] = kFormatVersion;
  if (c.topologyName == "custom") {
    j["topology"] = c.widths;
  } else {
    j["topology"] = c.topologyName;
  }
  j["order"] = c.order;
  j["phases"] = c.phases;
  j["task"] = c.task == Task::Channel ? "channel" : "ground-state";
  j["seed"] = c.seed;
  j["target_seed"] = c.targetSeed;
  j["learning_rate"] = c.learningRate;
  j["epochs"] = c.epochs;
  j["gradient"] = toString(c.gradient);
  j["restarts"] = c.restarts;
  j["tomographic"] = c.tomographic;
  j["shots"] = c.shots;
  json h = json::object();
  if (c.coefficients) h["coefficients"] = *c.coefficients;
  if (!c.hamiltonianPreset.empty()) h["preset"] = c.hamiltonianPreset;
  j["hamiltonian"] = h;
  j["local_minimum_gap"] = c.localMinimumGap;
  j["fidelity_threshold"] = c.fidelityThreshold;
  if (c.noise) {
    const auto& n = *c.noise;
    j["noise"] = {{"model", n.model},           {"zz_strength", n.zzStrength},     {"time_scale", n.timeScale},
                  {"t1_us", n.t1Us},            {"t2_us", n.t2Us},                 {"two_qubit_ns", n.twoQubitNs},
                  {"single_gate_ns", n.singleGateNs}, {"time_scales", n.timeScales}, {"zz_strengths", n.zzStrengths}};
  } else {
    j["noise"] = nullptr;
  }
  const auto& g = c.generalization;
  j["generalization"] = {{"num_states", g.numStates}, {"seed", g.seed},
                         {"bins", g.bins},            {"params", g.params},
                         {"target_params", g.targetParams}, {"run", g.run}};
  const auto& t = c.tomography;
  j["tomography"] = {{"state", t.state}, {"num_qubits", t.numQubits}, {"shots", t.shots}, {"exact", t.exact},
                     {"seed", t.seed}};
  j["out"] = c.out;
  return j;
}

std::string configHash(const RunConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : toJson(config).dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json paramsToJson(const NetworkParams& params) {
  json interfaces = json::array();
  for (const auto& grid : params.interfaces) {
    json cells = json::array();
    for (const auto& p : grid) cells.push_back({{"theta1", p.theta1}, {"theta2", p.theta2}, {"phi", p.phi}});
    interfaces.push_back(cells);
  }
  return {{"interfaces", interfaces}};
}

NetworkParams paramsFromJson(const json& j, const NetworkTopology& topo) {
  NetworkParams params;
  try {
    for (const auto& cells : j.at("interfaces")) {
      std::vector<PerceptronParams> grid;
      for (const auto& c : cells) {
        grid.push_back({c.at("theta1").get<double>(), c.at("theta2").get<double>(), c.at("phi").get<double>()});
      }
      params.interfaces.push_back(std::move(grid));
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed parameter file: ") + e.what());
  }
  params.validate(topo);
  return params;
}

int workersFromEnv() {
  const char* v = std::getenv(kWorkersEnv);
  if (!v || !*v) return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1) throw std::invalid_argument(std::string(kWorkersEnv) + " must be a positive integer");
  return static_cast<int>(std::min<long>(n, 256));
}

std::string curveCsv(const std::vector<double>& curve, const std::string& valueColumn) {
  std::ostringstream os;
  os << "epoch," << valueColumn << '\n';
  for (std::size_t e = 0; e < curve.size(); ++e) os << e << ',' << fmt(curve[e]) << '\n';
  return os.str();
}

CommandResult cmdTrainChannel(const RunConfig& config) {
  if (config.task != Task::Channel) throw std::invalid_argument("train-channel needs task = channel");
  const auto t0 = std::chrono::steady_clock::now();
  const NetworkTopology topo = config.topology();
  const NetworkParams phases = config.phaseTemplate();
  const NetworkParams target = makeTargetChannel(topo, config.targetSeed, phases);

  EnsembleTask task;
  task.task = Task::Channel;
  task.topology = topo;
  task.dataset = buildChannelDataset(topo, target, standardInputs(topo.inputWidth()));
  task.options = config.trainOptions();
  task.phases = phases;
  task.fidelityThreshold = config.fidelityThreshold;
  const EnsembleStats stats = restartEnsemble(task, config.restarts, config.seed, workersFromEnv());

  ArtifactDir dir(config.out);
  std::ostringstream finals;
  finals << "run,seed,final_mean_fidelity,local_minimum\n";
  for (std::size_t i = 0; i < stats.runs.size(); ++i) {
    const auto& run = stats.runs[i];
    auditCurve(run.curve, 0.0, 1.0 + 1e-9, "mean fidelity");
    auditCurve({run.finalLoss}, 0.0, 1.0 + 1e-9, "final mean fidelity");
    const std::string name = "runs/" + runName(static_cast<int>(i));
    std::vector<double> curve = run.curve;
    curve.push_back(run.finalLoss);
    dir.write(name + "/curve.csv", curveCsv(curve, "mean_fidelity"));
    dir.writeJson(name + "/params.json", runParamsJson(run));
    finals << i << ',' << run.seed << ',' << fmt(run.finalLoss) << ',' << (stats.localMinimum[i] ? 1 : 0) << '\n';
  }
  dir.write("finals.csv", finals.str());
  dir.writeJson("target_params.json", paramsToJson(target));
  json summary{{"runs", config.restarts},
               {"mean_final_fidelity", stats.meanFinal},
               {"mean_regular_fidelity", std::isnan(stats.meanRegular) ? json(nullptr) : json(stats.meanRegular)},
               {"num_local_minima", stats.numLocalMinima},
               {"fidelity_threshold", config.fidelityThreshold}};
  dir.writeJson("summary.json", summary);
  dir.writeJson("metadata.json", metadata(config, "train-channel", elapsed(t0)));
  return {dir.commit("train-channel"), summary};
}

CommandResult cmdTrainGroundState(const RunConfig& config) {
  if (config.task != Task::GroundState) throw std::invalid_argument("train-ground needs task = ground-state");
  const auto t0 = std::chrono::steady_clock::now();
  const NetworkTopology topo = config.topology();
  const BackwardTerm h = config.hamiltonian();
  const double exact = groundEnergy(h);

  EnsembleTask task;
  task.task = Task::GroundState;
  task.topology = topo;
  task.hamiltonian = h;
  task.options = config.trainOptions();
  task.phases = config.phaseTemplate();
  task.localMinimumGap = config.localMinimumGap;
  const EnsembleStats stats = restartEnsemble(task, config.restarts, config.seed, workersFromEnv());

  std::vector<double> finalsVec;
  for (const auto& run : stats.runs) finalsVec.push_back(run.finalLoss);
  const bool noisy = task.options.noise.has_value();
  const double best = *std::min_element(finalsVec.begin(), finalsVec.end());
  const double reference = noisy ? best : exact;
  std::vector<bool> flags;
  double sumRegular = 0.0;
  int regular = 0;
  for (double e : finalsVec) {
    flags.push_back(e > reference + config.localMinimumGap);
    if (!flags.back()) {
      sumRegular += e;
      ++regular;
    }
  }

  ArtifactDir dir(config.out);
  const double hNorm = h.matrix().operatorNorm();
  std::ostringstream finals;
  finals << "run,seed,final_energy_hartree,local_minimum\n";
  for (std::size_t i = 0; i < stats.runs.size(); ++i) {
    const auto& run = stats.runs[i];
    auditCurve(run.curve, exact - 1e-9, hNorm + 1e-9, "energy");
    auditCurve({run.finalLoss}, exact - 1e-9, hNorm + 1e-9, "final energy");
    const std::string name = "runs/" + runName(static_cast<int>(i));
    std::vector<double> curve = run.curve;
    curve.push_back(run.finalLoss);
    dir.write(name + "/curve.csv", curveCsv(curve, "energy_hartree"));
    dir.writeJson(name + "/params.json", runParamsJson(run));
    finals << i << ',' << run.seed << ',' << fmt(run.finalLoss) << ',' << (flags[i] ? 1 : 0) << '\n';
  }
  dir.write("finals.csv", finals.str());
  const int numLocal = static_cast<int>(std::count(flags.begin(), flags.end(), true));
  json summary{{"runs", config.restarts},
               {"exact_ground_energy", exact},
               {"best_final_energy", best},
               {"mean_final_energy", stats.meanFinal},
               {"mean_regular_energy", regular > 0 ? json(sumRegular / regular) : json(nullptr)},
               {"num_local_minima", numLocal},
               {"local_minimum_reference", noisy ? "best_run" : "exact_ground_energy"},
               {"local_minimum_gap", config.localMinimumGap}};
  if (config.restarts == 1) summary["local_minimum"] = flags.front();
  dir.writeJson("summary.json", summary);
  dir.writeJson("metadata.json", metadata(config, "train-ground", elapsed(t0)));
  return {dir.commit("train-ground"), summary};
}

CommandResult cmdSweepNoise(const RunConfig& config) {
  if (!config.noise) throw std::invalid_argument("sweep-noise needs a noise block");
  const auto t0 = std::chrono::steady_clock::now();
  const NetworkTopology topo = config.topology();

  NoiseSweepConfig sweep;
  sweep.topology = topo;
  sweep.hamiltonian = config.hamiltonian();
  sweep.options = config.trainOptions();
  sweep.options.noise.reset();
  const auto& n = *config.noise;
  if (n.model == "none") {
    sweep.baseline = NoiseModel::noiseless(topo);
  } else {
    sweep.baseline = *config.noiseModel();
  }
  sweep.phases = config.phaseTemplate();
  sweep.timeScales = n.timeScales.empty() ? std::vector<double>{n.timeScale} : n.timeScales;
  sweep.zzStrengths = n.zzStrengths.empty() ? std::vector<double>{n.zzStrength} : n.zzStrengths;
  sweep.restarts = config.restarts;
  sweep.baseSeed = config.seed;
  sweep.localMinimumGap = config.localMinimumGap;

  const int workers = workersFromEnv();
  const SweepResult result = noiseSweep(sweep, workers);
  const LocalMinimumReference& ref = result.reference;
  const std::vector<SweepCell>& cells = result.cells;

  ArtifactDir dir(config.out);
  std::ostringstream table;
  table << "time_scale,zz_strength,mean_energy,n_runs,n_excluded\n";
  std::ostringstream runs;
  runs << "time_scale,zz_strength,run,seed,final_energy_hartree,excluded\n";
  json cellsJson = json::array();
  for (const auto& cell : cells) {
    table << fmt(cell.timeScale) << ',' << fmt(cell.zzStrength) << ',' << fmt(cell.meanEnergy) << ','
          << cell.numRuns << ',' << cell.numExcluded << '\n';
    for (std::size_t i = 0; i < cell.finalEnergies.size(); ++i) {
      runs << fmt(cell.timeScale) << ',' << fmt(cell.zzStrength) << ',' << i << ',' << config.seed + i << ','
           << fmt(cell.finalEnergies[i]) << ',' << (ref.excluded[i] ? 1 : 0) << '\n';
    }
    cellsJson.push_back({{"time_scale", cell.timeScale}, {"zz_strength", cell.zzStrength},
                         {"mean_energy", cell.meanEnergy}, {"n_runs", cell.numRuns},
                         {"n_excluded", cell.numExcluded}});
  }
  std::ostringstream refCsv;
  refCsv << "run,seed,noiseless_final_energy_hartree,excluded\n";
  for (std::size_t i = 0; i < ref.noiselessEnergies.size(); ++i) {
    refCsv << i << ',' << config.seed + i << ',' << fmt(ref.noiselessEnergies[i]) << ','
           << (ref.excluded[i] ? 1 : 0) << '\n';
  }
  dir.write("sweep.csv", table.str());
  dir.write("sweep_runs.csv", runs.str());
  dir.write("reference.csv", refCsv.str());
  json summary{{"cells", cellsJson}, {"n_excluded", ref.numExcluded}};
  dir.writeJson("summary.json", summary);
  dir.writeJson("metadata.json", metadata(config, "sweep-noise", elapsed(t0)));
  return {dir.commit("sweep-noise"), summary};
}

CommandResult cmdEvalGeneralization(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& g = config.generalization;
  if (g.params.empty()) throw std::invalid_argument("generalization.params is required");
  fs::path paramsPath = g.params;
  fs::path targetPath = g.targetParams;
  if (!fs::exists(paramsPath)) throw std::invalid_argument("missing artifact file " + paramsPath.string());
  if (fs::is_directory(paramsPath)) {
    if (targetPath.empty()) targetPath = paramsPath / "target_params.json";
    paramsPath = paramsPath / "runs" / runName(g.run) / "params.json";
  }
  if (targetPath.empty()) throw std::invalid_argument("generalization.target_params is required");
  for (const auto& p : {paramsPath, targetPath}) {
    if (!fs::is_regular_file(p)) throw std::invalid_argument("missing artifact file " + p.string());
  }
  const NetworkTopology topo = config.topology();
  const auto readJson = [](const fs::path& p) {
    std::ifstream is(p);
    try {
      return json::parse(is);
    } catch (const json::parse_error& e) {
      throw std::invalid_argument("artifact " + p.string() + " is not valid JSON: " + e.what());
    }
  };
  const json runJson = readJson(paramsPath);
  if (!runJson.contains("initial") || !runJson.contains("final")) {
    throw std::invalid_argument(paramsPath.string() + " lacks initial/final parameters");
  }
  const NetworkParams trained = paramsFromJson(runJson.at("final"), topo);
  const NetworkParams untrained = paramsFromJson(runJson.at("initial"), topo);
  const NetworkParams target = paramsFromJson(readJson(targetPath), topo);

  const FidelityStatistics a = generalizationTest(topo, trained, target, g.numStates, g.seed, g.bins);
  const FidelityStatistics b = generalizationTest(topo, untrained, target, g.numStates, g.seed, g.bins);

  ArtifactDir dir(config.out);
  std::ostringstream fids;
  fids << "state,trained_fidelity,untrained_fidelity\n";
  for (std::size_t k = 0; k < a.fidelities.size(); ++k) {
    fids << k << ',' << fmt(a.fidelities[k]) << ',' << fmt(b.fidelities[k]) << '\n';
  }
  std::ostringstream hist;
  hist << "bin_low,bin_high,trained_count,untrained_count\n";
  for (int k = 0; k < g.bins; ++k) {
    hist << fmt(static_cast<double>(k) / g.bins) << ',' << fmt(static_cast<double>(k + 1) / g.bins) << ','
         << a.histogram[static_cast<std::size_t>(k)] << ',' << b.histogram[static_cast<std::size_t>(k)] << '\n';
  }
  dir.write("fidelities.csv", fids.str());
  dir.write("histogram.csv", hist.str());
  json summary{{"num_states", g.numStates},     {"trained_mean", a.mean}, {"trained_min", a.min},
               {"untrained_mean", b.mean},      {"untrained_min", b.min}, {"separation", a.mean - b.mean},
               {"params", paramsPath.string()}, {"target_params", targetPath.string()}};
  dir.writeJson("summary.json", summary);
  dir.writeJson("metadata.json", metadata(config, "eval-generalization", elapsed(t0)));
  return {dir.commit("eval-generalization"), summary};
}

CommandResult cmdTomographyDemo(const RunConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& t = config.tomography;
  const DensityMatrix rho = namedState(t);
  const BasisSet basis = BasisSet::pauli(t.numQubits);

  ArtifactDir dir(config.out);
  std::vector<FrequencyRecord> freqs;
  if (t.exact) {
    freqs = exactFrequencies(rho, basis);
  } else {
    const auto records = sampleMeasurements(rho, basis, t.shots, t.seed);
    dir.write("records.txt", formatRecords(records));
    freqs = toFrequencies(records);
  }
  const DensityMatrix est = reconstructState(freqs, t.numQubits);
  const ComplexMatrix lin = linearInversion(freqs, t.numQubits);

  std::ostringstream fcsv;
  fcsv << "basis,outcome,frequency\n";
  for (const auto& r : freqs) {
    for (std::size_t k = 0; k < r.frequencies.size(); ++k) fcsv << r.basisLabel << ',' << k << ',' << fmt(r.frequencies[k]) << '\n';
  }
  dir.write("frequencies.csv", fcsv.str());
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < est.dim(); ++r) {
    json rowRe = json::array();
    json rowIm = json::array();
    for (Eigen::Index c = 0; c < est.dim(); ++c) {
      rowRe.push_back(est.matrix()(r, c).real());
      rowIm.push_back(est.matrix()(r, c).imag());
    }
    re.push_back(rowRe);
    im.push_back(rowIm);
  }
  dir.writeJson("reconstructed.json", {{"real", re}, {"imag", im}});
  json summary{{"state", t.state},
               {"num_qubits", t.numQubits},
               {"shots", t.exact ? json(nullptr) : json(t.shots)},
               {"exact", t.exact},
               {"fidelity", fidelity(est, rho)},
               {"frequency_residual", frequencyResidual(est.matrix(), freqs, t.numQubits)},
               {"linear_inversion_trace_distance", traceDistance(est.matrix(), lin)},
               {"purity", est.purity()}};
  dir.writeJson("summary.json", summary);
  dir.writeJson("metadata.json", metadata(config, "tomo-demo", elapsed(t0)));
  return {dir.commit("tomo-demo"), summary};
}

}  // namespace dqnn::runner
