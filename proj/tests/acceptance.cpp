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

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dqnn/network.hpp"
#include "dqnn/noise_sweep.hpp"
#include "dqnn/random.hpp"
#include "dqnn/runner.hpp"
#include "dqnn/tomography.hpp"
#include "dqnn/training.hpp"
#include "oracles.hpp"

namespace {

namespace fs = std::filesystem;
using namespace dqnn;
using std::numbers::pi;

// Tolerances and thresholds.
constexpr double kDualityTol = 1e-10;
constexpr double kShiftTol = 1e-10;
constexpr double kFiniteDiffTol = 1e-6;
constexpr double kFiniteDiffStep = 1e-5;
constexpr double kMonolithicTol = 1e-9;
constexpr double kDqnn1Fidelity = 0.98;
constexpr double kDqnn2Fidelity = 0.995;
constexpr double kExactEnergy = -1.851;
constexpr double kExactEnergyTol = 0.01;
constexpr double kEnsembleEnergy = -1.826;
constexpr double kEnsembleEnergyTol = 0.03;
constexpr double kGeneralizationDqnn1 = 0.97;
constexpr double kGeneralizationDqnn2 = 0.999;
constexpr double kSeparation = 0.2;
constexpr int kGeneralizationTargets = 20;
constexpr double kTomography1q = 0.99;
constexpr double kTomography2q = 0.98;
constexpr double kTomographyPassFraction = 0.95;
constexpr double kLinearInversionTol = 1e-6;

struct Outcome {
  bool pass = false;
  std::string detail;
};

fs::path sourceDir() { return fs::path(DQNN_SOURCE_DIR); }

int workers() {
  const int env = runner::workersFromEnv();
  return std::max(env, static_cast<int>(std::thread::hardware_concurrency()));
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

LayerUnitarySpec randomSpec(int up, int down, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 2 * pi);
  LayerUnitarySpec spec = makeLayerSpec(up, down);
  for (auto& p : spec.params) p = {u(rng), u(rng), u(rng)};
  return spec;
}

Outcome duality() {
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const int w = i < 100 ? 1 : 2;
    const LayerUnitarySpec spec = randomSpec(w, w, rng);
    const DensityMatrix rho(oracle::randomMixedState(w, rng));
    const BackwardTerm sigma(oracle::randomHermitian(w, rng));
    const double lhs = (sigma.matrix() * forwardChannel(rho, spec).matrix()).trace().real();
    const double rhs = (backwardChannel(sigma, spec).matrix() * rho.matrix()).trace().real();
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return {worst <= kDualityTol, fmt("200 instances, max |tr(s E(r)) - tr(F(s) r)| = %.2e (tol %.0e)", worst, kDualityTol)};
}

Outcome gradients() {
  std::mt19937_64 rng(1002);
  const auto topo = NetworkTopology::dqnn1();
  double worstShift = 0.0;
  double worstFd = 0.0;
  int count = 0;
  for (int instance = 0; instance < 3; ++instance) {
    const auto params = oracle::randomAngles(topo, rng, true);
    const ComplexMatrix rhoIn = oracle::randomMixedState(2, rng);
    const ComplexMatrix tau = oracle::randomMixedState(2, rng);
    const BackwardTerm h(oracle::randomHermitian(2, rng));
    const auto fwdIn = forwardPass(DensityMatrix(rhoIn), topo, params);
    const auto fwdZero = forwardPass(DensityMatrix::zeros(2), topo, params);

    struct Objective {
      ForwardTrace forward;
      BackwardTerm sigmaOut;
      double scale;
      std::function<double(const NetworkParams&)> loss;
    };
    const std::vector<Objective> objectives{
        {fwdIn, sigmaOutForFidelity(fwdIn.output(), DensityMatrix(tau)), 0.5,
         [&](const NetworkParams& p) { return oracle::fidelity(oracle::monolithicForward(rhoIn, topo, p), tau); }},
        {fwdZero, h, 1.0, [&](const NetworkParams& p) {
           return (oracle::monolithicForward(DensityMatrix::zeros(2).matrix(), topo, p) * h.matrix()).trace().real();
         }}};
    for (const auto& obj : objectives) {
      const auto bwd = backwardPass(obj.sigmaOut, topo, params);
      const auto analytic = networkGradient(obj.forward, bwd, topo, params, GradientScheme::Analytic);
      const auto shift = networkGradient(obj.forward, bwd, topo, params, GradientScheme::ParameterShift);
      for (std::size_t l = 0; l < params.interfaces.size(); ++l) {
        for (std::size_t c = 0; c < params.interfaces[l].size(); ++c) {
          for (int k = 0; k < 2; ++k) {
            NetworkParams plus = params;
            NetworkParams minus = params;
            (k == 0 ? plus.interfaces[l][c].theta1 : plus.interfaces[l][c].theta2) += kFiniteDiffStep;
            (k == 0 ? minus.interfaces[l][c].theta1 : minus.interfaces[l][c].theta2) -= kFiniteDiffStep;
            const double fd = (obj.loss(plus) - obj.loss(minus)) / (2 * kFiniteDiffStep);
            const double a = obj.scale * analytic.interfaces[l][2 * c + static_cast<std::size_t>(k)];
            const double s = obj.scale * shift.interfaces[l][2 * c + static_cast<std::size_t>(k)];
            worstShift = std::max(worstShift, std::abs(a - s));
            worstFd = std::max({worstFd, std::abs(a - fd), std::abs(s - fd)});
            ++count;
          }
        }
      }
    }
  }
  return {worstShift <= kShiftTol && worstFd <= kFiniteDiffTol,
          fmt("%d parameter checks (fidelity + energy), analytic-shift %.2e (tol %.0e), vs finite diff %.2e (tol %.0e)",
              count, worstShift, kShiftTol, worstFd, kFiniteDiffTol)};
}

Outcome monolithic() {
  std::mt19937_64 rng(1003);
  double worst = 0.0;
  for (const auto& topo : {NetworkTopology::fromWidths({2, 2, 2}), NetworkTopology::fromWidths({1, 1, 1, 1, 1, 1})}) {
    for (int i = 0; i < 50; ++i) {
      const auto params = oracle::randomAngles(topo, rng, true);
      const ComplexMatrix rho = oracle::randomMixedState(topo.inputWidth(), rng);
      const auto out = forwardPass(DensityMatrix(rho), topo, params).output().matrix();
      worst = std::max(worst, (out - oracle::monolithicForward(rho, topo, params)).norm());
    }
  }
  return {worst <= kMonolithicTol, fmt("100 instances, max Frobenius distance %.2e (tol %.0e)", worst, kMonolithicTol)};
}

EnsembleStats channelEnsemble(const runner::RunConfig& c) {
  const auto topo = c.topology();
  EnsembleTask task;
  task.task = Task::Channel;
  task.topology = topo;
  task.dataset = buildChannelDataset(topo, makeTargetChannel(topo, c.targetSeed, c.phaseTemplate()),
                                     standardInputs(topo.inputWidth()));
  task.options = c.trainOptions();
  task.phases = c.phaseTemplate();
  return restartEnsemble(task, c.restarts, c.seed, workers());
}

Outcome channelLearning() {
  const auto c1 = runner::loadConfig(sourceDir() / "configs/dqnn1_channel.json");
  const auto c2 = runner::loadConfig(sourceDir() / "configs/dqnn2_channel.json");
  const auto s1 = channelEnsemble(c1);
  const auto s2 = channelEnsemble(c2);
  const bool ok = c1.restarts == 50 && c2.restarts == 50 && s1.meanFinal > kDqnn1Fidelity && s2.meanFinal > kDqnn2Fidelity;
  return {ok, fmt("DQNN1 mean %.4f over %d runs (> %.3f), DQNN2 mean %.5f over %d runs (> %.3f)", s1.meanFinal,
                  c1.restarts, kDqnn1Fidelity, s2.meanFinal, c2.restarts, kDqnn2Fidelity)};
}

Outcome groundState() {
  const auto c = runner::loadConfig(sourceDir() / "configs/h2_ground.json");
  const auto h = c.hamiltonian();
  const double exact = groundEnergy(h);
  EnsembleTask task;
  task.task = Task::GroundState;
  task.topology = c.topology();
  task.hamiltonian = h;
  task.options = c.trainOptions();
  task.phases = c.phaseTemplate();
  task.localMinimumGap = c.localMinimumGap;
  const auto stats = restartEnsemble(task, c.restarts, c.seed, workers());
  const bool ok = std::abs(exact - kExactEnergy) <= kExactEnergyTol &&
                  std::abs(stats.meanRegular - kEnsembleEnergy) <= kEnsembleEnergyTol && c.restarts == 50;
  return {ok, fmt("exact %.5f (target %.3f +- %.2f), regular mean %.4f over %d runs, %d local minima "
                  "(target %.3f +- %.2f)",
                  exact, kExactEnergy, kExactEnergyTol, stats.meanRegular, c.restarts - stats.numLocalMinima,
                  stats.numLocalMinima, kEnsembleEnergy, kEnsembleEnergyTol)};
}

struct GeneralizationSummary {
  double trained = 0.0;
  double untrained = 0.0;
};

GeneralizationSummary generalizationOver(const runner::RunConfig& c) {
  const auto topo = c.topology();
  GeneralizationSummary s;
  std::vector<GeneralizationSummary> per(kGeneralizationTargets);
  parallelFor(kGeneralizationTargets, workers(), [&](int k) {
    const auto target = makeTargetChannel(topo, c.targetSeed + static_cast<std::uint64_t>(k), c.phaseTemplate());
    const auto data = buildChannelDataset(topo, target, standardInputs(topo.inputWidth()));
    const auto run =
        trainChannel(topo, data, randomParams(topo, c.seed + static_cast<std::uint64_t>(k), c.phaseTemplate()),
                     c.trainOptions());
    const auto n = c.generalization.numStates;
    per[static_cast<std::size_t>(k)] = {generalizationTest(topo, run.finalParams, target, n, c.generalization.seed).mean,
                                        generalizationTest(topo, run.initialParams, target, n, c.generalization.seed).mean};
  });
  for (const auto& p : per) {
    s.trained += p.trained / kGeneralizationTargets;
    s.untrained += p.untrained / kGeneralizationTargets;
  }
  return s;
}

Outcome generalization() {
  const auto c1 = runner::loadConfig(sourceDir() / "configs/dqnn1_channel.json");
  const auto c2 = runner::loadConfig(sourceDir() / "configs/dqnn2_channel.json");
  const auto g1 = generalizationOver(c1);
  const auto g2 = generalizationOver(c2);
  const double sep1 = g1.trained - g1.untrained;
  const double sep2 = g2.trained - g2.untrained;
  const bool ok = g1.trained > kGeneralizationDqnn1 && g2.trained > kGeneralizationDqnn2 && sep1 >= kSeparation &&
                  sep2 >= kSeparation && c1.generalization.numStates == 100;
  return {ok, fmt("%d targets x 100 states: DQNN1 trained %.4f (> %.2f) untrained %.4f sep %.3f; DQNN2 trained %.5f "
                  "(> %.3f) untrained %.4f sep %.3f (>= %.1f)",
                  kGeneralizationTargets, g1.trained, kGeneralizationDqnn1, g1.untrained, sep1, g2.trained,
                  kGeneralizationDqnn2, g2.untrained, sep2, kSeparation)};
}

Outcome noiseTrends() {
  const auto c = runner::loadConfig(sourceDir() / "configs/h2_sweep.json");
  NoiseSweepConfig sweep;
  sweep.topology = c.topology();
  sweep.hamiltonian = c.hamiltonian();
  sweep.options = c.trainOptions();
  sweep.options.noise.reset();
  sweep.baseline = *c.noiseModel();
  sweep.phases = c.phaseTemplate();
  sweep.timeScales = c.noise->timeScales;
  sweep.zzStrengths = c.noise->zzStrengths;
  sweep.restarts = c.restarts;
  sweep.baseSeed = c.seed;
  sweep.localMinimumGap = c.localMinimumGap;
  const auto result = noiseSweep(sweep, workers());
  auto cell = [&](double t, double z) {
    for (const auto& x : result.cells)
      if (x.timeScale == t && x.zzStrength == z) return x.meanEnergy;
    return std::nan("");
  };
  const double e0 = cell(1, 0), e2 = cell(1, 2), e4 = cell(1, 4), e4t = cell(2, 4);
  const bool trend = e0 <= e2 && e2 <= e4;
  const double halving = e4 - e2;
  const double doubling = e4 - e4t;
  return {trend && halving > doubling,
          fmt("T=1 mean energy at zeta 0/2/4: %.4f %.4f %.4f (non-decreasing: %s); zeta 4->2 gains %.4f, T 1->2 "
              "gains %.4f; %d restarts, %d seeds excluded",
              e0, e2, e4, trend ? "yes" : "no", halving, doubling, sweep.restarts, result.reference.numExcluded)};
}

Outcome tomography() {
  std::mt19937_64 rng(1008);
  int good1 = 0, good2 = 0;
  double worstLin = 0.0;
  constexpr int trials = 50;
  for (int t = 0; t < trials; ++t) {
    const DensityMatrix a(oracle::randomPureState(1, rng));
    const DensityMatrix b(oracle::randomPureState(2, rng));
    const auto ra = reconstructState(sampleMeasurements(a, BasisSet::pauli(1), 10000, deriveSeed(1008, 2 * t)), 1);
    const auto rb = reconstructState(sampleMeasurements(b, BasisSet::pauli(2), 10000, deriveSeed(1008, 2 * t + 1)), 2);
    good1 += fidelity(ra, a) >= kTomography1q ? 1 : 0;
    good2 += fidelity(rb, b) >= kTomography2q ? 1 : 0;
    for (int n = 1; n <= 2; ++n) {
      const DensityMatrix mixed(oracle::randomMixedState(n, rng));
      const auto freq = exactFrequencies(mixed, BasisSet::pauli(n));
      worstLin = std::max(worstLin, traceDistance(reconstructState(freq, n).matrix(), linearInversion(freq, n)));
    }
  }
  const double f1 = static_cast<double>(good1) / trials;
  const double f2 = static_cast<double>(good2) / trials;
  return {f1 >= kTomographyPassFraction && f2 >= kTomographyPassFraction && worstLin <= kLinearInversionTol,
          fmt("1q fidelity >= %.2f in %d/%d, 2q >= %.2f in %d/%d (need %.0f%%); exact vs linear inversion %.2e "
              "(tol %.0e)",
              kTomography1q, good1, trials, kTomography2q, good2, trials, 100 * kTomographyPassFraction, worstLin,
              kLinearInversionTol)};
}

std::string readFile(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "dqnn_acceptance_determinism";
  fs::remove_all(root);
  struct Case {
    std::string name;
    nlohmann::json config;
    runner::CommandResult (*command)(const runner::RunConfig&);
  };
  const std::vector<Case> cases{
      {"channel", {{"topology", "dqnn1"}, {"epochs", 40}, {"restarts", 3}, {"seed", 5}}, runner::cmdTrainChannel},
      {"channel-tomographic",
       {{"topology", "dqnn2"}, {"epochs", 10}, {"restarts", 2}, {"tomographic", true}, {"shots", 2000}},
       runner::cmdTrainChannel},
      {"ground",
       {{"topology", "dqnn1"},
        {"task", "ground-state"},
        {"epochs", 30},
        {"restarts", 3},
        {"hamiltonian", {{"coefficients", {-0.4804, 0.3435, -0.4347, 0.5716, 0.0910, 0.0910}}}},
        {"noise", {{"model", "processor"}, {"zz_strength", 4.0}}}},
       runner::cmdTrainGroundState}};
  int files = 0;
  bool same = true;
  std::string firstDiff;
  for (const auto& c : cases) {
    std::vector<fs::path> dirs;
    for (const char* rep : {"a", "b"}) {
      auto j = c.config;
      j["out"] = (root / c.name / rep).string();
      dirs.push_back(c.command(runner::parseConfig(j)).outDir);
    }
    for (const auto& entry : fs::recursive_directory_iterator(dirs[0])) {
      if (entry.path().filename() != "curve.csv") continue;
      const auto rel = fs::relative(entry.path(), dirs[0]);
      ++files;
      if (readFile(entry.path()) != readFile(dirs[1] / rel)) {
        same = false;
        if (firstDiff.empty()) firstDiff = c.name + "/" + rel.string();
      }
    }
  }
  fs::remove_all(root);
  return {same && files > 0, fmt("%d curve files compared byte for byte across repeated runs%s%s", files,
                                 same ? "" : ", first mismatch: ", firstDiff.c_str())};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limitSeconds;
    Outcome (*check)();
  };
  const Criterion criteria[] = {
      {1, "channel/adjoint duality", 10, duality},
      {2, "gradient consistency", 30, gradients},
      {3, "layered vs monolithic forward pass", 30, monolithic},
      {4, "channel learning", 600, channelLearning},
      {5, "ground-state learning", 300, groundState},
      {6, "generalization", 120, generalization},
      {7, "noise trends", 900, noiseTrends},
      {8, "tomography", 120, tomography},
      {9, "determinism", 600, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool inTime = secs < c.limitSeconds;
    const bool pass = o.pass && inTime;
    failures += pass ? 0 : 1;
    std::printf("[%s] %d. %s: %s; %.1f s (limit %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                secs, c.limitSeconds);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures, std::size(criteria));
  return failures == 0 ? 0 : 1;
}
