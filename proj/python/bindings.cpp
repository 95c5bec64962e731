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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dqnn/linalg.hpp"
#include "dqnn/network.hpp"
#include "dqnn/noise.hpp"
#include "dqnn/noise_sweep.hpp"
#include "dqnn/runner.hpp"
#include "dqnn/tomography.hpp"
#include "dqnn/training.hpp"

namespace py = pybind11;
using namespace dqnn;

namespace {

std::vector<ComplexMatrix> matrices(const ForwardTrace& t) {
  std::vector<ComplexMatrix> out;
  for (const auto& s : t.states) out.push_back(s.matrix());
  return out;
}

std::vector<ComplexMatrix> matrices(const BackwardTrace& t) {
  std::vector<ComplexMatrix> out;
  for (const auto& s : t.terms) out.push_back(s.matrix());
  return out;
}

py::dict commandResult(const runner::CommandResult& r) {
  py::dict d;
  d["out_dir"] = r.outDir.string();
  d["summary"] = r.summary.dump();
  return d;
}

}  // namespace

PYBIND11_MODULE(_dqnn, m) {
  m.doc() = "Density-matrix simulation and training of deep quantum neural networks";

  py::class_<DensityMatrix>(m, "DensityMatrix")
      .def(py::init<ComplexMatrix>(), py::arg("matrix"))
      .def_static("from_ket", &DensityMatrix::fromKet)
      .def_static("zeros", &DensityMatrix::zeros)
      .def_static("maximally_mixed", &DensityMatrix::maximallyMixed)
      .def_property_readonly("num_qubits", &DensityMatrix::numQubits)
      .def_property_readonly("matrix", &DensityMatrix::matrix)
      .def("purity", &DensityMatrix::purity);

  m.def("fidelity", &fidelity, py::arg("rho"), py::arg("tau"));
  m.def("kron", &kron);
  m.def(
      "partial_trace",
      [](const ComplexMatrix& mat, std::vector<int> keep, int total) {
        return partialTrace(mat, std::span<const int>(keep), total);
      },
      py::arg("matrix"), py::arg("keep"), py::arg("total"));

  py::class_<NetworkTopology>(m, "NetworkTopology")
      .def_static("from_widths", &NetworkTopology::fromWidths)
      .def_static("dqnn1", &NetworkTopology::dqnn1)
      .def_static("dqnn1_hardware_order", &NetworkTopology::dqnn1HardwareOrder)
      .def_static("dqnn2", &NetworkTopology::dqnn2)
      .def_readonly("widths", &NetworkTopology::widths)
      .def_property_readonly("num_layers", &NetworkTopology::numLayers);

  py::class_<PerceptronParams>(m, "PerceptronParams")
      .def(py::init<>())
      .def_readwrite("theta1", &PerceptronParams::theta1)
      .def_readwrite("theta2", &PerceptronParams::theta2)
      .def_readwrite("phi", &PerceptronParams::phi);

  py::class_<NetworkParams>(m, "NetworkParams")
      .def_static("uniform", &NetworkParams::uniform, py::arg("topology"), py::arg("phi") = std::numbers::pi)
      .def_readwrite("interfaces", &NetworkParams::interfaces)
      .def("num_thetas", &NetworkParams::numThetas);

  m.def("random_params", &randomParams, py::arg("topology"), py::arg("seed"), py::arg("phases") = py::none());
  m.def("with_hardware_phases", &withHardwarePhases);
  m.def(
      "forward_pass",
      [](const DensityMatrix& in, const NetworkTopology& topo, const NetworkParams& p) {
        return matrices(forwardPass(in, topo, p));
      },
      "Layer states from input to output.");
  m.def(
      "backward_pass",
      [](const ComplexMatrix& sigmaOut, const NetworkTopology& topo, const NetworkParams& p) {
        return matrices(backwardPass(BackwardTerm(sigmaOut), topo, p));
      },
      "Backward terms indexed by layer.");
  m.def(
      "noisy_forward_pass",
      [](const DensityMatrix& in, const NetworkTopology& topo, const NetworkParams& p, double zeta, double timeScale) {
        NoiseModel noise = NoiseModel::processorBaseline(topo, zeta);
        noise.timeScale = timeScale;
        return matrices(noisyForwardPass(in, topo, p, noise));
      },
      py::arg("rho"), py::arg("topology"), py::arg("params"), py::arg("zz_strength") = 0.0,
      py::arg("time_scale") = 1.0);

  m.def(
      "build_molecular_hamiltonian",
      [](const std::array<double, 6>& g) { return buildMolecularHamiltonian(g).matrix(); }, py::arg("coefficients"));
  m.def(
      "ground_energy", [](const ComplexMatrix& h) { return groundEnergy(BackwardTerm(h)); }, py::arg("hamiltonian"));

  py::class_<TrainOptions>(m, "TrainOptions")
      .def(py::init<>())
      .def_readwrite("learning_rate", &TrainOptions::learningRate)
      .def_readwrite("epochs", &TrainOptions::epochs)
      .def_property(
          "gradient", [](const TrainOptions& o) { return toString(o.scheme); },
          [](TrainOptions& o, const std::string& s) { o.scheme = parseGradientScheme(s); })
      .def_readwrite("tomography_shots", &TrainOptions::tomographyShots)
      .def_readwrite("tomography_seed", &TrainOptions::tomographySeed);

  py::class_<TrainRun>(m, "TrainRun")
      .def_readonly("seed", &TrainRun::seed)
      .def_readonly("curve", &TrainRun::curve)
      .def_readonly("final_loss", &TrainRun::finalLoss)
      .def_readonly("initial_params", &TrainRun::initialParams)
      .def_readonly("final_params", &TrainRun::finalParams)
      .def_readonly("converged", &TrainRun::converged);

  py::class_<ChannelDataset>(m, "ChannelDataset")
      .def_readonly("inputs", &ChannelDataset::inputs)
      .def_readonly("targets", &ChannelDataset::targets);

  m.def("standard_inputs", &standardInputs);
  m.def("make_target_channel", &makeTargetChannel, py::arg("topology"), py::arg("seed"),
        py::arg("phases") = py::none());
  m.def("build_channel_dataset", &buildChannelDataset);
  m.def("train_channel", &trainChannel, py::arg("topology"), py::arg("dataset"), py::arg("init"),
        py::arg("options"));
  m.def(
      "train_ground_state",
      [](const NetworkTopology& topo, const ComplexMatrix& h, const NetworkParams& init, const TrainOptions& o) {
        return trainGroundState(topo, BackwardTerm(h), init, o);
      },
      py::arg("topology"), py::arg("hamiltonian"), py::arg("init"), py::arg("options"));
  m.def(
      "generalization_test",
      [](const NetworkTopology& topo, const NetworkParams& p, const NetworkParams& target, int n, std::uint64_t seed) {
        return generalizationTest(topo, p, target, n, seed).fidelities;
      },
      py::arg("topology"), py::arg("params"), py::arg("target_params"), py::arg("num_states") = 100,
      py::arg("seed") = 7);

  m.def(
      "tomographic_estimate",
      [](const DensityMatrix& rho, long shots, std::uint64_t seed) {
        return tomographicEstimate(rho, shots, seed).matrix();
      },
      py::arg("rho"), py::arg("shots"), py::arg("seed"));
  m.def(
      "sample_measurements",
      [](const DensityMatrix& rho, long shots, std::uint64_t seed) {
        return formatRecords(sampleMeasurements(rho, BasisSet::pauli(rho.numQubits()), shots, seed));
      },
      py::arg("rho"), py::arg("shots"), py::arg("seed"));

  auto run = [](runner::CommandResult (*cmd)(const runner::RunConfig&)) {
    return [cmd](const std::string& configJson) {
      return commandResult(cmd(runner::parseConfig(nlohmann::json::parse(configJson))));
    };
  };
  m.def("cmd_train_channel", run(runner::cmdTrainChannel), py::arg("config_json"));
  m.def("cmd_train_ground", run(runner::cmdTrainGroundState), py::arg("config_json"));
  m.def("cmd_sweep_noise", run(runner::cmdSweepNoise), py::arg("config_json"));
  m.def("cmd_eval_generalization", run(runner::cmdEvalGeneralization), py::arg("config_json"));
  m.def("cmd_tomo_demo", run(runner::cmdTomographyDemo), py::arg("config_json"));
}
