// Python bindings for the two-component Klein-Gordon toolkit: the scattering
// solver, the (phi, chi) decomposition, the charge-conserving time stepper,
// and the pair/inversion operations, with the same names as the C++ API.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <utility>
#include <vector>

#include "kgfv/epr.hpp"
#include "kgfv/errors.hpp"
#include "kgfv/evolution.hpp"
#include "kgfv/fv.hpp"
#include "kgfv/grid.hpp"
#include "kgfv/scattering.hpp"
#include "kgfv/units.hpp"
#include "kgfv/version.hpp"

namespace py = pybind11;
using namespace kgfv;

PYBIND11_MODULE(kgfv, m) {
  m.doc() =
      "Two-component Klein-Gordon toolkit: sharp-step scattering across the "
      "transmission/evanescent/Klein regimes, Feshbach-Villars style "
      "(phi, chi) fields with signed charge density, Crank-Nicolson "
      "wavepacket evolution, and particle-antiparticle pair demonstrations.";
  m.attr("__version__") = kVersion;

  // --- errors ---------------------------------------------------------------
  // Base first: translators run newest-first, so the specific kinds below
  // win over the base for their own exceptions.
  auto& base_error = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base_error.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError",
                                            base_error.ptr());
  py::register_exception<NumericalError>(m, "NumericalError",
                                         base_error.ptr());

  // --- units and grid ---------------------------------------------------------
  py::class_<Units>(m, "Units")
      .def(py::init<>())
      .def_readwrite("hbar", &Units::hbar)
      .def_readwrite("c", &Units::c)
      .def_readwrite("m", &Units::m)
      .def("rest_energy", &Units::rest_energy)
      .def("compton_momentum", &Units::compton_momentum);
  m.def("natural_units", &natural_units, "hbar = c = m = 1");
  m.def("free_energy", &free_energy, py::arg("p"), py::arg("units"));
  m.def("group_velocity", &group_velocity, py::arg("p"), py::arg("units"));
  m.def("momentum_from_energy", &momentum_from_energy, py::arg("energy"),
        py::arg("potential"), py::arg("units"));

  py::class_<Grid1D>(m, "Grid1D")
      .def(py::init<double, double, int>(), py::arg("x_min"), py::arg("x_max"),
           py::arg("n_points"))
      .def_property_readonly("x_min", &Grid1D::x_min)
      .def_property_readonly("x_max", &Grid1D::x_max)
      .def_property_readonly("n_points", &Grid1D::n_points)
      .def_property_readonly("dx", &Grid1D::dx)
      .def("point", &Grid1D::point, py::arg("k"))
      .def("points", &Grid1D::points)
      .def("nearest_index", &Grid1D::nearest_index, py::arg("x"))
      .def("symmetric_about_origin", &Grid1D::symmetric_about_origin);
  m.def("trapezoid", &trapezoid, py::arg("samples"), py::arg("grid"));

  // --- scattering ----------------------------------------------------------
  py::enum_<ParticleKind>(m, "ParticleKind")
      .value("Particle", ParticleKind::Particle)
      .value("Antiparticle", ParticleKind::Antiparticle);

  py::class_<PlaneWave>(m, "PlaneWave")
      .def(py::init<>())
      .def_readwrite("amplitude", &PlaneWave::amplitude)
      .def_readwrite("momentum", &PlaneWave::momentum)
      .def_readwrite("energy", &PlaneWave::energy)
      .def_readwrite("kind", &PlaneWave::kind)
      .def("label_momentum", &PlaneWave::label_momentum)
      .def("label_energy", &PlaneWave::label_energy)
      .def("evaluate", &PlaneWave::evaluate, py::arg("x"), py::arg("t"),
           py::arg("units"));

  py::enum_<Regime>(m, "Regime")
      .value("Transmission", Regime::Transmission)
      .value("Evanescent", Regime::Evanescent)
      .value("KleinZone", Regime::KleinZone);

  py::class_<ScatteringSolution>(m, "ScatteringSolution")
      .def_readonly("E", &ScatteringSolution::E)
      .def_readonly("V0", &ScatteringSolution::V0)
      .def_readonly("p", &ScatteringSolution::p)
      .def_readonly("p_prime", &ScatteringSolution::p_prime)
      .def_readonly("b_over_a", &ScatteringSolution::b_over_a)
      .def_readonly("bprime_over_a", &ScatteringSolution::bprime_over_a)
      .def_readonly("R", &ScatteringSolution::R)
      .def_readonly("T", &ScatteringSolution::T)
      .def_readonly("regime", &ScatteringSolution::regime);

  py::class_<StepDensities>(m, "StepDensities")
      .def_readonly("rho_i", &StepDensities::rho_i)
      .def_readonly("j_i", &StepDensities::j_i)
      .def_readonly("rho_r", &StepDensities::rho_r)
      .def_readonly("j_r", &StepDensities::j_r)
      .def_readonly("rho_t", &StepDensities::rho_t)
      .def_readonly("j_t", &StepDensities::j_t);

  py::class_<SweepEntry>(m, "SweepEntry")
      .def_readonly("V0", &SweepEntry::V0)
      .def_readonly("ok", &SweepEntry::ok)
      .def_readonly("solution", &SweepEntry::solution)
      .def_readonly("error", &SweepEntry::error);

  m.def("classify_regime", &classify_regime, py::arg("E"), py::arg("V0"),
        py::arg("units"));
  m.def("select_branch", &select_branch, py::arg("E"), py::arg("V0"),
        py::arg("units"));
  m.def("solve_step", &solve_step, py::arg("E"), py::arg("V0"),
        py::arg("units"));
  m.def("plane_wave_densities", &plane_wave_densities, py::arg("solution"),
        py::arg("a"), py::arg("units"));
  m.def("relabel_transmitted", &relabel_transmitted, py::arg("solution"),
        py::arg("a"));
  m.def("sweep_reflectivity", &sweep_reflectivity, py::arg("E"),
        py::arg("V0_values"), py::arg("units"));

  // --- two-component fields -------------------------------------------------
  py::class_<KGState>(m, "KGState")
      .def(py::init([](const Grid1D& grid, std::vector<Complex> psi,
                       std::vector<Complex> psi_dot) {
             return KGState{grid, std::move(psi), std::move(psi_dot)};
           }),
           py::arg("grid"), py::arg("psi"), py::arg("psi_dot"))
      .def_readwrite("grid", &KGState::grid)
      .def_readwrite("psi", &KGState::psi)
      .def_readwrite("psi_dot", &KGState::psi_dot);

  py::class_<FVField>(m, "FVField")
      .def(py::init([](const Grid1D& grid, std::vector<Complex> phi,
                       std::vector<Complex> chi) {
             return FVField{grid, std::move(phi), std::move(chi)};
           }),
           py::arg("grid"), py::arg("phi"), py::arg("chi"))
      .def_readwrite("grid", &FVField::grid)
      .def_readwrite("phi", &FVField::phi)
      .def_readwrite("chi", &FVField::chi);

  m.def("decompose", &decompose, py::arg("state"), py::arg("potential"),
        py::arg("units"));
  m.def("recompose", &recompose, py::arg("field"), py::arg("potential"),
        py::arg("units"));
  m.def("charge_density",
        py::overload_cast<const FVField&>(&charge_density),
        py::arg("field"));
  m.def("charge_density",
        py::overload_cast<const KGState&, const std::vector<double>&,
                          const Units&>(&charge_density),
        py::arg("state"), py::arg("potential"), py::arg("units"));
  m.def("current_density", &current_density, py::arg("state"),
        py::arg("units"));
  m.def("total_charge",
        py::overload_cast<const std::vector<double>&, const Grid1D&>(
            &total_charge),
        py::arg("rho"), py::arg("grid"));
  m.def("total_charge", py::overload_cast<const FVField&>(&total_charge),
        py::arg("field"));
  m.def("chi_phi_ratio", &chi_phi_ratio, py::arg("field"));

  // --- time evolution -----------------------------------------------------
  py::enum_<PotentialKind>(m, "PotentialKind")
      .value("SharpStep", PotentialKind::SharpStep)
      .value("SmoothStep", PotentialKind::SmoothStep);

  py::class_<PotentialProfile>(m, "PotentialProfile")
      .def(py::init<>())
      .def_readwrite("kind", &PotentialProfile::kind)
      .def_readwrite("V0", &PotentialProfile::V0)
      .def_readwrite("center", &PotentialProfile::center)
      .def_readwrite("width", &PotentialProfile::width)
      .def("evaluate", &PotentialProfile::evaluate, py::arg("x"));
  m.def("sample_potential", &sample_potential, py::arg("profile"),
        py::arg("grid"));

  py::class_<WavepacketSpec>(m, "WavepacketSpec")
      .def(py::init<>())
      .def_readwrite("x0", &WavepacketSpec::x0)
      .def_readwrite("sigma", &WavepacketSpec::sigma)
      .def_readwrite("p0", &WavepacketSpec::p0)
      .def_readwrite("amplitude", &WavepacketSpec::amplitude);
  m.def("wavepacket_warnings", &wavepacket_warnings, py::arg("spec"),
        py::arg("units"));
  m.def("build_initial_wavepacket", &build_initial_wavepacket, py::arg("spec"),
        py::arg("grid"), py::arg("units"));
  m.def("max_stable_dt", &max_stable_dt, py::arg("grid"), py::arg("units"));
  m.def("step_evolve", &step_evolve, py::arg("field"), py::arg("potential"),
        py::arg("dt"), py::arg("units"));

  py::class_<CrankNicolsonStepper>(m, "CrankNicolsonStepper")
      .def(py::init<const Grid1D&, const std::vector<double>&, double,
                    const Units&>(),
           py::arg("grid"), py::arg("potential"), py::arg("dt"),
           py::arg("units"))
      .def("advance", &CrankNicolsonStepper::advance, py::arg("field"));

  py::class_<Snapshot>(m, "Snapshot")
      .def_readonly("time", &Snapshot::time)
      .def_readonly("field", &Snapshot::field);

  py::class_<SimulationRecord>(m, "SimulationRecord")
      .def_readonly("times", &SimulationRecord::times)
      .def_readonly("Q_total", &SimulationRecord::Q_total)
      .def_readonly("Q_left", &SimulationRecord::Q_left)
      .def_readonly("Q_right", &SimulationRecord::Q_right)
      .def_readonly("max_abs_psi", &SimulationRecord::max_abs_psi)
      .def_readonly("snapshots", &SimulationRecord::snapshots);

  py::class_<RunOptions>(m, "RunOptions")
      .def(py::init<>())
      .def_readwrite("record_every", &RunOptions::record_every)
      .def_readwrite("snapshot_every", &RunOptions::snapshot_every)
      .def_readwrite("absorbing_boundary", &RunOptions::absorbing_boundary);

  m.def("run_simulation", &run_simulation, py::arg("packet"),
        py::arg("potential"), py::arg("grid"), py::arg("t_final"),
        py::arg("dt"), py::arg("units"), py::arg("options") = RunOptions{});

  // --- pairs, operators, inversion ------------------------------------------
  py::enum_<OperatorKind>(m, "OperatorKind")
      .value("Position", OperatorKind::Position)
      .value("Momentum", OperatorKind::Momentum)
      .value("MomentumConjugate", OperatorKind::MomentumConjugate)
      .value("Energy", OperatorKind::Energy)
      .value("EnergyConjugate", OperatorKind::EnergyConjugate);

  py::class_<OperatorTerm>(m, "OperatorTerm")
      .def(py::init<>())
      .def_readwrite("kind", &OperatorTerm::kind)
      .def_readwrite("particle", &OperatorTerm::particle)
      .def_readwrite("coefficient", &OperatorTerm::coefficient);

  m.def("separation_operator", &separation_operator);
  m.def("sum_position_operator", &sum_position_operator);
  m.def("total_momentum_operator", &total_momentum_operator);
  m.def("mixed_total_momentum_operator", &mixed_total_momentum_operator);

  py::class_<SeparableFunction::Term>(m, "SeparableTerm")
      .def_readwrite("g", &SeparableFunction::Term::g)
      .def_readwrite("h", &SeparableFunction::Term::h);

  py::class_<SeparableFunction>(m, "SeparableFunction")
      .def_readwrite("grid", &SeparableFunction::grid)
      .def_readwrite("terms", &SeparableFunction::terms);

  m.def("gaussian_product", &gaussian_product, py::arg("grid"), py::arg("c1"),
        py::arg("s1"), py::arg("c2"), py::arg("s2"));
  m.def("random_gaussian_sum", &random_gaussian_sum, py::arg("grid"),
        py::arg("count"), py::arg("spread"), py::arg("w_min"),
        py::arg("w_max"), py::arg("seed"));
  m.def("apply_operator", &apply_operator, py::arg("op"), py::arg("f"),
        py::arg("units"));
  m.def("l2_norm", &l2_norm, py::arg("f"));
  m.def("commutator_residual", &commutator_residual, py::arg("A"),
        py::arg("B"), py::arg("test_functions"), py::arg("units"));

  py::enum_<PairRelation>(m, "PairRelation")
      .value("OppositeMomentaFixedSeparation",
             PairRelation::OppositeMomentaFixedSeparation)
      .value("OppositePositionsFixedTotalMomentum",
             PairRelation::OppositePositionsFixedTotalMomentum);

  py::class_<EPRPair>(m, "EPRPair")
      .def_readonly("wave1", &EPRPair::wave1)
      .def_readonly("wave2", &EPRPair::wave2)
      .def_readonly("relation", &EPRPair::relation);

  py::class_<ObservedValues>(m, "ObservedValues")
      .def_readonly("momentum", &ObservedValues::momentum)
      .def_readonly("energy", &ObservedValues::energy);

  m.def("build_epr_pair", &build_epr_pair, py::arg("p1"), py::arg("relation"),
        py::arg("units"));
  m.def("apply_conjugate_operators", &apply_conjugate_operators,
        py::arg("wave"), py::arg("units"));
  m.def("spacetime_inversion",
        py::overload_cast<const PlaneWave&>(&spacetime_inversion),
        py::arg("wave"));
  m.def("spacetime_inversion",
        py::overload_cast<const FVField&>(&spacetime_inversion),
        py::arg("field"));
}
