#include "dmet/demo.hpp"

#include "dmet/errors.hpp"

namespace dmet {

namespace {

void check_device(int device) {
  if (device != 1 && device != 2)
    throw ConfigError("demo device must be 1 or 2, got " + std::to_string(device));
}

// Acquisition environment shared by a device and its reference film: scatter
// peaks and smooth continuum per incident photon. Device 2 sits on a rougher,
// brighter-scattering substrate, which is what limits its contrast.
void apply_environment(DeviceLayout& layout, int device) {
  if (device == 1) {
    layout.scatter = {1.0e-8, 2.5e-8, 90.0};
    layout.continuum.coeffs = {4.5e-9};
  } else {
    layout.scatter = {2.5e-8, 6.25e-8, 90.0};
    layout.continuum.coeffs = {6.0e-9};
  }
}

}  // namespace

DeviceLayout demo_device_layout(int device) {
  check_device(device);
  DeviceLayout layout;
  layout.x0_um = 0.0;
  layout.y0_um = 0.0;
  layout.x1_um = 100.0;
  layout.y1_um = 50.0;

  const double n_as = demo_truth_density_per_cm2(device);

  // Hall bar: 90 x 20 um channel with three lead pairs.
  layout.regions.push_back({"As", n_as, Polygon::rect(5, 15, 95, 35)});
  for (double xc : {23.0, 50.0, 77.0}) {
    layout.regions.push_back({"As", n_as, Polygon::rect(xc - 3, 35, xc + 3, 46)});
    layout.regions.push_back({"As", n_as, Polygon::rect(xc - 3, 4, xc + 3, 15)});
  }
  // Contact pads: Al metallization with a trace-iron overlayer.
  for (double xc : {23.0, 50.0, 77.0}) {
    layout.regions.push_back({"Al", 6.0e15, Polygon::rect(xc - 6, 46, xc + 6, 50)});
    layout.regions.push_back({"Al", 6.0e15, Polygon::rect(xc - 6, 0, xc + 6, 4)});
    layout.regions.push_back({"Fe", 1.0e13, Polygon::rect(xc - 6, 46, xc + 6, 50)});
    layout.regions.push_back({"Fe", 1.0e13, Polygon::rect(xc - 6, 0, xc + 6, 4)});
  }
  // Au alignment strips along the field edges.
  layout.regions.push_back({"Au", 2.0e13, Polygon::rect(0, 0, 3, 50)});
  layout.regions.push_back({"Au", 2.0e13, Polygon::rect(97, 0, 100, 50)});

  // Uniform substrate and air-path signals.
  layout.background_per_cm2["Si"] = 1.0e18;
  layout.background_per_cm2["Ar"] = 3.0e12;

  apply_environment(layout, device);
  layout.validate();
  return layout;
}

DeviceLayout demo_reference_layout(int device) {
  check_device(device);
  DeviceLayout layout;
  layout.x0_um = 0.0;
  layout.y0_um = 0.0;
  layout.x1_um = 20.0;
  layout.y1_um = 20.0;
  layout.regions.push_back(
      {"As", demo_reference_density_per_cm2(), Polygon::rect(0, 0, 20, 20)});
  layout.background_per_cm2["Si"] = 1.0e18;
  layout.background_per_cm2["Ar"] = 3.0e12;
  apply_environment(layout, device);
  layout.validate();
  return layout;
}

double demo_reference_density_per_cm2() { return 1.0e14; }

BeamConfig demo_beam(int device) {
  check_device(device);
  BeamConfig beam;  // defaults: 11.88 keV, 1e10 photons/s, 1 x 1 um, 0.2 s
  if (device == 2) {
    beam.flux_photons_per_s = 1e11;
    beam.spot_width_um = 3.0;
  }
  beam.validate();
  return beam;
}

DetectorConfig demo_detector() {
  DetectorConfig det;  // defaults: d = 2 cm, 50 mm^2, 2048 x 0.01 keV bins
  det.validate();
  return det;
}

double demo_truth_density_per_cm2(int device) {
  check_device(device);
  return device == 1 ? 1.4e14 : 5.6e12;
}

ExternalReference demo_external_reference(int device) {
  check_device(device);
  ExternalReference ref;
  if (device == 1) {
    ref.n_stm_cm2 = Measured{1.6e14, 0.3e14};
    ref.n_sims_cm2 = Measured{1.8e14, 0.2e14};
    ref.t_sims_nm = Measured{2.7, 0.2};
  } else {
    ref.n_stm_cm2 = Measured{1.0e13, 0.3e13};
    ref.n_sims_cm2 = Measured{2.1e13, 0.2e13};
    ref.t_sims_nm = Measured{3.6, 0.4};
  }
  ref.validate();
  return ref;
}

RunSummary demo_transport_before() {
  RunSummary run;
  run.label = "before exposure";
  run.n_per_cm2 = Measured{1.31e14, 0.03e14};
  run.L_nm = Measured{4.8, 0.1};
  run.Lphi_nm = Measured{73.6, 0.4};
  run.p = Measured{1.9, 0.3};
  run.t_nm = Measured{0.98, 0.02};
  return run;
}

RunSummary demo_transport_after() {
  RunSummary run;
  run.label = "after exposure";
  run.n_per_cm2 = Measured{1.27e14, 0.06e14};
  run.L_nm = Measured{4.9, 0.2};
  run.Lphi_nm = Measured{74.2, 0.3};
  run.p = Measured{2.3, 0.5};
  run.t_nm = Measured{0.97, 0.02};
  return run;
}

}  // namespace dmet
