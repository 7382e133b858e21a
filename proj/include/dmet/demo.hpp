#pragma once

#include "dmet/hall.hpp"
#include "dmet/layout.hpp"
#include "dmet/types.hpp"

namespace dmet {

// Built-in demo devices: two As delta-layer Hall bars with Al/Fe contact
// structures and Au alignment marks, on a 100 x 50 um field. Device 1 is the
// high-density layer probed with a 1 x 1 um beam; device 2 is the low-density
// layer probed with a wider, brighter beam over a noisier substrate. A
// uniform reference film of known As density is available for calibration.
// These fixtures drive the example configs and the end-to-end tests.

// Hall-bar layout: As bar 90 x 20 um with six contact leads, Al/Fe pads,
// Au edge marks, Si substrate and Ar air-path background.
DeviceLayout demo_device_layout(int device);  // device in {1, 2}

// Uniform reference film matching the device's acquisition environment.
DeviceLayout demo_reference_layout(int device);
double demo_reference_density_per_cm2();

BeamConfig demo_beam(int device);
DetectorConfig demo_detector();

// True As areal density of the demo layer [cm^-2].
double demo_truth_density_per_cm2(int device);

// Independently measured values quoted for the demo devices.
ExternalReference demo_external_reference(int device);

// Transport parameter sets used to synthesize demo magnetotransport data:
// the device-1 state before and after X-ray exposure.
RunSummary demo_transport_before();
RunSummary demo_transport_after();

}  // namespace dmet
