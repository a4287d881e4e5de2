#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "netdens/errors.hpp"

namespace netdens {

// Radio parameters shared by all nodes. noise_density_dbm_hz is the noise
// power spectral density, so the SNR entering the capacity formula is
// dimensionless. fading_margin_bps is a rate back-off subtracted from
// capacity to absorb channel uncertainty.
struct RadioParams {
  double tx_power_dbm = 0.0;
  double bandwidth_hz = 20e6;
  double noise_density_dbm_hz = -172.0;
  double path_loss_index = 3.0;
  double fading_margin_bps = 0.0;

  void validate() const {
    if (!(bandwidth_hz > 0.0)) throw DomainError("bandwidth must be > 0");
    if (!(path_loss_index > 0.0)) throw DomainError("path loss index must be > 0");
    if (!(fading_margin_bps >= 0.0)) throw DomainError("fading margin must be >= 0");
  }
};

// Log-distance path loss: P(d) = P_Tx - 10 * eps * log10(d), in dBm.
inline double received_power_dbm(const RadioParams& params, double distance_m) {
  if (!(distance_m > 0.0))
    throw DomainError("received_power: distance must be > 0, got " +
                      std::to_string(distance_m));
  return params.tx_power_dbm - 10.0 * params.path_loss_index * std::log10(distance_m);
}

// Shannon capacity with the SNR taken against the noise density:
// C(d) = B * log2(1 + gamma(d)/B), gamma(d) = 10^((P(d) - N0)/10).
inline double channel_capacity_bps(const RadioParams& params, double distance_m) {
  params.validate();
  const double p_rx = received_power_dbm(params, distance_m);
  const double gamma = std::pow(10.0, (p_rx - params.noise_density_dbm_hz) / 10.0);
  return params.bandwidth_hz * std::log2(1.0 + gamma / params.bandwidth_hz);
}

// Capacity after the fading margin: max(C(d) - dC, 0).
inline double effective_capacity_bps(const RadioParams& params, double distance_m) {
  return std::max(channel_capacity_bps(params, distance_m) - params.fading_margin_bps,
                  0.0);
}

}  // namespace netdens
