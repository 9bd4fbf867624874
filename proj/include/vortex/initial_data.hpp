#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "vortex/forcing.hpp"
#include "vortex/mollifier.hpp"
#include "vortex/spectral_field.hpp"

namespace vortex {

/// cos(k.x + phase).
struct SingleMode {
  int k1 = 1;
  int k2 = 0;
  double phase = 0.0;
};

/// Random phases with |w_hat(k)| ~ |k|^{-slope} on 1 <= max|k_i| <= kmax,
/// scaled to unit RMS.
struct MultiMode {
  std::uint64_t seed = 0;
  double slope = 1.0;
  int kmax = 4;
};

/// chi(|x - c|) |x - c|^{-alpha} with chi a smooth cutoff equal to one inside
/// half the cutoff radius. Each node carries the L^p mean of the profile over
/// its cell, p being assert_lp (1 when absent), so the nodal L^p norm matches
/// the continuum one.
struct PowerSingularity {
  double c1 = 3.0;
  double c2 = 3.0;
  double alpha = 1.0;
  double cutoff_radius = 1.5;
};

/// Smoothed indicator of a disk, (1 - tanh((r - radius) / width)) / 2.
struct Patchlike {
  double c1 = 3.0;
  double c2 = 3.0;
  double radius = 1.0;
  double width = 0.1;
};

using DataKind = std::variant<SingleMode, MultiMode, PowerSingularity, Patchlike>;

struct InitialDataSpec {
  DataKind kind = SingleMode{};
  double amplitude = 1.0;
  /// Request that the datum be in L^p for this exponent; a power singularity
  /// with alpha >= 2/p is then rejected with AlphaOutOfRange.
  std::optional<double> assert_lp;
};

/// Zero-mean, dealiased field of one component.
Field build_initial(const InitialDataSpec& spec, const TorusGrid& grid);

/// Superposition of several components.
Field build_initial(std::span<const InitialDataSpec> specs, const TorusGrid& grid);

/// nu-indexed data converging to the base datum as nu -> 0.
struct PerturbationFamily {
  enum class Mode { None, MollifyByNu, AdditiveHighMode };
  std::vector<InitialDataSpec> base;
  Mode mode = Mode::None;
  double exponent = 0.5;  // beta for MollifyByNu (ell = nu^{-beta}), gamma for AdditiveHighMode
  MollifierProfile profile = MollifierProfile::Gaussian;
  int high_k1 = 8;
  int high_k2 = 3;
  double high_amplitude = 1.0;
};

/// The datum at viscosity nu; nu = 0 gives the base datum. Deterministic.
Field build_family(const PerturbationFamily& family, double nu, const TorusGrid& grid);

struct FamilyConvergence {
  std::vector<double> distances;  // || w_0^nu - w_0 ||_p along the ladder
  bool monotone = true;           // each distance within 5% of being below the previous one
};

FamilyConvergence check_family(const PerturbationFamily& family, std::span<const double> nu_ladder,
                               const TorusGrid& grid, double p);

/// Forcing g^nu(t, x) = shape^nu(x) envelope(t).
struct ForcingSpec {
  PerturbationFamily shape;
  TemporalEnvelope envelope;
  bool zero = true;
};

Forcing build_forcing(const ForcingSpec& spec, const TorusGrid& grid, double nu = 0.0);

}  // namespace vortex
