#pragma once

#include "sbpwave/timeint.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sbpwave {

/// Traveling wave u(t, x) = profile(x - speed t), sampled on a uniform periodic grid.
/// Systems (BBM-BBM) store (eta, u) stacked.
struct TravelingWave {
  Equation equation = Equation::bbm;
  double speed = 0.0;
  /// The wave solves the kappa-shifted equation with this kappa.
  double kappa = 0.0;
  Domain domain;
  /// Nodes x_min + j L / n of the sampling grid.
  Vector nodes;
  Vector profile;
  double residual = 0.0;
  int iterations = 0;
  double stabilizer = 1.0;
  std::vector<double> residual_history;
  std::vector<std::string> warnings;
  /// Analytic BBM sech^2 wave: A sech^2(K (x - ct)) + offset.
  bool analytic = false;
  double amplitude = 0.0;
  double width = 0.0;
  double offset = 0.0;

  int components() const { return sbpwave::components(equation); }
  /// State at time t on arbitrary nodes inside the periodic domain (stacked for systems).
  Vector evaluate(const Vector& x, double t = 0.0) const;
};

/// A = 3(c - 1), K = sqrt(1 - 1/c) / 2; sampled on n uniform nodes.
TravelingWave bbm_solitary(double c, Domain domain, Index n = 1024);

struct PetviashviliConfig {
  Equation equation = Equation::bbm;
  double speed = 1.2;
  double kappa = 0.0;
  Domain domain{-90.0, 90.0};
  Index n = 4096;
  double tolerance = 1e-11;
  int max_iterations = 2000;
  /// Give up when the best residual has not halved for this many iterations.
  int stagnation_window = 200;
  /// Gaussian initial guess A exp(-x^2 / sigma^2); amplitude <= 0 picks a default.
  double guess_amplitude = 0.0;
  double guess_width = 5.0;
};

/// Desk defaults per equation: speed 1.2, kappa CH 1/2, DP 1/3, HH 1/2, grid and tolerance
/// above the roundoff floor of the highest derivative in N(u).
PetviashviliConfig default_petviashvili_config(Equation equation);

/// Stabilized fixed-point iteration L u = N(u) on a Fourier grid; throws ConstructionError on failure.
TravelingWave petviashvili(const PetviashviliConfig& config);

/// Solution of the equation with kappa' = kappa_wave - kappa: profile + kappa, speed + kappa.
/// Only CH, DP and HH have a kappa family; other equations accept kappa = 0 only.
TravelingWave kappa_transform(const TravelingWave& wave, double kappa);

/// Trigonometric interpolant of samples on n uniform nodes of a periodic domain, evaluated at x.
Vector trigonometric_resample(const Vector& samples, Domain domain, const Vector& x);

void write_wave_csv(std::ostream& os, const TravelingWave& wave);

/// Closed-form manufactured solution and strong-form source.
struct ManufacturedCase {
  Equation equation = Equation::bbm;
  bool periodic = true;
  Domain domain{0.0, 1.0};
  std::function<double(double, double)> u;
  std::function<double(double, double)> eta;
  std::function<double(double, double)> source_u;
  std::function<double(double, double)> source_eta;

  /// Exact state on the given nodes (stacked for systems).
  Vector state(const Vector& x, double t) const;
  /// Source on the given nodes (stacked for systems).
  Vector source(const Vector& x, double t) const;
};

/// Supported: bbm, fw, ch (alpha-independent), dp, hh, bbm_bbm (periodic) and
/// bbm_bbm_reflecting (bounded).
ManufacturedCase manufactured_case(Equation equation, bool periodic = true);

/// Semidiscrete rhs plus the source added through the equation's elliptic inverse.
RhsFunction manufactured_rhs(const SemidiscretizationPtr& sd, const ManufacturedCase& mc);

}  // namespace sbpwave
