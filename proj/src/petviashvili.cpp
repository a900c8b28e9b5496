#include "sbpwave/solitary.hpp"

#include "spectral.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace sbpwave {

namespace {

using spectral::Spectrum;

// Traveling-wave equation L u = N(u) for one equation, evaluated spectrally.
class WaveProblem {
 public:
  WaveProblem(const PetviashviliConfig& cfg) : cfg_(cfg), length_(cfg.domain.length()) {
    xi_ = spectral::wavenumbers(cfg.n, length_);
    const double c = cfg.speed, k = cfg.kappa;
    const Vector xi2 = xi_.array().square();
    switch (cfg.equation) {
      case Equation::bbm:
        symbol_ = ((c - 1.0) + c * xi2.array()).matrix();
        threshold_ = 1.0;
        break;
      case Equation::fw:
        symbol_ = (c - 1.0 / (1.0 + xi2.array())).matrix();
        threshold_ = 1.0;
        break;
      case Equation::ch:
        symbol_ = ((c - 2.0 * k) + c * xi2.array()).matrix();
        threshold_ = 2.0 * k;
        break;
      case Equation::dp:
        symbol_ = ((c - 3.0 * k) + c * xi2.array()).matrix();
        threshold_ = 3.0 * k;
        break;
      case Equation::hh:
        symbol_ = (c * (4.0 + 5.0 * xi2.array() + xi2.array().square()) - 8.0 * k).matrix();
        threshold_ = 2.0 * k;
        break;
      case Equation::bbm_bbm:
        symbol_ = (c * (1.0 + xi2.array())).matrix();
        threshold_ = 1.0;
        break;
      default:
        throw ConfigurationError("petviashvili: unsupported equation " + to_string(cfg.equation));
    }
    if (cfg.kappa != 0.0 && cfg.equation != Equation::ch && cfg.equation != Equation::dp &&
        cfg.equation != Equation::hh)
      throw ConfigurationError("petviashvili: " + to_string(cfg.equation) + " has no kappa family");
    if (!(c > threshold_))
      throw ConfigurationError("petviashvili: linear symbol is not positive definite for this speed");
  }

  bool system() const { return cfg_.equation == Equation::bbm_bbm; }
  double threshold() const { return threshold_; }

  Vector d(const Vector& v, int m) const { return spectral::derivative(v, length_, m); }

  Vector nonlinear(const Vector& s) const {
    const Index n = cfg_.n;
    switch (cfg_.equation) {
      case Equation::bbm:
      case Equation::fw: return 0.5 * s.cwiseProduct(s);
      case Equation::ch: {
        const Vector s1 = d(s, 1), s2 = d(s, 2);
        return (1.5 * s.array().square() - 0.5 * s1.array().square() - s.array() * s2.array()).matrix();
      }
      case Equation::dp: {
        const Vector sq = s.cwiseProduct(s);
        return 2.0 * sq - 0.5 * d(sq, 2);
      }
      case Equation::hh: {
        const Vector s1 = d(s, 1), s2 = d(s, 2), s3 = d(s, 3), s4 = d(s, 4);
        const Vector ls = 4.0 * s - 5.0 * s2 + s4;
        return (s.array() * ls.array() + 2.0 * s.array().square() - 2.5 * s1.array().square() +
                s1.array() * s3.array() - 0.5 * s2.array().square())
            .matrix();
      }
      case Equation::bbm_bbm: {
        const Vector eta = s.head(n), u = s.tail(n);
        return stack(eta.cwiseProduct(u), 0.5 * u.cwiseProduct(u));
      }
      default: break;
    }
    throw ConfigurationError("petviashvili: unsupported equation");
  }

  Vector apply_linear(const Vector& s) const {
    if (!system()) return scale(s, symbol_);
    const Index n = cfg_.n;
    const Vector eta = s.head(n), u = s.tail(n);
    return stack(scale(eta, symbol_) - u, scale(u, symbol_) - eta);
  }

  Vector solve_linear(const Vector& s) const {
    if (!system()) return scale(s, symbol_.cwiseInverse());
    const Index n = cfg_.n;
    const Vector det = (symbol_.array().square() - 1.0).matrix();
    const Vector a = symbol_.cwiseQuotient(det), b = det.cwiseInverse();
    const Vector eta = s.head(n), u = s.tail(n);
    return stack(scale(eta, a) + scale(u, b), scale(eta, b) + scale(u, a));
  }

 private:
  static Vector scale(const Vector& v, const Vector& multiplier) {
    Spectrum s = spectral::forward(v);
    for (Index i = 0; i < v.size(); ++i) s[i] *= multiplier(i);
    return spectral::inverse(s);
  }

  const PetviashviliConfig& cfg_;
  double length_;
  Vector xi_;
  Vector symbol_;
  double threshold_ = 0.0;
};

}  // namespace

PetviashviliConfig default_petviashvili_config(Equation equation) {
  PetviashviliConfig cfg;
  cfg.equation = equation;
  cfg.speed = 1.2;
  switch (equation) {
    case Equation::bbm:
    case Equation::bbm_bbm: cfg.domain = {-90.0, 90.0}; break;
    case Equation::fw: cfg.domain = {-80.0, 80.0}; break;
    case Equation::ch:
      cfg.kappa = 0.5;
      cfg.domain = {-60.0, 60.0};
      break;
    case Equation::dp:
      cfg.kappa = 1.0 / 3.0;
      cfg.domain = {-60.0, 60.0};
      break;
    case Equation::hh:
      cfg.kappa = 0.5;
      cfg.domain = {-90.0, 90.0};
      cfg.n = 1024;
      cfg.tolerance = 5e-11;
      break;
    default: throw ConfigurationError("petviashvili: unsupported equation " + to_string(equation));
  }
  return cfg;
}

TravelingWave petviashvili(const PetviashviliConfig& cfg) {
  if (cfg.n < 16 || cfg.n % 2 != 0) throw ConfigurationError("petviashvili: n must be even and >= 16");
  if (!(cfg.tolerance > 0.0) || cfg.max_iterations < 1)
    throw ConfigurationError("petviashvili: tolerance and iteration limit must be positive");
  const WaveProblem problem(cfg);
  const Grid grid = periodic_grid(cfg.n, cfg.domain);
  const double dx = grid.length() / static_cast<double>(cfg.n);
  const Vector& x = grid.nodes;

  const double amp = cfg.guess_amplitude > 0.0 ? cfg.guess_amplitude : 3.0 * (cfg.speed - problem.threshold());
  const Vector bump = (amp * (-(x.array() / cfg.guess_width).square()).exp()).matrix();
  Vector u = problem.system() ? stack(bump, bump) : bump;

  TravelingWave w;
  w.equation = cfg.equation;
  w.speed = cfg.speed;
  w.kappa = cfg.kappa;
  w.domain = cfg.domain;
  w.nodes = x;
  auto mnorm = [dx](const Vector& v) { return std::sqrt(dx) * v.norm(); };

  double best = std::numeric_limits<double>::infinity();
  int best_at = 0;
  for (int it = 0; it < cfg.max_iterations; ++it) {
    const Vector nu = problem.nonlinear(u);
    const Vector lu = problem.apply_linear(u);
    const double residual = mnorm(lu - nu) / mnorm(u);
    w.residual_history.push_back(residual);
    const double denom = u.dot(nu);
    if (!std::isfinite(residual) || denom == 0.0)
      throw ConstructionError("petviashvili: iteration broke down (degenerate iterate)");
    const double m = u.dot(lu) / denom;
    if (residual <= cfg.tolerance) {
      w.profile = u;
      w.residual = residual;
      w.iterations = it;
      w.stabilizer = m;
      break;
    }
    if (residual < 0.5 * best) {
      best = residual;
      best_at = it;
    } else if (it - best_at > cfg.stagnation_window) {
      std::ostringstream os;
      os << "petviashvili: residual stagnated at " << best << " above tolerance " << cfg.tolerance
         << " (n = " << cfg.n << ")";
      throw ConstructionError(os.str());
    }
    u = (m * m) * problem.solve_linear(nu);
  }
  if (w.profile.size() == 0) {
    std::ostringstream os;
    os << "petviashvili: no convergence after " << cfg.max_iterations << " iterations (residual history:";
    const size_t h = w.residual_history.size();
    for (size_t i = h > 5 ? h - 5 : 0; i < h; ++i) os << ' ' << w.residual_history[i];
    os << ")";
    throw ConstructionError(os.str());
  }
  const auto& hist = w.residual_history;
  for (size_t i = 11; i < hist.size(); ++i)
    if (hist[i] > hist[i - 1] * (1.0 + 1e-6) && hist[i] > 1e3 * cfg.tolerance) {
      std::ostringstream os;
      os << "residual increased at iteration " << i << " (" << hist[i - 1] << " -> " << hist[i] << ")";
      w.warnings.push_back(os.str());
      break;
    }
  return w;
}

}  // namespace sbpwave
