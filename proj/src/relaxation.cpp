#include "sbpwave/timeint.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <cmath>
#include <limits>
#include <sstream>

namespace sbpwave {

void RelaxationConfig::validate() const {
  if (!(half_width > 0.0 && half_width < 1.0))
    throw ConfigurationError("relaxation: bracket half-width must lie in (0, 1)");
  if (!(tolerance > 0.0)) throw ConfigurationError("relaxation: tolerance must be positive");
  if (max_iterations < 1 || max_expansions < 0)
    throw ConfigurationError("relaxation: iteration limits must be positive");
}

namespace {

bool opposite(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

template <class G>
double bracketed_root(G& g, double a, double b, double ga, double gb, int max_iterations) {
  if (ga == 0.0) return a;
  if (gb == 0.0) return b;
  const double eps = std::numeric_limits<double>::epsilon();
  auto tol = [eps](double x, double y) { return std::abs(y - x) <= 4.0 * eps * std::max(std::abs(x), std::abs(y)); };
  std::uintmax_t iters = static_cast<std::uintmax_t>(max_iterations);
  const auto r = boost::math::tools::toms748_solve(g, a, b, ga, gb, tol, iters);
  const double g1 = g(r.first);
  const double g2 = g(r.second);
  return std::abs(g1) <= std::abs(g2) ? r.first : r.second;
}

}  // namespace

double solve_gamma(const Functional& J, const Vector& u, const Vector& d, double dt,
                   const RelaxationConfig& config) {
  if (!d.allFinite()) throw StepFailure("relaxation: update direction is not finite");
  if (dt == 0.0 || d.cwiseAbs().maxCoeff() == 0.0) return 1.0;
  const double j0 = J(u);
  Vector trial(u.size());
  auto g = [&](double gamma) {
    trial = u + (gamma * dt) * d;
    return J(trial) - j0;
  };
  const double g1 = g(1.0);
  if (g1 == 0.0) return 1.0;
  double lo = 1.0 - config.half_width;
  double hi = 1.0 + config.half_width;
  double glo = g(lo);
  double ghi = g(hi);
  for (int k = 1; !opposite(glo, g1) && !opposite(ghi, g1) && glo != 0.0 && ghi != 0.0; ++k) {
    if (k > config.max_expansions) {
      std::ostringstream os;
      os << "relaxation: no sign change of J(u + gamma dt d) - J(u) in [" << lo << ", " << hi
         << "] (dt = " << dt << ")";
      throw StepFailure(os.str());
    }
    lo = (1.0 - config.half_width) / std::ldexp(1.0, k);
    hi = 1.0 + config.half_width * std::ldexp(1.0, k);
    glo = g(lo);
    ghi = g(hi);
  }
  double best = std::numeric_limits<double>::quiet_NaN();
  if (opposite(glo, g1) || glo == 0.0) best = bracketed_root(g, lo, 1.0, glo, g1, config.max_iterations);
  if (opposite(ghi, g1) || ghi == 0.0) {
    const double right = bracketed_root(g, 1.0, hi, g1, ghi, config.max_iterations);
    if (std::isnan(best) || std::abs(right - 1.0) < std::abs(best - 1.0)) best = right;
  }
  return best;
}

std::optional<double> quadratic_gamma(const Functional& J, const Vector& u, const Vector& d, double dt) {
  const double j0 = J(u);
  const double gp = J(u + dt * d) - j0;
  const double gm = J(u - dt * d) - j0;
  const double a = 0.5 * (gp + gm);
  const double b = 0.5 * (gp - gm);
  if (a == 0.0) return std::nullopt;
  return -b / a;
}

StepResult relaxation_step(const ButcherTableau& tableau, const RhsFunction& f, const Vector& u,
                           double t, double dt, const Functional& J, const RelaxationConfig& config) {
  const RkStep step = rk_step(tableau, f, u, t, dt);
  StepResult out;
  out.direction = step.direction;
  out.gamma = solve_gamma(J, u, step.direction, dt, config);
  out.dt_effective = out.gamma * dt;
  out.state = u + out.dt_effective * step.direction;
  out.residual = J(out.state) - J(u);
  return out;
}

}  // namespace sbpwave
