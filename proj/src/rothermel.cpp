#include "helitack/rothermel.hpp"

#include "helitack/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace helitack::rothermel {

double base_rate(double i_r, double xi, double rho_b, double epsilon, double q_ig) {
  if (!(rho_b > 0.0) || !(epsilon > 0.0) || !(q_ig > 0.0)) {
    throw DomainError("base_rate: rho_b, epsilon and q_ig must be > 0");
  }
  if (!(i_r >= 0.0) || !(xi >= 0.0)) {
    throw DomainError("base_rate: i_r and xi must be >= 0");
  }
  return i_r * xi / (rho_b * epsilon * q_ig);
}

double effective_rate(double r_base, double phi_w, double phi_s) {
  return std::max(0.0, r_base * (1.0 + phi_w + phi_s));
}

FuelBedTerms fuel_bed_terms(const FuelModel& fuel, double moisture) {
  if (!(moisture >= 0.0 && moisture <= 1.0)) {
    throw DomainError("moisture must lie in [0, 1], got " + std::to_string(moisture));
  }
  const double sigma = fuel.sigma;
  const double sigma15 = std::pow(sigma, 1.5);

  FuelBedTerms t;
  t.rho_b = fuel.w0 / fuel.delta;
  t.beta = t.rho_b / fuel.rho_p;
  t.beta_op = 3.348 * std::pow(sigma, -0.8189);
  t.epsilon = std::exp(-138.0 / sigma);
  t.q_ig = 250.0 + 1116.0 * moisture;
  t.xi = std::exp((0.792 + 0.681 * std::sqrt(sigma)) * (t.beta + 0.1)) / (192.0 + 0.2595 * sigma);

  const double ratio = t.beta / t.beta_op;
  const double a = 133.0 * std::pow(sigma, -0.7913);
  const double gamma_max = sigma15 / (495.0 + 0.0594 * sigma15);
  t.gamma = gamma_max * std::pow(ratio, a) * std::exp(a * (1.0 - ratio));

  if (moisture >= fuel.mx) {
    t.eta_m = 0.0;
  } else {
    const double rm = moisture / fuel.mx;
    t.eta_m = std::max(0.0, 1.0 - 2.59 * rm + 5.11 * rm * rm - 3.52 * rm * rm * rm);
  }
  t.eta_s = 0.174 * std::pow(kEffectiveMineralContent, -0.19);

  const double w_net = fuel.w0 * (1.0 - kTotalMineralContent);
  t.i_r = t.gamma * w_net * fuel.heat_content * t.eta_m * t.eta_s;
  t.r_base = base_rate(t.i_r, t.xi, t.rho_b, t.epsilon, t.q_ig);

  t.wind_c = 7.47 * std::exp(-0.133 * std::pow(sigma, 0.55));
  t.wind_b = 0.02526 * std::pow(sigma, 0.54);
  const double wind_e = 0.715 * std::exp(-3.59e-4 * sigma);
  t.wind_ratio_term = std::pow(ratio, -wind_e);
  t.slope_coeff = 5.275 * std::pow(t.beta, -0.3);
  return t;
}

double wind_factor(const FuelBedTerms& t, double wind_speed, double wind_dir, double spread_dir) {
  if (wind_speed <= 0.0) return 0.0;
  const double head = t.wind_c * std::pow(wind_speed, t.wind_b) * t.wind_ratio_term;
  return head * std::max(0.0, std::cos(spread_dir - wind_dir));
}

double slope_factor(const FuelBedTerms& t, double slope_tan) {
  const double magnitude = t.slope_coeff * slope_tan * slope_tan;
  return slope_tan < 0.0 ? -magnitude : magnitude;
}

SpreadComponents spread_components(const SpreadInputs& in) {
  validate(in.fuel);
  if (!(in.wind_speed >= 0.0) || !std::isfinite(in.wind_speed)) {
    throw DomainError("wind_speed must be finite and >= 0");
  }
  if (!std::isfinite(in.wind_dir) || !std::isfinite(in.spread_dir) ||
      !std::isfinite(in.slope_tan)) {
    throw DomainError("direction and slope inputs must be finite");
  }
  const FuelBedTerms t = fuel_bed_terms(in.fuel, in.moisture);

  SpreadComponents c;
  c.i_r = t.i_r;
  c.xi = t.xi;
  c.rho_b = t.rho_b;
  c.epsilon = t.epsilon;
  c.q_ig = t.q_ig;
  c.r_base = t.r_base;
  c.phi_w = wind_factor(t, in.wind_speed, in.wind_dir, in.spread_dir);
  c.phi_s = slope_factor(t, in.slope_tan);
  c.r_eff = effective_rate(c.r_base, c.phi_w, c.phi_s);
  return c;
}

SpreadComponents spread_components(const FuelCatalog& catalog, int fuel_id, double moisture,
                                   double wind_speed, double wind_dir, double slope_tan,
                                   double spread_dir) {
  if (!catalog.is_burnable(fuel_id)) {
    throw DomainError("fuel " + std::to_string(fuel_id) + " is not burnable");
  }
  return spread_components(
      SpreadInputs{catalog.at(fuel_id), moisture, wind_speed, wind_dir, slope_tan, spread_dir});
}

} // namespace helitack::rothermel
