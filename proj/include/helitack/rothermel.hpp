#pragma once

#include "helitack/fuel.hpp"

namespace helitack::rothermel {

/// Kernel inputs. Angles are radians, 0 = east, counter-clockwise positive.
struct SpreadInputs {
  FuelModel fuel;
  double moisture = 0.0;   // dead fuel moisture, fraction
  double wind_speed = 0.0; // midflame wind, ft/min
  double wind_dir = 0.0;   // direction the wind blows toward
  double slope_tan = 0.0;  // rise over run along spread_dir
  double spread_dir = 0.0;
};

struct SpreadComponents {
  double i_r = 0.0;     // reaction intensity, BTU/ft^2/min
  double xi = 0.0;      // propagating flux ratio
  double rho_b = 0.0;   // bulk density, lb/ft^3
  double epsilon = 0.0; // effective heating number
  double q_ig = 0.0;    // heat of preignition, BTU/lb
  double r_base = 0.0;  // ft/min
  double phi_w = 0.0;
  double phi_s = 0.0;
  double r_eff = 0.0;   // ft/min
};

/// Direction-independent quantities for one (fuel, moisture) pair.
///
/// The engine evaluates these once per fuel and then resolves r_eff per
/// neighbour direction with wind_factor/slope_factor; spread_components
/// takes the same route, so both paths agree bit for bit.
struct FuelBedTerms {
  double rho_b = 0.0;
  double beta = 0.0;    // packing ratio
  double beta_op = 0.0; // optimum packing ratio
  double epsilon = 0.0;
  double q_ig = 0.0;
  double xi = 0.0;
  double gamma = 0.0;   // optimum reaction velocity, 1/min
  double eta_m = 0.0;   // moisture damping
  double eta_s = 0.0;   // mineral damping
  double i_r = 0.0;
  double r_base = 0.0;
  double wind_c = 0.0;
  double wind_b = 0.0;
  double wind_ratio_term = 0.0; // (beta/beta_op)^-E
  double slope_coeff = 0.0;     // 5.275 * beta^-0.3
};

inline constexpr double kEffectiveMineralContent = 0.010;
inline constexpr double kTotalMineralContent = 0.0555;

// Base rate of spread from its five factors. Throws DomainError when a
// denominator factor is not strictly positive or the numerator is negative.
double base_rate(double i_r, double xi, double rho_b, double epsilon, double q_ig);

// max(0, r_base * (1 + phi_w + phi_s)).
double effective_rate(double r_base, double phi_w, double phi_s);

// Throws DomainError for moisture outside [0, 1].
FuelBedTerms fuel_bed_terms(const FuelModel& fuel, double moisture);

// Wind factor along `spread_dir`: the head-fire factor scaled by
// max(0, cos(spread_dir - wind_dir)).
double wind_factor(const FuelBedTerms& t, double wind_speed, double wind_dir, double spread_dir);

// Signed slope factor; negative downslope.
double slope_factor(const FuelBedTerms& t, double slope_tan);

// Throws DomainError when preconditions fail.
SpreadComponents spread_components(const SpreadInputs& in);

// Same as above with the fuel resolved through a catalog; nonburnable ids
// raise DomainError.
SpreadComponents spread_components(const FuelCatalog& catalog, int fuel_id, double moisture,
                                   double wind_speed, double wind_dir, double slope_tan,
                                   double spread_dir);

} // namespace helitack::rothermel
