#pragma once

#include <vector>

#include "sfcgame/domain.hpp"

// Full-information benchmark: a controller that knows every unit's k and
// generation picks the consumption vector minimizing the social cost.

namespace sfcgame::centralized {

struct SocialCostResult {
    std::vector<double> consumption;  // kWh
    double social_cost = 0.0;         // cents
};

// SFC cost minus aggregate unit utility at the given price and consumptions,
// with the SFC's purchase capped at e_req. When the cap is slack the payments
// between SFC and units cancel and the price drops out. Throws
// std::domain_error when a consumption leaves [e_min, e_gen].
double social_cost(const std::vector<double>& consumption,
                   const std::vector<ResidentialUnit>& units, double e_req,
                   double p_sell, double price);

// Minimizes the social cost over the consumption box. The interior solution
// is separable, e_n = clamp(k_n / p_sell - 1, e_min, e_gen); when the
// purchase cap binds there, a coordinate-wise grid search refines it. Social
// cost is evaluated at price = p_sell, where the cap term cancels exactly and
// the objective stays smooth across the cap boundary.
SocialCostResult centralized_optimum(const std::vector<ResidentialUnit>& units,
                                     double e_req, double p_sell,
                                     double grid_step = 1e-3);

}  // namespace sfcgame::centralized
