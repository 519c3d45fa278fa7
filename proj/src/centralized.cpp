#include "sfcgame/centralized.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sfcgame/game.hpp"

namespace sfcgame::centralized {

double social_cost(const std::vector<double>& consumption,
                   const std::vector<ResidentialUnit>& units, double e_req,
                   double p_sell, double price) {
    if (consumption.size() != units.size())
        throw std::domain_error("social_cost: consumption size mismatch");
    std::vector<double> offers(units.size(), 0.0);
    double utility_sum = 0.0;
    for (size_t n = 0; n < units.size(); ++n) {
        const ResidentialUnit& unit = units[n];
        const double e = consumption[n];
        if (!(e >= unit.e_min) || !(e <= unit.e_gen))
            throw std::domain_error("social_cost: consumption outside bounds");
        offers[n] = unit.e_gen - e;
        utility_sum += game::utility(unit, e, price);
    }
    return game::sfc_cost(offers, price, e_req, p_sell) - utility_sum;
}

namespace {

// Social cost at price = p_sell collapses to
//   p_sell * (e_req - supply) - sum k_n ln(1 + e_n)
// whether or not the purchase cap binds, so it separates per unit. The
// coordinate refinement below exploits that for O(1) candidate evaluation.
double separable_term(const ResidentialUnit& unit, double e, double p_sell) {
    return p_sell * e - unit.k_pref * std::log1p(e);
}

}  // namespace

SocialCostResult centralized_optimum(const std::vector<ResidentialUnit>& units,
                                     double e_req, double p_sell,
                                     double grid_step) {
    SocialCostResult result;
    result.consumption.resize(units.size());
    for (size_t n = 0; n < units.size(); ++n) {
        const ResidentialUnit& unit = units[n];
        result.consumption[n] =
            std::clamp(unit.k_pref / p_sell - 1.0, unit.e_min, unit.e_gen);
    }

    double supply = 0.0;
    for (size_t n = 0; n < units.size(); ++n)
        supply += units[n].e_gen - result.consumption[n];

    if (supply > e_req && !units.empty()) {
        // Purchase cap binds at the interior solution; refine coordinate-wise
        // on a grid until a full pass finds no improvement.
        bool improved = true;
        int passes = 0;
        while (improved && passes < 8) {
            improved = false;
            ++passes;
            for (size_t n = 0; n < units.size(); ++n) {
                const ResidentialUnit& unit = units[n];
                double best_e = result.consumption[n];
                double best_term = separable_term(unit, best_e, p_sell);
                const double span = unit.e_gen - unit.e_min;
                const auto cells = static_cast<long long>(
                    std::floor(span / grid_step + 1e-9));
                for (long long i = 0; i <= cells; ++i) {
                    const double e = std::min(
                        unit.e_min + static_cast<double>(i) * grid_step,
                        unit.e_gen);
                    const double term = separable_term(unit, e, p_sell);
                    if (term < best_term) {
                        best_term = term;
                        best_e = e;
                        improved = true;
                    }
                }
                result.consumption[n] = best_e;
            }
        }
    }

    result.social_cost =
        social_cost(result.consumption, units, e_req, p_sell, p_sell);
    return result;
}

}  // namespace sfcgame::centralized
