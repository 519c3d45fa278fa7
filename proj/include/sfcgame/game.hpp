#pragma once

#include <vector>

#include "sfcgame/domain.hpp"

// Single-slot Stackelberg game between the SFC (price-setting leader) and the
// residential units (quantity-setting followers).

namespace sfcgame::game {

struct TracePoint {
    double price = 0.0;  // cents/kWh
    double cost = 0.0;   // cents

    bool operator==(const TracePoint&) const = default;
};

struct EquilibriumResult {
    double price_star = 0.0;               // cents/kWh
    std::vector<double> consumption_star;  // kWh per unit
    std::vector<double> offers_star;       // kWh per unit, e_gen - consumption
    double sfc_cost_star = 0.0;            // cents
    std::vector<TracePoint> trace;         // every swept point, ascending price

    bool operator==(const EquilibriumResult&) const = default;
};

// Total payoff of one unit at consumption e under the SFC's price:
// k * ln(1 + e) + price * (e_gen - e). Throws std::domain_error when e is
// outside [e_min, e_gen] or price <= 0.
double utility(const ResidentialUnit& unit, double e, double price);

// Argmax of utility over [e_min, e_gen]: clamp(k / price - 1, e_min, e_gen).
double best_response(const ResidentialUnit& unit, double price);

// Leader cost of a slot. The SFC buys min(sum(offers), e_req) from the units
// at the given price and the remainder from the grid at p_sell; it never buys
// more than it requires, so the grid term stays non-negative.
double sfc_cost(const std::vector<double>& offers, double price, double e_req,
                double p_sell);

// Interior optimum price sqrt(p_sell * sum(k) / (N + sum(e_gen))), floored to
// p_buy + alpha when it does not clear the buy-back price.
double closed_form_price(const std::vector<ResidentialUnit>& units,
                         const GridTariff& tariff, double alpha);

// Sweeps the price from p_buy to p_sell in steps of sweep.price_step,
// collecting best responses and the leader cost at every point, and records
// the optimum under a <= update so equal costs resolve to the largest tying
// price. Units must already be validated.
EquilibriumResult solve_equilibrium(const std::vector<ResidentialUnit>& units,
                                    double e_req, const GridTariff& tariff,
                                    const SweepConfig& sweep);

struct VerifyOptions {
    int e_points = 1000;   // follower deviation grid, points per unit
    double tol = 1e-6;     // cents
};

struct VerificationReport {
    bool followers_ok = false;
    double worst_follower_violation = 0.0;  // cents
    int worst_follower = -1;
    double worst_follower_e = 0.0;          // kWh
    bool leader_ok = false;
    double worst_leader_violation = 0.0;    // cents
    double worst_leader_price = 0.0;        // cents/kWh

    bool passed() const { return followers_ok && leader_ok; }
};

// Equilibrium conditions, checked directly: no unit can improve its utility
// on a deviation grid over [e_min, e_gen], and no swept price undercuts the
// recorded minimum cost. The leader check runs over the result's own trace;
// a finer grid would see the sweep's discretization error, which can exceed
// tol for large aggregate preferences.
VerificationReport verify_equilibrium(const EquilibriumResult& result,
                                      const std::vector<ResidentialUnit>& units,
                                      double e_req, const GridTariff& tariff,
                                      const VerifyOptions& opts = {});

// True iff every unit's recomputed best response at price_star matches its
// recorded consumption exactly; a unit claiming anything else is inconsistent
// with the equilibrium price.
bool strategy_proof_check(const EquilibriumResult& result,
                          const std::vector<ResidentialUnit>& units);

// Pro-rata split of the SFC's capped purchase across the offers, for
// reporting. Sums to min(sum(offers), e_req).
std::vector<double> allocate_purchases(const std::vector<double>& offers,
                                       double e_req);

}  // namespace sfcgame::game
