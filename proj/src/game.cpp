#include "sfcgame/game.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sfcgame::game {

double utility(const ResidentialUnit& unit, double e, double price) {
    if (!(price > 0.0)) throw std::domain_error("utility: price must be > 0");
    if (!(e >= unit.e_min) || !(e <= unit.e_gen))
        throw std::domain_error("utility: e outside [e_min, e_gen]");
    return unit.k_pref * std::log1p(e) + price * (unit.e_gen - e);
}

double best_response(const ResidentialUnit& unit, double price) {
    if (!(price > 0.0))
        throw std::domain_error("best_response: price must be > 0");
    if (unit.e_min > unit.e_gen)
        throw std::domain_error("best_response: e_min exceeds e_gen");
    return std::clamp(unit.k_pref / price - 1.0, unit.e_min, unit.e_gen);
}

double sfc_cost(const std::vector<double>& offers, double price, double e_req,
                double p_sell) {
    if (!(e_req >= 0.0)) throw std::domain_error("sfc_cost: e_req must be >= 0");
    double supply = 0.0;
    for (double o : offers) {
        if (!(o >= 0.0))
            throw std::domain_error("sfc_cost: offers must be >= 0");
        supply += o;
    }
    const double bought = std::min(supply, e_req);
    return price * bought + p_sell * (e_req - bought);
}

double closed_form_price(const std::vector<ResidentialUnit>& units,
                         const GridTariff& tariff, double alpha) {
    if (units.empty())
        throw std::domain_error("closed_form_price: no units");
    double k_sum = 0.0;
    double gen_sum = 0.0;
    for (const ResidentialUnit& unit : units) {
        k_sum += unit.k_pref;
        gen_sum += unit.e_gen;
    }
    const double n = static_cast<double>(units.size());
    const double p = std::sqrt(tariff.p_sell * k_sum / (n + gen_sum));
    return p > tariff.p_buy ? p : tariff.p_buy + alpha;
}

EquilibriumResult solve_equilibrium(const std::vector<ResidentialUnit>& units,
                                    double e_req, const GridTariff& tariff,
                                    const SweepConfig& sweep) {
    check(tariff);
    check(sweep);
    if (!(e_req >= 0.0))
        throw std::domain_error("solve_equilibrium: e_req must be >= 0");

    const double lo = tariff.p_buy;
    const double hi = tariff.p_sell;
    const double step = sweep.price_step;
    const auto n_steps =
        static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
    if (n_steps > 50'000'000)
        throw ScenarioError("sweep: price_step too small for the price range");

    EquilibriumResult result;
    result.trace.reserve(static_cast<size_t>(n_steps) + 2);

    // Starting point of the record: buy everything from the grid. Any swept
    // price costs at most this, so the record always lands inside
    // [p_buy, p_sell]; ties keep updating, which resolves them to the
    // largest tying price.
    double best_cost = tariff.p_sell * e_req;
    double best_price = tariff.p_sell;
    std::vector<double> best_e(units.size(), 0.0);

    std::vector<double> e(units.size(), 0.0);
    std::vector<double> offers(units.size(), 0.0);

    for (long long i = 0; i <= n_steps + 1; ++i) {
        double price = std::min(lo + static_cast<double>(i) * step, hi);
        if (i == n_steps + 1) {
            // Close the sweep exactly at p_sell when the grid misses it.
            if (!result.trace.empty() && result.trace.back().price >= hi) break;
            price = hi;
        }

        double supply = 0.0;
        for (size_t n = 0; n < units.size(); ++n) {
            e[n] = best_response(units[n], price);
            offers[n] = units[n].e_gen - e[n];
            supply += offers[n];
        }
        const double bought = std::min(supply, e_req);
        const double cost = price * bought + tariff.p_sell * (e_req - bought);

        result.trace.push_back({price, cost});
        if (cost <= best_cost) {
            best_cost = cost;
            best_price = price;
            best_e = e;
        }
    }

    result.price_star = best_price;
    result.sfc_cost_star = best_cost;
    result.consumption_star = std::move(best_e);
    result.offers_star.resize(units.size());
    for (size_t n = 0; n < units.size(); ++n)
        result.offers_star[n] = units[n].e_gen - result.consumption_star[n];
    return result;
}

VerificationReport verify_equilibrium(const EquilibriumResult& result,
                                      const std::vector<ResidentialUnit>& units,
                                      double e_req, const GridTariff& tariff,
                                      const VerifyOptions& opts) {
    VerificationReport report;

    // Followers: no grid deviation may beat the recorded consumption.
    report.followers_ok = true;
    for (size_t n = 0; n < units.size(); ++n) {
        const ResidentialUnit& unit = units[n];
        const double u_star =
            utility(unit, result.consumption_star[n], result.price_star);
        const double span = unit.e_gen - unit.e_min;
        for (int i = 0; i <= opts.e_points; ++i) {
            const double e =
                unit.e_min + span * static_cast<double>(i) /
                                 static_cast<double>(opts.e_points);
            const double gain = utility(unit, e, result.price_star) - u_star;
            if (gain > report.worst_follower_violation) {
                report.worst_follower_violation = gain;
                report.worst_follower = static_cast<int>(n);
                report.worst_follower_e = e;
            }
        }
    }
    report.followers_ok = report.worst_follower_violation <= opts.tol;

    // Leader: re-evaluate the cost at every swept price; none may undercut
    // the recorded minimum.
    report.leader_ok = true;
    std::vector<double> offers(units.size(), 0.0);
    for (const TracePoint& point : result.trace) {
        double supply = 0.0;
        for (size_t n = 0; n < units.size(); ++n) {
            offers[n] = units[n].e_gen - best_response(units[n], point.price);
            supply += offers[n];
        }
        const double bought = std::min(supply, e_req);
        const double cost =
            point.price * bought + tariff.p_sell * (e_req - bought);
        const double undercut = result.sfc_cost_star - cost;
        if (undercut > report.worst_leader_violation) {
            report.worst_leader_violation = undercut;
            report.worst_leader_price = point.price;
        }
    }
    report.leader_ok = report.worst_leader_violation <= opts.tol;
    return report;
}

bool strategy_proof_check(const EquilibriumResult& result,
                          const std::vector<ResidentialUnit>& units) {
    if (units.size() != result.consumption_star.size()) return false;
    for (size_t n = 0; n < units.size(); ++n) {
        // Exact comparison on purpose: the only consumption consistent with
        // price_star is the recomputed best response, clamping included.
        if (best_response(units[n], result.price_star) !=
            result.consumption_star[n])
            return false;
    }
    return true;
}

std::vector<double> allocate_purchases(const std::vector<double>& offers,
                                       double e_req) {
    double supply = 0.0;
    for (double o : offers) supply += o;
    std::vector<double> bought(offers.size(), 0.0);
    if (supply <= 0.0) return bought;
    const double ratio = std::min(supply, e_req) / supply;
    for (size_t n = 0; n < offers.size(); ++n) bought[n] = offers[n] * ratio;
    return bought;
}

}  // namespace sfcgame::game
