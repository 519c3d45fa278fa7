#include "sfcgame/sim.hpp"

#include <cmath>
#include <stdexcept>

namespace sfcgame::sim {

double baseline_cost(double e_req, double p_sell) {
    if (!(e_req >= 0.0))
        throw std::domain_error("baseline_cost: e_req must be >= 0");
    return p_sell * e_req;
}

namespace {

std::vector<ResidentialUnit> slot_units(const Scenario& scenario, int t) {
    std::vector<ResidentialUnit> units;
    units.reserve(scenario.units.size());
    for (const SimUnit& su : scenario.units) {
        ResidentialUnit unit = su.unit;
        if (!su.gen_profile.empty()) {
            if (t < 0 || t >= static_cast<int>(su.gen_profile.size()))
                throw ScenarioError("gen_profile shorter than the day");
            unit.e_gen = su.gen_profile[static_cast<size_t>(t)];
        }
        units.push_back(unit);
    }
    return units;
}

}  // namespace

SlotOutcome run_slot(const Scenario& scenario, int t, double e_sd,
                     SlotMode mode, bool keep_detail) {
    if (t < 0 || t >= scenario.tou.slots())
        throw ScenarioError("run_slot: slot index out of range");
    const double price = scenario.tou.prices[static_cast<size_t>(t)];
    const double eqp = t < static_cast<int>(scenario.demand.eqp_load.size())
                           ? scenario.demand.eqp_load[static_cast<size_t>(t)]
                           : scenario.demand.e_req;
    const double e_req = eqp + e_sd;
    if (e_req < 0.0)
        throw std::logic_error("run_slot: negative requirement");

    SlotOutcome outcome;
    outcome.eq_price = price;
    if (mode == SlotMode::NoGame) {
        outcome.cost = price * e_req;
        return outcome;
    }

    // The slot's announced price plays the role of the grid sale price. When
    // it does not clear the buy-back floor there is no room for a game and
    // the SFC simply buys from the grid.
    if (price <= scenario.tariff.p_buy) {
        outcome.cost = price * e_req;
        return outcome;
    }
    const GridTariff slot_tariff{scenario.tariff.p_buy, price};
    const SfcDemand slot_demand{e_req, {}};
    const ValidationResult validated =
        validate_scenario(slot_units(scenario, t), slot_tariff, slot_demand);

    game::EquilibriumResult eq = game::solve_equilibrium(
        validated.eligible, e_req, slot_tariff, scenario.sweep);
    outcome.cost = eq.sfc_cost_star;
    outcome.eq_price = eq.price_star;
    if (keep_detail) outcome.detail = std::move(eq);
    return outcome;
}

DayReport run_day(const Scenario& scenario) {
    check(scenario.tou);
    const int slots = scenario.tou.slots();
    if (static_cast<int>(scenario.demand.eqp_load.size()) != slots)
        throw ScenarioError("run_day: eqp_load length must match tou slots");

    storage::SlotPlan plan;
    if (scenario.storage) {
        plan = storage::build_plan(scenario.tou, *scenario.storage,
                                   scenario.demand.eqp_load);
    } else {
        plan.e_sd.assign(static_cast<size_t>(slots), 0.0);
        plan.soc_after.assign(static_cast<size_t>(slots), 0.0);
    }

    DayReport report;
    report.seed = scenario.seed;
    report.clamps = plan.clamps;
    report.slots.reserve(static_cast<size_t>(slots));

    for (int t = 0; t < slots; ++t) {
        DayReport::Slot row;
        row.t = t;
        row.price = scenario.tou.prices[static_cast<size_t>(t)];
        row.eqp = scenario.demand.eqp_load[static_cast<size_t>(t)];
        row.e_sd = plan.e_sd[static_cast<size_t>(t)];
        row.soc = plan.soc_after[static_cast<size_t>(t)];
        row.req = row.eqp + row.e_sd;

        row.cost_case1 = run_slot(scenario, t, 0.0, SlotMode::NoGame).cost;
        row.cost_case2 = run_slot(scenario, t, row.e_sd, SlotMode::NoGame).cost;
        const SlotOutcome game_outcome =
            run_slot(scenario, t, row.e_sd, SlotMode::Game);
        row.cost_case3 = game_outcome.cost;
        row.eq_price = game_outcome.eq_price;

        report.total_case1 += row.cost_case1;
        report.total_case2 += row.cost_case2;
        report.total_case3 += row.cost_case3;
        report.slots.push_back(row);
    }
    return report;
}

std::vector<SimUnit> sample_units(Rng& rng, int n_units, double k_min,
                                  double k_max, double e_gen) {
    std::vector<SimUnit> units;
    units.reserve(static_cast<size_t>(n_units));
    for (int n = 0; n < n_units; ++n) {
        SimUnit su;
        su.unit.id = n;
        su.unit.k_pref = rng.uniform(k_min, k_max);
        su.unit.e_gen = e_gen;
        su.unit.e_min = 0.0;
        units.push_back(su);
    }
    return units;
}

Scenario sample_scenario(std::uint64_t seed, const SampleRanges& ranges,
                         const GridTariff& tariff, const TouSchedule& tou,
                         const std::optional<StorageConfig>& storage,
                         const SweepConfig& sweep) {
    if (ranges.k_min > ranges.k_max || ranges.demand_min > ranges.demand_max)
        throw ScenarioError("sample_scenario: ranges must be well-ordered");
    check(tou);

    Rng rng(seed);
    Scenario scenario;
    scenario.seed = seed;
    scenario.tariff = tariff;
    scenario.tou = tou;
    scenario.storage = storage;
    scenario.sweep = sweep;
    scenario.units = sample_units(rng, ranges.n_units, ranges.k_min,
                                  ranges.k_max, ranges.e_gen);

    const auto slots = static_cast<double>(tou.slots());
    scenario.demand.eqp_load.resize(tou.prices.size());
    for (double& eqp : scenario.demand.eqp_load)
        eqp = rng.uniform(ranges.demand_min / slots, ranges.demand_max / slots);
    if (!scenario.demand.eqp_load.empty())
        scenario.demand.e_req = scenario.demand.eqp_load.front();
    return scenario;
}

}  // namespace sfcgame::sim
