#include "sfcgame/domain.hpp"

#include <cmath>
#include <string>

namespace sfcgame {

namespace {

void fail(const std::string& what) { throw ScenarioError(what); }

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void check(const ResidentialUnit& unit) {
    if (!finite(unit.k_pref) || unit.k_pref <= 0.0)
        fail("unit " + std::to_string(unit.id) + ": k_pref must be > 0");
    if (!finite(unit.e_gen) || unit.e_gen < 0.0)
        fail("unit " + std::to_string(unit.id) + ": e_gen must be >= 0");
    if (!finite(unit.e_min) || unit.e_min < 0.0)
        fail("unit " + std::to_string(unit.id) + ": e_min must be >= 0");
}

void check(const GridTariff& tariff) {
    if (!finite(tariff.p_buy) || !finite(tariff.p_sell))
        fail("tariff: prices must be finite");
    if (tariff.p_buy <= 0.0) fail("tariff: p_buy must be > 0");
    if (tariff.p_buy >= tariff.p_sell)
        fail("tariff: p_buy must be below p_sell");
}

void check(const TouSchedule& tou) {
    if (tou.prices.empty()) fail("tou: needs at least one slot");
    for (double p : tou.prices)
        if (!finite(p) || p <= 0.0) fail("tou: every price must be > 0");
}

void check(const SfcDemand& demand) {
    if (!finite(demand.e_req) || demand.e_req < 0.0)
        fail("demand: e_req must be >= 0");
    for (double e : demand.eqp_load)
        if (!finite(e) || e < 0.0) fail("demand: eqp_load entries must be >= 0");
}

void check(const StorageConfig& cfg) {
    if (!finite(cfg.capacity) || cfg.capacity < 0.0)
        fail("storage: capacity must be >= 0");
    if (!finite(cfg.efficiency) || cfg.efficiency <= 0.0 || cfg.efficiency > 1.0)
        fail("storage: efficiency must be in (0, 1]");
    if (!finite(cfg.max_rate) || cfg.max_rate <= 0.0)
        fail("storage: max_rate must be > 0");
    const bool soc_ordered = 0.0 <= cfg.q_tar_dis && cfg.q_tar_dis <= cfg.q_ini &&
                             cfg.q_ini <= cfg.q_tar_ch &&
                             cfg.q_tar_ch <= cfg.capacity;
    if (!soc_ordered)
        fail("storage: SOC targets must satisfy 0 <= q_tar_dis <= q_ini <= "
             "q_tar_ch <= capacity");
    if (!(cfg.p_min_threshold > 0.0) ||
        !(cfg.p_min_threshold <= cfg.p_max_threshold))
        fail("storage: thresholds must satisfy 0 < p_min <= p_max");
}

void check(const SweepConfig& sweep) {
    if (!finite(sweep.price_step) || sweep.price_step <= 0.0)
        fail("sweep: price_step must be > 0");
    if (!finite(sweep.alpha) || sweep.alpha <= 0.0)
        fail("sweep: alpha must be > 0");
}

ValidationResult validate_scenario(const std::vector<ResidentialUnit>& units,
                                   const GridTariff& tariff,
                                   const SfcDemand& demand) {
    check(tariff);
    check(demand);

    ValidationResult result;
    for (const ResidentialUnit& unit : units) {
        check(unit);
        if (unit.e_gen <= unit.e_min) {
            result.dropped.push_back(
                {unit.id, "no surplus: e_gen <= e_min, cannot sell"});
            continue;
        }
        // Keeps the unclamped best response at or above e_min across the
        // whole feasible price range.
        if (unit.k_pref < tariff.p_sell * (1.0 + unit.e_min)) {
            result.dropped.push_back(
                {unit.id, "k_pref below p_sell * (1 + e_min)"});
            continue;
        }
        result.eligible.push_back(unit);
    }
    return result;
}

}  // namespace sfcgame
