#include "sfcgame/storage.hpp"

#include <algorithm>
#include <cmath>

namespace sfcgame::storage {

std::vector<SlotClass> classify_slots(const TouSchedule& tou,
                                      const StorageConfig& cfg) {
    std::vector<SlotClass> classes(tou.prices.size(), SlotClass::Idle);
    for (size_t t = 0; t < tou.prices.size(); ++t) {
        if (tou.prices[t] < cfg.p_min_threshold)
            classes[t] = SlotClass::Charge;
        else if (tou.prices[t] > cfg.p_max_threshold)
            classes[t] = SlotClass::Discharge;
    }
    return classes;
}

std::vector<double> charge_schedule(const TouSchedule& tou,
                                    const StorageConfig& cfg,
                                    const std::vector<SlotClass>& classes) {
    std::vector<double> amounts(tou.prices.size(), 0.0);
    const double delta = cfg.q_tar_ch - cfg.q_ini;
    if (delta <= 0.0) return amounts;

    double gap_sum = 0.0;
    for (size_t t = 0; t < classes.size(); ++t)
        if (classes[t] == SlotClass::Charge)
            gap_sum += cfg.p_min_threshold - tou.prices[t];
    if (gap_sum <= 0.0)
        throw InfeasiblePlanError(
            "charge target above initial SOC but no slot prices below "
            "p_min_threshold");

    for (size_t t = 0; t < classes.size(); ++t) {
        if (classes[t] != SlotClass::Charge) continue;
        const double gap = cfg.p_min_threshold - tou.prices[t];
        amounts[t] =
            std::min(gap * delta * cfg.efficiency / gap_sum, cfg.max_rate);
    }
    return amounts;
}

std::vector<double> discharge_schedule(const TouSchedule& tou,
                                       const StorageConfig& cfg,
                                       const std::vector<SlotClass>& classes,
                                       const std::vector<double>& eqp_load) {
    std::vector<double> amounts(tou.prices.size(), 0.0);
    const double delta = cfg.q_tar_ch - cfg.q_tar_dis;
    if (delta <= 0.0) return amounts;

    double gap_sum = 0.0;
    for (size_t t = 0; t < classes.size(); ++t)
        if (classes[t] == SlotClass::Discharge)
            gap_sum += tou.prices[t] - cfg.p_max_threshold;
    if (gap_sum <= 0.0) return amounts;  // nothing to drain into

    for (size_t t = 0; t < classes.size(); ++t) {
        if (classes[t] != SlotClass::Discharge) continue;
        const double gap = tou.prices[t] - cfg.p_max_threshold;
        const double eqp = t < eqp_load.size() ? eqp_load[t] : 0.0;
        // Never drain more than the equipment needs; a deeper discharge
        // would drive the slot requirement negative.
        amounts[t] = -std::min({gap * delta * cfg.efficiency / gap_sum,
                                cfg.max_rate, eqp});
    }
    return amounts;
}

SlotPlan apply_soc(const std::vector<double>& amounts, const StorageConfig& cfg,
                   const std::vector<SlotClass>& classes) {
    SlotPlan plan;
    plan.classification = classes;
    plan.e_sd.resize(amounts.size(), 0.0);
    plan.soc_after.resize(amounts.size(), 0.0);

    double soc = cfg.q_ini;
    for (size_t t = 0; t < amounts.size(); ++t) {
        const double requested = amounts[t];
        double applied = requested;
        if (soc + applied > cfg.capacity) applied = cfg.capacity - soc;
        if (soc + applied < 0.0) applied = -soc;
        if (applied != requested)
            plan.clamps.push_back({static_cast<int>(t), requested, applied});
        soc += applied;
        plan.e_sd[t] = applied;
        plan.soc_after[t] = soc;
    }
    return plan;
}

SlotPlan build_plan(const TouSchedule& tou, const StorageConfig& cfg,
                    const std::vector<double>& eqp_load) {
    check(tou);
    check(cfg);
    const std::vector<SlotClass> classes = classify_slots(tou, cfg);
    const std::vector<double> charge = charge_schedule(tou, cfg, classes);
    const std::vector<double> discharge =
        discharge_schedule(tou, cfg, classes, eqp_load);
    std::vector<double> amounts(tou.prices.size(), 0.0);
    for (size_t t = 0; t < amounts.size(); ++t)
        amounts[t] = charge[t] + discharge[t];
    return apply_soc(amounts, cfg, classes);
}

}  // namespace sfcgame::storage
