#pragma once

#include <vector>

#include "sfcgame/domain.hpp"

// Time-of-use driven charge/discharge plan for the SFC's storage device.
// The whole plan is computed open-loop before the day starts, from the
// announced price curve.

namespace sfcgame::storage {

enum class SlotClass { Charge, Discharge, Idle };

// A slot whose planned amount had to be cut to keep the SOC inside
// [0, capacity].
struct ClampEvent {
    int slot = 0;
    double requested = 0.0;  // kWh, signed
    double applied = 0.0;    // kWh, signed

    bool operator==(const ClampEvent&) const = default;
};

struct SlotPlan {
    std::vector<SlotClass> classification;
    std::vector<double> e_sd;       // kWh, signed, positive = charge
    std::vector<double> soc_after;  // kWh
    std::vector<ClampEvent> clamps;

    bool operator==(const SlotPlan&) const = default;
};

class InfeasiblePlanError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Charge when price < p_min_threshold, discharge when price > p_max_threshold,
// idle in between. Both comparisons are strict.
std::vector<SlotClass> classify_slots(const TouSchedule& tou,
                                      const StorageConfig& cfg);

// Spreads the charge target over the charge slots in proportion to how far
// each price sits below p_min_threshold, capped at max_rate. Throws
// InfeasiblePlanError when the target requires charging but no slot
// qualifies. Returns one entry per slot, zero outside the charge window.
std::vector<double> charge_schedule(const TouSchedule& tou,
                                    const StorageConfig& cfg,
                                    const std::vector<SlotClass>& classes);

// Discharge counterpart: proportional to the price excess over
// p_max_threshold, capped at max_rate and at the slot's equipment load (the
// SD never drains more than the equipment needs). Entries are negative on
// discharge slots, zero elsewhere.
std::vector<double> discharge_schedule(const TouSchedule& tou,
                                       const StorageConfig& cfg,
                                       const std::vector<SlotClass>& classes,
                                       const std::vector<double>& eqp_load);

// Integrates the SOC forward from q_ini, clamping any step that would leave
// [0, capacity]. Clamped energy is removed from that slot's amount and
// reported.
SlotPlan apply_soc(const std::vector<double>& amounts, const StorageConfig& cfg,
                   const std::vector<SlotClass>& classes);

// classify + charge + discharge + apply_soc in one call.
SlotPlan build_plan(const TouSchedule& tou, const StorageConfig& cfg,
                    const std::vector<double>& eqp_load);

}  // namespace sfcgame::storage
