#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "sfcgame/domain.hpp"
#include "sfcgame/game.hpp"
#include "sfcgame/storage.hpp"

// Daily simulation harness: storage plan + one Stackelberg game per slot,
// evaluated for the three study cases (no SD / no game, SD / no game,
// SD + game).

namespace sfcgame::sim {

// A unit inside a scenario; gen_profile, when non-empty, overrides the
// constant e_gen per slot.
struct SimUnit {
    ResidentialUnit unit;
    std::vector<double> gen_profile;  // kWh per slot, empty = constant e_gen

    bool operator==(const SimUnit&) const = default;
};

struct Scenario {
    std::vector<SimUnit> units;
    GridTariff tariff;
    TouSchedule tou;
    SfcDemand demand;
    std::optional<StorageConfig> storage;
    SweepConfig sweep;
    std::uint64_t seed = 0;
    bool excess_to_grid = false;  // unsold offer excess goes to grid at p_buy

    bool operator==(const Scenario&) const = default;
};

enum class SlotMode { NoGame, Game };

struct SlotOutcome {
    double cost = 0.0;      // cents
    double eq_price = 0.0;  // cents/kWh; the slot's grid price in NoGame mode
    std::optional<game::EquilibriumResult> detail;
};

struct DayReport {
    struct Slot {
        int t = 0;
        double price = 0.0;       // announced grid price, cents/kWh
        double eqp = 0.0;         // equipment load, kWh
        double e_sd = 0.0;        // planned storage energy, kWh, signed
        double soc = 0.0;         // SOC after the slot, kWh
        double req = 0.0;         // eqp + e_sd, kWh
        double eq_price = 0.0;    // case-3 equilibrium price, cents/kWh
        double cost_case1 = 0.0;  // no SD, no game, cents
        double cost_case2 = 0.0;  // SD, no game, cents
        double cost_case3 = 0.0;  // SD + game, cents

        bool operator==(const Slot&) const = default;
    };
    std::vector<Slot> slots;
    double total_case1 = 0.0;
    double total_case2 = 0.0;
    double total_case3 = 0.0;
    std::vector<storage::ClampEvent> clamps;
    std::uint64_t seed = 0;

    bool operator==(const DayReport&) const = default;
};

// Cost of serving e_req entirely from the grid.
double baseline_cost(double e_req, double p_sell);

// One slot of the day. The slot's requirement is eqp_load[t] + e_sd; in Game
// mode the equilibrium is solved with the slot's announced price standing in
// for p_sell. Slots whose announced price does not clear p_buy fall back to a
// plain grid purchase.
SlotOutcome run_slot(const Scenario& scenario, int t, double e_sd,
                     SlotMode mode, bool keep_detail = false);

// Computes the storage plan once (when configured), then evaluates all three
// cases per slot. Case 1 runs with e_sd = 0 and no game; cases 2 and 3 follow
// the plan.
DayReport run_day(const Scenario& scenario);

// Parameter ranges for randomized scenarios. The demand range bounds the
// daily total; per-slot draws are uniform on [demand_min, demand_max] / T so
// any day's total lands inside the range.
struct SampleRanges {
    int n_units = 5;
    double k_min = 90.0;        // cents
    double k_max = 150.0;       // cents
    double e_gen = 10.0;        // kWh per unit
    double demand_min = 300.0;  // kWh
    double demand_max = 700.0;  // kWh
};

// Deterministic uniform draws on top of mt19937_64. The mapping to doubles
// is spelled out here because the standard distributions are not guaranteed
// to produce the same stream on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) {
        const double u = static_cast<double>(eng_() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

private:
    std::mt19937_64 eng_;
};

std::vector<SimUnit> sample_units(Rng& rng, int n_units, double k_min,
                                  double k_max, double e_gen);

// Fully seeded scenario over the given price curve: k_n uniform on
// [k_min, k_max], constant e_gen, per-slot demand as documented above.
// The same seed always yields the same scenario.
Scenario sample_scenario(std::uint64_t seed, const SampleRanges& ranges,
                         const GridTariff& tariff, const TouSchedule& tou,
                         const std::optional<StorageConfig>& storage = {},
                         const SweepConfig& sweep = {});

}  // namespace sfcgame::sim
