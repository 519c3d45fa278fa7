#pragma once

#include <stdexcept>
#include <string>
#include <vector>

// Canonical units throughout the library: energy in kWh, prices in cents/kWh,
// money in cents. Reports convert to dollars only when they are written out.

namespace sfcgame {

// One follower: a residential unit with its own generation and no storage.
struct ResidentialUnit {
    int id = 0;
    double k_pref = 0.0;  // consumption preference weight, cents
    double e_gen = 0.0;   // generation available this slot, kWh
    double e_min = 0.0;   // essential load, kWh

    bool operator==(const ResidentialUnit&) const = default;
};

// Grid prices seen by every party. The grid buys back exported energy at
// p_buy and sells at p_sell, with p_buy < p_sell.
struct GridTariff {
    double p_buy = 0.0;   // cents/kWh
    double p_sell = 0.0;  // cents/kWh

    bool operator==(const GridTariff&) const = default;
};

// Announced per-slot grid sale price; slot length is fixed at one hour.
struct TouSchedule {
    std::vector<double> prices;  // cents/kWh, one entry per slot

    int slots() const { return static_cast<int>(prices.size()); }

    bool operator==(const TouSchedule&) const = default;
};

// Energy the shared facility controller has to procure: a single-slot
// requirement for one-shot games, or a per-slot equipment load for day runs.
struct SfcDemand {
    double e_req = 0.0;            // kWh, single-slot games
    std::vector<double> eqp_load;  // kWh per slot, day runs

    bool operator==(const SfcDemand&) const = default;
};

// Storage device owned by the SFC.
struct StorageConfig {
    double capacity = 0.0;         // kWh
    double efficiency = 1.0;       // in (0, 1]
    double max_rate = 0.0;         // kWh per slot, charge and discharge
    double q_ini = 0.0;            // initial state of charge, kWh
    double q_tar_ch = 0.0;         // target SOC after the charging window, kWh
    double q_tar_dis = 0.0;        // target SOC after the discharging window, kWh
    double p_min_threshold = 0.0;  // charge when price < this, cents/kWh
    double p_max_threshold = 0.0;  // discharge when price > this, cents/kWh

    bool operator==(const StorageConfig&) const = default;
};

// Price sweep granularity and the floor offset added on top of p_buy when
// the closed-form price falls below it.
struct SweepConfig {
    double price_step = 0.01;  // cents/kWh
    double alpha = 0.01;       // cents/kWh

    bool operator==(const SweepConfig&) const = default;
};

// Thrown when input data violates a documented invariant.
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void check(const ResidentialUnit& unit);
void check(const GridTariff& tariff);
void check(const TouSchedule& tou);
void check(const SfcDemand& demand);
void check(const StorageConfig& cfg);
void check(const SweepConfig& sweep);

struct DroppedUnit {
    int id = 0;
    std::string reason;
};

struct ValidationResult {
    std::vector<ResidentialUnit> eligible;
    std::vector<DroppedUnit> dropped;
};

// Keeps the units that can actually play: e_gen > e_min, and k_pref at least
// p_sell * (1 + e_min) so the unclamped best response never dips below the
// essential load anywhere in [p_buy, p_sell]. Everything else is dropped and
// reported. Throws ScenarioError on invalid tariff or negative demand.
ValidationResult validate_scenario(const std::vector<ResidentialUnit>& units,
                                   const GridTariff& tariff,
                                   const SfcDemand& demand);

}  // namespace sfcgame
