#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sfcgame/sim.hpp"

// Scenario files: UTF-8 text, `key = value` pairs grouped under bracketed
// section headers. [unit] may repeat, one section per unit. Unknown keys are
// rejected, and every quantity carries its unit of measure in the key name
// (_kWh, _c_per_kWh, _c). The grammar is documented in the README.

namespace sfcgame::cli {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line, int col)
        : std::runtime_error(what + " (line " + std::to_string(line) +
                             ", column " + std::to_string(col) + ")"),
          line(line),
          col(col) {}

    int line = 0;
    int col = 0;
};

// Randomized parts of a scenario, drawn at materialization time.
struct SamplingSpec {
    int n_units = 5;
    double k_min = 90.0;
    double k_max = 150.0;
    double e_gen = 10.0;
    bool sample_demand = false;
    double demand_min = 0.0;
    double demand_max = 0.0;
    bool demand_is_daily_total = false;  // split the range across the slots

    bool operator==(const SamplingSpec&) const = default;
};

// A parsed scenario file: explicit data plus an optional sampling section.
// Explicit [unit] sections and [sampling] are mutually exclusive, as are an
// explicit [demand] and sampled demand.
struct ScenarioSpec {
    std::vector<sim::SimUnit> units;
    GridTariff tariff;
    TouSchedule tou;
    std::optional<SfcDemand> demand;
    std::optional<StorageConfig> storage;
    SweepConfig sweep;
    std::uint64_t seed = 0;
    bool excess_to_grid = false;
    std::optional<SamplingSpec> sampling;

    bool operator==(const ScenarioSpec&) const = default;
};

ScenarioSpec parse_scenario_text(const std::string& text);
ScenarioSpec parse_scenario_file(const std::string& path);

// Serializes a spec back to scenario-file text; parse(emit(s)) == s.
std::string emit_scenario(const ScenarioSpec& spec);

// Draws whatever the spec leaves to sampling and returns a concrete,
// validated scenario. Throws ScenarioError when required pieces are missing.
sim::Scenario materialize(const ScenarioSpec& spec, std::uint64_t seed);

// parse + materialize with the file's own seed.
sim::Scenario parse_scenario(const std::string& path);

}  // namespace sfcgame::cli
