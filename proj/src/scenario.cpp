#include "sfcgame/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

namespace sfcgame::cli {

namespace {

enum class Section {
    None,
    Tariff,
    Unit,
    Tou,
    Demand,
    Storage,
    Sweep,
    Sampling,
};

struct Cursor {
    int line = 0;
    int col = 0;
};

[[noreturn]] void fail(const std::string& what, Cursor at) {
    throw ParseError(what, at.line, at.col);
}

std::string_view trim(std::string_view s, int line, int base_col, Cursor* at) {
    size_t b = 0;
    while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    size_t e = s.size();
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    if (at) *at = {line, base_col + static_cast<int>(b)};
    return s.substr(b, e - b);
}

double parse_double(std::string_view s, Cursor at) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        fail("malformed number '" + std::string(s) + "'", at);
    return v;
}

std::uint64_t parse_u64(std::string_view s, Cursor at) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        fail("malformed integer '" + std::string(s) + "'", at);
    return v;
}

int parse_count(std::string_view s, Cursor at) {
    const std::uint64_t v = parse_u64(s, at);
    if (v == 0 || v > 100000) fail("count out of range", at);
    return static_cast<int>(v);
}

bool parse_bool(std::string_view s, Cursor at) {
    if (s == "true") return true;
    if (s == "false") return false;
    fail("expected 'true' or 'false'", at);
}

std::vector<double> parse_list(std::string_view s, int line, int base_col) {
    std::vector<double> values;
    size_t start = 0;
    while (true) {
        const size_t comma = s.find(',', start);
        const std::string_view item =
            s.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                            : comma - start);
        Cursor at;
        const std::string_view token =
            trim(item, line, base_col + static_cast<int>(start), &at);
        if (token.empty()) fail("empty list item", at);
        values.push_back(parse_double(token, at));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return values;
}

struct UnitDraft {
    Cursor at;
    std::optional<double> k_pref;
    std::optional<double> e_gen;
    double e_min = 0.0;
    std::vector<double> gen_profile;
};

struct StorageDraft {
    Cursor at;
    std::optional<double> capacity;
    double efficiency = 1.0;
    std::optional<double> max_rate;
    double q_ini = 0.0;
    std::optional<double> q_tar_ch;
    std::optional<double> q_tar_dis;
    std::optional<double> p_min;
    std::optional<double> p_max;
};

sim::SimUnit finish_unit(const UnitDraft& draft, int id) {
    if (!draft.k_pref) fail("[unit] is missing k_pref_c", draft.at);
    if (!draft.e_gen && draft.gen_profile.empty())
        fail("[unit] is missing e_gen_kWh", draft.at);
    sim::SimUnit su;
    su.unit.id = id;
    su.unit.k_pref = *draft.k_pref;
    su.unit.e_gen =
        draft.e_gen ? *draft.e_gen
                    : (draft.gen_profile.empty() ? 0.0 : draft.gen_profile[0]);
    su.unit.e_min = draft.e_min;
    su.gen_profile = draft.gen_profile;
    return su;
}

StorageConfig finish_storage(const StorageDraft& draft) {
    if (!draft.capacity) fail("[storage] is missing capacity_kWh", draft.at);
    if (!draft.max_rate) fail("[storage] is missing max_rate_kWh", draft.at);
    if (!draft.p_min) fail("[storage] is missing p_min_c_per_kWh", draft.at);
    if (!draft.p_max) fail("[storage] is missing p_max_c_per_kWh", draft.at);
    StorageConfig cfg;
    cfg.capacity = *draft.capacity;
    cfg.efficiency = draft.efficiency;
    cfg.max_rate = *draft.max_rate;
    cfg.q_ini = draft.q_ini;
    cfg.q_tar_ch = draft.q_tar_ch ? *draft.q_tar_ch : cfg.capacity;
    cfg.q_tar_dis = draft.q_tar_dis ? *draft.q_tar_dis : cfg.q_ini;
    cfg.p_min_threshold = *draft.p_min;
    cfg.p_max_threshold = *draft.p_max;
    return cfg;
}

}  // namespace

ScenarioSpec parse_scenario_text(const std::string& text) {
    ScenarioSpec spec;
    Section section = Section::None;
    std::optional<UnitDraft> unit;
    std::optional<StorageDraft> storage;
    std::optional<SamplingSpec> sampling;
    Cursor sampling_at;
    std::string demand_span = "slot";
    bool seen_tariff = false, seen_tou = false, seen_demand = false,
         seen_sweep = false;
    bool demand_has_req = false;
    SfcDemand demand;

    const auto close_unit = [&] {
        if (unit) {
            spec.units.push_back(
                finish_unit(*unit, static_cast<int>(spec.units.size())));
            unit.reset();
        }
    };

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.resize(hash);
        Cursor at;
        const std::string_view line = trim(raw, line_no, 1, &at);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail("unterminated section header", at);
            const std::string_view name = line.substr(1, line.size() - 2);
            close_unit();
            if (name == "tariff") {
                if (seen_tariff) fail("duplicate [tariff]", at);
                seen_tariff = true;
                section = Section::Tariff;
            } else if (name == "unit") {
                unit = UnitDraft{at, {}, {}, 0.0, {}};
                section = Section::Unit;
            } else if (name == "tou") {
                if (seen_tou) fail("duplicate [tou]", at);
                seen_tou = true;
                section = Section::Tou;
            } else if (name == "demand") {
                if (seen_demand) fail("duplicate [demand]", at);
                seen_demand = true;
                section = Section::Demand;
            } else if (name == "storage") {
                if (storage) fail("duplicate [storage]", at);
                storage = StorageDraft{};
                storage->at = at;
                section = Section::Storage;
            } else if (name == "sweep") {
                if (seen_sweep) fail("duplicate [sweep]", at);
                seen_sweep = true;
                section = Section::Sweep;
            } else if (name == "sampling") {
                if (sampling) fail("duplicate [sampling]", at);
                sampling = SamplingSpec{};
                sampling_at = at;
                section = Section::Sampling;
            } else {
                fail("unknown section [" + std::string(name) + "]", at);
            }
            continue;
        }

        const size_t eq = line.find('=');
        if (eq == std::string_view::npos) fail("expected 'key = value'", at);
        Cursor key_at;
        const std::string_view key =
            trim(line.substr(0, eq), line_no, at.col, &key_at);
        Cursor val_at;
        const std::string_view value = trim(
            line.substr(eq + 1), line_no, at.col + static_cast<int>(eq) + 1,
            &val_at);
        if (key.empty()) fail("missing key", key_at);
        if (value.empty()) fail("missing value for '" + std::string(key) + "'",
                                val_at);
        const int val_col = val_at.col;

        const auto unknown = [&]() -> void {
            fail("unknown key '" + std::string(key) + "'", key_at);
        };

        switch (section) {
            case Section::None:
                if (key == "seed")
                    spec.seed = parse_u64(value, val_at);
                else if (key == "excess_to_grid")
                    spec.excess_to_grid = parse_bool(value, val_at);
                else
                    unknown();
                break;
            case Section::Tariff:
                if (key == "p_buy_c_per_kWh")
                    spec.tariff.p_buy = parse_double(value, val_at);
                else if (key == "p_sell_c_per_kWh")
                    spec.tariff.p_sell = parse_double(value, val_at);
                else
                    unknown();
                break;
            case Section::Unit:
                if (key == "k_pref_c")
                    unit->k_pref = parse_double(value, val_at);
                else if (key == "e_gen_kWh")
                    unit->e_gen = parse_double(value, val_at);
                else if (key == "e_min_kWh")
                    unit->e_min = parse_double(value, val_at);
                else if (key == "e_gen_profile_kWh")
                    unit->gen_profile = parse_list(value, line_no, val_col);
                else
                    unknown();
                break;
            case Section::Tou:
                if (key == "prices_c_per_kWh")
                    spec.tou.prices = parse_list(value, line_no, val_col);
                else
                    unknown();
                break;
            case Section::Demand:
                if (key == "e_req_kWh") {
                    demand.e_req = parse_double(value, val_at);
                    demand_has_req = true;
                } else if (key == "eqp_load_kWh") {
                    demand.eqp_load = parse_list(value, line_no, val_col);
                } else {
                    unknown();
                }
                break;
            case Section::Storage:
                if (key == "capacity_kWh")
                    storage->capacity = parse_double(value, val_at);
                else if (key == "efficiency")
                    storage->efficiency = parse_double(value, val_at);
                else if (key == "max_rate_kWh")
                    storage->max_rate = parse_double(value, val_at);
                else if (key == "q_ini_kWh")
                    storage->q_ini = parse_double(value, val_at);
                else if (key == "q_tar_ch_kWh")
                    storage->q_tar_ch = parse_double(value, val_at);
                else if (key == "q_tar_dis_kWh")
                    storage->q_tar_dis = parse_double(value, val_at);
                else if (key == "p_min_c_per_kWh")
                    storage->p_min = parse_double(value, val_at);
                else if (key == "p_max_c_per_kWh")
                    storage->p_max = parse_double(value, val_at);
                else
                    unknown();
                break;
            case Section::Sweep:
                if (key == "price_step_c_per_kWh")
                    spec.sweep.price_step = parse_double(value, val_at);
                else if (key == "alpha_c_per_kWh")
                    spec.sweep.alpha = parse_double(value, val_at);
                else
                    unknown();
                break;
            case Section::Sampling:
                if (key == "n_units")
                    sampling->n_units = parse_count(value, val_at);
                else if (key == "k_min_c")
                    sampling->k_min = parse_double(value, val_at);
                else if (key == "k_max_c")
                    sampling->k_max = parse_double(value, val_at);
                else if (key == "e_gen_kWh")
                    sampling->e_gen = parse_double(value, val_at);
                else if (key == "demand_min_kWh") {
                    sampling->demand_min = parse_double(value, val_at);
                    sampling->sample_demand = true;
                } else if (key == "demand_max_kWh") {
                    sampling->demand_max = parse_double(value, val_at);
                    sampling->sample_demand = true;
                } else if (key == "demand_span") {
                    if (value == "day")
                        sampling->demand_is_daily_total = true;
                    else if (value == "slot")
                        sampling->demand_is_daily_total = false;
                    else
                        fail("demand_span must be 'day' or 'slot'", val_at);
                } else {
                    unknown();
                }
                break;
        }
    }
    close_unit();

    if (!seen_tariff)
        throw ParseError("scenario is missing the [tariff] section", line_no, 1);
    if (storage) spec.storage = finish_storage(*storage);
    if (sampling) {
        if (!spec.units.empty())
            fail("[sampling] cannot be combined with explicit [unit] sections",
                 sampling_at);
        if (sampling->sample_demand && seen_demand)
            fail("[sampling] demand range cannot be combined with [demand]",
                 sampling_at);
        spec.sampling = sampling;
    }
    if (seen_demand) {
        if (!demand_has_req && !demand.eqp_load.empty())
            demand.e_req = demand.eqp_load.front();
        spec.demand = demand;
    }
    return spec;
}

ScenarioSpec parse_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ScenarioError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

namespace {

std::string num(double v) {
    char buf[40];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void emit_list(std::ostringstream& out, const std::string& key,
               const std::vector<double>& values) {
    out << key << " = ";
    for (size_t i = 0; i < values.size(); ++i) {
        if (i) out << ", ";
        out << num(values[i]);
    }
    out << "\n";
}

}  // namespace

std::string emit_scenario(const ScenarioSpec& spec) {
    std::ostringstream out;
    out << "seed = " << spec.seed << "\n";
    out << "excess_to_grid = " << (spec.excess_to_grid ? "true" : "false")
        << "\n";

    out << "\n[tariff]\n";
    out << "p_buy_c_per_kWh = " << num(spec.tariff.p_buy) << "\n";
    out << "p_sell_c_per_kWh = " << num(spec.tariff.p_sell) << "\n";

    if (!spec.tou.prices.empty()) {
        out << "\n[tou]\n";
        emit_list(out, "prices_c_per_kWh", spec.tou.prices);
    }
    if (spec.demand) {
        out << "\n[demand]\n";
        out << "e_req_kWh = " << num(spec.demand->e_req) << "\n";
        if (!spec.demand->eqp_load.empty())
            emit_list(out, "eqp_load_kWh", spec.demand->eqp_load);
    }
    for (const sim::SimUnit& su : spec.units) {
        out << "\n[unit]\n";
        out << "k_pref_c = " << num(su.unit.k_pref) << "\n";
        out << "e_gen_kWh = " << num(su.unit.e_gen) << "\n";
        out << "e_min_kWh = " << num(su.unit.e_min) << "\n";
        if (!su.gen_profile.empty())
            emit_list(out, "e_gen_profile_kWh", su.gen_profile);
    }
    if (spec.sampling) {
        const SamplingSpec& s = *spec.sampling;
        out << "\n[sampling]\n";
        out << "n_units = " << s.n_units << "\n";
        out << "k_min_c = " << num(s.k_min) << "\n";
        out << "k_max_c = " << num(s.k_max) << "\n";
        out << "e_gen_kWh = " << num(s.e_gen) << "\n";
        if (s.sample_demand) {
            out << "demand_min_kWh = " << num(s.demand_min) << "\n";
            out << "demand_max_kWh = " << num(s.demand_max) << "\n";
            out << "demand_span = "
                << (s.demand_is_daily_total ? "day" : "slot") << "\n";
        }
    }
    if (spec.storage) {
        const StorageConfig& cfg = *spec.storage;
        out << "\n[storage]\n";
        out << "capacity_kWh = " << num(cfg.capacity) << "\n";
        out << "efficiency = " << num(cfg.efficiency) << "\n";
        out << "max_rate_kWh = " << num(cfg.max_rate) << "\n";
        out << "q_ini_kWh = " << num(cfg.q_ini) << "\n";
        out << "q_tar_ch_kWh = " << num(cfg.q_tar_ch) << "\n";
        out << "q_tar_dis_kWh = " << num(cfg.q_tar_dis) << "\n";
        out << "p_min_c_per_kWh = " << num(cfg.p_min_threshold) << "\n";
        out << "p_max_c_per_kWh = " << num(cfg.p_max_threshold) << "\n";
    }
    out << "\n[sweep]\n";
    out << "price_step_c_per_kWh = " << num(spec.sweep.price_step) << "\n";
    out << "alpha_c_per_kWh = " << num(spec.sweep.alpha) << "\n";
    return out.str();
}

sim::Scenario materialize(const ScenarioSpec& spec, std::uint64_t seed) {
    check(spec.tariff);
    check(spec.sweep);

    sim::Scenario scenario;
    scenario.seed = seed;
    scenario.tariff = spec.tariff;
    scenario.sweep = spec.sweep;
    scenario.excess_to_grid = spec.excess_to_grid;
    scenario.storage = spec.storage;
    if (scenario.storage) check(*scenario.storage);

    // A scenario without an explicit price curve is a single slot traded at
    // the grid sale price.
    scenario.tou = spec.tou.prices.empty()
                       ? TouSchedule{{spec.tariff.p_sell}}
                       : spec.tou;
    check(scenario.tou);
    const auto slots = static_cast<size_t>(scenario.tou.slots());

    sim::Rng rng(seed);
    if (spec.sampling) {
        const SamplingSpec& s = *spec.sampling;
        if (s.k_min > s.k_max || s.k_min <= 0.0)
            throw ScenarioError("sampling: k range must be positive and "
                                "well-ordered");
        scenario.units =
            sim::sample_units(rng, s.n_units, s.k_min, s.k_max, s.e_gen);
    } else {
        scenario.units = spec.units;
    }
    if (scenario.units.empty())
        throw ScenarioError("scenario defines no units, explicit or sampled");
    for (const sim::SimUnit& su : scenario.units) {
        check(su.unit);
        if (!su.gen_profile.empty() && su.gen_profile.size() != slots)
            throw ScenarioError("e_gen_profile length must match the tou");
    }

    if (spec.sampling && spec.sampling->sample_demand) {
        const SamplingSpec& s = *spec.sampling;
        if (s.demand_min < 0.0 || s.demand_min > s.demand_max)
            throw ScenarioError("sampling: demand range must be well-ordered");
        const double scale =
            s.demand_is_daily_total ? static_cast<double>(slots) : 1.0;
        scenario.demand.eqp_load.resize(slots);
        for (double& eqp : scenario.demand.eqp_load)
            eqp = rng.uniform(s.demand_min / scale, s.demand_max / scale);
        scenario.demand.e_req = scenario.demand.eqp_load.front();
    } else if (spec.demand) {
        scenario.demand = *spec.demand;
        if (scenario.demand.eqp_load.empty())
            scenario.demand.eqp_load.assign(slots, scenario.demand.e_req);
        if (scenario.demand.eqp_load.size() != slots)
            throw ScenarioError("eqp_load length must match the tou");
    } else {
        throw ScenarioError("scenario needs a [demand] section or a sampled "
                            "demand range");
    }
    check(scenario.demand);
    return scenario;
}

sim::Scenario parse_scenario(const std::string& path) {
    const ScenarioSpec spec = parse_scenario_file(path);
    sim::Scenario scenario = materialize(spec, spec.seed);

    // Keep only the units that can actually play at this tariff.
    std::vector<ResidentialUnit> units;
    units.reserve(scenario.units.size());
    for (const sim::SimUnit& su : scenario.units) units.push_back(su.unit);
    const ValidationResult validated =
        validate_scenario(units, scenario.tariff, scenario.demand);
    std::vector<sim::SimUnit> eligible;
    for (const sim::SimUnit& su : scenario.units) {
        bool keep = false;
        for (const ResidentialUnit& unit : validated.eligible)
            if (unit.id == su.unit.id) keep = true;
        if (keep) eligible.push_back(su);
    }
    scenario.units = std::move(eligible);
    return scenario;
}

}  // namespace sfcgame::cli
