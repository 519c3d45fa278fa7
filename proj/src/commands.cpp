#include "sfcgame/commands.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>

#include "sfcgame/centralized.hpp"
#include "sfcgame/csv.hpp"
#include "sfcgame/scenario.hpp"
#include "sfcgame/sim.hpp"

namespace sfcgame::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kNAxis[] = {5, 10, 15, 20, 25};
constexpr double kReqAxis[] = {60.0, 70.0, 80.0, 90.0, 100.0};
constexpr double kCapacityAxis[] = {25.0, 50.0, 75.0, 100.0};
constexpr double kGapPriceAxis[] = {60.0, 85.0};

struct Options {
    std::string scenario_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<double> step;
    int seeds = 100;
    bool excess_to_grid = false;
};

std::string fmt(double v) { return format_number(v); }
std::string usd(double cents) { return format_number(cents / 100.0); }

ScenarioSpec load_spec(const Options& opt) {
    ScenarioSpec spec = parse_scenario_file(opt.scenario_path);
    if (opt.seed) spec.seed = *opt.seed;
    if (opt.step) spec.sweep.price_step = *opt.step;
    if (opt.excess_to_grid) spec.excess_to_grid = true;
    return spec;
}

std::string out_path(const Options& opt, const std::string& name) {
    fs::create_directories(opt.out_dir);
    return (fs::path(opt.out_dir) / name).string();
}

std::vector<ResidentialUnit> bare_units(const sim::Scenario& scenario) {
    std::vector<ResidentialUnit> units;
    units.reserve(scenario.units.size());
    for (const sim::SimUnit& su : scenario.units) units.push_back(su.unit);
    return units;
}

// Drops ineligible units with a note on err; the game is played by the rest.
std::vector<ResidentialUnit> eligible_units(const sim::Scenario& scenario,
                                            std::ostream& err) {
    const ValidationResult validated = validate_scenario(
        bare_units(scenario), scenario.tariff, scenario.demand);
    for (const DroppedUnit& dropped : validated.dropped)
        err << "note: unit " << dropped.id << " dropped: " << dropped.reason
            << "\n";
    return validated.eligible;
}

sim::SampleRanges ranges_from(const ScenarioSpec& spec) {
    sim::SampleRanges ranges;
    if (spec.sampling) {
        ranges.n_units = spec.sampling->n_units;
        ranges.k_min = spec.sampling->k_min;
        ranges.k_max = spec.sampling->k_max;
        ranges.e_gen = spec.sampling->e_gen;
    }
    return ranges;
}

double require_e_req(const ScenarioSpec& spec) {
    if (!spec.demand)
        throw ScenarioError("this command needs an explicit [demand] section");
    return spec.demand->e_req;
}

int cmd_equilibrium(const Options& opt, std::ostream& err) {
    const ScenarioSpec spec = load_spec(opt);
    const sim::Scenario scenario = materialize(spec, spec.seed);
    const std::vector<ResidentialUnit> units = eligible_units(scenario, err);
    const double e_req = scenario.demand.e_req;

    const game::EquilibriumResult result = game::solve_equilibrium(
        units, e_req, scenario.tariff, scenario.sweep);

    CsvWriter summary(out_path(opt, "equilibrium.csv"), scenario.seed);
    summary.header({"price_star_c_per_kWh", "sfc_cost_star_c",
                    "sfc_cost_star_usd", "e_req_kWh", "n_units"});
    summary.row({fmt(result.price_star), fmt(result.sfc_cost_star),
                 usd(result.sfc_cost_star), fmt(e_req),
                 std::to_string(units.size())});
    summary.flush();

    const std::vector<double> bought =
        game::allocate_purchases(result.offers_star, e_req);
    CsvWriter per_unit(out_path(opt, "equilibrium_units.csv"), scenario.seed);
    per_unit.header({"unit_id", "k_pref_c", "e_gen_kWh", "e_min_kWh",
                     "consumption_kWh", "offer_kWh", "bought_kWh", "utility_c",
                     "revenue_c"});
    for (size_t n = 0; n < units.size(); ++n) {
        const double offer = result.offers_star[n];
        double revenue = result.price_star * bought[n];
        if (scenario.excess_to_grid)
            revenue += scenario.tariff.p_buy * (offer - bought[n]);
        per_unit.row({std::to_string(units[n].id), fmt(units[n].k_pref),
                      fmt(units[n].e_gen), fmt(units[n].e_min),
                      fmt(result.consumption_star[n]), fmt(offer),
                      fmt(bought[n]),
                      fmt(game::utility(units[n], result.consumption_star[n],
                                        result.price_star)),
                      fmt(revenue)});
    }
    per_unit.flush();

    CsvWriter trace(out_path(opt, "equilibrium_trace.csv"), scenario.seed);
    trace.header({"price_c_per_kWh", "sfc_cost_c"});
    for (const game::TracePoint& point : result.trace)
        trace.row({fmt(point.price), fmt(point.cost)});
    trace.flush();
    return 0;
}

int cmd_verify(const Options& opt, std::ostream& err) {
    const ScenarioSpec spec = load_spec(opt);
    const sim::Scenario scenario = materialize(spec, spec.seed);
    const std::vector<ResidentialUnit> units = eligible_units(scenario, err);
    const double e_req = scenario.demand.e_req;

    const game::EquilibriumResult result = game::solve_equilibrium(
        units, e_req, scenario.tariff, scenario.sweep);
    const game::VerificationReport report =
        game::verify_equilibrium(result, units, e_req, scenario.tariff);
    const bool proof = game::strategy_proof_check(result, units);

    CsvWriter csv(out_path(opt, "verify.csv"), scenario.seed);
    csv.header({"check", "passed", "worst_violation_c", "detail"});
    csv.row({"follower_no_better_deviation",
             report.followers_ok ? "true" : "false",
             fmt(report.worst_follower_violation),
             "unit=" + std::to_string(report.worst_follower)});
    csv.row({"leader_no_cheaper_price", report.leader_ok ? "true" : "false",
             fmt(report.worst_leader_violation),
             "price=" + fmt(report.worst_leader_price)});
    csv.row({"strategy_proof", proof ? "true" : "false", fmt(0.0), ""});
    csv.flush();

    if (!report.passed() || !proof) {
        err << "verification failed\n";
        return 1;
    }
    return 0;
}

int cmd_day(const Options& opt, std::ostream& err) {
    const ScenarioSpec spec = load_spec(opt);
    const sim::Scenario scenario = materialize(spec, spec.seed);
    if (scenario.tou.slots() < 2)
        err << "note: day run over a single-slot price curve\n";
    const sim::DayReport report = sim::run_day(scenario);

    CsvWriter csv(out_path(opt, "day.csv"), scenario.seed);
    csv.header({"slot", "price_c_per_kWh", "eqp_kWh", "e_sd_kWh", "soc_kWh",
                "req_kWh", "eq_price_c_per_kWh", "cost_nosd_nogame_c",
                "cost_sd_nogame_c", "cost_sd_game_c"});
    for (const sim::DayReport::Slot& slot : report.slots)
        csv.row({std::to_string(slot.t), fmt(slot.price), fmt(slot.eqp),
                 fmt(slot.e_sd), fmt(slot.soc), fmt(slot.req),
                 fmt(slot.eq_price), fmt(slot.cost_case1), fmt(slot.cost_case2),
                 fmt(slot.cost_case3)});
    csv.flush();

    CsvWriter totals(out_path(opt, "day_totals.csv"), scenario.seed);
    totals.header({"total_nosd_nogame_usd", "total_sd_nogame_usd",
                   "total_sd_game_usd", "reduction_vs_nogame_pct",
                   "reduction_vs_nosd_pct", "clamped_slots"});
    const double red2 = report.total_case2 > 0.0
                            ? 100.0 * (report.total_case2 - report.total_case3) /
                                  report.total_case2
                            : 0.0;
    const double red1 = report.total_case1 > 0.0
                            ? 100.0 * (report.total_case1 - report.total_case3) /
                                  report.total_case1
                            : 0.0;
    totals.row({usd(report.total_case1), usd(report.total_case2),
                usd(report.total_case3), fmt(red2), fmt(red1),
                std::to_string(report.clamps.size())});
    totals.flush();
    return 0;
}

int cmd_sweep_n(const Options& opt, std::ostream&) {
    const ScenarioSpec spec = load_spec(opt);
    const double e_req = require_e_req(spec);
    sim::SampleRanges ranges = ranges_from(spec);

    CsvWriter csv(out_path(opt, "sweep_n.csv"), spec.seed);
    csv.header({"n_units", "cost_baseline_usd", "cost_proposed_usd",
                "reduction_pct", "n_seeds"});
    for (int n : kNAxis) {
        const double baseline = sim::baseline_cost(e_req, spec.tariff.p_sell);
        double sum = 0.0;
        for (int i = 0; i < opt.seeds; ++i) {
            sim::Rng rng(spec.seed + static_cast<std::uint64_t>(i));
            const std::vector<sim::SimUnit> sampled = sim::sample_units(
                rng, n, ranges.k_min, ranges.k_max, ranges.e_gen);
            std::vector<ResidentialUnit> units;
            for (const sim::SimUnit& su : sampled) units.push_back(su.unit);
            const ValidationResult validated = validate_scenario(
                units, spec.tariff, SfcDemand{e_req, {}});
            sum += game::solve_equilibrium(validated.eligible, e_req,
                                           spec.tariff, spec.sweep)
                       .sfc_cost_star;
        }
        const double mean = sum / static_cast<double>(opt.seeds);
        csv.row({std::to_string(n), usd(baseline), usd(mean),
                 fmt(100.0 * (baseline - mean) / baseline),
                 std::to_string(opt.seeds)});
    }
    csv.flush();
    return 0;
}

int cmd_sweep_req(const Options& opt, std::ostream&) {
    const ScenarioSpec spec = load_spec(opt);
    sim::SampleRanges ranges = ranges_from(spec);

    CsvWriter csv(out_path(opt, "sweep_req.csv"), spec.seed);
    csv.header({"e_req_kWh", "cost_baseline_usd", "cost_proposed_usd",
                "reduction_pct", "n_seeds"});
    for (double e_req : kReqAxis) {
        const double baseline = sim::baseline_cost(e_req, spec.tariff.p_sell);
        double sum = 0.0;
        for (int i = 0; i < opt.seeds; ++i) {
            sim::Rng rng(spec.seed + static_cast<std::uint64_t>(i));
            const std::vector<sim::SimUnit> sampled =
                sim::sample_units(rng, ranges.n_units, ranges.k_min,
                                  ranges.k_max, ranges.e_gen);
            std::vector<ResidentialUnit> units;
            for (const sim::SimUnit& su : sampled) units.push_back(su.unit);
            const ValidationResult validated = validate_scenario(
                units, spec.tariff, SfcDemand{e_req, {}});
            sum += game::solve_equilibrium(validated.eligible, e_req,
                                           spec.tariff, spec.sweep)
                       .sfc_cost_star;
        }
        const double mean = sum / static_cast<double>(opt.seeds);
        csv.row({fmt(e_req), usd(baseline), usd(mean),
                 fmt(100.0 * (baseline - mean) / baseline),
                 std::to_string(opt.seeds)});
    }
    csv.flush();
    return 0;
}

int cmd_sweep_capacity(const Options& opt, std::ostream&) {
    const ScenarioSpec spec = load_spec(opt);
    if (!spec.storage)
        throw ScenarioError("sweep-capacity needs a [storage] section");
    const StorageConfig base = *spec.storage;

    CsvWriter csv(out_path(opt, "sweep_capacity.csv"), spec.seed);
    csv.header({"capacity_kWh", "total_nosd_nogame_usd", "total_sd_nogame_usd",
                "total_sd_game_usd", "saving_vs_nosd_usd",
                "saving_vs_nogame_usd", "n_seeds"});
    for (double capacity : kCapacityAxis) {
        const double scale = capacity / base.capacity;
        ScenarioSpec scaled = spec;
        scaled.storage->capacity = capacity;
        scaled.storage->q_ini = base.q_ini * scale;
        scaled.storage->q_tar_ch = base.q_tar_ch * scale;
        scaled.storage->q_tar_dis = base.q_tar_dis * scale;

        double sum1 = 0.0, sum2 = 0.0, sum3 = 0.0;
        for (int i = 0; i < opt.seeds; ++i) {
            const sim::Scenario scenario = materialize(
                scaled, spec.seed + static_cast<std::uint64_t>(i));
            const sim::DayReport report = sim::run_day(scenario);
            sum1 += report.total_case1;
            sum2 += report.total_case2;
            sum3 += report.total_case3;
        }
        const double n = static_cast<double>(opt.seeds);
        csv.row({fmt(capacity), usd(sum1 / n), usd(sum2 / n), usd(sum3 / n),
                 usd((sum1 - sum3) / n), usd((sum2 - sum3) / n),
                 std::to_string(opt.seeds)});
    }
    csv.flush();
    return 0;
}

int cmd_centralized_gap(const Options& opt, std::ostream&) {
    const ScenarioSpec spec = load_spec(opt);
    const double e_req = require_e_req(spec);
    sim::SampleRanges ranges = ranges_from(spec);

    CsvWriter csv(out_path(opt, "centralized_gap.csv"), spec.seed);
    csv.header({"p_sell_c_per_kWh", "n_units", "social_distributed_c",
                "social_centralized_c", "gap_pct", "n_seeds"});
    for (double p_sell : kGapPriceAxis) {
        const GridTariff tariff{spec.tariff.p_buy, p_sell};
        for (int n : kNAxis) {
            double sum_dist = 0.0, sum_cent = 0.0, sum_gap = 0.0;
            for (int i = 0; i < opt.seeds; ++i) {
                sim::Rng rng(spec.seed + static_cast<std::uint64_t>(i));
                const std::vector<sim::SimUnit> sampled = sim::sample_units(
                    rng, n, ranges.k_min, ranges.k_max, ranges.e_gen);
                std::vector<ResidentialUnit> units;
                for (const sim::SimUnit& su : sampled)
                    units.push_back(su.unit);
                const ValidationResult validated =
                    validate_scenario(units, tariff, SfcDemand{e_req, {}});

                const game::EquilibriumResult result = game::solve_equilibrium(
                    validated.eligible, e_req, tariff, spec.sweep);
                const double dist = centralized::social_cost(
                    result.consumption_star, validated.eligible, e_req, p_sell,
                    result.price_star);
                const centralized::SocialCostResult cent =
                    centralized::centralized_optimum(validated.eligible, e_req,
                                                     p_sell);
                sum_dist += dist;
                sum_cent += cent.social_cost;
                sum_gap += 100.0 * (dist - cent.social_cost) /
                           std::abs(cent.social_cost);
            }
            const double n_seeds = static_cast<double>(opt.seeds);
            csv.row({fmt(p_sell), std::to_string(n), fmt(sum_dist / n_seeds),
                     fmt(sum_cent / n_seeds), fmt(sum_gap / n_seeds),
                     std::to_string(opt.seeds)});
        }
    }
    csv.flush();
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Stackelberg energy trading between a shared facility "
                 "controller and residential units, with time-of-use storage "
                 "scheduling"};
    app.require_subcommand(1);

    Options opt;
    const auto add_common = [&](CLI::App* cmd, bool batched) {
        cmd->add_option("scenario", opt.scenario_path, "scenario file")
            ->required();
        cmd->add_option("--out", opt.out_dir, "output directory");
        cmd->add_option("--seed", opt.seed, "override the scenario seed");
        cmd->add_option("--step", opt.step,
                        "sweep granularity, cents/kWh");
        cmd->add_flag("--excess-to-grid", opt.excess_to_grid,
                      "unsold offer excess is sold to the grid at p_buy");
        if (batched)
            cmd->add_option("--seeds", opt.seeds,
                            "number of seeds to average over");
    };

    CLI::App* equilibrium =
        app.add_subcommand("equilibrium", "solve one slot and write the trace");
    add_common(equilibrium, false);
    CLI::App* verify = app.add_subcommand(
        "verify", "solve one slot and check the equilibrium conditions");
    add_common(verify, false);
    CLI::App* day =
        app.add_subcommand("day", "full-day study over the three cases");
    add_common(day, false);
    CLI::App* sweep_n = app.add_subcommand(
        "sweep-n", "mean cost against the number of units");
    add_common(sweep_n, true);
    CLI::App* sweep_req = app.add_subcommand(
        "sweep-req", "mean cost against the required energy");
    add_common(sweep_req, true);
    CLI::App* sweep_capacity = app.add_subcommand(
        "sweep-capacity", "daily savings against storage capacity");
    add_common(sweep_capacity, true);
    CLI::App* centralized_gap = app.add_subcommand(
        "centralized-gap", "distributed vs centralized social cost");
    add_common(centralized_gap, true);
    sweep_capacity->get_option("--seeds")->default_val(20);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << e.what() << "\n";
        return 1;
    }

    try {
        if (equilibrium->parsed()) return cmd_equilibrium(opt, err);
        if (verify->parsed()) return cmd_verify(opt, err);
        if (day->parsed()) return cmd_day(opt, err);
        if (sweep_n->parsed()) return cmd_sweep_n(opt, err);
        if (sweep_req->parsed()) return cmd_sweep_req(opt, err);
        if (sweep_capacity->parsed()) return cmd_sweep_capacity(opt, err);
        if (centralized_gap->parsed()) return cmd_centralized_gap(opt, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "no command\n";
    return 1;
}

}  // namespace sfcgame::cli
