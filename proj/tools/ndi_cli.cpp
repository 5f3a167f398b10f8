// Command-line front end: ingest -> index -> fit -> price/budget/stress,
// plus `all` to chain them and `synth` to generate fixture inputs.
// Every command writes its artifacts plus a JSON run manifest; reruns
// with the same configuration and seed are byte-identical.

#include "ndi/config.hpp"
#include "ndi/csvio.hpp"
#include "ndi/errors.hpp"
#include "ndi/garch.hpp"
#include "ndi/index.hpp"
#include "ndi/ingest.hpp"
#include "ndi/nig.hpp"
#include "ndi/pricing.hpp"
#include "ndi/riskbudget.hpp"
#include "ndi/stress.hpp"
#include "ndi/synth.hpp"

#include "ndi/stats.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fs = std::filesystem;
using ndi::KeyValueConfig;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;  // raw section.key=value pairs
};

// Resolve configuration: file first, then --set overrides, then the
// NDI_OUT_DIR environment hook for the output directory only.
KeyValueConfig resolve_config(const CommonArgs& args) {
    KeyValueConfig config;
    if (!args.config_path.empty()) config = KeyValueConfig::from_file(args.config_path);
    for (const auto& pair : args.overrides) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos) {
            throw ndi::ConfigError("--set expects section.key=value, got '" + pair + "'");
        }
        config.set(pair.substr(0, eq), pair.substr(eq + 1));
    }
    if (!args.out_dir.empty()) config.set("io.out_dir", args.out_dir);
    if (const char* env = std::getenv("NDI_OUT_DIR")) {
        if (!config.has("io.out_dir")) config.set("io.out_dir", env);
    }
    if (!config.has("io.out_dir")) config.set("io.out_dir", "out");
    return config;
}

fs::path ensure_out_dir(const KeyValueConfig& config) {
    const fs::path dir = config.get("io.out_dir", "out");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ndi::ConfigError("cannot create output directory '" + dir.string() + "'");
    return dir;
}

void require_file(const std::string& path, const std::string& key) {
    if (path.empty()) throw ndi::ConfigError("missing required config key '" + key + "'");
    if (!fs::exists(path)) {
        throw ndi::ConfigError("input file '" + path + "' (config key '" + key +
                               "') does not exist");
    }
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ndi::ConfigError("cannot write output file '" + path.string() + "'");
    return out;
}

void write_manifest(const fs::path& dir, ndi::RunManifest manifest,
                    const KeyValueConfig& config) {
    manifest.version = ndi::kVersion;
    manifest.config_text = config.canonical_text();
    manifest.config_hash = ndi::fnv1a_hex(manifest.config_text);
    auto out = open_output(dir / (manifest.command + "_manifest.json"));
    out << manifest.to_json();
}

ndi::StudyWindow window_from(const KeyValueConfig& config) {
    ndi::StudyWindow window;
    window.start_year = static_cast<int>(config.get_long("window.start_year", 1996));
    window.end_year = static_cast<int>(config.get_long("window.end_year", 2018));
    if (window.end_year < window.start_year) {
        throw ndi::ConfigError("window.end_year precedes window.start_year");
    }
    return window;
}

ndi::IngestOptions ingest_options_from(const KeyValueConfig& config) {
    ndi::IngestOptions options;
    options.strict = config.get_bool("ingest.strict", false);
    options.col_yearmonth = config.get("ingest.col_yearmonth", options.col_yearmonth);
    options.col_day = config.get("ingest.col_day", options.col_day);
    options.col_event_type = config.get("ingest.col_event_type", options.col_event_type);
    options.col_damage = config.get("ingest.col_damage", options.col_damage);
    options.col_state = config.get("ingest.col_state", options.col_state);
    const std::string alias_path = config.get("ingest.alias_file", "");
    if (!alias_path.empty()) {
        require_file(alias_path, "ingest.alias_file");
        std::ifstream in(alias_path);
        ndi::CsvReader reader(in);
        std::vector<std::string> row;
        while (reader.next_row(row)) {
            if (row.size() < 2) continue;
            options.aliases[ndi::normalize_event_type(row[0])] = row[1];
        }
    }
    return options;
}

// ---- pipeline stages shared between individual commands and `all` ----

struct IngestProducts {
    ndi::LossPanel panel;
    ndi::IngestStats stats;
};

IngestProducts run_ingest(const KeyValueConfig& config, const fs::path& dir,
                          ndi::RunManifest& manifest) {
    const std::string storm_path = config.get("io.storm_csv", "");
    const std::string cpi_path = config.get("io.cpi_csv", "");
    require_file(storm_path, "io.storm_csv");
    require_file(cpi_path, "io.cpi_csv");
    manifest.inputs.emplace_back(storm_path, ndi::file_digest(storm_path));
    manifest.inputs.emplace_back(cpi_path, ndi::file_digest(cpi_path));

    const auto window = window_from(config);
    const auto options = ingest_options_from(config);
    const int base_year = static_cast<int>(config.get_long("ingest.base_year", 2019));

    IngestProducts products;
    const auto records = ndi::read_storm_csv_file(storm_path, options, products.stats);
    const auto cpi = ndi::read_cpi_csv_file(cpi_path, base_year);
    products.panel =
        ndi::aggregate_semimonthly(records, cpi, window, options, products.stats);

    auto panel_out = open_output(dir / "loss_panel.csv");
    ndi::write_loss_panel_csv(panel_out, products.panel);
    manifest.outputs.push_back("loss_panel.csv");

    nlohmann::ordered_json stats_json;
    stats_json["records_read"] = products.stats.records_read;
    stats_json["records_accepted"] = products.stats.records_accepted;
    stats_json["skipped_malformed_damage"] = products.stats.skipped_malformed_damage;
    stats_json["skipped_unknown_type"] = products.stats.skipped_unknown_type;
    stats_json["skipped_outside_window"] = products.stats.skipped_outside_window;
    stats_json["periods"] = products.panel.periods.size();
    auto stats_out = open_output(dir / "ingest_stats.json");
    stats_out << stats_json.dump(2) << "\n";
    manifest.outputs.push_back("ingest_stats.json");
    return products;
}

ndi::NdiSeries run_index(const KeyValueConfig& config, const fs::path& dir,
                         const ndi::LossPanel& panel, ndi::RunManifest& manifest) {
    const double exponent = config.get_double("index.exponent", 0.1);
    const ndi::NdiSeries series = ndi::build_ndi(panel, exponent);
    auto out = open_output(dir / "ndi.csv");
    ndi::write_ndi_csv(out, series);
    manifest.outputs.push_back("ndi.csv");
    return series;
}

ndi::GarchNigModel run_fit(const KeyValueConfig& config, const fs::path& dir,
                           const ndi::NdiSeries& series, ndi::RunManifest& manifest) {
    const double riskfree = config.get_double("fit.rate", 0.0);
    const double loss_floor = config.get_double("fit.loss_floor", 1.0);
    const double exponent = series.exponent;

    Eigen::VectorXd floored = series.total_loss;
    for (Eigen::Index i = 0; i < floored.size(); ++i) {
        floored(i) = std::pow(std::max(floored(i), loss_floor), exponent);
    }
    ndi::GarchFitOptions options;
    if (config.has("fit.lambda0")) {
        options.pinned_lambda0 = config.get_double("fit.lambda0", 0.0);
    }
    const ndi::GarchNigModel model = ndi::fit_garch_nig(floored, riskfree, options);

    nlohmann::ordered_json j;
    j["m"] = model.garch.m;
    j["a"] = model.garch.a;
    j["b"] = model.garch.b;
    j["lambda0"] = model.lambda0;
    j["riskfree"] = model.riskfree;
    j["innovation"] = {{"lambda", model.innovation.lambda},
                       {"alpha", model.innovation.alpha},
                       {"beta", model.innovation.beta},
                       {"delta", model.innovation.delta},
                       {"mu", model.innovation.mu}};
    j["h_forecast"] = model.h_forecast;
    j["loglik"] = model.loglik;
    j["converged"] = model.converged;
    j["stationary"] = model.stationary;
    j["s_last"] = floored(floored.size() - 1);
    j["ndi_last"] = series.ndi(series.ndi.size() - 1);
    j["residual_variance"] = ndi::variance(model.residuals);
    if (config.get_bool("fit.write_residuals", false)) {
        j["residuals"] = std::vector<double>(model.residuals.data(),
                                             model.residuals.data() +
                                                 model.residuals.size());
        j["variance"] = std::vector<double>(model.variance.data(),
                                            model.variance.data() + model.variance.size());
    }
    auto out = open_output(dir / "garch_nig_model.json");
    out << j.dump(2) << "\n";
    manifest.outputs.push_back("garch_nig_model.json");
    return model;
}

struct FitState {
    ndi::GarchNigModel model;
    double s_last = 0.0;
    double ndi_last = 0.0;
};

FitState load_fit_state(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ndi::ConfigError("cannot open model file '" + path + "'");
    nlohmann::json j;
    in >> j;
    FitState state;
    state.model.garch.m = j.at("m").get<double>();
    state.model.garch.a = j.at("a").get<double>();
    state.model.garch.b = j.at("b").get<double>();
    state.model.lambda0 = j.at("lambda0").get<double>();
    state.model.riskfree = j.at("riskfree").get<double>();
    const auto& innovation = j.at("innovation");
    state.model.innovation.lambda = innovation.at("lambda").get<double>();
    state.model.innovation.alpha = innovation.at("alpha").get<double>();
    state.model.innovation.beta = innovation.at("beta").get<double>();
    state.model.innovation.delta = innovation.at("delta").get<double>();
    state.model.innovation.mu = innovation.at("mu").get<double>();
    state.model.h_forecast = j.at("h_forecast").get<double>();
    state.model.loglik = j.at("loglik").get<double>();
    state.model.converged = j.at("converged").get<bool>();
    state.model.stationary = j.at("stationary").get<bool>();
    state.s_last = j.at("s_last").get<double>();
    state.ndi_last = j.at("ndi_last").get<double>();
    return state;
}

void run_price(const KeyValueConfig& config, const fs::path& dir, const FitState& state,
               ndi::RunManifest& manifest) {
    ndi::PricingConfig pricing;
    pricing.n_paths = static_cast<int>(config.get_long("pricing.paths", 10000));
    pricing.horizon = static_cast<int>(config.get_long("pricing.horizon", 24));
    pricing.riskfree = config.get_double("pricing.rate", state.model.riskfree);
    pricing.seed = static_cast<std::uint64_t>(config.get_long("run.seed", 1));
    pricing.loss_floor = config.get_double("pricing.loss_floor", 1.0);
    pricing.legacy_recursion = config.get_bool("pricing.legacy_recursion", false);
    pricing.memoize_esscher = config.get_bool("pricing.memoize_esscher", false);
    pricing.strikes = ndi::parse_strike_spec(config.get("pricing.strikes", "-0.5:0.5:0.1"));

    ndi::GarchNigModel model = state.model;
    model.riskfree = pricing.riskfree;
    const ndi::PathSet paths =
        ndi::simulate_q_paths(model, state.s_last, state.ndi_last, pricing);
    const ndi::OptionSurface surface = ndi::price_options(paths, pricing);
    const auto iv = ndi::implied_vol_surface(surface, state.s_last);

    auto price_out = open_output(dir / "option_prices.csv");
    ndi::write_csv_row(price_out, {"t", "T", "K", "call", "put", "se_call", "se_put"});
    for (const auto& quote : surface.quotes) {
        ndi::write_csv_row(price_out,
                           {"0", std::to_string(quote.maturity),
                            ndi::format_double(quote.strike), ndi::format_double(quote.call),
                            ndi::format_double(quote.put), ndi::format_double(quote.se_call),
                            ndi::format_double(quote.se_put)});
    }
    manifest.outputs.push_back("option_prices.csv");

    auto iv_out = open_output(dir / "implied_vol.csv");
    ndi::write_csv_row(iv_out, {"T", "M", "iv"});
    for (const auto& cell : iv) {
        ndi::write_csv_row(iv_out, {std::to_string(cell.maturity),
                                    ndi::format_double(cell.moneyness),
                                    cell.ok ? ndi::format_double(cell.vol) : ""});
    }
    manifest.outputs.push_back("implied_vol.csv");

    manifest.notes.emplace_back("spot_s", ndi::format_double(state.s_last));
    manifest.notes.emplace_back("resampled_paths",
                                std::to_string(paths.resampled_paths));
    manifest.notes.emplace_back("max_esscher_residual",
                                ndi::format_double(paths.max_esscher_residual));
}

std::vector<ndi::MeasureSpec> budget_measures(const KeyValueConfig& config) {
    std::vector<ndi::MeasureSpec> measures;
    const std::string kinds = config.get("budget.measures", "etl,std");
    const bool want_etl = kinds.find("etl") != std::string::npos;
    const bool want_std = kinds.find("std") != std::string::npos;
    if (want_etl) {
        for (const double level :
             ndi::parse_strike_spec(config.get("budget.levels", "0.95,0.99"))) {
            measures.push_back(ndi::MeasureSpec::etl(level));
        }
    }
    if (want_std) measures.push_back(ndi::MeasureSpec::std_dev());
    if (measures.empty()) {
        throw ndi::ConfigError("budget.measures selects neither 'etl' nor 'std'");
    }
    return measures;
}

void run_budget(const KeyValueConfig& config, const fs::path& dir,
                const ndi::LossPanel& panel, ndi::RunManifest& manifest) {
    const double exponent = config.get_double("index.exponent", 0.1);
    const ndi::ReturnPanel returns = ndi::loss_return_panel(panel, exponent);
    const auto weights = ndi::PortfolioWeights::equal(static_cast<int>(returns.types.size()));
    ndi::BudgetOptions options;
    options.measures = budget_measures(config);
    options.min_tail_scenarios =
        static_cast<int>(config.get_long("budget.min_tail", 10));

    const ndi::RiskBudgetReport report = ndi::budget_report(returns, weights, options);
    auto out = open_output(dir / "risk_budget.csv");
    std::vector<std::string> header{"event_type"};
    for (const auto& col : report.columns) {
        header.push_back("mctr_" + col.label);
        header.push_back("pctr_" + col.label);
    }
    ndi::write_csv_row(out, header);
    for (std::size_t i = 0; i < report.types.size(); ++i) {
        const auto idx = static_cast<Eigen::Index>(i);
        std::vector<std::string> row{report.types[i]};
        for (const auto& col : report.columns) {
            row.push_back(ndi::format_double(col.mctr(idx)));
            row.push_back(ndi::format_double(col.pctr(idx)));
        }
        ndi::write_csv_row(out, row);
    }
    manifest.outputs.push_back("risk_budget.csv");

    const std::string groups_path = config.get("budget.groups_file", "");
    if (!groups_path.empty()) {
        require_file(groups_path, "budget.groups_file");
        manifest.inputs.emplace_back(groups_path, ndi::file_digest(groups_path));
        std::ifstream in(groups_path);
        ndi::CsvReader reader(in);
        std::vector<std::string> row;
        std::vector<std::string> group_names;
        std::vector<std::vector<int>> groups;
        while (reader.next_row(row)) {
            if (row.size() < 2) {
                throw ndi::DataError("groups file: expected group_name,event_type rows");
            }
            const int type = ndi::canonical_type_index(row[1]);
            if (type < 0) {
                throw ndi::DataError("groups file: unknown event type '" + row[1] + "'");
            }
            auto it = std::find(group_names.begin(), group_names.end(), row[0]);
            if (it == group_names.end()) {
                group_names.push_back(row[0]);
                groups.emplace_back();
                it = group_names.end() - 1;
            }
            groups[static_cast<std::size_t>(it - group_names.begin())].push_back(type);
        }
        auto groups_out = open_output(dir / "risk_budget_groups.csv");
        ndi::write_csv_row(groups_out, {"group", "measure", "mctr", "pctr"});
        for (const auto& col : report.columns) {
            const auto sums = ndi::group_mctr(col.mctr, groups);
            const double total = col.mctr.sum();
            for (std::size_t g = 0; g < groups.size(); ++g) {
                ndi::write_csv_row(groups_out,
                                   {group_names[g], col.label,
                                    ndi::format_double(sums[g]),
                                    ndi::format_double(100.0 * sums[g] / total)});
            }
        }
        manifest.outputs.push_back("risk_budget_groups.csv");
    }

    const int window_len = static_cast<int>(config.get_long("budget.window", 400));
    if (config.get_bool("budget.rolling", false)) {
        const auto windows = ndi::rolling_budgets(returns, weights, window_len, options);
        auto rolling_out = open_output(dir / "risk_budget_rolling.csv");
        ndi::write_csv_row(rolling_out, {"window_start", "window_end", "measure",
                                         "event_type", "mctr", "pctr", "status"});
        for (const auto& wb : windows) {
            if (!wb.error.empty()) {
                ndi::write_csv_row(rolling_out,
                                   {wb.start, wb.end, "", "", "", "", wb.error});
                continue;
            }
            for (const auto& col : wb.report.columns) {
                for (std::size_t i = 0; i < wb.report.types.size(); ++i) {
                    const auto idx = static_cast<Eigen::Index>(i);
                    ndi::write_csv_row(rolling_out,
                                       {wb.start, wb.end, col.label, wb.report.types[i],
                                        ndi::format_double(col.mctr(idx)),
                                        ndi::format_double(col.pctr(idx)), "ok"});
                }
            }
        }
        manifest.outputs.push_back("risk_budget_rolling.csv");
    }
}

Eigen::VectorXd load_factor_csv(const std::string& path, std::vector<std::string>& months) {
    std::ifstream in(path);
    if (!in) throw ndi::ConfigError("cannot open factor CSV '" + path + "'");
    ndi::CsvReader reader(in);
    std::vector<std::string> row;
    if (!reader.next_row(row) || row.size() < 2) {
        throw ndi::DataError("factor CSV '" + path + "': need header month,value");
    }
    std::vector<double> values;
    while (reader.next_row(row)) {
        if (row.size() < 2) throw ndi::DataError("factor CSV '" + path + "': ragged row");
        months.push_back(row[0]);
        values.push_back(ndi::parse_double(row[1], "factor value"));
    }
    return Eigen::Map<Eigen::VectorXd>(values.data(),
                                       static_cast<Eigen::Index>(values.size()));
}

void run_stress(const KeyValueConfig& config, const fs::path& dir,
                const ndi::NdiSeries& series, ndi::RunManifest& manifest) {
    ndi::StressOptions options;
    options.n_sims = static_cast<int>(config.get_long("stress.sims", 10000));
    options.seed = static_cast<std::uint64_t>(config.get_long("run.seed", 1));
    options.lb_lags = static_cast<int>(config.get_long("stress.lb_lags", 20));
    options.bootstrap_reps = static_cast<int>(config.get_long("stress.bootstrap", 200));
    if (config.has("stress.levels")) {
        options.levels = ndi::parse_strike_spec(config.get("stress.levels", ""));
    }

    const ndi::MonthlyNdi monthly = ndi::aggregate_ndi_monthly(series);

    auto report_out = open_output(dir / "stress_report.csv");
    ndi::write_csv_row(report_out,
                       {"factor", "level", "covar", "coes", "coetl", "covar_se", "coes_se",
                        "coetl_se", "corr_raw", "corr_residual", "lb_p_factor"});
    auto scatter_out = open_output(dir / "stress_scatter.csv");
    ndi::write_csv_row(scatter_out, {"factor", "x", "y"});
    auto contour_out = open_output(dir / "stress_contour.csv");
    ndi::write_csv_row(contour_out, {"factor", "x", "y", "density"});

    const std::vector<std::pair<std::string, std::string>> factors = {
        {"max_temp", config.get("io.max_temp_csv", "")},
        {"pdsi", config.get("io.pdsi_csv", "")}};
    if (factors[0].second.empty() && factors[1].second.empty()) {
        throw ndi::ConfigError(
            "stress needs io.max_temp_csv and/or io.pdsi_csv (flags --max-temp-csv, "
            "--pdsi-csv)");
    }
    for (const auto& [name, path] : factors) {
        if (path.empty()) continue;
        require_file(path, "io." + name + "_csv");
        manifest.inputs.emplace_back(path, ndi::file_digest(path));
        std::vector<std::string> factor_months;
        const Eigen::VectorXd levels = load_factor_csv(path, factor_months);

        // Align by month labels: the factor must cover every index month
        // plus the month before the first one.
        if (factor_months.size() != static_cast<std::size_t>(levels.size())) {
            throw ndi::DataError("factor CSV '" + path + "': label/value mismatch");
        }
        std::vector<double> aligned;
        aligned.reserve(monthly.months.size() + 1);
        const std::string& first_month = monthly.months.front();
        std::size_t start = 0;
        while (start < factor_months.size() && factor_months[start] != first_month) ++start;
        if (start == 0 || start == factor_months.size()) {
            throw ndi::DataError("factor CSV '" + path +
                                 "': months do not cover the index range");
        }
        --start;  // one extra month ahead of the first index month
        for (std::size_t m = 0; m < monthly.months.size() + 1; ++m) {
            const std::size_t k = start + m;
            if (k >= factor_months.size() ||
                (m > 0 && factor_months[k] != monthly.months[m - 1])) {
                throw ndi::DataError("factor CSV '" + path + "': month gap near index " +
                                     std::to_string(m));
            }
            aligned.push_back(levels(static_cast<Eigen::Index>(k)));
        }
        const Eigen::Map<Eigen::VectorXd> factor_levels(
            aligned.data(), static_cast<Eigen::Index>(aligned.size()));

        ndi::StressReport report =
            ndi::stress_pipeline(monthly.ndi, factor_levels, options);
        report.factor_name = name;

        for (const auto& row : report.rows) {
            ndi::write_csv_row(report_out,
                               {name, ndi::format_double(row.level),
                                ndi::format_double(row.covar), ndi::format_double(row.coes),
                                ndi::format_double(row.coetl),
                                ndi::format_double(row.covar_se),
                                ndi::format_double(row.coes_se),
                                ndi::format_double(row.coetl_se),
                                ndi::format_double(report.corr_raw),
                                ndi::format_double(report.corr_residual),
                                ndi::format_double(report.factor_lb.p_value)});
        }
        for (Eigen::Index i = 0; i < report.simulated.rows(); ++i) {
            ndi::write_csv_row(scatter_out, {name,
                                             ndi::format_double(report.simulated(i, 0)),
                                             ndi::format_double(report.simulated(i, 1))});
        }
        // 41x41 density grid over the simulated range.
        const double x_lo = report.simulated.col(0).minCoeff();
        const double x_hi = report.simulated.col(0).maxCoeff();
        const double y_lo = report.simulated.col(1).minCoeff();
        const double y_hi = report.simulated.col(1).maxCoeff();
        for (int ix = 0; ix <= 40; ++ix) {
            for (int iy = 0; iy <= 40; ++iy) {
                const double x = x_lo + (x_hi - x_lo) * ix / 40.0;
                const double y = y_lo + (y_hi - y_lo) * iy / 40.0;
                const double density = std::exp(
                    ndi::biv_nig_log_pdf(Eigen::Vector2d(x, y), report.joint.params));
                ndi::write_csv_row(contour_out,
                                   {name, ndi::format_double(x), ndi::format_double(y),
                                    ndi::format_double(density)});
            }
        }
    }
    manifest.outputs.push_back("stress_report.csv");
    manifest.outputs.push_back("stress_scatter.csv");
    manifest.outputs.push_back("stress_contour.csv");
}

void run_synth(const KeyValueConfig& config, const fs::path& dir,
               ndi::RunManifest& manifest) {
    ndi::SynthOptions options;
    options.window = window_from(config);
    options.seed = static_cast<std::uint64_t>(config.get_long("run.seed", 42));
    options.events_per_period = config.get_double("synth.events_per_period", 0.6);
    options.base_year = static_cast<int>(config.get_long("ingest.base_year", 2019));

    {
        auto out = open_output(dir / "storm_events.csv");
        ndi::write_synth_storm_csv(out, options);
    }
    {
        auto out = open_output(dir / "cpi.csv");
        ndi::write_synth_cpi_csv(out, options);
    }
    {
        auto out = open_output(dir / "max_temp.csv");
        ndi::write_synth_factor_csv(out, options, "max_temp");
    }
    {
        auto out = open_output(dir / "pdsi.csv");
        ndi::write_synth_factor_csv(out, options, "pdsi");
    }
    manifest.outputs = {"storm_events.csv", "cpi.csv", "max_temp.csv", "pdsi.csv"};
}

int dispatch(const std::string& command, const CommonArgs& args) {
    const KeyValueConfig config = resolve_config(args);
    const fs::path dir = ensure_out_dir(config);
    ndi::RunManifest manifest;
    manifest.command = command;
    manifest.seed = static_cast<std::uint64_t>(config.get_long("run.seed", 1));

    if (command == "synth") {
        run_synth(config, dir, manifest);
        write_manifest(dir, manifest, config);
        return 0;
    }
    if (command == "ingest") {
        run_ingest(config, dir, manifest);
        write_manifest(dir, manifest, config);
        return 0;
    }
    if (command == "index") {
        const std::string panel_path = config.get("io.loss_panel_csv",
                                                  (dir / "loss_panel.csv").string());
        require_file(panel_path, "io.loss_panel_csv");
        manifest.inputs.emplace_back(panel_path, ndi::file_digest(panel_path));
        const auto panel = ndi::read_loss_panel_csv_file(panel_path);
        run_index(config, dir, panel, manifest);
        write_manifest(dir, manifest, config);
        return 0;
    }
    if (command == "fit") {
        const std::string ndi_path = config.get("io.ndi_csv", (dir / "ndi.csv").string());
        require_file(ndi_path, "io.ndi_csv");
        manifest.inputs.emplace_back(ndi_path, ndi::file_digest(ndi_path));
        const auto series = ndi::read_ndi_csv_file(ndi_path);
        run_fit(config, dir, series, manifest);
        write_manifest(dir, manifest, config);
        return 0;
    }
    if (command == "price") {
        const std::string model_path = config.get("io.model_json",
                                                  (dir / "garch_nig_model.json").string());
        require_file(model_path, "io.model_json");
        manifest.inputs.emplace_back(model_path, ndi::file_digest(model_path));
        run_price(config, dir, load_fit_state(model_path), manifest);
        write_manifest(dir, manifest, config);
        return 0;
    }
    if (command == "budget") {
        const std::string panel_path = config.get("io.loss_panel_csv",
                                                  (dir / "loss_panel.csv").string());
        require_file(panel_path, "io.loss_panel_csv");
        manifest.inputs.emplace_back(panel_path, ndi::file_digest(panel_path));
        run_budget(config, dir, ndi::read_loss_panel_csv_file(panel_path), manifest);
        write_manifest(dir, manifest, config);
        return 0;
    }
    if (command == "stress") {
        const std::string ndi_path = config.get("io.ndi_csv", (dir / "ndi.csv").string());
        require_file(ndi_path, "io.ndi_csv");
        manifest.inputs.emplace_back(ndi_path, ndi::file_digest(ndi_path));
        run_stress(config, dir, ndi::read_ndi_csv_file(ndi_path), manifest);
        write_manifest(dir, manifest, config);
        return 0;
    }
    if (command == "all") {
        const auto products = run_ingest(config, dir, manifest);
        const auto series = run_index(config, dir, products.panel, manifest);
        const auto model = run_fit(config, dir, series, manifest);
        FitState state;
        state.model = model;
        const double loss_floor = config.get_double("fit.loss_floor", 1.0);
        state.s_last = std::pow(std::max(series.total_loss(series.total_loss.size() - 1),
                                         loss_floor),
                                series.exponent);
        state.ndi_last = series.ndi(series.ndi.size() - 1);
        run_price(config, dir, state, manifest);
        run_budget(config, dir, products.panel, manifest);
        if (!config.get("io.max_temp_csv", "").empty() ||
            !config.get("io.pdsi_csv", "").empty()) {
            run_stress(config, dir, series, manifest);
        }
        write_manifest(dir, manifest, config);
        return 0;
    }
    throw ndi::ConfigError("unknown command '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Natural Disasters Index pipeline"};
    app.require_subcommand(1);

    CommonArgs args;
    const std::vector<std::pair<std::string, std::string>> commands = {
        {"synth", "generate synthetic storm/CPI/factor fixture files"},
        {"ingest", "parse storm records into the semimonthly loss panel"},
        {"index", "build the index series from a loss panel"},
        {"fit", "fit the GARCH-NIG model to the transformed loss series"},
        {"price", "Monte Carlo option prices and implied vols"},
        {"budget", "Euler risk budgets across event types"},
        {"stress", "CoVaR/CoES/CoETL stress tests against climate factors"},
        {"all", "run the full pipeline"},
    };

    // Flag twins for the most-used config keys; anything else goes
    // through --set section.key=value.
    std::map<std::string, std::string> flag_to_key = {
        {"--storm-csv", "io.storm_csv"},       {"--cpi-csv", "io.cpi_csv"},
        {"--max-temp-csv", "io.max_temp_csv"}, {"--pdsi-csv", "io.pdsi_csv"},
        {"--loss-panel-csv", "io.loss_panel_csv"}, {"--ndi-csv", "io.ndi_csv"},
        {"--model-json", "io.model_json"},     {"--start-year", "window.start_year"},
        {"--end-year", "window.end_year"},     {"--base-year", "ingest.base_year"},
        {"--strict", "ingest.strict"},         {"--exponent", "index.exponent"},
        {"--rate", "pricing.rate"},            {"--paths", "pricing.paths"},
        {"--horizon", "pricing.horizon"},      {"--strikes", "pricing.strikes"},
        {"--loss-floor", "pricing.loss_floor"},
        {"--legacy-recursion", "pricing.legacy_recursion"},
        {"--window", "budget.window"},         {"--min-tail", "budget.min_tail"},
        {"--rolling", "budget.rolling"},       {"--levels", "budget.levels"},
        {"--measures", "budget.measures"},     {"--groups", "budget.groups_file"},
        {"--sims", "stress.sims"},             {"--lb-lags", "stress.lb_lags"},
        {"--seed", "run.seed"},                {"--events-per-period",
                                                "synth.events_per_period"},
    };

    std::map<std::string, std::map<std::string, std::string>> flag_values;
    for (const auto& [name, description] : commands) {
        auto* sub = app.add_subcommand(name, description);
        sub->add_option("--config", args.config_path, "key-value config file");
        sub->add_option("--out-dir", args.out_dir, "output directory");
        sub->add_option("--set", args.overrides,
                        "override a config entry, section.key=value");
        auto& values = flag_values[name];
        for (const auto& [flag, key] : flag_to_key) {
            values[key];  // reserve slot
            sub->add_option_function<std::string>(
                flag,
                [&values, key = key](const std::string& v) { values[key] = v; });
        }
        sub->callback([name = name, &args, &flag_values]() {
            for (const auto& [key, value] : flag_values[name]) {
                if (!value.empty()) args.overrides.push_back(key + "=" + value);
            }
            dispatch(name, args);
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ndi::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ndi::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const ndi::NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
