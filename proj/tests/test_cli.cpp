#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ndi/csvio.hpp"
#include "ndi/ingest.hpp"
#include "ndi/periods.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <map>
#include <vector>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

std::string cli_bin() {
    const char* bin = std::getenv("NDI_CLI_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "NDI_CLI_BIN must point at the ndi binary");
    return bin;
}

int run(const std::string& args, const std::string& log = "/dev/null") {
    const std::string cmd = cli_bin() + " " + args + " >" + log + " 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing file: " << path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "ndi_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("synth produces the full fixture set") {
    const fs::path dir = fresh_dir("synth");
    CHECK(run("synth --out-dir " + dir.string() +
              " --start-year 1996 --end-year 1997 --seed 5") == 0);
    for (const char* name :
         {"storm_events.csv", "cpi.csv", "max_temp.csv", "pdsi.csv",
          "synth_manifest.json"}) {
        CHECK_MESSAGE(fs::exists(dir / name), name);
    }
}

TEST_CASE("ingest then index on synthetic data") {
    const fs::path dir = fresh_dir("pipeline");
    REQUIRE(run("synth --out-dir " + dir.string() +
                " --start-year 1996 --end-year 1999 --seed 9") == 0);
    REQUIRE(run("ingest --out-dir " + dir.string() + " --storm-csv " +
                (dir / "storm_events.csv").string() + " --cpi-csv " +
                (dir / "cpi.csv").string() +
                " --start-year 1996 --end-year 1999") == 0);
    const auto panel = ndi::read_loss_panel_csv_file((dir / "loss_panel.csv").string());
    CHECK(panel.periods.size() == 96);
    CHECK(panel.event_types.size() == 50);

    nlohmann::json stats;
    std::ifstream stats_in(dir / "ingest_stats.json");
    stats_in >> stats;
    CHECK(stats.at("records_read").get<long>() > 0);
    CHECK(stats.at("records_accepted").get<long>() == stats.at("records_read").get<long>());

    REQUIRE(run("index --out-dir " + dir.string()) == 0);
    CHECK(fs::exists(dir / "ndi.csv"));
    // header + one line per period
    std::istringstream ndi_csv(slurp(dir / "ndi.csv"));
    int lines = 0;
    for (std::string line; std::getline(ndi_csv, line);) ++lines;
    CHECK(lines == 97);
}

TEST_CASE("index on the smallest legal panel") {
    const fs::path dir = fresh_dir("tiny");
    ndi::LossPanel panel;
    panel.event_types = ndi::canonical_event_types();
    panel.periods = {"2000-01-01", "2000-01-16"};
    panel.losses = Eigen::MatrixXd::Zero(2, 50);
    panel.losses(0, 0) = 1024.0;
    panel.losses(1, 0) = 1.0;
    panel.total_loss = panel.losses.rowwise().sum();
    {
        std::ofstream out(dir / "loss_panel.csv");
        ndi::write_loss_panel_csv(out, panel);
    }
    REQUIRE(run("index --out-dir " + dir.string()) == 0);
    std::istringstream ndi_csv(slurp(dir / "ndi.csv"));
    std::string header, row0, row1;
    std::getline(ndi_csv, header);
    std::getline(ndi_csv, row0);
    std::getline(ndi_csv, row1);
    CHECK(row1.find("-1") != std::string::npos);  // 1^0.1 - 1024^0.1 = -1
}

TEST_CASE("missing input file exits with the config code and names the path") {
    const fs::path dir = fresh_dir("missing");
    const fs::path log = dir / "stderr.txt";
    REQUIRE(run("synth --out-dir " + dir.string() +
                " --start-year 1996 --end-year 1996") == 0);
    const int code = run("ingest --out-dir " + dir.string() + " --storm-csv " +
                             (dir / "storm_events.csv").string() +
                             " --cpi-csv /no/such/cpi.csv",
                         log.string());
    CHECK(code == 2);
    CHECK(slurp(log).find("/no/such/cpi.csv") != std::string::npos);
}

TEST_CASE("full pipeline reruns byte-identically and from its manifest") {
    const fs::path dir = fresh_dir("all_a");
    REQUIRE(run("synth --out-dir " + dir.string() +
                " --start-year 1996 --end-year 2018 --seed 3") == 0);

    const std::string inputs =
        " --storm-csv " + (dir / "storm_events.csv").string() + " --cpi-csv " +
        (dir / "cpi.csv").string() + " --max-temp-csv " +
        (dir / "max_temp.csv").string() + " --pdsi-csv " + (dir / "pdsi.csv").string() +
        " --start-year 1996 --end-year 2018 --seed 17 --paths 2000 --horizon 6" +
        " --strikes -0.3:0.3:0.1 --set stress.sims=20000 --set stress.bootstrap=40" +
        " --set stress.levels=0.10,0.05 --set budget.min_tail=5";

    const fs::path out_a = fresh_dir("all_a_out");
    REQUIRE(run("all --out-dir " + out_a.string() + inputs) == 0);
    const std::vector<std::string> artifacts = {
        "loss_panel.csv", "ndi.csv",           "garch_nig_model.json",
        "option_prices.csv", "implied_vol.csv", "risk_budget.csv",
        "stress_report.csv", "stress_scatter.csv"};
    for (const auto& name : artifacts) {
        CHECK_MESSAGE(fs::exists(out_a / name), name);
    }

    // identical second run
    const fs::path out_b = fresh_dir("all_b_out");
    REQUIRE(run("all --out-dir " + out_b.string() + inputs) == 0);
    for (const auto& name : artifacts) {
        CHECK_MESSAGE(slurp(out_a / name) == slurp(out_b / name), name);
    }

    // reproduce from the manifest's embedded configuration alone
    nlohmann::json manifest;
    std::ifstream manifest_in(out_a / "all_manifest.json");
    manifest_in >> manifest;
    const fs::path config_path = dir / "rerun.conf";
    {
        std::ofstream out(config_path);
        out << manifest.at("config_text").get<std::string>();
    }
    const fs::path out_c = fresh_dir("all_c_out");
    REQUIRE(run("all --config " + config_path.string() + " --out-dir " +
                out_c.string()) == 0);
    for (const auto& name : artifacts) {
        CHECK_MESSAGE(slurp(out_a / name) == slurp(out_c / name), name);
    }

    // inputs were not mutated
    REQUIRE(run("synth --out-dir " + fresh_dir("all_d").string() +
                " --start-year 1996 --end-year 2018 --seed 3") == 0);
    CHECK(slurp(dir / "storm_events.csv") ==
          slurp(fs::temp_directory_path() / "ndi_cli_tests" / "all_d" /
                "storm_events.csv"));
}

TEST_CASE("stepwise commands reproduce the chained run through file round trips") {
    const fs::path dir = fresh_dir("stepwise");
    REQUIRE(run("synth --out-dir " + dir.string() +
                " --start-year 1996 --end-year 2018 --seed 3") == 0);
    const std::string inputs =
        " --storm-csv " + (dir / "storm_events.csv").string() + " --cpi-csv " +
        (dir / "cpi.csv").string() + " --max-temp-csv " +
        (dir / "max_temp.csv").string() + " --pdsi-csv " + (dir / "pdsi.csv").string() +
        " --start-year 1996 --end-year 2018 --seed 17 --paths 1000 --horizon 4" +
        " --strikes -0.2:0.2:0.1 --set stress.sims=20000 --set stress.bootstrap=20" +
        " --set stress.levels=0.10,0.05 --set budget.min_tail=5";

    const fs::path chained = fresh_dir("stepwise_all");
    REQUIRE(run("all --out-dir " + chained.string() + inputs) == 0);

    const fs::path stepped = fresh_dir("stepwise_steps");
    REQUIRE(run("ingest --out-dir " + stepped.string() + inputs) == 0);
    REQUIRE(run("index --out-dir " + stepped.string() + inputs) == 0);
    REQUIRE(run("fit --out-dir " + stepped.string() + inputs) == 0);
    REQUIRE(run("price --out-dir " + stepped.string() + inputs) == 0);
    REQUIRE(run("budget --out-dir " + stepped.string() + inputs) == 0);
    REQUIRE(run("stress --out-dir " + stepped.string() + inputs) == 0);

    for (const char* name :
         {"loss_panel.csv", "ndi.csv", "garch_nig_model.json", "option_prices.csv",
          "implied_vol.csv", "risk_budget.csv", "stress_report.csv"}) {
        CHECK_MESSAGE(slurp(chained / name) == slurp(stepped / name), name);
    }
}

TEST_CASE("output directory falls back to the environment override") {
    const fs::path dir = fresh_dir("envdir");
    const std::string cmd = cli_bin() + " synth --start-year 2000 --end-year 2000" +
                            " >/dev/null 2>&1";
    const int status =
        std::system(("NDI_OUT_DIR=" + dir.string() + " " + cmd).c_str());
    REQUIRE(WEXITSTATUS(status) == 0);
    CHECK(fs::exists(dir / "storm_events.csv"));
}

TEST_CASE("a numerically hopeless model exits with the numerical-failure code") {
    const fs::path dir = fresh_dir("numfail");
    {
        std::ofstream model(dir / "garch_nig_model.json");
        // Esscher domain never admits u = 1: alpha/sqrt(h) stays below 1/2
        model << R"({"m": 1.0, "a": 0.0, "b": 0.0, "lambda0": 0.0, "riskfree": 0.0,
                     "innovation": {"lambda": -0.5, "alpha": 0.6, "beta": 0.0,
                                    "delta": 0.6, "mu": 0.0},
                     "h_forecast": 9.0, "loglik": 0.0, "converged": true,
                     "stationary": true, "s_last": 1.0, "ndi_last": 0.0})";
    }
    const int code = run("price --out-dir " + dir.string() + " --model-json " +
                         (dir / "garch_nig_model.json").string() +
                         " --paths 2 --horizon 2 --strikes 0.0");
    CHECK(code == 4);
}

TEST_CASE("alias table maps nonstandard event names during ingest") {
    const fs::path dir = fresh_dir("alias");
    {
        std::ofstream storm(dir / "storm.csv");
        storm << "BEGIN_YEARMONTH,BEGIN_DAY,EVENT_TYPE,DAMAGE_PROPERTY,STATE\n"
                 "200001,5,TSTM WIND,1.00K,TX\n"
                 "200001,6,Thunderstorm Wind,2.00K,TX\n";
        std::ofstream cpi(dir / "cpi.csv");
        cpi << "year,deflator_to_base\n2000,1.0\n";
        std::ofstream aliases(dir / "aliases.csv");
        aliases << "TSTM WIND,Thunderstorm Wind\n";
    }
    const std::string base = "ingest --out-dir " + dir.string() + " --storm-csv " +
                             (dir / "storm.csv").string() + " --cpi-csv " +
                             (dir / "cpi.csv").string() +
                             " --start-year 2000 --end-year 2000";
    REQUIRE(run(base) == 0);
    nlohmann::json stats;
    {
        std::ifstream in(dir / "ingest_stats.json");
        in >> stats;
    }
    CHECK(stats.at("records_accepted") == 1);
    CHECK(stats.at("skipped_unknown_type") == 1);

    REQUIRE(run(base + " --set ingest.alias_file=" + (dir / "aliases.csv").string()) == 0);
    {
        std::ifstream in(dir / "ingest_stats.json");
        in >> stats;
    }
    CHECK(stats.at("records_accepted") == 2);
    CHECK(stats.at("skipped_unknown_type") == 0);
}

TEST_CASE("budget command emits the table-shaped report") {
    const fs::path dir = fresh_dir("budget");
    REQUIRE(run("synth --out-dir " + dir.string() +
                " --start-year 1996 --end-year 2018 --seed 29") == 0);
    REQUIRE(run("ingest --out-dir " + dir.string() + " --storm-csv " +
                (dir / "storm_events.csv").string() + " --cpi-csv " +
                (dir / "cpi.csv").string() +
                " --start-year 1996 --end-year 2018") == 0);
    REQUIRE(run("budget --out-dir " + dir.string() + " --min-tail 5") == 0);

    std::istringstream report(slurp(dir / "risk_budget.csv"));
    std::string header;
    std::getline(report, header);
    CHECK(header ==
          "event_type,mctr_etl95,pctr_etl95,mctr_etl99,pctr_etl99,mctr_std,pctr_std");
    int rows = 0;
    for (std::string line; std::getline(report, line);) ++rows;
    CHECK(rows == 50);
}

TEST_CASE("budget measures, levels, groups and rolling windows") {
    const fs::path dir = fresh_dir("budget_opts");
    REQUIRE(run("synth --out-dir " + dir.string() +
                " --start-year 1996 --end-year 2018 --seed 31") == 0);
    REQUIRE(run("ingest --out-dir " + dir.string() + " --storm-csv " +
                (dir / "storm_events.csv").string() + " --cpi-csv " +
                (dir / "cpi.csv").string() +
                " --start-year 1996 --end-year 2018") == 0);

    // a two-group partition of the 50 types
    const fs::path groups = dir / "groups.csv";
    {
        std::ofstream out(groups);
        const std::vector<std::string> flood_family = {"Flood", "Flash Flood",
                                                       "Coastal Flood", "Lakeshore Flood"};
        for (const auto& type : ndi::canonical_event_types()) {
            const bool in_family =
                std::find(flood_family.begin(), flood_family.end(), type) !=
                flood_family.end();
            out << (in_family ? "flood_family," : "other,") << "\"" << type << "\"\n";
        }
    }
    REQUIRE(run("budget --out-dir " + dir.string() +
                " --measures std,etl --levels 0.90,0.95 --groups " + groups.string() +
                " --rolling true --window 400") == 0);

    std::istringstream report(slurp(dir / "risk_budget.csv"));
    std::string header;
    std::getline(report, header);
    CHECK(header ==
          "event_type,mctr_etl90,pctr_etl90,mctr_etl95,pctr_etl95,mctr_std,pctr_std");

    // group sums partition each measure's total
    std::istringstream groups_csv(slurp(dir / "risk_budget_groups.csv"));
    std::getline(groups_csv, header);
    std::map<std::string, double> pctr_sum;
    ndi::CsvReader reader(groups_csv);
    std::vector<std::string> row;
    while (reader.next_row(row)) {
        pctr_sum[row[1]] += ndi::parse_double(row[3], "group pctr");
    }
    REQUIRE(pctr_sum.size() == 3);
    for (const auto& [measure, total] : pctr_sum) {
        CHECK_MESSAGE(std::abs(total - 100.0) < 1e-8, measure);
    }

    // rolling long-format output exists and has the window span
    std::istringstream rolling(slurp(dir / "risk_budget_rolling.csv"));
    int rolling_rows = 0;
    for (std::string line; std::getline(rolling, line);) ++rolling_rows;
    // 551 returns, window 400 -> 152 windows x 3 measures x 50 types + header
    CHECK(rolling_rows == 152 * 3 * 50 + 1);
}
