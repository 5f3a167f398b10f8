#include "ndi/synth.hpp"

#include "ndi/csvio.hpp"
#include "ndi/ingest.hpp"
#include "ndi/rng.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

namespace ndi {

namespace {

int sample_poisson(RngStream& rng, double lambda) {
    // Knuth's product method; rates here are small.
    const double limit = std::exp(-lambda);
    int k = 0;
    double product = rng.next_uniform();
    while (product > limit) {
        ++k;
        product *= rng.next_uniform();
    }
    return k;
}

std::string format_damage(double dollars) {
    char buf[32];
    if (dollars >= 1e9) {
        std::snprintf(buf, sizeof(buf), "%.2fB", dollars / 1e9);
    } else if (dollars >= 1e6) {
        std::snprintf(buf, sizeof(buf), "%.2fM", dollars / 1e6);
    } else {
        std::snprintf(buf, sizeof(buf), "%.2fK", dollars / 1e3);
    }
    return buf;
}

}  // namespace

void write_synth_storm_csv(std::ostream& out, const SynthOptions& options) {
    const auto& types = canonical_event_types();
    write_csv_row(out, {"BEGIN_YEARMONTH", "BEGIN_DAY", "EVENT_TYPE", "DAMAGE_PROPERTY",
                        "STATE"});

    // Per-type intensity and severity spread over two orders of magnitude,
    // derived from the type index so the panel has stable heavy hitters.
    for (int period = 0; period < options.window.period_count(); ++period) {
        RngStream rng = RngStream::child(options.seed, 1000003ULL * period);
        const int year = options.window.start_year + period / 24;
        const int month = (period % 24) / 2 + 1;
        const bool second_half = period % 2 == 1;
        for (std::size_t t = 0; t < types.size(); ++t) {
            const double weight = 0.25 + 1.5 * ((t * 7919) % 100) / 100.0;
            const double rate = options.events_per_period * weight;
            const int events = sample_poisson(rng, rate);
            for (int e = 0; e < events; ++e) {
                const int day_lo = second_half ? 16 : 1;
                const int day_hi = second_half ? days_in_month(year, month) : 15;
                const int day =
                    day_lo + static_cast<int>(rng.next_uniform() * (day_hi - day_lo + 1));
                const double severity = std::log(3e4) + 4.5 * ((t * 104729) % 50) / 50.0;
                const double dollars = std::exp(severity + 1.1 * rng.next_normal());
                std::vector<std::string> row;
                char ym[8];
                std::snprintf(ym, sizeof(ym), "%04d%02d", year, month);
                row.push_back(ym);
                row.push_back(std::to_string(day));
                row.push_back(types[t]);
                row.push_back(format_damage(dollars));
                row.push_back("TX");
                write_csv_row(out, row);
            }
        }
    }
}

void write_synth_cpi_csv(std::ostream& out, const SynthOptions& options) {
    write_csv_row(out, {"year", "deflator_to_base"});
    for (int year = options.window.start_year; year <= options.base_year; ++year) {
        const double deflator = std::pow(1.021, options.base_year - year);
        write_csv_row(out, {std::to_string(year), format_double(deflator)});
    }
}

void write_synth_factor_csv(std::ostream& out, const SynthOptions& options,
                            const std::string& kind) {
    const bool temp = kind == "max_temp";
    write_csv_row(out, {"month", temp ? "max_temp" : "pdsi"});
    RngStream rng = RngStream::child(options.seed, temp ? 0x7e3dULL : 0x9d51ULL);
    double state = 0.0;
    for (int m = 0; m < options.window.month_count(); ++m) {
        state = 0.6 * state + 0.8 * rng.next_normal();
        double value;
        if (temp) {
            const double seasonal = 85.0 + 20.0 * std::sin(2.0 * M_PI * (m % 12) / 12.0);
            value = seasonal + state;
        } else {
            value = 4.0 * std::tanh(0.4 * state);
        }
        write_csv_row(out, {month_label(options.window, m), format_double(value)});
    }
}

}  // namespace ndi
