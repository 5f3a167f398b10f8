#pragma once

#include "ndi/periods.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>

namespace ndi {

// Synthetic data in the shapes the pipeline ingests, so the whole chain
// runs without the real NOAA download.
struct SynthOptions {
    StudyWindow window{1996, 2018};
    std::uint64_t seed = 42;
    // Mean number of damaging events per (period, type), thinned per type.
    double events_per_period = 0.6;
    int base_year = 2019;
};

void write_synth_storm_csv(std::ostream& out, const SynthOptions& options);
void write_synth_cpi_csv(std::ostream& out, const SynthOptions& options);
// Monthly stress factor series (level, not differenced), AR(1) with drift
// picked per `kind`: "max_temp" or "pdsi".
void write_synth_factor_csv(std::ostream& out, const SynthOptions& options,
                            const std::string& kind);

}  // namespace ndi
