#pragma once

#include "lagnet/correlation.hpp"
#include "lagnet/panel.hpp"
#include "lagnet/synthetic.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace lagnet {

/// Inclusive date range analyzed alongside the full panel.
struct DateSplit {
    std::string name;
    Date from;
    Date to;
};

/// Optional stages; correlation matrices are always produced.
struct StageToggles {
    bool lag_profiles = true;
    bool spectrum = true;
    bool null_ensemble = true;
    bool mode_removal = true;
    bool network = true;
    bool embedding = true;
};

struct PipelineConfig {
    // data source: exactly one of input_path / use_synthetic
    std::string input_path;
    bool use_synthetic = false;
    SyntheticSpec synthetic;
    CalendarPolicy policy;
    bool weekly = false;                     // weekly averaging requires max_lag = 0
    std::vector<DateSplit> splits;           // "full" is always analyzed and reserved

    CorrelationMethod method = CorrelationMethod::pearson;
    int max_lag = 1;
    std::string benchmark;                   // lag-profile reference; empty = first label
    int lag_min = -5;
    int lag_max = 5;
    int null_sims = 100;
    int mode_rounds = 2;
    std::vector<double> thresholds = {0.5, 0.7, 0.9, 1.1}; // positive, ascending
    int threshold_sims = 1000;
    int embed_dim = 2;
    int histogram_bins = 50;
    std::uint64_t master_seed = 1;
    std::string out_dir;
    StageToggles stages;
};

struct ArtifactEntry {
    std::string path; // relative to out_dir
    std::string stage;
    std::string split; // empty for whole-panel artifacts
};

struct PipelineResult {
    std::filesystem::path manifest_path;
    std::vector<ArtifactEntry> artifacts;
};

/// Runs ingest, correlation, and the enabled stages per date split, writing
/// every artifact under config.out_dir plus a manifest listing each file
/// with the parameters and derived stage seeds. Byte-identical for equal
/// configs. A stage failure removes this run's files and rethrows with the
/// stage name attached.
PipelineResult run_pipeline(const PipelineConfig& config);

/// Rows of `panel` with from <= date <= to.
ReturnPanel slice_panel(const ReturnPanel& panel, const Date& from, const Date& to);

} // namespace lagnet
