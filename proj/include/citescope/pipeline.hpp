#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace citescope {

// Flat JSON config for the end-to-end run. Required keys: input, out_dir.
struct PipelineConfig {
    std::string input;
    std::string format = "jsonl";  // jsonl | tsv
    std::string tsv_columns;       // e.g. "id=0,title=1,abstract=2,year=3,references=4"
    std::string tsv_ref_separator = ";";

    std::vector<std::string> filter_phrases;
    std::string filter_mode = "any";  // any | all

    std::uint64_t seed = 42;
    int trials = 10;
    double teleport = 0.15;
    double tol = 1e-12;
    int max_iter = 100000;
    bool reverse_edges = false;

    bool hierarchical = true;
    int max_depth = 3;
    int min_module_size = 8;

    int top_n = 5;
    bool use_stop_list = false;

    std::vector<std::string> timeline_phrases;
    std::vector<std::string> exports = {"graphml", "dot", "json"};

    std::string out_dir;
};

PipelineConfig load_pipeline_config(std::istream& in);
PipelineConfig load_pipeline_config_file(const std::string& path);

struct PipelineResult {
    std::vector<std::string> artifacts;  // file paths written, in order
    std::vector<std::string> stages;     // stage names executed
};

// ingest -> filter -> graph -> lcc -> flow -> cluster -> keywords ->
// summary/timeline -> export, with a manifest recording the parameters.
// A failing stage removes this run's partial outputs and rethrows with the
// stage name. CITESCOPE_SEED, when set, overrides the config seed.
PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace citescope
