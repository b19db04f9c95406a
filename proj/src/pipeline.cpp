#include "citescope/pipeline.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>

#include <json.hpp>

#include "citescope/analytics.hpp"
#include "citescope/errors.hpp"
#include "citescope/export.hpp"
#include "citescope/flow.hpp"
#include "citescope/graph.hpp"
#include "citescope/hierarchy.hpp"
#include "citescope/keywords.hpp"
#include "citescope/map_equation.hpp"

namespace fs = std::filesystem;

namespace citescope {

namespace {

template <typename T>
void read_key(const nlohmann::json& doc, const char* key, T& into) {
    if (doc.contains(key)) into = doc[key].get<T>();
}

const char* kKnownKeys[] = {
    "input",       "format",     "tsv_columns", "tsv_ref_separator", "filter_phrases",
    "filter_mode", "seed",       "trials",      "teleport",          "tol",
    "max_iter",    "reverse_edges", "hierarchical", "max_depth",     "min_module_size",
    "top_n",       "use_stop_list", "timeline_phrases", "exports",   "out_dir",
};

TsvColumnMap parse_tsv_columns(const std::string& spec) {
    TsvColumnMap map;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        std::size_t comma = spec.find(',', pos);
        if (comma == std::string::npos) comma = spec.size();
        const std::string part = spec.substr(pos, comma - pos);
        const std::size_t eq = part.find('=');
        if (eq == std::string::npos)
            throw UsageError("bad tsv_columns entry \"" + part + "\", expected name=index");
        const std::string name = part.substr(0, eq);
        const int index = std::stoi(part.substr(eq + 1));
        if (name == "id") map.id = index;
        else if (name == "title") map.title = index;
        else if (name == "abstract") map.abstract = index;
        else if (name == "year") map.year = index;
        else if (name == "references") map.references = index;
        else throw UsageError("unknown tsv column \"" + name + "\"");
        pos = comma + 1;
    }
    return map;
}

class ArtifactTracker {
public:
    explicit ArtifactTracker(fs::path dir) : dir_(std::move(dir)) {}

    fs::path path(const std::string& name) const { return dir_ / name; }

    std::ofstream open(const std::string& name, bool binary = false) {
        const fs::path p = path(name);
        std::ofstream out(p, binary ? std::ios::binary : std::ios::out);
        if (!out) throw DataError("cannot write " + p.string());
        created_.push_back(p);
        return out;
    }

    void remove_all_created() {
        for (const fs::path& p : created_) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        created_.clear();
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const fs::path& p : created_) out.push_back(p.filename().string());
        return out;
    }

private:
    fs::path dir_;
    std::vector<fs::path> created_;
};

}  // namespace

PipelineConfig load_pipeline_config(std::istream& in) {
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw UsageError("pipeline config is not a JSON object");

    for (const auto& [key, value] : doc.items()) {
        (void)value;
        bool known = false;
        for (const char* k : kKnownKeys)
            if (key == k) { known = true; break; }
        if (!known) throw UsageError("unknown config key \"" + key + "\"");
    }

    PipelineConfig cfg;
    try {
        read_key(doc, "input", cfg.input);
        read_key(doc, "format", cfg.format);
        read_key(doc, "tsv_columns", cfg.tsv_columns);
        read_key(doc, "tsv_ref_separator", cfg.tsv_ref_separator);
        read_key(doc, "filter_phrases", cfg.filter_phrases);
        read_key(doc, "filter_mode", cfg.filter_mode);
        read_key(doc, "seed", cfg.seed);
        read_key(doc, "trials", cfg.trials);
        read_key(doc, "teleport", cfg.teleport);
        read_key(doc, "tol", cfg.tol);
        read_key(doc, "max_iter", cfg.max_iter);
        read_key(doc, "reverse_edges", cfg.reverse_edges);
        read_key(doc, "hierarchical", cfg.hierarchical);
        read_key(doc, "max_depth", cfg.max_depth);
        read_key(doc, "min_module_size", cfg.min_module_size);
        read_key(doc, "top_n", cfg.top_n);
        read_key(doc, "use_stop_list", cfg.use_stop_list);
        read_key(doc, "timeline_phrases", cfg.timeline_phrases);
        read_key(doc, "exports", cfg.exports);
        read_key(doc, "out_dir", cfg.out_dir);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError(std::string("bad config value: ") + e.what());
    }

    if (cfg.input.empty()) throw UsageError("config is missing required key \"input\"");
    if (cfg.out_dir.empty()) throw UsageError("config is missing required key \"out_dir\"");
    if (cfg.format != "jsonl" && cfg.format != "tsv")
        throw UsageError("config format must be \"jsonl\" or \"tsv\"");
    if (cfg.filter_mode != "any" && cfg.filter_mode != "all")
        throw UsageError("config filter_mode must be \"any\" or \"all\"");
    return cfg;
}

PipelineConfig load_pipeline_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    return load_pipeline_config(in);
}

PipelineResult run_pipeline(const PipelineConfig& config) {
    PipelineResult result;
    fs::create_directories(config.out_dir);
    ArtifactTracker tracker(config.out_dir);

    std::uint64_t seed = config.seed;
    if (const char* env = std::getenv("CITESCOPE_SEED")) {
        try {
            seed = std::stoull(env);
        } catch (const std::exception&) {
            throw UsageError("CITESCOPE_SEED is not an integer");
        }
    }

    auto stage = [&](const char* name, auto&& fn) {
        result.stages.push_back(name);
        try {
            fn();
        } catch (const ConvergenceError& e) {
            tracker.remove_all_created();
            throw ConvergenceError(std::string("stage ") + name + ": " + e.what(), e.residual());
        } catch (const UsageError& e) {
            tracker.remove_all_created();
            throw UsageError(std::string("stage ") + name + ": " + e.what());
        } catch (const std::exception& e) {
            tracker.remove_all_created();
            throw DataError(std::string("stage ") + name + ": " + e.what());
        }
    };

    Corpus corpus;
    stage("ingest", [&] {
        std::ifstream in(config.input, std::ios::binary);
        if (!in) throw DataError("cannot read input " + config.input);
        if (config.format == "jsonl") {
            corpus = parse_jsonl(in, config.input);
        } else {
            TsvColumnMap columns = parse_tsv_columns(config.tsv_columns);
            corpus = parse_tsv(in, columns, config.tsv_ref_separator, config.input);
        }
    });

    stage("filter", [&] {
        if (config.filter_phrases.empty()) return;
        PhraseFilter filter(config.filter_phrases,
                            config.filter_mode == "all" ? FilterMode::AllOf : FilterMode::AnyOf);
        corpus = filter_by_phrases(corpus, filter);
    });
    stage("write_corpus", [&] {
        auto out = tracker.open("corpus.jsonl");
        write_jsonl(corpus, out);
    });

    CitationGraph graph;
    stage("graph", [&] { graph = build_graph(corpus); });
    stage("lcc", [&] {
        graph = largest_weak_component(graph);
        if (config.reverse_edges) graph = graph.reversed();
        auto out = tracker.open("graph.bin", true);
        write_graph_binary(graph, out);
    });

    FlowDistribution flow;
    stage("flow", [&] {
        FlowOptions opts;
        opts.teleport_prob = config.teleport;
        opts.tol = config.tol;
        opts.max_iter = config.max_iter;
        flow = visit_rates(graph, opts);
    });

    PartitionData partition;
    stage("cluster", [&] {
        HierarchicalPartition hierarchy;
        if (config.hierarchical) {
            HierarchicalOptions opts;
            opts.seed = seed;
            opts.trials = config.trials;
            opts.max_depth = config.max_depth;
            opts.min_module_size = static_cast<std::size_t>(config.min_module_size);
            hierarchy = optimize_hierarchical(graph, flow, opts);
        } else {
            Partition flat = optimize_two_level(graph, flow, seed, config.trials);
            hierarchy = as_hierarchy(graph, flat);
        }
        partition = to_partition_data(hierarchy);
        auto out = tracker.open("partition.json");
        write_partition_json(partition, out);
    });

    // The keyword universe is the clustered (LCC) paper set.
    Corpus universe;
    std::vector<std::pair<std::string, std::vector<KeywordScore>>> all_keywords;
    stage("keywords", [&] {
        universe = subset_corpus(corpus, graph.ids());
        KeywordConfig kw_config;
        kw_config.top_n = config.top_n;
        kw_config.use_stop_list = config.use_stop_list;
        KeywordScorer scorer(universe, kw_config);

        // every module at every level, keyed by path
        std::map<std::vector<std::uint32_t>, std::vector<std::uint32_t>> modules;
        for (const auto& [id, path] : partition.paths) {
            const std::size_t paper = universe.index_of(id);
            for (std::size_t k = 1; k <= path.size(); ++k) {
                std::vector<std::uint32_t> prefix(path.begin(), path.begin() + static_cast<long>(k));
                modules[prefix].push_back(static_cast<std::uint32_t>(paper));
            }
        }
        for (const auto& [path, papers] : modules) {
            std::vector<KeywordScore> scores;
            try {
                scores = scorer.top_keywords(papers, config.top_n);
            } catch (const DataError&) {
                // unscoreable module: single cluster or no text
            }
            all_keywords.emplace_back(module_key(path), std::move(scores));
        }
        auto out = tracker.open("keywords.json");
        write_keywords_json(all_keywords, out);
    });

    stage("summary", [&] {
        const ClusterSummary summary = cluster_summary(partition);
        nlohmann::ordered_json doc;
        doc["total_papers"] = summary.total;
        nlohmann::ordered_json named = nlohmann::ordered_json::array();
        for (const ClusterShare& s : summary.named) {
            nlohmann::ordered_json entry;
            entry["module"] = s.module;
            entry["size"] = s.size;
            entry["share"] = s.share;
            named.push_back(std::move(entry));
        }
        doc["named"] = std::move(named);
        doc["others_size"] = summary.others_size;
        doc["others_share"] = summary.others_share;
        auto out = tracker.open("summary.json");
        out << doc.dump(2) << '\n';
    });

    stage("timeline", [&] {
        const Timeline tl = timeline(corpus, config.timeline_phrases);
        auto out = tracker.open("timeline.csv");
        write_timeline_csv(tl, out);
    });

    stage("export", [&] {
        ExportInputs inputs;
        inputs.graph = &graph;
        inputs.partition = &partition;
        inputs.keywords = &all_keywords;
        inputs.corpus = &universe;
        for (const std::string& format : config.exports) {
            ExportConfig ex;
            ex.format = parse_export_format(format);
            ex.include_keywords = true;
            const std::string name =
                format == "json" ? "hierarchy.json" : "graph." + format;
            auto out = tracker.open(name);
            export_graph(inputs, ex, out);
        }
    });

    stage("manifest", [&] {
        nlohmann::ordered_json doc;
        nlohmann::ordered_json params;
        params["input"] = config.input;
        params["format"] = config.format;
        params["filter_phrases"] = config.filter_phrases;
        params["filter_mode"] = config.filter_mode;
        params["seed"] = seed;
        params["trials"] = config.trials;
        params["teleport"] = config.teleport;
        params["tol"] = config.tol;
        params["max_iter"] = config.max_iter;
        params["reverse_edges"] = config.reverse_edges;
        params["hierarchical"] = config.hierarchical;
        params["max_depth"] = config.max_depth;
        params["min_module_size"] = config.min_module_size;
        params["top_n"] = config.top_n;
        params["use_stop_list"] = config.use_stop_list;
        params["timeline_phrases"] = config.timeline_phrases;
        params["exports"] = config.exports;
        doc["parameters"] = std::move(params);
        doc["stages"] = result.stages;
        nlohmann::json artifacts = tracker.names();
        artifacts.push_back("manifest.json");
        doc["artifacts"] = artifacts;
        auto out = tracker.open("manifest.json");
        out << doc.dump(2) << '\n';
    });

    result.artifacts = tracker.names();
    return result;
}

}  // namespace citescope
