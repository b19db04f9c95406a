// citescope command line front end. Exit codes: 0 success, 1 usage error,
// 2 data error, 3 convergence error.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "citescope/analytics.hpp"
#include "citescope/errors.hpp"
#include "citescope/export.hpp"
#include "citescope/flow.hpp"
#include "citescope/graph.hpp"
#include "citescope/hierarchy.hpp"
#include "citescope/keywords.hpp"
#include "citescope/map_equation.hpp"
#include "citescope/pipeline.hpp"

using namespace citescope;

namespace {

Corpus load_corpus(const std::string& path, const std::string& format,
                   const std::string& tsv_columns, const std::string& tsv_sep) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    if (format == "jsonl") return parse_jsonl(in, path);

    TsvColumnMap map;
    std::size_t pos = 0;
    while (pos < tsv_columns.size()) {
        std::size_t comma = tsv_columns.find(',', pos);
        if (comma == std::string::npos) comma = tsv_columns.size();
        const std::string part = tsv_columns.substr(pos, comma - pos);
        const std::size_t eq = part.find('=');
        if (eq == std::string::npos)
            throw UsageError("bad --tsv-columns entry \"" + part + "\"");
        const std::string name = part.substr(0, eq);
        int index = -1;
        try {
            index = std::stoi(part.substr(eq + 1));
        } catch (const std::exception&) {
            throw UsageError("bad column index in \"" + part + "\"");
        }
        if (name == "id") map.id = index;
        else if (name == "title") map.title = index;
        else if (name == "abstract") map.abstract = index;
        else if (name == "year") map.year = index;
        else if (name == "references") map.references = index;
        else throw UsageError("unknown tsv column \"" + name + "\"");
        pos = comma + 1;
    }
    return parse_tsv(in, map, tsv_sep, path);
}

Corpus load_jsonl(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    return parse_jsonl(in, path);
}

CitationGraph load_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path);
    return read_graph_binary(in);
}

PartitionData load_partition(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read " + path);
    return read_partition_json(in);
}

std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw DataError("cannot write " + path);
    return out;
}

// parses "NAME=word1&word2" into a phrase class
PhraseClass parse_class_spec(const std::string& spec) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
        throw UsageError("bad --class \"" + spec + "\", expected NAME=word1&word2");
    PhraseClass cls;
    cls.name = spec.substr(0, eq);
    std::size_t pos = eq + 1;
    while (pos <= spec.size()) {
        std::size_t amp = spec.find('&', pos);
        if (amp == std::string::npos) amp = spec.size();
        const std::string word = spec.substr(pos, amp - pos);
        if (!word.empty()) cls.phrases.push_back(word);
        pos = amp + 1;
    }
    if (cls.phrases.empty()) throw UsageError("class \"" + cls.name + "\" has no phrases");
    return cls;
}

std::string format_pct(double pct) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(1) << pct;
    return s.str();
}

int run_cli(int argc, char** argv) {
    CLI::App app{"citescope: citation-network subject mapping"};
    app.require_subcommand(1);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "parse and filter a bibliographic dump");
    std::string in_path, out_path, format = "jsonl", tsv_columns, tsv_sep = ";";
    std::vector<std::string> phrases;
    std::string filter_mode = "any";
    ingest->add_option("--in", in_path, "input file")->required();
    ingest->add_option("--format", format, "jsonl|tsv")->check(CLI::IsMember({"jsonl", "tsv"}));
    ingest->add_option("--tsv-columns", tsv_columns, "name=index, comma separated");
    ingest->add_option("--tsv-ref-separator", tsv_sep, "reference id separator");
    ingest->add_option("--filter-phrase", phrases, "abstract phrase (repeatable)");
    ingest->add_option("--filter-mode", filter_mode, "any|all")->check(CLI::IsMember({"any", "all"}));
    ingest->add_option("--out", out_path, "output corpus.jsonl")->required();
    ingest->callback([&] {
        Corpus corpus = load_corpus(in_path, format, tsv_columns, tsv_sep);
        if (!phrases.empty()) {
            PhraseFilter filter(phrases, filter_mode == "all" ? FilterMode::AllOf : FilterMode::AnyOf);
            corpus = filter_by_phrases(corpus, filter);
        }
        auto out = open_out(out_path);
        write_jsonl(corpus, out);
        std::cout << "papers: " << corpus.size() << "\n";
    });

    // graph
    auto* graph_cmd = app.add_subcommand("graph", "build the citation graph");
    std::string graph_in, graph_out;
    bool lcc = false;
    graph_cmd->add_option("--in", graph_in, "corpus.jsonl")->required();
    graph_cmd->add_flag("--lcc", lcc, "keep only the largest weakly connected component");
    graph_cmd->add_option("--out", graph_out, "output graph.bin")->required();
    graph_cmd->callback([&] {
        CitationGraph graph = build_graph(load_jsonl(graph_in));
        if (lcc) graph = largest_weak_component(graph);
        auto out = open_out(graph_out, true);
        write_graph_binary(graph, out);
        std::cout << "nodes: " << graph.node_count() << " edges: " << graph.edge_count() << "\n";
    });

    // cluster
    auto* cluster = app.add_subcommand("cluster", "map-equation community detection");
    std::string cluster_graph, cluster_out;
    std::uint64_t seed = 42;
    int trials = 10, max_depth = 3, min_module_size = 8, max_iter = 100000;
    double teleport = 0.15, tol = 1e-12;
    bool hierarchical = false, reverse_edges = false;
    cluster->add_option("--graph", cluster_graph, "graph.bin")->required();
    cluster->add_option("--seed", seed, "optimizer seed");
    cluster->add_option("--trials", trials, "optimizer restarts");
    cluster->add_flag("--hierarchical", hierarchical, "multi-scale partition");
    cluster->add_option("--max-depth", max_depth, "hierarchy depth limit");
    cluster->add_option("--min-module-size", min_module_size, "do not refine smaller modules");
    cluster->add_option("--teleport", teleport, "teleport probability");
    cluster->add_option("--tol", tol, "power-iteration tolerance");
    cluster->add_option("--max-iter", max_iter, "power-iteration cap");
    cluster->add_flag("--reverse-edges", reverse_edges, "flow along cited->citing instead");
    cluster->add_option("--out", cluster_out, "output partition.json")->required();
    cluster->callback([&] {
        CitationGraph graph = load_graph(cluster_graph);
        if (reverse_edges) graph = graph.reversed();
        FlowOptions fopts;
        fopts.teleport_prob = teleport;
        fopts.tol = tol;
        fopts.max_iter = max_iter;
        FlowDistribution flow = visit_rates(graph, fopts);

        HierarchicalPartition hierarchy;
        if (hierarchical) {
            HierarchicalOptions opts;
            opts.seed = seed;
            opts.trials = trials;
            opts.max_depth = max_depth;
            opts.min_module_size = static_cast<std::size_t>(min_module_size);
            hierarchy = optimize_hierarchical(graph, flow, opts);
        } else {
            hierarchy = as_hierarchy(graph, optimize_two_level(graph, flow, seed, trials));
        }
        PartitionData data = to_partition_data(hierarchy);
        auto out = open_out(cluster_out);
        write_partition_json(data, out);
        std::cout << "levels: " << data.levels << " codelength: "
                  << (data.codelengths.empty() ? 0.0 : data.codelengths[0]) << " bits\n";
    });

    // keywords
    auto* keywords_cmd = app.add_subcommand("keywords", "rank cluster keywords");
    std::string kw_corpus, kw_partition, kw_out, kw_level = "1";
    int kw_n = 5;
    bool kw_stop = false, kw_strict = false, kw_sentences = false;
    keywords_cmd->add_option("--corpus", kw_corpus, "corpus.jsonl")->required();
    keywords_cmd->add_option("--partition", kw_partition, "partition.json")->required();
    keywords_cmd->add_option("--level", kw_level, "1|2|...|leaf");
    keywords_cmd->add_option("-N,--top", kw_n, "keywords per module");
    keywords_cmd->add_flag("--stop-list", kw_stop, "drop common function words");
    keywords_cmd->add_flag("--sentence-bounds", kw_sentences, "n-grams stay inside sentences");
    keywords_cmd->add_flag("--strict-node-normalization", kw_strict,
                           "normalize out-cluster frequencies by paper count");
    keywords_cmd->add_option("--out", kw_out, "output keywords.json")->required();
    keywords_cmd->callback([&] {
        Corpus corpus = load_jsonl(kw_corpus);
        PartitionData partition = load_partition(kw_partition);
        std::vector<std::string> ids;
        for (const auto& [id, path] : partition.paths) ids.push_back(id);
        Corpus universe = subset_corpus(corpus, ids);

        int level = 0;
        if (kw_level != "leaf") {
            try {
                level = std::stoi(kw_level);
            } catch (const std::exception&) {
                throw UsageError("--level must be a positive number or \"leaf\"");
            }
            if (level < 1) throw UsageError("--level must be a positive number or \"leaf\"");
        }
        KeywordConfig config;
        config.top_n = kw_n;
        config.use_stop_list = kw_stop;
        config.block_sentence_boundaries = kw_sentences;
        config.strict_node_count_normalization = kw_strict;
        KeywordScorer scorer(universe, config);
        auto clusters = clusters_at_level(partition, universe, level);
        auto keywords = keywords_per_module(scorer, clusters, kw_n);
        auto out = open_out(kw_out);
        write_keywords_json(keywords, out);
        std::cout << "modules: " << keywords.size() << "\n";
    });

    // stats
    auto* stats = app.add_subcommand("stats", "corpus statistics");
    stats->require_subcommand(1);
    std::string st_corpus, st_partition, st_module;
    std::vector<std::string> st_contain, st_not_contain, st_class_specs;
    std::size_t st_top = 9;

    auto* containment = stats->add_subcommand("containment", "word-presence percentage");
    containment->add_option("--corpus", st_corpus, "corpus.jsonl")->required();
    containment->add_option("--partition", st_partition, "partition.json (for --module)");
    containment->add_option("--module", st_module, "module path key, e.g. 0 or 0/2");
    containment->add_option("--contain", st_contain, "word that must appear (repeatable)");
    containment->add_option("--not-contain", st_not_contain, "word that must not appear");
    containment->callback([&] {
        Corpus corpus = load_jsonl(st_corpus);
        ContainmentQuery query{st_contain, st_not_contain};
        double pct = 0.0;
        if (st_module.empty()) {
            pct = containment_stats(corpus, query);
        } else {
            if (st_partition.empty())
                throw UsageError("--module needs --partition");
            PartitionData partition = load_partition(st_partition);
            std::vector<std::uint32_t> scope;
            for (const auto& [id, path] : partition.paths) {
                if (module_key(path).rfind(st_module, 0) != 0) continue;
                if (module_key(path) != st_module &&
                    (module_key(path).size() <= st_module.size() ||
                     module_key(path)[st_module.size()] != '/'))
                    continue;
                const std::size_t i = corpus.index_of(id);
                if (i == Corpus::npos)
                    throw DataError("partition paper \"" + id + "\" missing from corpus");
                scope.push_back(static_cast<std::uint32_t>(i));
            }
            pct = containment_stats(corpus, scope, query);
        }
        std::cout << format_pct(pct) << "%\n";
    });

    auto* shares = stats->add_subcommand("shares", "phrase-class shares");
    shares->add_option("--corpus", st_corpus, "corpus.jsonl")->required();
    shares->add_option("--class", st_class_specs,
                       "NAME=word1&word2, first matching class wins (repeatable)");
    shares->callback([&] {
        Corpus corpus = load_jsonl(st_corpus);
        std::vector<PhraseClass> classes;
        if (st_class_specs.empty()) {
            classes = {{"CE-MS", {"mass", "electrophoresis"}},
                       {"CE", {"electrophoresis"}},
                       {"MS", {"mass"}}};
        } else {
            for (const std::string& spec : st_class_specs) classes.push_back(parse_class_spec(spec));
        }
        ClassShares result = class_shares(corpus, classes);
        for (const auto& [name, pct] : result.shares)
            std::cout << name << ": " << format_pct(pct) << "%\n";
        std::cout << "unclassified: " << format_pct(result.unclassified) << "%\n";
    });

    auto* summary = stats->add_subcommand("summary", "level-1 cluster sizes and shares");
    summary->add_option("--partition", st_partition, "partition.json")->required();
    summary->add_option("--top", st_top, "modules named individually");
    summary->callback([&] {
        PartitionData partition = load_partition(st_partition);
        ClusterSummary s = cluster_summary(partition, st_top);
        for (const ClusterShare& c : s.named)
            std::cout << "module " << c.module << ": " << c.size << " papers ("
                      << format_pct(c.share) << "%)\n";
        if (s.others_size > 0)
            std::cout << "others: " << s.others_size << " papers (" << format_pct(s.others_share)
                      << "%)\n";
    });

    // timeline
    auto* timeline_cmd = app.add_subcommand("timeline", "papers per key-phrase per year");
    std::string tl_corpus, tl_out;
    std::vector<std::string> tl_phrases;
    timeline_cmd->add_option("--corpus", tl_corpus, "corpus.jsonl")->required();
    timeline_cmd->add_option("--phrase", tl_phrases, "key-phrase (repeatable)")->required();
    timeline_cmd->add_option("--out", tl_out, "output timeline.csv")->required();
    timeline_cmd->callback([&] {
        Corpus corpus = load_jsonl(tl_corpus);
        Timeline tl = timeline(corpus, tl_phrases);
        auto out = open_out(tl_out);
        write_timeline_csv(tl, out);
    });

    // paper
    auto* paper_cmd = app.add_subcommand("paper", "multi-scale context of one paper");
    std::string pc_corpus, pc_partition, pc_id, pc_out;
    int pc_n = 5;
    paper_cmd->add_option("--corpus", pc_corpus, "corpus.jsonl")->required();
    paper_cmd->add_option("--partition", pc_partition, "partition.json")->required();
    paper_cmd->add_option("--id", pc_id, "paper id")->required();
    paper_cmd->add_option("-N,--top", pc_n, "keywords per level");
    paper_cmd->add_option("--out", pc_out, "output context.json");
    paper_cmd->callback([&] {
        Corpus corpus = load_jsonl(pc_corpus);
        PartitionData partition = load_partition(pc_partition);
        std::vector<std::string> ids;
        for (const auto& [id, path] : partition.paths) ids.push_back(id);
        Corpus universe = subset_corpus(corpus, ids);
        KeywordScorer scorer(universe);
        auto context = paper_context(pc_id, partition, scorer, pc_n);

        nlohmann::ordered_json doc = nlohmann::ordered_json::array();
        for (const LevelContext& ctx : context) {
            nlohmann::ordered_json level;
            level["level"] = ctx.level;
            level["module"] = ctx.module;
            level["size"] = ctx.module_size;
            nlohmann::ordered_json kws = nlohmann::ordered_json::array();
            for (const KeywordScore& k : ctx.keywords) {
                nlohmann::ordered_json kw;
                kw["ngram"] = k.ngram;
                kw["f_in"] = k.f_in;
                kw["f_out"] = k.f_out;
                kw["importance"] = k.importance;
                kws.push_back(std::move(kw));
            }
            level["keywords"] = std::move(kws);
            doc.push_back(std::move(level));
            std::cout << "level " << ctx.level << " module " << ctx.module << " ("
                      << ctx.module_size << " papers):";
            for (const KeywordScore& k : ctx.keywords) std::cout << " '" << k.ngram << "'";
            std::cout << "\n";
        }
        if (!pc_out.empty()) {
            auto out = open_out(pc_out);
            out << doc.dump(2) << '\n';
        }
    });

    // export
    auto* export_cmd = app.add_subcommand("export", "serialize graph + partition + keywords");
    std::string ex_graph, ex_partition, ex_keywords, ex_corpus, ex_format = "graphml", ex_out;
    std::vector<std::string> ex_highlight, ex_highlight_not;
    export_cmd->add_option("--graph", ex_graph, "graph.bin")->required();
    export_cmd->add_option("--partition", ex_partition, "partition.json");
    export_cmd->add_option("--keywords", ex_keywords, "keywords.json");
    export_cmd->add_option("--corpus", ex_corpus, "corpus.jsonl (needed for highlighting)");
    export_cmd->add_option("--format", ex_format, "graphml|dot|json");
    export_cmd->add_option("--highlight-contain", ex_highlight, "highlight nodes containing word");
    export_cmd->add_option("--highlight-not-contain", ex_highlight_not,
                           "highlighted nodes must lack word");
    export_cmd->add_option("--out", ex_out, "output file")->required();
    export_cmd->callback([&] {
        CitationGraph graph = load_graph(ex_graph);
        Corpus corpus;
        PartitionData partition;
        ModuleKeywords keywords;

        ExportInputs inputs;
        inputs.graph = &graph;
        if (!ex_partition.empty()) {
            partition = load_partition(ex_partition);
            inputs.partition = &partition;
        }
        if (!ex_keywords.empty()) {
            std::ifstream in(ex_keywords);
            if (!in) throw DataError("cannot read " + ex_keywords);
            keywords = read_keywords_json(in);
            inputs.keywords = &keywords;
        }
        if (!ex_corpus.empty()) {
            corpus = load_jsonl(ex_corpus);
            inputs.corpus = &corpus;
        }
        ExportConfig config;
        config.format = parse_export_format(ex_format);
        config.include_keywords = !ex_keywords.empty();
        if (!ex_highlight.empty() || !ex_highlight_not.empty())
            config.highlight = ContainmentQuery{ex_highlight, ex_highlight_not};
        auto out = open_out(ex_out);
        export_graph(inputs, config, out);
    });

    // run
    auto* run_cmd = app.add_subcommand("run", "full pipeline from a config file");
    std::string run_config;
    run_cmd->add_option("--config", run_config, "pipeline config JSON")->required();
    run_cmd->callback([&] {
        PipelineConfig config = load_pipeline_config_file(run_config);
        PipelineResult result = run_pipeline(config);
        for (const std::string& artifact : result.artifacts) std::cout << artifact << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;  // help is success, anything else is a usage error
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
