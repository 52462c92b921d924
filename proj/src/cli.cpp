#include "stancekit/cli.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "stancekit/decoding.hpp"
#include "stancekit/error.hpp"
#include "stancekit/ingest.hpp"
#include "stancekit/metrics.hpp"
#include "stancekit/persona.hpp"
#include "stancekit/samples.hpp"
#include "stancekit/split.hpp"

namespace stancekit {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
    return f;
}

std::string fmt(double x, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

struct Options {
    std::string corpus;
    bool allow_missing_authors = false;
    bool json = false;

    double val = 0.05;
    double test = 0.05;
    std::uint64_t seed = 0;
    std::string out;
    std::string split;
    std::size_t threshold = default_bucket_threshold;

    std::string task = "generation";
    std::string strategy = "random";
    bool implicit = false;
    std::size_t cap = default_persona_cap;
    std::string train_out;
    std::string infer_out;
    std::string infer_split = "test";
    double k1 = 1.5;
    double b = 0.75;

    std::string samples;
    std::string train_samples;
    std::size_t order = 3;
    double top_p = default_top_p;
    std::size_t max_length = 40;
    double copy_weight = 0.1;

    std::string which = "test";

    std::string generations;
    std::string name = "system";
    bool self_reference = false;
    std::string json_out;
};

IngestOptions ingest_options(const Options& o) {
    IngestOptions io;
    io.synthesize_missing_authors = o.allow_missing_authors;
    return io;
}

Split require_split(const std::string& s) {
    auto v = parse_split(s);
    if (!v) throw Error(ErrorKind::ConfigConflict, "unknown split " + s);
    return *v;
}

int cmd_validate(const Options& o, std::ostream& out) {
    const Corpus c = load_corpus(o.corpus, ingest_options(o));
    out << "ok: " << c.discussions().size() << " discussions, " << c.claim_count() << " claims, "
        << c.author_index().size() << " authors\n";
    return exit_ok;
}

int cmd_stats(const Options& o, std::ostream& out) {
    const Corpus c = load_corpus(o.corpus, ingest_options(o));
    const CorpusStats s = corpus_stats(c);
    if (o.json) {
        nlohmann::ordered_json j;
        j["discussion_count"] = s.discussion_count;
        j["unique_claim_count"] = s.unique_claim_count;
        j["claims_per_discussion_mean"] = s.claims_per_discussion_mean;
        j["claims_per_discussion_std"] = s.claims_per_discussion_std;
        j["max_depth_per_discussion_mean"] = s.max_depth_per_discussion_mean;
        j["max_depth_per_discussion_std"] = s.max_depth_per_discussion_std;
        j["author_count"] = s.author_count;
        j["claims_per_author_min"] = s.claims_per_author_min;
        j["claims_per_author_max"] = s.claims_per_author_max;
        j["std_kind"] = "population";
        out << j.dump(2) << '\n';
        return exit_ok;
    }
    out << "discussion_count=" << s.discussion_count << '\n'
        << "unique_claim_count=" << s.unique_claim_count << '\n'
        << "claims_per_discussion_mean=" << fmt(s.claims_per_discussion_mean) << '\n'
        << "claims_per_discussion_std=" << fmt(s.claims_per_discussion_std) << '\n'
        << "max_depth_per_discussion_mean=" << fmt(s.max_depth_per_discussion_mean) << '\n'
        << "max_depth_per_discussion_std=" << fmt(s.max_depth_per_discussion_std) << '\n'
        << "author_count=" << s.author_count << '\n'
        << "claims_per_author_min=" << s.claims_per_author_min << '\n'
        << "claims_per_author_max=" << s.claims_per_author_max << '\n'
        << "# std values are population standard deviations (divide by N)\n";
    return exit_ok;
}

int cmd_split(const Options& o, std::ostream& out) {
    const Corpus c = load_corpus(o.corpus, ingest_options(o));
    const SplitAssignment s = stratified_split(c, o.val, o.test, o.seed);
    auto f = open_out(o.out);
    write_split(f, s);
    out << "train=" << s.count(Split::train) << " validation=" << s.count(Split::validation)
        << " test=" << s.count(Split::test) << '\n';
    return exit_ok;
}

int cmd_buckets(const Options& o, std::ostream& out) {
    const Corpus c = load_corpus(o.corpus, ingest_options(o));
    const SplitAssignment s = load_split(o.split);
    const BucketTable t = bucket_table(c, s, o.threshold);
    out << "Claims grouped by explicit persona size (persona = other train claims by the author)\n";
    out << format_bucket_table(t);
    return exit_ok;
}

int cmd_export(const Options& o, std::ostream& out) {
    ExportConfig cfg;
    auto task = parse_task(o.task);
    auto strategy = parse_strategy(o.strategy);
    if (!task) throw Error(ErrorKind::ConfigConflict, "unknown task " + o.task);
    if (!strategy) throw Error(ErrorKind::ConfigConflict, "unknown strategy " + o.strategy);
    cfg.task = *task;
    cfg.strategy = *strategy;
    cfg.kind = o.implicit ? PersonaKind::implicit_summary : PersonaKind::explicit_claims;
    cfg.cap = o.cap;
    cfg.threshold = o.threshold;
    cfg.seed = o.seed;
    cfg.bm25 = {o.k1, o.b};
    validate(cfg);
    if (o.train_out.empty() && o.infer_out.empty()) {
        throw Error(ErrorKind::ConfigConflict, "export needs --train-out and/or --infer-out");
    }
    if (cfg.strategy == PersonaStrategy::hybrid && (o.train_out.empty() || o.infer_out.empty())) {
        throw Error(ErrorKind::ConfigConflict,
                    "hybrid trains on random personas and infers with dynamic ones; "
                    "it needs both --train-out and --infer-out");
    }
    const Split infer_split = require_split(o.infer_split);
    if (infer_split == Split::train) {
        throw Error(ErrorKind::ConfigConflict, "--infer-split must be validation or test");
    }

    const Corpus c = load_corpus(o.corpus, ingest_options(o));
    const SplitAssignment s = load_split(o.split);
    auto run = [&](Split which, const std::string& path) {
        cfg.split = which;
        const auto records = export_dataset(c, s, cfg);
        auto f = open_out(path);
        write_export(f, cfg, records);
        out << to_string(which) << ": " << records.size() << " records ("
            << to_string(effective_strategy(cfg.strategy, which)) << ") -> " << path << '\n';
    };
    if (!o.train_out.empty()) run(Split::train, o.train_out);
    if (!o.infer_out.empty()) run(infer_split, o.infer_out);
    return exit_ok;
}

int cmd_generate(const Options& o, std::ostream& out) {
    const ExportFile train = load_export(o.train_samples);
    const ExportFile infer = load_export(o.samples);
    std::vector<std::string> texts;
    for (const auto& r : train.records) texts.push_back(r.target);
    const NgramModel model = NgramModel::train(texts, o.order);
    DecodingConfig dc;
    dc.top_p = o.top_p;
    dc.max_length = o.max_length;
    dc.copy_weight = o.copy_weight;
    std::vector<Generation> gens;
    for (const auto& r : infer.records) {
        dc.seed = derive_seed(o.seed, r.metadata.claim_id);
        gens.push_back({r.metadata.claim_id, model.generate(r.source, dc)});
    }
    auto f = open_out(o.out);
    write_generations(f, gens);
    out << "generated " << gens.size() << " texts with a " << o.order
        << "-gram model (top_p=" << o.top_p << ") -> " << o.out << '\n';
    return exit_ok;
}

int cmd_classify(const Options& o, std::ostream& out) {
    const Corpus c = load_corpus(o.corpus, ingest_options(o));
    const SplitAssignment s = load_split(o.split);
    const BaselineEvaluation ev = evaluate_stance_baselines(c, s, require_split(o.which));
    if (!o.out.empty()) {
        auto f = open_out(o.out);
        for (const auto& p : ev.predictions) {
            f << nlohmann::ordered_json{{"claim_id", p.claim_id},
                                        {"gold", to_string(p.gold)},
                                        {"persona", to_string(p.persona)},
                                        {"majority", to_string(p.majority)}}
                     .dump()
              << '\n';
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-10s %8s %8s %8s %8s\n", "model", "ACC", "F1-PRO", "F1-CON",
                  "MACRO-F1");
    out << "split=" << o.which << " samples=" << ev.persona_scores.count
        << " prior=" << to_string(ev.prior) << '\n'
        << buf;
    for (const auto& [name, sc] : {std::pair<const char*, BinaryScores>{"majority", ev.majority_scores},
                                   {"persona", ev.persona_scores}}) {
        std::snprintf(buf, sizeof buf, "%-10s %8.2f %8.2f %8.2f %8.2f\n", name, sc.accuracy,
                      sc.f1_pro, sc.f1_con, sc.macro_f1);
        out << buf;
    }
    return exit_ok;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
    const ExportFile samples = load_export(o.samples);
    std::map<std::string, std::string> hyps;
    if (o.self_reference) {
        for (const auto& r : samples.records) hyps[r.metadata.claim_id] = r.target;
    } else {
        if (o.generations.empty()) {
            throw Error(ErrorKind::ConfigConflict,
                        "evaluate needs --generations or --references-as-hypotheses");
        }
        for (auto& g : load_generations(o.generations)) hyps[g.claim_id] = std::move(g.text);
    }
    std::vector<EvalPair> pairs;
    for (const auto& r : samples.records) {
        auto it = hyps.find(r.metadata.claim_id);
        if (it == hyps.end()) {
            throw Error(ErrorKind::MalformedRecord,
                        "no generation for claim " + r.metadata.claim_id);
        }
        pairs.push_back({r.source, it->second, r.target});
    }
    if (hyps.size() != pairs.size()) {
        throw Error(ErrorKind::MalformedRecord, "generations name claims absent from the samples");
    }
    const MetricReport report = evaluate_system(pairs);
    out << format_report_table({{o.name, report}});
    if (!o.json_out.empty()) {
        auto f = open_out(o.json_out);
        f << report_to_json(report, o.name) << '\n';
    }
    return exit_ok;
}

int cmd_zipf(const Options& o, std::ostream& out) {
    std::vector<std::string> texts;
    if (!o.generations.empty()) {
        for (auto& g : load_generations(o.generations)) texts.push_back(std::move(g.text));
    } else if (!o.samples.empty()) {
        for (auto& r : load_export(o.samples).records) texts.push_back(std::move(r.target));
    } else {
        throw Error(ErrorKind::ConfigConflict, "zipf needs --generations or --samples");
    }
    const ZipfCurve curve = zipf_cdf(texts);
    auto f = open_out(o.out);
    write_zipf_csv(f, curve);
    out << curve.frequencies.size() << " distinct tokens, " << curve.total_tokens
        << " total -> " << o.out << '\n';
    return exit_ok;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Persona-conditioned argument corpus toolkit"};
    app.require_subcommand(1);
    Options o;

    auto corpus_flags = [&](CLI::App* cmd) {
        cmd->add_option("--corpus", o.corpus, "Corpus file (one claim record per line)")
            ->required()
            ->check(CLI::ExistingFile);
        cmd->add_flag("--allow-missing-authors", o.allow_missing_authors,
                      "Give claims without author_id a fresh synthetic author");
    };
    auto split_flag = [&](CLI::App* cmd) {
        cmd->add_option("--split", o.split, "Split assignment file")->required()->check(CLI::ExistingFile);
    };

    auto* validate_cmd = app.add_subcommand("validate", "Parse and validate a corpus");
    corpus_flags(validate_cmd);

    auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics");
    corpus_flags(stats_cmd);
    stats_cmd->add_flag("--json", o.json, "Emit JSON");

    auto* split_cmd = app.add_subcommand("split", "Stratified train/validation/test split");
    corpus_flags(split_cmd);
    split_cmd->add_option("--val", o.val, "Validation fraction")->capture_default_str();
    split_cmd->add_option("--test", o.test, "Test fraction")->capture_default_str();
    split_cmd->add_option("--seed", o.seed, "Random seed")->required();
    split_cmd->add_option("--out", o.out, "Output split file")->required();

    auto* buckets_cmd = app.add_subcommand("buckets", "Claims per split grouped by persona size");
    corpus_flags(buckets_cmd);
    split_flag(buckets_cmd);
    buckets_cmd->add_option("--threshold,-T", o.threshold, "Big-persona threshold")->capture_default_str();

    auto* export_cmd = app.add_subcommand("export", "Export persona-conditioned samples");
    corpus_flags(export_cmd);
    split_flag(export_cmd);
    export_cmd->add_option("--task", o.task, "generation | classification")->capture_default_str();
    export_cmd->add_option("--strategy", o.strategy, "none | random | dynamic | negative | hybrid")
        ->capture_default_str();
    export_cmd->add_flag("--implicit", o.implicit, "Use implicit (thesis + pro/con counts) personas");
    export_cmd->add_option("--cap", o.cap, "Maximum persona entries")->capture_default_str();
    export_cmd->add_option("--threshold,-T", o.threshold, "Big-persona threshold")->capture_default_str();
    export_cmd->add_option("--seed", o.seed, "Random seed")->required();
    export_cmd->add_option("--train-out", o.train_out, "Train split output");
    export_cmd->add_option("--infer-out", o.infer_out, "Inference split output");
    export_cmd->add_option("--infer-split", o.infer_split, "validation | test")->capture_default_str();
    export_cmd->add_option("--k1", o.k1, "BM25 k1")->capture_default_str();
    export_cmd->add_option("--b", o.b, "BM25 b")->capture_default_str();

    auto* generate_cmd = app.add_subcommand("generate", "Generate claims with the n-gram reference model");
    generate_cmd->add_option("--train-samples", o.train_samples, "Train export (model training targets)")
        ->required()
        ->check(CLI::ExistingFile);
    generate_cmd->add_option("--samples", o.samples, "Export to generate for")
        ->required()
        ->check(CLI::ExistingFile);
    generate_cmd->add_option("--order", o.order, "n-gram order")->capture_default_str();
    generate_cmd->add_option("--top-p", o.top_p, "Nucleus mass")->capture_default_str();
    generate_cmd->add_option("--max-length", o.max_length, "Maximum tokens")->capture_default_str();
    generate_cmd->add_option("--copy-weight", o.copy_weight, "Source copy mixture weight")
        ->capture_default_str();
    generate_cmd->add_option("--seed", o.seed, "Random seed")->required();
    generate_cmd->add_option("--out", o.out, "Generation output")->required();

    auto* classify_cmd =
        app.add_subcommand("classify-baseline", "Persona-aware vs majority stance baselines");
    corpus_flags(classify_cmd);
    split_flag(classify_cmd);
    classify_cmd->add_option("--which", o.which, "train | validation | test")->capture_default_str();
    classify_cmd->add_option("--out", o.out, "Per-claim predictions output");

    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score generations against export targets");
    evaluate_cmd->add_option("--samples", o.samples, "Sample export")->required()->check(CLI::ExistingFile);
    evaluate_cmd->add_option("--generations", o.generations, "Generation file")->check(CLI::ExistingFile);
    evaluate_cmd->add_flag("--references-as-hypotheses", o.self_reference,
                           "Score the targets against themselves");
    evaluate_cmd->add_option("--name", o.name, "System name in the table")->capture_default_str();
    evaluate_cmd->add_option("--json", o.json_out, "Also write the report as JSON");

    auto* zipf_cmd = app.add_subcommand("zipf", "Token frequency CDF as CSV");
    zipf_cmd->add_option("--generations", o.generations, "Generation file")->check(CLI::ExistingFile);
    zipf_cmd->add_option("--samples", o.samples, "Sample export (targets)")->check(CLI::ExistingFile);
    zipf_cmd->add_option("--out", o.out, "CSV output")->required();

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*validate_cmd) return cmd_validate(o, out);
        if (*stats_cmd) return cmd_stats(o, out);
        if (*split_cmd) return cmd_split(o, out);
        if (*buckets_cmd) return cmd_buckets(o, out);
        if (*export_cmd) return cmd_export(o, out);
        if (*generate_cmd) return cmd_generate(o, out);
        if (*classify_cmd) return cmd_classify(o, out);
        if (*evaluate_cmd) return cmd_evaluate(o, out);
        if (*zipf_cmd) return cmd_zipf(o, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    }
    return exit_usage;
}

} // namespace stancekit
