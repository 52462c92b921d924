#include "stancekit/samples.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "stancekit/error.hpp"
#include "stancekit/rng.hpp"

namespace stancekit {

using nlohmann::ordered_json;

std::string_view to_string(Task t) {
    return t == Task::generation ? "generation" : "classification";
}

std::string_view to_string(PersonaStrategy s) {
    switch (s) {
    case PersonaStrategy::none: return "none";
    case PersonaStrategy::random: return "random";
    case PersonaStrategy::dynamic: return "dynamic";
    case PersonaStrategy::negative: return "negative";
    case PersonaStrategy::hybrid: return "hybrid";
    }
    return "none";
}

std::optional<Task> parse_task(std::string_view s) {
    if (s == "generation") return Task::generation;
    if (s == "classification") return Task::classification;
    return std::nullopt;
}

std::optional<PersonaStrategy> parse_strategy(std::string_view s) {
    for (auto v : {PersonaStrategy::none, PersonaStrategy::random, PersonaStrategy::dynamic,
                   PersonaStrategy::negative, PersonaStrategy::hybrid}) {
        if (s == to_string(v)) return v;
    }
    return std::nullopt;
}

std::string make_source(std::string_view persona_text, std::string_view parent_text) {
    if (persona_text.empty()) return std::string(parent_text);
    std::string out(persona_text);
    out += sep_token;
    out += parent_text;
    return out;
}

namespace {

void check_child(const Claim& parent, const Claim& child) {
    if (!child.parent_id || *child.parent_id != parent.claim_id) {
        throw Error(ErrorKind::NotAChild,
                    child.claim_id + " is not a child of " + parent.claim_id);
    }
}

SampleMetadata base_metadata(const Claim& parent, const Claim& child) {
    SampleMetadata m;
    m.author_id = child.author_id;
    m.claim_id = child.claim_id;
    m.discussion_id = child.discussion_id;
    m.parent_id = parent.claim_id;
    m.stance_label = child.stance;
    return m;
}

} // namespace

GenerationSample make_generation_sample(const Claim& parent, std::string_view persona_text,
                                        const Claim& child) {
    if (child.is_thesis()) {
        throw Error(ErrorKind::NotAChild, child.claim_id + " is a thesis");
    }
    check_child(parent, child);
    return {make_source(persona_text, parent.text), child.text, base_metadata(parent, child)};
}

ClassificationSample make_classification_sample(const Claim& parent, std::string_view persona_text,
                                                const Claim& child) {
    if (child.stance == Stance::thesis) {
        throw Error(ErrorKind::ThesisHasNoStance, child.claim_id);
    }
    check_child(parent, child);
    return {make_source(persona_text, parent.text), std::string(to_string(child.stance)),
            base_metadata(parent, child)};
}

void validate(const ExportConfig& config) {
    if (config.cap < 1) throw Error(ErrorKind::ConfigConflict, "persona cap must be >= 1");
    if (config.threshold < 1) throw Error(ErrorKind::ConfigConflict, "bucket threshold must be >= 1");
    if (config.kind == PersonaKind::implicit_summary && config.strategy != PersonaStrategy::none &&
        config.strategy != PersonaStrategy::random) {
        throw Error(ErrorKind::ConfigConflict,
                    std::string(to_string(config.strategy)) +
                        " selection needs claim texts; implicit personas support none or random");
    }
}

PersonaStrategy effective_strategy(PersonaStrategy strategy, Split split) {
    if (strategy != PersonaStrategy::hybrid) return strategy;
    return split == Split::train ? PersonaStrategy::random : PersonaStrategy::dynamic;
}

std::vector<ExportRecord> export_dataset(const Corpus& corpus, const SplitAssignment& split,
                                         const ExportConfig& config) {
    validate(config);
    check_split_covers(split, corpus);
    const PersonaStrategy strategy = effective_strategy(config.strategy, config.split);
    const bool implicit = config.kind == PersonaKind::implicit_summary;

    std::vector<ExportRecord> records;
    for (const Discussion& d : corpus.discussions()) {
        if (split.of(d.id()) != config.split) continue;
        for (const Claim& child : d.claims()) {
            if (child.is_thesis()) continue;
            const Claim& parent = *d.parent_of(child);
            const PersonaPool pool = explicit_pool(corpus, split, child.author_id, child.claim_id);
            const std::uint64_t seed = derive_seed(config.seed, child.claim_id);

            std::string persona;
            switch (implicit ? PersonaStrategy::none : strategy) {
            case PersonaStrategy::none: break;
            case PersonaStrategy::random:
                persona = serialize_explicit(select_random(child.author_id, pool, config.cap, seed));
                break;
            case PersonaStrategy::dynamic:
                persona = serialize_explicit(
                    select_dynamic(child.author_id, pool, parent.text, config.cap, config.bm25));
                break;
            case PersonaStrategy::negative:
                persona = serialize_explicit(
                    select_negative(child.author_id, pool, parent.text, config.cap, config.bm25));
                break;
            case PersonaStrategy::hybrid: break; // resolved by effective_strategy
            }
            if (implicit && strategy == PersonaStrategy::random) {
                ImplicitPersona full =
                    implicit_persona(corpus, split, child.author_id, child.claim_id);
                if (full.entries.size() > config.cap) {
                    std::vector<std::size_t> order(full.entries.size());
                    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
                    Rng rng(seed);
                    ImplicitPersona capped{full.author_id, {}};
                    for (std::size_t j = 0; j < config.cap; ++j) {
                        const auto pick = j + static_cast<std::size_t>(rng.below(order.size() - j));
                        std::swap(order[j], order[pick]);
                        capped.entries.push_back(full.entries[order[j]]);
                    }
                    full = std::move(capped);
                }
                persona = serialize_implicit(full);
            }

            ExportRecord rec;
            if (config.task == Task::generation) {
                auto s = make_generation_sample(parent, persona, child);
                rec = {std::move(s.source), std::move(s.target), std::move(s.metadata)};
            } else {
                auto s = make_classification_sample(parent, persona, child);
                rec = {std::move(s.source), std::move(s.target), std::move(s.metadata)};
            }
            rec.metadata.strategy = std::string(to_string(strategy));
            rec.metadata.persona_kind = implicit ? "implicit" : "explicit";
            rec.metadata.persona_pool_size = pool.size();
            rec.metadata.bucket = bucket_of(pool.size(), config.threshold);
            rec.metadata.propagated_stance = propagate_stance(d, child.claim_id);
            rec.metadata.split = config.split;
            records.push_back(std::move(rec));
        }
    }
    return records;
}

namespace {

ordered_json header_json(const ExportConfig& config) {
    ordered_json h;
    h["format"] = "stancekit-samples";
    h["version"] = 1;
    h["task"] = to_string(config.task);
    h["split"] = to_string(config.split);
    h["strategy"] = to_string(effective_strategy(config.strategy, config.split));
    h["persona_kind"] = config.kind == PersonaKind::implicit_summary ? "implicit" : "explicit";
    h["cap"] = config.cap;
    h["threshold"] = config.threshold;
    h["seed"] = config.seed;
    return h;
}

} // namespace

void write_export(std::ostream& out, const ExportConfig& config,
                  const std::vector<ExportRecord>& records) {
    out << header_json(config).dump() << '\n';
    for (const ExportRecord& r : records) {
        ordered_json j;
        j["source"] = r.source;
        j["target"] = r.target;
        const SampleMetadata& m = r.metadata;
        j["metadata"] = {{"author_id", m.author_id},
                         {"claim_id", m.claim_id},
                         {"discussion_id", m.discussion_id},
                         {"parent_id", m.parent_id},
                         {"split", to_string(m.split)},
                         {"strategy", m.strategy},
                         {"persona_kind", m.persona_kind},
                         {"persona_bucket", to_string(m.bucket)},
                         {"persona_pool_size", m.persona_pool_size},
                         {"stance_label", to_string(m.stance_label)},
                         {"propagated_stance", to_string(m.propagated_stance)}};
        out << j.dump() << '\n';
    }
}

namespace {

std::string str_field(const nlohmann::json& j, const char* key, std::size_t line) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
        throw Error(ErrorKind::MissingField,
                    std::string(key) + " (line " + std::to_string(line) + ")");
    }
    return it->get<std::string>();
}

nlohmann::json parse_line(const std::string& raw, std::size_t line) {
    try {
        auto j = nlohmann::json::parse(raw);
        if (!j.is_object()) throw Error(ErrorKind::MalformedRecord, "line " + std::to_string(line));
        return j;
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::MalformedRecord, "line " + std::to_string(line) + ": " + e.what());
    }
}

std::optional<PersonaBucket> parse_bucket(std::string_view s) {
    for (auto b : {PersonaBucket::none, PersonaBucket::small, PersonaBucket::big}) {
        if (s == to_string(b)) return b;
    }
    return std::nullopt;
}

} // namespace

ExportFile read_export(std::istream& in) {
    ExportFile out;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (raw.empty()) continue;
        const auto j = parse_line(raw, line);
        if (j.contains("format")) {
            if (j["format"] != "stancekit-samples") {
                throw Error(ErrorKind::MalformedRecord, "not a sample export: " + j["format"].dump());
            }
            for (const auto& [k, v] : j.items()) {
                out.header[k] = v.is_string() ? v.get<std::string>() : v.dump();
            }
            continue;
        }
        ExportRecord r;
        r.source = str_field(j, "source", line);
        r.target = str_field(j, "target", line);
        auto meta = j.find("metadata");
        if (meta == j.end() || !meta->is_object()) {
            throw Error(ErrorKind::MissingField, "metadata (line " + std::to_string(line) + ")");
        }
        SampleMetadata& m = r.metadata;
        m.author_id = str_field(*meta, "author_id", line);
        m.claim_id = str_field(*meta, "claim_id", line);
        m.discussion_id = str_field(*meta, "discussion_id", line);
        m.parent_id = str_field(*meta, "parent_id", line);
        m.strategy = str_field(*meta, "strategy", line);
        m.persona_kind = str_field(*meta, "persona_kind", line);
        auto bucket = parse_bucket(str_field(*meta, "persona_bucket", line));
        auto label = parse_stance(str_field(*meta, "stance_label", line));
        auto propagated = parse_stance(str_field(*meta, "propagated_stance", line));
        auto split = parse_split(str_field(*meta, "split", line));
        if (!bucket || !label || !propagated || !split) {
            throw Error(ErrorKind::MalformedRecord,
                        "line " + std::to_string(line) + ": bad enum value in metadata");
        }
        m.bucket = *bucket;
        m.stance_label = *label;
        m.propagated_stance = *propagated;
        m.split = *split;
        m.persona_pool_size = meta->value("persona_pool_size", std::size_t{0});
        out.records.push_back(std::move(r));
    }
    return out;
}

ExportFile load_export(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open sample file " + path);
    return read_export(in);
}

void write_generations(std::ostream& out, const std::vector<Generation>& generations) {
    out << ordered_json{{"format", "stancekit-generations"}, {"version", 1}}.dump() << '\n';
    for (const auto& g : generations) {
        out << ordered_json{{"claim_id", g.claim_id}, {"text", g.text}}.dump() << '\n';
    }
}

std::vector<Generation> read_generations(std::istream& in) {
    std::vector<Generation> out;
    std::set<std::string> seen;
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (raw.empty()) continue;
        const auto j = parse_line(raw, line);
        if (j.contains("format")) continue;
        Generation g{str_field(j, "claim_id", line), str_field(j, "text", line)};
        if (!seen.insert(g.claim_id).second) {
            throw Error(ErrorKind::MalformedRecord,
                        "line " + std::to_string(line) + ": duplicate claim_id " + g.claim_id);
        }
        out.push_back(std::move(g));
    }
    return out;
}

std::vector<Generation> load_generations(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open generation file " + path);
    return read_generations(in);
}

} // namespace stancekit
