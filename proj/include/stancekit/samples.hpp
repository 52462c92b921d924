#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "stancekit/corpus.hpp"
#include "stancekit/persona.hpp"
#include "stancekit/split.hpp"

namespace stancekit {

enum class Task { generation, classification };

/// `hybrid` is not a selector: it exports train with random selection and
/// validation/test with dynamic selection.
enum class PersonaStrategy { none, random, dynamic, negative, hybrid };

enum class PersonaKind { explicit_claims, implicit_summary };

std::string_view to_string(Task t);
std::string_view to_string(PersonaStrategy s);
std::optional<Task> parse_task(std::string_view s);
std::optional<PersonaStrategy> parse_strategy(std::string_view s);

struct SampleMetadata {
    std::string author_id;
    std::string claim_id;
    std::string discussion_id;
    std::string parent_id;
    std::string strategy;       // effective selector, "none" without persona
    std::string persona_kind;   // "explicit" or "implicit"
    PersonaBucket bucket = PersonaBucket::none;
    std::size_t persona_pool_size = 0;
    Stance stance_label = Stance::pro;
    Stance propagated_stance = Stance::pro;
    Split split = Split::train;
};

struct GenerationSample {
    std::string source;
    std::string target;
    SampleMetadata metadata;
};

struct ClassificationSample {
    std::string source;
    std::string target; // "pro" or "con"
    SampleMetadata metadata;
};

/// persona + " [SEP] " + parent text, or the parent text alone when the
/// persona is empty.
std::string make_source(std::string_view persona_text, std::string_view parent_text);

/// Throws NotAChild unless child.parent_id == parent.claim_id. Only
/// source/target and the ids in metadata are filled in.
GenerationSample make_generation_sample(const Claim& parent, std::string_view persona_text,
                                        const Claim& child);

/// Target is the child's own label toward its parent. Throws
/// ThesisHasNoStance for a thesis child, NotAChild for a wrong parent.
ClassificationSample make_classification_sample(const Claim& parent, std::string_view persona_text,
                                                const Claim& child);

struct ExportConfig {
    Task task = Task::generation;
    PersonaStrategy strategy = PersonaStrategy::random;
    PersonaKind kind = PersonaKind::explicit_claims;
    std::size_t cap = default_persona_cap;
    std::size_t threshold = default_bucket_threshold;
    std::uint64_t seed = 0;
    Split split = Split::train;
    Bm25Params bm25{};
};

/// Throws ConfigConflict for invalid combinations (implicit personas only
/// combine with none/random; cap and threshold must be >= 1).
void validate(const ExportConfig& config);

/// The selector actually applied for a split under a strategy.
PersonaStrategy effective_strategy(PersonaStrategy strategy, Split split);

/// One record per non-thesis claim of the chosen split, ordered by
/// (discussion_id, claim_id). Each claim's persona pool is the author's
/// train claims minus the claim itself. Random selection is seeded with
/// derive_seed(config.seed, claim_id), so a record never depends on which
/// other records are exported.
struct ExportRecord {
    std::string source;
    std::string target;
    SampleMetadata metadata;
};

std::vector<ExportRecord> export_dataset(const Corpus& corpus, const SplitAssignment& split,
                                         const ExportConfig& config);

/// Header line then one {"source","target","metadata":{...}} object per line.
void write_export(std::ostream& out, const ExportConfig& config,
                  const std::vector<ExportRecord>& records);

struct ExportFile {
    std::map<std::string, std::string> header;
    std::vector<ExportRecord> records;
};
ExportFile read_export(std::istream& in);
ExportFile load_export(const std::string& path);

/// Generation outputs: optional header then {"claim_id": ..., "text": ...}
/// per line. Duplicate claim ids are rejected.
struct Generation {
    std::string claim_id;
    std::string text;
};
void write_generations(std::ostream& out, const std::vector<Generation>& generations);
std::vector<Generation> read_generations(std::istream& in);
std::vector<Generation> load_generations(const std::string& path);

} // namespace stancekit
