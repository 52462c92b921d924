#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stancekit/bm25.hpp"
#include "stancekit/corpus.hpp"
#include "stancekit/split.hpp"

namespace stancekit {

inline constexpr std::size_t default_persona_cap = 5;
inline constexpr std::size_t default_bucket_threshold = 5;
inline constexpr std::string_view sep_token = " [SEP] ";

enum class Selection { random, dynamic, negative };

std::string_view to_string(Selection s);

struct PersonaClaim {
    std::string claim_id;
    std::string text;
};

/// An author's train-split claims, ordered by claim_id.
using PersonaPool = std::vector<PersonaClaim>;

struct ExplicitPersona {
    std::string author_id;
    std::vector<PersonaClaim> selected; // serialization order
    Selection strategy = Selection::random;
    std::size_t cap = default_persona_cap;
};

struct ThesisStanceSummary {
    std::string discussion_id;
    std::string thesis_text;
    std::size_t pro_count = 0;
    std::size_t con_count = 0;
};

struct ImplicitPersona {
    std::string author_id;
    std::vector<ThesisStanceSummary> entries; // ordered by discussion_id
};

enum class PersonaBucket { none, small, big };

std::string_view to_string(PersonaBucket b);

/// 0 -> none, [1, threshold) -> small, >= threshold -> big.
PersonaBucket bucket_of(std::size_t pool_size, std::size_t threshold = default_bucket_threshold);

/// Train-split claims of the author, ordered by claim_id. `exclude` drops a
/// single claim (the target of a sample) from the pool. Throws UnknownAuthor.
PersonaPool explicit_pool(const Corpus& corpus, const SplitAssignment& split,
                          std::string_view author_id,
                          std::optional<std::string_view> exclude = std::nullopt);

/// All of the pool when it fits, otherwise `cap` claims drawn uniformly
/// without replacement (partial Fisher-Yates on Rng(seed)), kept in draw order.
ExplicitPersona select_random(std::string_view author_id, const PersonaPool& pool, std::size_t cap,
                              std::uint64_t seed);

/// The `cap` pool claims most similar to the parent claim under BM25,
/// by descending score (ties by claim_id).
ExplicitPersona select_dynamic(std::string_view author_id, const PersonaPool& pool,
                               std::string_view parent_text, std::size_t cap,
                               Bm25Params params = {});

/// The `cap` least similar pool claims, by ascending score (ties by claim_id).
ExplicitPersona select_negative(std::string_view author_id, const PersonaPool& pool,
                                std::string_view parent_text, std::size_t cap,
                                Bm25Params params = {});

/// Stance toward the thesis: pro when the path from the claim to the thesis
/// carries an even number of con edges, the claim's own label included.
/// Throws IsThesis or UnknownClaim.
Stance propagate_stance(const Discussion& discussion, std::string_view claim_id);

/// One entry per train discussion the author wrote in, counting the
/// propagated stance of each of their claims there. `exclude` drops one
/// claim; entries left with no claims disappear.
ImplicitPersona implicit_persona(const Corpus& corpus, const SplitAssignment& split,
                                 std::string_view author_id,
                                 std::optional<std::string_view> exclude = std::nullopt);

std::string serialize_explicit(const ExplicitPersona& persona);
std::string serialize_implicit(const ImplicitPersona& persona);

/// Inverse of serialize_implicit (discussion ids are not part of the text).
/// Throws MalformedRecord. Thesis texts containing " [SEP] " do not round-trip.
std::vector<ThesisStanceSummary> parse_implicit(std::string_view text);

} // namespace stancekit
