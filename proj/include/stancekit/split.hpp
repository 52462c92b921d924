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

namespace stancekit {

enum class Split { train, validation, test };

std::string_view to_string(Split s);
std::optional<Split> parse_split(std::string_view s);

/// One claims-per-discussion bin used for stratification.
struct Stratum {
    std::size_t min_claims = 0;
    std::size_t max_claims = 0;
    std::size_t size = 0;
    std::size_t validation = 0;
    std::size_t test = 0;
};

struct SplitAssignment {
    std::map<std::string, Split, std::less<>> assignment;
    std::uint64_t seed = 0;
    double val_fraction = 0.0;
    double test_fraction = 0.0;
    std::string strata_spec;
    std::vector<Stratum> strata;

    /// Throws InvalidArgument for an unassigned discussion id.
    Split of(std::string_view discussion_id) const;
    std::size_t count(Split s) const;
};

/// Stratified discussion-level split.
///
/// Strata are the four nearest-rank quartile bins of claims per discussion
/// (ties share a bin, so bins can be empty). In each stratum, in ascending
/// discussion_id order, a partial Fisher-Yates shuffle driven by Rng(seed)
/// draws round(val_fraction * size) validation discussions and then
/// round(test_fraction * size) test discussions; rounding is half away
/// from zero and the remainder is train. One generator stream is shared
/// across strata, visited from smallest to largest.
SplitAssignment stratified_split(const Corpus& corpus, double val_fraction, double test_fraction,
                                 std::uint64_t seed);

/// Round half away from zero, tolerant to representation error in
/// fraction * size (e.g. 0.05 * 30).
std::size_t stratum_quota(double fraction, std::size_t size);

/// Throws MalformedRecord unless every corpus discussion is assigned and no
/// unknown discussion appears.
void check_split_covers(const SplitAssignment& split, const Corpus& corpus);

/// Tab-separated "discussion_id<TAB>split" rows after '#'-prefixed
/// key=value metadata lines (format, seed, val_fraction, test_fraction,
/// strata).
void write_split(std::ostream& out, const SplitAssignment& split);
SplitAssignment read_split(std::istream& in);
SplitAssignment load_split(const std::string& path);

/// Claims of one split grouped by the author's persona size: columns
/// 0 .. threshold-1 and a final ">= threshold" column.
struct BucketRow {
    Split split;
    std::vector<std::size_t> counts;
    std::size_t total = 0;
};

struct BucketTable {
    std::size_t threshold = 5;
    std::vector<BucketRow> rows; // train, validation, test
};

/// Persona size for a claim is the number of train-split claims by its
/// author, not counting the claim itself.
BucketTable bucket_table(const Corpus& corpus, const SplitAssignment& split, std::size_t threshold);

/// Human-readable layout: one row per split, one column per persona size.
std::string format_bucket_table(const BucketTable& table);

} // namespace stancekit
