#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_set>
#include <vector>

#include "stancekit/corpus.hpp"

namespace stancekit {

/// Canonical claim-record format, one JSON object per line:
///
///   {"format":"stancekit-corpus","version":1}                      (optional header)
///   {"claim_id":"c1","discussion_id":"d1","author_id":"a1",
///    "parent_id":null,"text":"...","stance_label":"thesis"}
///
/// All six fields are required; parent_id may be null. Records of one
/// discussion must be contiguous so a discussion can be validated and
/// released as soon as the next one starts.
inline constexpr const char* corpus_format_name = "stancekit-corpus";
inline constexpr int corpus_format_version = 1;

struct IngestOptions {
    /// Map records whose author_id is missing, null or empty to a fresh
    /// synthetic author ("anon:" + claim_id) instead of rejecting them.
    bool synthesize_missing_authors = false;
};

/// Pull-style reader producing one validated discussion at a time.
class CorpusReader {
  public:
    explicit CorpusReader(std::istream& in, IngestOptions options = {});

    /// Next discussion, or nullopt at end of stream. Throws MalformedRecord
    /// (with line number), MissingField, or any Discussion::build error.
    std::optional<Discussion> next();

    std::size_t line() const { return line_; }

  private:
    std::optional<Claim> read_record();

    std::istream& in_;
    IngestOptions options_;
    std::size_t line_ = 0;
    std::optional<Claim> pending_;
    std::unordered_set<std::string> closed_;
    bool header_checked_ = false;
};

/// Reads a whole stream into a validated corpus. Empty input -> EmptyCorpus.
Corpus parse_corpus(std::istream& in, IngestOptions options = {});
Corpus load_corpus(const std::string& path, IngestOptions options = {});

/// Writes the canonical format (with header), discussions and claims in
/// corpus order. parse_corpus(write_corpus(c)) reproduces c.
void write_corpus(std::ostream& out, const Corpus& corpus);

} // namespace stancekit
