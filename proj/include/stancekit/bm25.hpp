#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stancekit/corpus.hpp"
#include "stancekit/metrics.hpp"

namespace stancekit {

struct Bm25Params {
    double k1 = 1.5;
    double b = 0.75;
};

struct ScoredDoc {
    std::string doc_id;
    double score;
};

/// Okapi BM25 over a small in-memory collection.
///
///   score(q, d) = sum over query tokens t (repeats included) of
///     idf(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * |d| / avgdl))
///   idf(t) = ln((N - df + 0.5) / (df + 0.5) + 1)
///
/// The +1 inside the log keeps every idf positive. Query tokens that occur
/// in no document contribute 0. Texts go through tokenize().
class Bm25Index {
  public:
    static Bm25Index build(const std::vector<std::pair<std::string, std::string>>& docs,
                           Bm25Params params = {});
    static Bm25Index build_tokenized(std::vector<std::pair<std::string, Tokens>> docs,
                                     Bm25Params params = {});

    std::size_t size() const { return ids_.size(); }
    double average_document_length() const { return avgdl_; }
    std::size_t document_frequency(std::string_view token) const;
    std::size_t document_length(std::string_view doc_id) const;
    const Bm25Params& params() const { return params_; }
    double idf(std::string_view token) const;

    /// Throws UnknownDocument.
    double score(std::string_view query, std::string_view doc_id) const;
    double score_tokens(const Tokens& query, std::string_view doc_id) const;

    /// Every document, ordered by score (descending or ascending) with ties
    /// broken by ascending doc_id in both directions.
    std::vector<ScoredDoc> rank(std::string_view query, bool descending) const;
    std::vector<ScoredDoc> rank_tokens(const Tokens& query, bool descending) const;

  private:
    struct Posting {
        std::size_t doc;
        std::size_t tf;
    };

    Bm25Index() = default;
    std::vector<double> score_all(const Tokens& query) const;
    double term_weight(double idf, std::size_t tf, std::size_t doc) const;

    Bm25Params params_;
    std::vector<std::string> ids_;
    StringMap<std::size_t> id_index_;
    std::vector<std::size_t> lengths_;
    StringMap<std::vector<Posting>> postings_;
    double avgdl_ = 0.0;
};

} // namespace stancekit
