#include "stancekit/bm25.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "stancekit/error.hpp"

namespace stancekit {

Bm25Index Bm25Index::build(const std::vector<std::pair<std::string, std::string>>& docs,
                           Bm25Params params) {
    std::vector<std::pair<std::string, Tokens>> tokenized;
    tokenized.reserve(docs.size());
    for (const auto& [id, text] : docs) tokenized.emplace_back(id, tokenize(text));
    return build_tokenized(std::move(tokenized), params);
}

Bm25Index Bm25Index::build_tokenized(std::vector<std::pair<std::string, Tokens>> docs,
                                     Bm25Params params) {
    if (docs.empty()) {
        throw Error(ErrorKind::EmptyCorpus, "BM25 index needs at least one document");
    }
    if (!(params.k1 >= 0.0) || !(params.b >= 0.0 && params.b <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "BM25 requires k1 >= 0 and 0 <= b <= 1");
    }
    Bm25Index idx;
    idx.params_ = params;
    std::size_t total = 0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        auto& [id, tokens] = docs[d];
        if (!idx.id_index_.emplace(id, d).second) {
            throw Error(ErrorKind::InvalidArgument, "duplicate BM25 document id " + id);
        }
        idx.ids_.push_back(id);
        idx.lengths_.push_back(tokens.size());
        total += tokens.size();
        std::map<std::string, std::size_t> tf;
        for (auto& t : tokens) ++tf[std::move(t)];
        for (auto& [term, count] : tf) idx.postings_[term].push_back({d, count});
    }
    idx.avgdl_ = static_cast<double>(total) / static_cast<double>(docs.size());
    return idx;
}

std::size_t Bm25Index::document_frequency(std::string_view token) const {
    auto it = postings_.find(token);
    return it == postings_.end() ? 0 : it->second.size();
}

std::size_t Bm25Index::document_length(std::string_view doc_id) const {
    auto it = id_index_.find(doc_id);
    if (it == id_index_.end()) throw Error(ErrorKind::UnknownDocument, std::string(doc_id));
    return lengths_[it->second];
}

double Bm25Index::idf(std::string_view token) const {
    const auto n = static_cast<double>(ids_.size());
    const auto df = static_cast<double>(document_frequency(token));
    return std::log((n - df + 0.5) / (df + 0.5) + 1.0);
}

double Bm25Index::term_weight(double idf, std::size_t tf, std::size_t doc) const {
    const auto f = static_cast<double>(tf);
    // avgdl is 0 only when every document is empty, in which case tf is 0 too
    const double norm = avgdl_ > 0.0 ? static_cast<double>(lengths_[doc]) / avgdl_ : 0.0;
    return idf * f * (params_.k1 + 1.0) / (f + params_.k1 * (1.0 - params_.b + params_.b * norm));
}

namespace {

// Term contributions are added in ascending order, so documents whose
// contributions are the same multiset get bit-identical scores and the
// doc_id tie-break applies regardless of query term order.
double sorted_sum(std::vector<double>& parts) {
    std::sort(parts.begin(), parts.end());
    double s = 0.0;
    for (double x : parts) s += x;
    return s;
}

} // namespace

double Bm25Index::score(std::string_view query, std::string_view doc_id) const {
    return score_tokens(tokenize(query), doc_id);
}

double Bm25Index::score_tokens(const Tokens& query, std::string_view doc_id) const {
    auto it = id_index_.find(doc_id);
    if (it == id_index_.end()) throw Error(ErrorKind::UnknownDocument, std::string(doc_id));
    const std::size_t doc = it->second;
    std::vector<double> parts;
    for (const auto& term : query) {
        auto p = postings_.find(term);
        if (p == postings_.end()) continue;
        auto hit = std::lower_bound(p->second.begin(), p->second.end(), doc,
                                    [](const Posting& a, std::size_t d) { return a.doc < d; });
        if (hit == p->second.end() || hit->doc != doc) continue;
        parts.push_back(term_weight(idf(term), hit->tf, doc));
    }
    return sorted_sum(parts);
}

std::vector<double> Bm25Index::score_all(const Tokens& query) const {
    std::vector<std::vector<double>> parts(ids_.size());
    for (const auto& term : query) {
        auto p = postings_.find(term);
        if (p == postings_.end()) continue;
        const double w = idf(term);
        for (const Posting& post : p->second) parts[post.doc].push_back(term_weight(w, post.tf, post.doc));
    }
    std::vector<double> scores(ids_.size(), 0.0);
    for (std::size_t d = 0; d < ids_.size(); ++d) scores[d] = sorted_sum(parts[d]);
    return scores;
}

std::vector<ScoredDoc> Bm25Index::rank(std::string_view query, bool descending) const {
    return rank_tokens(tokenize(query), descending);
}

std::vector<ScoredDoc> Bm25Index::rank_tokens(const Tokens& query, bool descending) const {
    const auto scores = score_all(query);
    std::vector<ScoredDoc> out;
    out.reserve(ids_.size());
    for (std::size_t d = 0; d < ids_.size(); ++d) out.push_back({ids_[d], scores[d]});
    std::sort(out.begin(), out.end(), [descending](const ScoredDoc& a, const ScoredDoc& b) {
        if (a.score != b.score) return descending ? a.score > b.score : a.score < b.score;
        return a.doc_id < b.doc_id;
    });
    return out;
}

} // namespace stancekit
