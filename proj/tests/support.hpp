#pragma once

// Test-only helpers: fixture access, random corpus generators and the
// brute-force oracles the unit and acceptance suites compare against.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stancekit/corpus.hpp"
#include "stancekit/ingest.hpp"
#include "stancekit/metrics.hpp"
#include "stancekit/split.hpp"

namespace testing {

inline std::string fixture_path(const std::string& name) {
    return std::string(STANCEKIT_FIXTURE_DIR) + "/" + name;
}

inline const nlohmann::json& golden() {
    static const nlohmann::json g = [] {
        std::ifstream in(fixture_path("golden.json"));
        return nlohmann::json::parse(in);
    }();
    return g;
}

inline nlohmann::json load_json(const std::string& name) {
    std::ifstream in(fixture_path(name));
    return nlohmann::json::parse(in);
}

inline stancekit::Claim claim(std::string id, std::string discussion, std::string author,
                              std::optional<std::string> parent, std::string text,
                              stancekit::Stance stance) {
    return {std::move(id), std::move(discussion), std::move(author), std::move(parent),
            std::move(text), stance};
}

/// Random tree with `n` claims: each claim attaches to a uniformly chosen
/// earlier claim with a random pro/con label; authors drawn from `authors`.
inline std::vector<stancekit::Claim> random_tree(std::mt19937_64& rng, const std::string& did,
                                                 std::size_t n, std::size_t authors = 5,
                                                 const std::string& prefix = "") {
    std::vector<stancekit::Claim> out;
    std::uniform_int_distribution<std::size_t> author(0, authors - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string id = prefix + did + "-" + std::to_string(i);
        const std::string a = "a" + std::to_string(author(rng));
        if (i == 0) {
            out.push_back(claim(id, did, a, std::nullopt, "thesis of " + did, stancekit::Stance::thesis));
        } else {
            std::uniform_int_distribution<std::size_t> parent(0, i - 1);
            const auto p = out[parent(rng)].claim_id;
            const auto s = (rng() & 1) ? stancekit::Stance::pro : stancekit::Stance::con;
            out.push_back(claim(id, did, a, p, "claim " + id, s));
        }
    }
    return out;
}

/// Thesis stance by walking parent links in the raw claim list (no Discussion).
inline stancekit::Stance parity_oracle(const std::vector<stancekit::Claim>& claims,
                                       const std::string& claim_id) {
    std::map<std::string, const stancekit::Claim*> by_id;
    for (const auto& c : claims) by_id[c.claim_id] = &c;
    int cons = 0;
    const stancekit::Claim* c = by_id.at(claim_id);
    while (c->parent_id) {
        if (c->stance == stancekit::Stance::con) ++cons;
        c = by_id.at(*c->parent_id);
    }
    return cons % 2 == 0 ? stancekit::Stance::pro : stancekit::Stance::con;
}

/// Direct evaluation of the BM25 closed form over explicit token lists.
struct BruteBm25 {
    std::vector<std::string> ids;
    std::vector<stancekit::Tokens> docs;
    double k1 = 1.5;
    double b = 0.75;

    double score(const stancekit::Tokens& query, std::size_t d) const {
        const double n = static_cast<double>(docs.size());
        double total_len = 0.0;
        for (const auto& t : docs) total_len += static_cast<double>(t.size());
        const double avgdl = total_len / n;
        std::vector<double> parts;
        for (const auto& q : query) {
            double df = 0.0;
            for (const auto& t : docs) df += std::count(t.begin(), t.end(), q) > 0 ? 1.0 : 0.0;
            const double tf = static_cast<double>(std::count(docs[d].begin(), docs[d].end(), q));
            if (tf == 0.0) continue;
            const double idf = std::log((n - df + 0.5) / (df + 0.5) + 1.0);
            const double len = static_cast<double>(docs[d].size());
            parts.push_back(idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * (len / avgdl))));
        }
        // equal multisets of term weights must give equal scores for the id tie-break
        std::sort(parts.begin(), parts.end());
        double s = 0.0;
        for (double x : parts) s += x;
        return s;
    }

    /// (id, score) sorted by score then id, exhaustively.
    std::vector<std::pair<std::string, double>> rank(const stancekit::Tokens& query,
                                                     bool descending) const {
        std::vector<std::pair<std::string, double>> out;
        for (std::size_t d = 0; d < docs.size(); ++d) out.emplace_back(ids[d], score(query, d));
        std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b2) {
            if (a.second != b2.second) return descending ? a.second > b2.second : a.second < b2.second;
            return a.first < b2.first;
        });
        return out;
    }
};

inline stancekit::Corpus corpus_from(std::vector<std::vector<stancekit::Claim>> groups) {
    std::vector<stancekit::Discussion> ds;
    for (auto& g : groups) ds.push_back(stancekit::Discussion::build(std::move(g)));
    return stancekit::Corpus::build(std::move(ds));
}

inline stancekit::SplitAssignment manual_split(std::map<std::string, stancekit::Split> m) {
    stancekit::SplitAssignment s;
    for (auto& [k, v] : m) s.assignment.emplace(k, v);
    return s;
}

} // namespace testing
