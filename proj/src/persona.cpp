#include "stancekit/persona.hpp"

#include <algorithm>
#include <map>

#include "stancekit/error.hpp"
#include "stancekit/rng.hpp"

namespace stancekit {

std::string_view to_string(Selection s) {
    switch (s) {
    case Selection::random: return "random";
    case Selection::dynamic: return "dynamic";
    case Selection::negative: return "negative";
    }
    return "random";
}

std::string_view to_string(PersonaBucket b) {
    switch (b) {
    case PersonaBucket::none: return "none";
    case PersonaBucket::small: return "small";
    case PersonaBucket::big: return "big";
    }
    return "none";
}

PersonaBucket bucket_of(std::size_t pool_size, std::size_t threshold) {
    if (threshold < 1) {
        throw Error(ErrorKind::InvalidArgument, "bucket threshold must be >= 1");
    }
    if (pool_size == 0) return PersonaBucket::none;
    return pool_size < threshold ? PersonaBucket::small : PersonaBucket::big;
}

namespace {

const std::vector<std::string>& claims_of(const Corpus& corpus, std::string_view author_id) {
    auto it = corpus.author_index().find(author_id);
    if (it == corpus.author_index().end()) {
        throw Error(ErrorKind::UnknownAuthor, std::string(author_id));
    }
    return it->second;
}

void check_cap(std::size_t cap) {
    if (cap < 1) throw Error(ErrorKind::InvalidArgument, "persona cap must be >= 1");
}

ExplicitPersona select_by_similarity(std::string_view author_id, const PersonaPool& pool,
                                     std::string_view parent_text, std::size_t cap,
                                     Bm25Params params, Selection strategy) {
    check_cap(cap);
    ExplicitPersona p{std::string(author_id), {}, strategy, cap};
    if (pool.size() < 2) {
        p.selected = pool;
        return p;
    }
    std::vector<std::pair<std::string, std::string>> docs;
    docs.reserve(pool.size());
    for (const auto& c : pool) docs.emplace_back(c.claim_id, c.text);
    const auto index = Bm25Index::build(docs, params);
    const auto ranked = index.rank(parent_text, strategy == Selection::dynamic);
    std::map<std::string_view, const PersonaClaim*> by_id;
    for (const auto& c : pool) by_id.emplace(c.claim_id, &c);
    for (std::size_t i = 0; i < ranked.size() && i < cap; ++i) {
        p.selected.push_back(*by_id.at(ranked[i].doc_id));
    }
    return p;
}

} // namespace

PersonaPool explicit_pool(const Corpus& corpus, const SplitAssignment& split,
                          std::string_view author_id, std::optional<std::string_view> exclude) {
    PersonaPool pool;
    for (const auto& id : claims_of(corpus, author_id)) {
        if (exclude && id == *exclude) continue;
        const Discussion& d = corpus.discussion_of(id);
        if (split.of(d.id()) != Split::train) continue;
        pool.push_back({id, d.at(id).text});
    }
    return pool;
}

ExplicitPersona select_random(std::string_view author_id, const PersonaPool& pool, std::size_t cap,
                              std::uint64_t seed) {
    check_cap(cap);
    ExplicitPersona p{std::string(author_id), {}, Selection::random, cap};
    if (pool.size() <= cap) {
        p.selected = pool;
        return p;
    }
    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    for (std::size_t j = 0; j < cap; ++j) {
        const std::size_t pick = j + static_cast<std::size_t>(rng.below(order.size() - j));
        std::swap(order[j], order[pick]);
        p.selected.push_back(pool[order[j]]);
    }
    return p;
}

ExplicitPersona select_dynamic(std::string_view author_id, const PersonaPool& pool,
                               std::string_view parent_text, std::size_t cap, Bm25Params params) {
    return select_by_similarity(author_id, pool, parent_text, cap, params, Selection::dynamic);
}

ExplicitPersona select_negative(std::string_view author_id, const PersonaPool& pool,
                                std::string_view parent_text, std::size_t cap, Bm25Params params) {
    return select_by_similarity(author_id, pool, parent_text, cap, params, Selection::negative);
}

Stance propagate_stance(const Discussion& discussion, std::string_view claim_id) {
    const auto path = discussion.path_to_root(claim_id);
    if (path.front()->is_thesis()) {
        throw Error(ErrorKind::IsThesis, std::string(claim_id) + " is the thesis");
    }
    bool con = false;
    for (const Claim* c : path) {
        if (c->stance == Stance::con) con = !con;
    }
    return con ? Stance::con : Stance::pro;
}

ImplicitPersona implicit_persona(const Corpus& corpus, const SplitAssignment& split,
                                 std::string_view author_id,
                                 std::optional<std::string_view> exclude) {
    ImplicitPersona persona{std::string(author_id), {}};
    std::map<std::string, ThesisStanceSummary> by_discussion;
    for (const auto& id : claims_of(corpus, author_id)) {
        if (exclude && id == *exclude) continue;
        const Discussion& d = corpus.discussion_of(id);
        if (split.of(d.id()) != Split::train) continue;
        auto& entry = by_discussion[d.id()];
        entry.discussion_id = d.id();
        entry.thesis_text = d.thesis().text;
        // the author of a thesis argues for it
        const bool pro = d.at(id).is_thesis() || propagate_stance(d, id) == Stance::pro;
        ++(pro ? entry.pro_count : entry.con_count);
    }
    for (auto& [id, entry] : by_discussion) persona.entries.push_back(std::move(entry));
    return persona;
}

std::string serialize_explicit(const ExplicitPersona& persona) {
    std::string out;
    for (const auto& c : persona.selected) {
        if (!out.empty()) out += sep_token;
        out += c.text;
    }
    return out;
}

std::string serialize_implicit(const ImplicitPersona& persona) {
    std::string out;
    for (const auto& e : persona.entries) {
        if (!out.empty()) out += sep_token;
        out += "pro: " + std::to_string(e.pro_count) + " - con: " + std::to_string(e.con_count) +
               " - text: " + e.thesis_text;
    }
    return out;
}

namespace {

std::size_t parse_count(std::string_view s, std::string_view whole) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw Error(ErrorKind::MalformedRecord, "bad count in implicit persona entry: " +
                                                    std::string(whole));
    }
    return std::stoull(std::string(s));
}

} // namespace

std::vector<ThesisStanceSummary> parse_implicit(std::string_view text) {
    std::vector<ThesisStanceSummary> out;
    if (text.empty()) return out;
    std::size_t start = 0;
    while (true) {
        const std::size_t end = text.find(sep_token, start);
        const std::string_view entry =
            text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        constexpr std::string_view pro_tag = "pro: ";
        constexpr std::string_view con_tag = " - con: ";
        constexpr std::string_view text_tag = " - text: ";
        const std::size_t con_at = entry.find(con_tag);
        const std::size_t text_at = entry.find(text_tag);
        if (entry.substr(0, pro_tag.size()) != pro_tag || con_at == std::string_view::npos ||
            text_at == std::string_view::npos || text_at < con_at) {
            throw Error(ErrorKind::MalformedRecord,
                        "implicit persona entry does not match 'pro: N - con: M - text: T': " +
                            std::string(entry));
        }
        ThesisStanceSummary s;
        s.pro_count = parse_count(entry.substr(pro_tag.size(), con_at - pro_tag.size()), entry);
        s.con_count = parse_count(
            entry.substr(con_at + con_tag.size(), text_at - con_at - con_tag.size()), entry);
        s.thesis_text = std::string(entry.substr(text_at + text_tag.size()));
        out.push_back(std::move(s));
        if (end == std::string_view::npos) break;
        start = end + sep_token.size();
    }
    return out;
}

} // namespace stancekit
