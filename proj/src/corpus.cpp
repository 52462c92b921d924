#include "stancekit/corpus.hpp"

#include <algorithm>
#include <cmath>

#include "stancekit/error.hpp"

namespace stancekit {

std::string_view to_string(Stance s) {
    switch (s) {
    case Stance::pro: return "pro";
    case Stance::con: return "con";
    case Stance::thesis: return "thesis";
    }
    return "thesis";
}

std::optional<Stance> parse_stance(std::string_view s) {
    if (s == "pro") return Stance::pro;
    if (s == "con") return Stance::con;
    if (s == "thesis") return Stance::thesis;
    return std::nullopt;
}

namespace {

bool blank(std::string_view text) {
    return std::all_of(text.begin(), text.end(), [](unsigned char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    });
}

} // namespace

Discussion Discussion::build(std::vector<Claim> raw_claims) {
    if (raw_claims.empty()) {
        throw Error(ErrorKind::EmptyInput, "a discussion needs at least one claim");
    }
    std::sort(raw_claims.begin(), raw_claims.end(),
              [](const Claim& a, const Claim& b) { return a.claim_id < b.claim_id; });

    Discussion d;
    d.id_ = raw_claims.front().discussion_id;
    d.claims_ = std::move(raw_claims);
    const std::size_t n = d.claims_.size();

    for (std::size_t i = 0; i < n; ++i) {
        const Claim& c = d.claims_[i];
        if (c.discussion_id != d.id_) {
            throw Error(ErrorKind::InvalidArgument, "claim " + c.claim_id + " belongs to discussion " +
                                                        c.discussion_id + ", expected " + d.id_);
        }
        if (blank(c.text)) {
            throw Error(ErrorKind::InvalidArgument, "claim " + c.claim_id + " has empty text");
        }
        if (!d.index_.emplace(c.claim_id, i).second) {
            throw Error(ErrorKind::DuplicateClaimId, c.claim_id);
        }
    }
    for (const Claim& c : d.claims_) {
        if (c.is_thesis() != (c.stance == Stance::thesis)) {
            throw Error(ErrorKind::InconsistentStance,
                        "claim " + c.claim_id + " has stance " + std::string(to_string(c.stance)) +
                            (c.is_thesis() ? " but no parent" : " but a parent"));
        }
    }

    d.parent_.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const Claim& c = d.claims_[i];
        if (!c.parent_id) continue;
        auto it = d.index_.find(*c.parent_id);
        if (it == d.index_.end()) {
            throw Error(ErrorKind::DanglingParent,
                        "claim " + c.claim_id + " names missing parent " + *c.parent_id);
        }
        d.parent_[i] = static_cast<std::ptrdiff_t>(it->second);
    }

    // Depth resolution doubles as cycle detection: a walk that revisits a node
    // still on the current stack has found a cycle.
    constexpr int unresolved = -1;
    constexpr int on_stack = -2;
    d.depth_.assign(n, unresolved);
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < n; ++start) {
        std::size_t cur = start;
        while (d.depth_[cur] == unresolved) {
            d.depth_[cur] = on_stack;
            stack.push_back(cur);
            if (d.parent_[cur] < 0) break;
            cur = static_cast<std::size_t>(d.parent_[cur]);
        }
        if (d.depth_[cur] == on_stack && d.parent_[cur] >= 0) {
            throw Error(ErrorKind::CycleDetected, "parent links of claim " + d.claims_[cur].claim_id +
                                                      " loop back on themselves");
        }
        int base = d.depth_[cur] == on_stack ? -1 : d.depth_[cur];
        if (d.depth_[cur] == on_stack) {
            // cur is a root reached on this walk
            d.depth_[cur] = 0;
            stack.pop_back();
            base = 0;
        }
        while (!stack.empty()) {
            d.depth_[stack.back()] = ++base;
            stack.pop_back();
        }
    }

    std::size_t roots = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (d.parent_[i] < 0) {
            ++roots;
            d.thesis_ = i;
        }
    }
    if (roots == 0) {
        throw Error(ErrorKind::NoThesis, "discussion " + d.id_ + " has no root claim");
    }
    if (roots > 1) {
        throw Error(ErrorKind::MultipleTheses,
                    "discussion " + d.id_ + " has " + std::to_string(roots) + " root claims");
    }
    d.max_depth_ = *std::max_element(d.depth_.begin(), d.depth_.end());
    return d;
}

const Claim* Discussion::find(std::string_view claim_id) const {
    auto it = index_.find(claim_id);
    return it == index_.end() ? nullptr : &claims_[it->second];
}

std::size_t Discussion::index_of(std::string_view claim_id) const {
    auto it = index_.find(claim_id);
    if (it == index_.end()) {
        throw Error(ErrorKind::UnknownClaim, std::string(claim_id));
    }
    return it->second;
}

const Claim& Discussion::at(std::string_view claim_id) const {
    return claims_[index_of(claim_id)];
}

const Claim* Discussion::parent_of(const Claim& claim) const {
    const std::ptrdiff_t p = parent_[index_of(claim.claim_id)];
    return p < 0 ? nullptr : &claims_[static_cast<std::size_t>(p)];
}

int Discussion::depth(std::string_view claim_id) const {
    return depth_[index_of(claim_id)];
}

std::vector<const Claim*> Discussion::path_to_root(std::string_view claim_id) const {
    std::ptrdiff_t cur = static_cast<std::ptrdiff_t>(index_of(claim_id));
    std::vector<const Claim*> path;
    path.reserve(static_cast<std::size_t>(depth_[static_cast<std::size_t>(cur)]) + 1);
    while (cur >= 0) {
        path.push_back(&claims_[static_cast<std::size_t>(cur)]);
        cur = parent_[static_cast<std::size_t>(cur)];
    }
    return path;
}

Corpus Corpus::build(std::vector<Discussion> discussions) {
    if (discussions.empty()) {
        throw Error(ErrorKind::EmptyCorpus, "corpus has no discussions");
    }
    std::sort(discussions.begin(), discussions.end(),
              [](const Discussion& a, const Discussion& b) { return a.id() < b.id(); });
    Corpus c;
    c.discussions_ = std::move(discussions);
    for (std::size_t di = 0; di < c.discussions_.size(); ++di) {
        const Discussion& d = c.discussions_[di];
        if (!c.discussion_index_.emplace(d.id(), di).second) {
            throw Error(ErrorKind::DuplicateClaimId, "discussion id " + d.id() + " appears twice");
        }
        const auto claims = d.claims();
        for (std::size_t ci = 0; ci < claims.size(); ++ci) {
            if (!c.locations_.emplace(claims[ci].claim_id, ClaimLocation{di, ci}).second) {
                throw Error(ErrorKind::DuplicateClaimId,
                            claims[ci].claim_id + " appears in more than one discussion");
            }
            c.author_index_[claims[ci].author_id].push_back(claims[ci].claim_id);
        }
    }
    for (auto& [author, ids] : c.author_index_) {
        std::sort(ids.begin(), ids.end());
    }
    return c;
}

const Discussion* Corpus::find_discussion(std::string_view discussion_id) const {
    auto it = discussion_index_.find(discussion_id);
    return it == discussion_index_.end() ? nullptr : &discussions_[it->second];
}

const Claim* Corpus::find_claim(std::string_view claim_id) const {
    auto it = locations_.find(claim_id);
    if (it == locations_.end()) return nullptr;
    return &discussions_[it->second.discussion].claims()[it->second.claim];
}

const Discussion& Corpus::discussion_of(std::string_view claim_id) const {
    auto it = locations_.find(claim_id);
    if (it == locations_.end()) {
        throw Error(ErrorKind::UnknownClaim, std::string(claim_id));
    }
    return discussions_[it->second.discussion];
}

bool Corpus::has_author(std::string_view author_id) const {
    return author_index_.find(author_id) != author_index_.end();
}

namespace {

struct MeanStd {
    double mean;
    double std;
};

MeanStd population(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    double sq = 0.0;
    for (double x : xs) sq += (x - mean) * (x - mean);
    return {mean, std::sqrt(sq / static_cast<double>(xs.size()))};
}

} // namespace

CorpusStats corpus_stats(const Corpus& corpus) {
    const auto discussions = corpus.discussions();
    if (discussions.empty()) {
        throw Error(ErrorKind::EmptyCorpus, "corpus has no discussions");
    }
    std::vector<double> sizes;
    std::vector<double> depths;
    for (const Discussion& d : discussions) {
        sizes.push_back(static_cast<double>(d.size()));
        depths.push_back(static_cast<double>(d.max_depth()));
    }
    CorpusStats s;
    s.discussion_count = discussions.size();
    s.unique_claim_count = corpus.claim_count();
    const auto [size_mean, size_std] = population(sizes);
    const auto [depth_mean, depth_std] = population(depths);
    s.claims_per_discussion_mean = size_mean;
    s.claims_per_discussion_std = size_std;
    s.max_depth_per_discussion_mean = depth_mean;
    s.max_depth_per_discussion_std = depth_std;
    s.author_count = corpus.author_index().size();
    bool first = true;
    for (const auto& [author, ids] : corpus.author_index()) {
        if (first) {
            s.claims_per_author_min = s.claims_per_author_max = ids.size();
            first = false;
        }
        s.claims_per_author_min = std::min(s.claims_per_author_min, ids.size());
        s.claims_per_author_max = std::max(s.claims_per_author_max, ids.size());
    }
    return s;
}

} // namespace stancekit
