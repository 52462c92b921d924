#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace stancekit {

/// Stance of a claim toward its direct parent. Only the root carries `thesis`.
enum class Stance { pro, con, thesis };

std::string_view to_string(Stance s);
std::optional<Stance> parse_stance(std::string_view s);

struct Claim {
    std::string claim_id;
    std::string discussion_id;
    std::string author_id;
    std::optional<std::string> parent_id;
    std::string text;
    Stance stance = Stance::thesis;

    bool is_thesis() const { return !parent_id.has_value(); }
};

struct TransparentHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
        return std::hash<std::string_view>{}(s);
    }
};

template <typename V>
using StringMap = std::unordered_map<std::string, V, TransparentHash, std::equal_to<>>;

/// A validated discussion tree rooted at its thesis. Immutable once built.
class Discussion {
  public:
    /// Validates and indexes a set of claims; input order does not matter.
    /// Throws Error with DuplicateClaimId, InconsistentStance, DanglingParent,
    /// CycleDetected, NoThesis or MultipleTheses (checked in that order).
    static Discussion build(std::vector<Claim> raw_claims);

    const std::string& id() const { return id_; }
    const Claim& thesis() const { return claims_[thesis_]; }

    /// All claims, ordered by claim_id.
    std::span<const Claim> claims() const { return claims_; }
    std::size_t size() const { return claims_.size(); }

    const Claim* find(std::string_view claim_id) const;
    const Claim& at(std::string_view claim_id) const;

    /// Position of a claim inside claims(); throws UnknownClaim.
    std::size_t index_of(std::string_view claim_id) const;

    /// The parent of a non-thesis claim, nullptr for the thesis.
    const Claim* parent_of(const Claim& claim) const;

    /// Thesis depth is 0.
    int depth(std::string_view claim_id) const;
    int depth_at(std::size_t index) const { return depth_[index]; }
    int max_depth() const { return max_depth_; }

    /// The claim itself first, the thesis last.
    std::vector<const Claim*> path_to_root(std::string_view claim_id) const;

  private:
    Discussion() = default;

    std::string id_;
    std::vector<Claim> claims_;
    StringMap<std::size_t> index_;
    std::vector<std::ptrdiff_t> parent_;
    std::vector<int> depth_;
    std::size_t thesis_ = 0;
    int max_depth_ = 0;
};

struct ClaimLocation {
    std::size_t discussion;
    std::size_t claim;
};

/// A set of discussions with globally unique claim ids and an author index.
class Corpus {
  public:
    /// Throws EmptyCorpus for no discussions; DuplicateClaimId when a claim id
    /// (or discussion id) repeats across discussions.
    static Corpus build(std::vector<Discussion> discussions);

    /// Ordered by discussion_id.
    std::span<const Discussion> discussions() const { return discussions_; }

    const Discussion* find_discussion(std::string_view discussion_id) const;
    const Claim* find_claim(std::string_view claim_id) const;
    const Discussion& discussion_of(std::string_view claim_id) const;

    /// author_id -> claim ids (ascending). Exactly the inverse of authorship.
    const std::map<std::string, std::vector<std::string>, std::less<>>& author_index() const {
        return author_index_;
    }
    bool has_author(std::string_view author_id) const;

    std::size_t claim_count() const { return locations_.size(); }

  private:
    Corpus() = default;

    std::vector<Discussion> discussions_;
    StringMap<std::size_t> discussion_index_;
    StringMap<ClaimLocation> locations_;
    std::map<std::string, std::vector<std::string>, std::less<>> author_index_;
};

/// Descriptive statistics. Standard deviations are population (divide by N).
struct CorpusStats {
    std::size_t discussion_count = 0;
    std::size_t unique_claim_count = 0;
    double claims_per_discussion_mean = 0.0;
    double claims_per_discussion_std = 0.0;
    double max_depth_per_discussion_mean = 0.0;
    double max_depth_per_discussion_std = 0.0;
    std::size_t author_count = 0;
    std::size_t claims_per_author_min = 0;
    std::size_t claims_per_author_max = 0;
};

CorpusStats corpus_stats(const Corpus& corpus);

} // namespace stancekit
