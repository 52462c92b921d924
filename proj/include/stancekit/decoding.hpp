#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stancekit/corpus.hpp"
#include "stancekit/metrics.hpp"
#include "stancekit/persona.hpp"
#include "stancekit/rng.hpp"

namespace stancekit {

struct TokenProb {
    std::string token;
    double probability;
};

/// Next-token distribution. Probabilities are >= 0 and sum to 1 within 1e-9.
class TokenDistribution {
  public:
    /// Throws InvalidArgument for negative mass, empty support or a sum off by > 1e-9.
    explicit TokenDistribution(std::vector<TokenProb> entries);

    const std::vector<TokenProb>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    double mass_of(std::string_view token) const;

  private:
    std::vector<TokenProb> entries_;
};

inline constexpr double default_top_p = 0.95;

struct DecodingConfig {
    double top_p = default_top_p;
    std::size_t max_length = 40;
    std::uint64_t seed = 0;
    /// Weight of a copy distribution over the source tokens mixed into the
    /// n-gram distribution; 0 disables conditioning on the source.
    double copy_weight = 0.0;
};

/// Smallest prefix of the stable descending-probability order whose
/// cumulative mass reaches top_p, renormalized. Throws InvalidP unless
/// 0 < top_p <= 1.
TokenDistribution nucleus_filter(const TokenDistribution& d, double top_p);

/// Inverse-CDF draw with one uniform01() from the generator.
const std::string& sample_token(const TokenDistribution& d, Rng& rng);

inline constexpr std::string_view bos_marker = "<s>";
inline constexpr std::string_view eos_marker = "</s>";

/// Maximum-likelihood n-gram model with backoff to the longest context
/// seen in training.
class NgramModel {
  public:
    /// Throws UntrainedModel when no text yields a token, InvalidArgument
    /// for order < 1.
    static NgramModel train(const std::vector<std::string>& texts, std::size_t order);

    std::size_t order() const { return order_; }
    std::size_t vocabulary_size() const { return vocabulary_.size(); }

    /// Distribution over the next token (eos included) given the history
    /// (bos markers are implied before it).
    TokenDistribution next_distribution(const Tokens& history) const;

    /// Samples up to max_length tokens (eos ends generation early) and joins
    /// them with spaces.
    std::string generate(std::string_view source, const DecodingConfig& config) const;
    Tokens generate_tokens(std::string_view source, const DecodingConfig& config) const;

  private:
    NgramModel() = default;

    std::size_t order_ = 1;
    // context (joined with '\x1f') -> next token -> count, one map per context length
    std::vector<std::map<std::string, std::map<std::string, std::uint64_t>>> tables_;
    std::map<std::string, std::uint64_t> vocabulary_;
};

/// Majority stance label among train-split non-thesis claims.
Stance corpus_prior(const Corpus& corpus, const SplitAssignment& split);

/// Stance toward its parent predicted for a new claim under `parent`. When
/// the persona summarizes the parent's discussion, the author's majority
/// thesis stance (pro on ties) is mapped through the parent's own thesis
/// stance: agreeing with the parent's side of the thesis predicts pro.
/// Otherwise the prior.
Stance baseline_stance(const Discussion& discussion, const Claim& parent,
                       const ImplicitPersona& persona, Stance prior);

struct BinaryScores {
    double accuracy = 0.0;
    double f1_pro = 0.0;
    double f1_con = 0.0;
    double macro_f1 = 0.0;
    std::size_t count = 0;
};

/// Scores in percent.
BinaryScores score_predictions(const std::vector<Stance>& gold, const std::vector<Stance>& predicted);

struct StancePrediction {
    std::string claim_id;
    Stance gold;
    Stance persona;
    Stance majority;
};

struct BaselineEvaluation {
    Stance prior = Stance::pro;
    std::vector<StancePrediction> predictions;
    BinaryScores persona_scores;
    BinaryScores majority_scores;
};

/// Runs the persona-aware baseline and the majority baseline on every
/// non-thesis claim of one split. The implicit persona of each claim is
/// built from train claims with the claim itself left out.
BaselineEvaluation evaluate_stance_baselines(const Corpus& corpus, const SplitAssignment& split,
                                             Split which);

} // namespace stancekit
