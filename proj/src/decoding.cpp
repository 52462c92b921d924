#include "stancekit/decoding.hpp"

#include <algorithm>
#include <cmath>

#include "stancekit/error.hpp"

namespace stancekit {

TokenDistribution::TokenDistribution(std::vector<TokenProb> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw Error(ErrorKind::InvalidArgument, "token distribution has empty support");
    }
    double sum = 0.0;
    for (const auto& e : entries_) {
        if (!(e.probability >= 0.0)) {
            throw Error(ErrorKind::InvalidArgument, "negative probability for token " + e.token);
        }
        sum += e.probability;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw Error(ErrorKind::InvalidArgument, "token probabilities sum to " + std::to_string(sum));
    }
}

double TokenDistribution::mass_of(std::string_view token) const {
    double m = 0.0;
    for (const auto& e : entries_) {
        if (e.token == token) m += e.probability;
    }
    return m;
}

TokenDistribution nucleus_filter(const TokenDistribution& d, double top_p) {
    if (!(top_p > 0.0 && top_p <= 1.0)) {
        throw Error(ErrorKind::InvalidP, "top_p must be in (0, 1], got " + std::to_string(top_p));
    }
    std::vector<TokenProb> sorted = d.entries();
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const TokenProb& a, const TokenProb& b) { return a.probability > b.probability; });
    // The 1e-12 slack absorbs summation error when top_p equals a prefix mass
    // exactly (top_p = 1.0 in particular).
    double cumulative = 0.0;
    std::size_t keep = sorted.size();
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        cumulative += sorted[i].probability;
        if (cumulative >= top_p - 1e-12) {
            keep = i + 1;
            break;
        }
    }
    sorted.resize(keep);
    double mass = 0.0;
    for (const auto& e : sorted) mass += e.probability;
    for (auto& e : sorted) e.probability /= mass;
    return TokenDistribution(std::move(sorted));
}

const std::string& sample_token(const TokenDistribution& d, Rng& rng) {
    const double u = rng.uniform01();
    double cumulative = 0.0;
    const auto& entries = d.entries();
    for (const auto& e : entries) {
        cumulative += e.probability;
        if (u < cumulative) return e.token;
    }
    // u landed in the rounding gap above the final partial sum
    for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
        if (it->probability > 0.0) return it->token;
    }
    return entries.back().token;
}

namespace {

std::string context_key(const Tokens& padded, std::size_t end, std::size_t length) {
    std::string key;
    for (std::size_t i = end - length; i < end; ++i) {
        if (!key.empty()) key += '\x1f';
        key += padded[i];
    }
    return key;
}

} // namespace

NgramModel NgramModel::train(const std::vector<std::string>& texts, std::size_t order) {
    if (order < 1) throw Error(ErrorKind::InvalidArgument, "n-gram order must be >= 1");
    NgramModel m;
    m.order_ = order;
    m.tables_.resize(order);
    bool any = false;
    for (const auto& text : texts) {
        const Tokens tokens = tokenize(text);
        if (tokens.empty()) continue;
        any = true;
        Tokens padded(order - 1, std::string(bos_marker));
        padded.insert(padded.end(), tokens.begin(), tokens.end());
        padded.emplace_back(eos_marker);
        for (std::size_t i = order - 1; i < padded.size(); ++i) {
            ++m.vocabulary_[padded[i]];
            for (std::size_t k = 0; k < order; ++k) {
                ++m.tables_[k][context_key(padded, i, k)][padded[i]];
            }
        }
    }
    if (!any) throw Error(ErrorKind::UntrainedModel, "no training text produced any token");
    return m;
}

TokenDistribution NgramModel::next_distribution(const Tokens& history) const {
    if (tables_.empty()) throw Error(ErrorKind::UntrainedModel, "model has no tables");
    Tokens padded(order_ - 1, std::string(bos_marker));
    padded.insert(padded.end(), history.begin(), history.end());
    for (std::size_t k = order_; k-- > 0;) {
        auto it = tables_[k].find(context_key(padded, padded.size(), k));
        if (it == tables_[k].end()) continue;
        std::uint64_t total = 0;
        for (const auto& [tok, c] : it->second) total += c;
        std::vector<TokenProb> entries;
        entries.reserve(it->second.size());
        for (const auto& [tok, c] : it->second) {
            entries.push_back({tok, static_cast<double>(c) / static_cast<double>(total)});
        }
        return TokenDistribution(std::move(entries));
    }
    throw Error(ErrorKind::UntrainedModel, "no context matched, not even the unigram table");
}

Tokens NgramModel::generate_tokens(std::string_view source, const DecodingConfig& config) const {
    if (tables_.empty()) throw Error(ErrorKind::UntrainedModel, "model has no tables");
    if (!(config.copy_weight >= 0.0 && config.copy_weight <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "copy_weight must be in [0, 1]");
    }
    Rng rng(config.seed);
    std::map<std::string, double> copy;
    const Tokens src = tokenize(source);
    if (config.copy_weight > 0.0) {
        for (const auto& t : src) copy[t] += 1.0 / static_cast<double>(src.size());
    }
    Tokens out;
    while (out.size() < config.max_length) {
        TokenDistribution next = next_distribution(out);
        if (!copy.empty()) {
            std::map<std::string, double> mixed;
            for (const auto& e : next.entries()) mixed[e.token] += (1.0 - config.copy_weight) * e.probability;
            for (const auto& [tok, p] : copy) mixed[tok] += config.copy_weight * p;
            std::vector<TokenProb> entries;
            for (const auto& [tok, p] : mixed) entries.push_back({tok, p});
            next = TokenDistribution(std::move(entries));
        }
        const std::string tok = sample_token(nucleus_filter(next, config.top_p), rng);
        if (tok == eos_marker) break;
        out.push_back(tok);
    }
    return out;
}

std::string NgramModel::generate(std::string_view source, const DecodingConfig& config) const {
    std::string text;
    for (const auto& t : generate_tokens(source, config)) {
        if (!text.empty()) text += ' ';
        text += t;
    }
    return text;
}

Stance corpus_prior(const Corpus& corpus, const SplitAssignment& split) {
    std::size_t pro = 0;
    std::size_t con = 0;
    for (const Discussion& d : corpus.discussions()) {
        if (split.of(d.id()) != Split::train) continue;
        for (const Claim& c : d.claims()) {
            if (c.stance == Stance::pro) ++pro;
            if (c.stance == Stance::con) ++con;
        }
    }
    return pro >= con ? Stance::pro : Stance::con;
}

Stance baseline_stance(const Discussion& discussion, const Claim& parent,
                       const ImplicitPersona& persona, Stance prior) {
    for (const auto& e : persona.entries) {
        if (e.discussion_id != discussion.id()) continue;
        const Stance author = e.pro_count >= e.con_count ? Stance::pro : Stance::con;
        const Stance parent_side =
            parent.is_thesis() ? Stance::pro : propagate_stance(discussion, parent.claim_id);
        return author == parent_side ? Stance::pro : Stance::con;
    }
    return prior;
}

BinaryScores score_predictions(const std::vector<Stance>& gold, const std::vector<Stance>& predicted) {
    if (gold.size() != predicted.size()) {
        throw Error(ErrorKind::InvalidArgument, "gold and predicted lengths differ");
    }
    if (gold.empty()) throw Error(ErrorKind::EmptyInput, "no predictions to score");
    auto f1 = [&](Stance label) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < gold.size(); ++i) {
            if (predicted[i] == label && gold[i] == label) ++tp;
            if (predicted[i] == label && gold[i] != label) ++fp;
            if (predicted[i] != label && gold[i] == label) ++fn;
        }
        const std::size_t denom = 2 * tp + fp + fn;
        return denom == 0 ? 0.0 : 100.0 * 2.0 * static_cast<double>(tp) / static_cast<double>(denom);
    };
    BinaryScores s;
    s.count = gold.size();
    std::size_t correct = 0;
    for (std::size_t i = 0; i < gold.size(); ++i) correct += gold[i] == predicted[i] ? 1 : 0;
    s.accuracy = 100.0 * static_cast<double>(correct) / static_cast<double>(gold.size());
    s.f1_pro = f1(Stance::pro);
    s.f1_con = f1(Stance::con);
    s.macro_f1 = (s.f1_pro + s.f1_con) / 2.0;
    return s;
}

BaselineEvaluation evaluate_stance_baselines(const Corpus& corpus, const SplitAssignment& split,
                                             Split which) {
    check_split_covers(split, corpus);
    BaselineEvaluation ev;
    ev.prior = corpus_prior(corpus, split);
    std::vector<Stance> gold;
    std::vector<Stance> persona;
    std::vector<Stance> majority;
    for (const Discussion& d : corpus.discussions()) {
        if (split.of(d.id()) != which) continue;
        for (const Claim& c : d.claims()) {
            if (c.is_thesis()) continue;
            const auto implicit = implicit_persona(corpus, split, c.author_id, c.claim_id);
            const Stance p = baseline_stance(d, *d.parent_of(c), implicit, ev.prior);
            ev.predictions.push_back({c.claim_id, c.stance, p, ev.prior});
            gold.push_back(c.stance);
            persona.push_back(p);
            majority.push_back(ev.prior);
        }
    }
    if (gold.empty()) {
        throw Error(ErrorKind::EmptyInput,
                    "split " + std::string(to_string(which)) + " has no non-thesis claims");
    }
    ev.persona_scores = score_predictions(gold, persona);
    ev.majority_scores = score_predictions(gold, majority);
    return ev;
}

} // namespace stancekit
