#include "stancekit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "stancekit/error.hpp"

namespace stancekit {

namespace {

bool is_space(unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_punct(unsigned char c) {
    return (c >= 33 && c <= 47) || (c >= 58 && c <= 64) || (c >= 91 && c <= 96) ||
           (c >= 123 && c <= 126);
}

std::string ngram_key(const Tokens& t, std::size_t start, int n) {
    std::string key = t[start];
    for (int k = 1; k < n; ++k) {
        key += '\x1f';
        key += t[start + static_cast<std::size_t>(k)];
    }
    return key;
}

std::unordered_map<std::string, std::size_t> ngram_counts(const Tokens& t, int n) {
    std::unordered_map<std::string, std::size_t> counts;
    const auto un = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + un <= t.size(); ++i) ++counts[ngram_key(t, i, n)];
    return counts;
}

std::size_t ngram_total(const Tokens& t, int n) {
    const auto un = static_cast<std::size_t>(n);
    return t.size() >= un ? t.size() - un + 1 : 0;
}

} // namespace

Tokens tokenize(std::string_view text) {
    Tokens out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    };
    for (char ch : text) {
        const auto c = static_cast<unsigned char>(ch);
        if (is_space(c)) {
            flush();
        } else if (is_punct(c)) {
            flush();
            out.emplace_back(1, ch);
        } else if (c >= 'A' && c <= 'Z') {
            cur += static_cast<char>(c - 'A' + 'a');
        } else {
            cur += ch;
        }
    }
    flush();
    return out;
}

double bleu(const Tokens& hypothesis, const Tokens& reference, int max_n) {
    if (max_n < 1 || max_n > 4) {
        throw Error(ErrorKind::InvalidArgument, "BLEU order must be in 1..4");
    }
    if (hypothesis.empty()) return 0.0;
    double log_sum = 0.0;
    for (int n = 1; n <= max_n; ++n) {
        const auto hyp = ngram_counts(hypothesis, n);
        const auto ref = ngram_counts(reference, n);
        std::size_t matched = 0;
        for (const auto& [gram, count] : hyp) {
            auto it = ref.find(gram);
            if (it != ref.end()) matched += std::min(count, it->second);
        }
        const std::size_t total = ngram_total(hypothesis, n);
        const double numerator = matched == 0 ? bleu_epsilon : static_cast<double>(matched);
        const double denominator = total == 0 ? 1.0 : static_cast<double>(total);
        log_sum += std::log(numerator / denominator);
    }
    const double ratio =
        static_cast<double>(reference.size()) / static_cast<double>(hypothesis.size());
    const double brevity = std::exp(std::min(0.0, 1.0 - ratio));
    return 100.0 * brevity * std::exp(log_sum / max_n);
}

double bleu(std::string_view hypothesis, std::string_view reference, int max_n) {
    return bleu(tokenize(hypothesis), tokenize(reference), max_n);
}

std::size_t lcs_length(const Tokens& a, const Tokens& b) {
    std::vector<std::size_t> prev(b.size() + 1, 0);
    std::vector<std::size_t> cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double rouge_l(const Tokens& hypothesis, const Tokens& reference) {
    if (hypothesis.empty() || reference.empty()) return 0.0;
    const auto lcs = static_cast<double>(lcs_length(hypothesis, reference));
    const double p = lcs / static_cast<double>(hypothesis.size());
    const double r = lcs / static_cast<double>(reference.size());
    if (p + r == 0.0) return 0.0;
    return 100.0 * 2.0 * p * r / (p + r);
}

double rouge_l(std::string_view hypothesis, std::string_view reference) {
    return rouge_l(tokenize(hypothesis), tokenize(reference));
}

double rep_n(const Tokens& hypothesis, int n) {
    const std::size_t total = ngram_total(hypothesis, n);
    if (total == 0) return 0.0;
    const std::size_t unique = ngram_counts(hypothesis, n).size();
    return 100.0 * (1.0 - static_cast<double>(unique) / static_cast<double>(total));
}

double abs_n(const Tokens& hypothesis, const Tokens& source, int n) {
    const std::size_t total = ngram_total(hypothesis, n);
    if (total == 0) return 0.0;
    const auto src = ngram_counts(source, n);
    std::size_t absent = 0;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= hypothesis.size(); ++i) {
        if (src.find(ngram_key(hypothesis, i, n)) == src.end()) ++absent;
    }
    return 100.0 * static_cast<double>(absent) / static_cast<double>(total);
}

MetricReport evaluate_system(const std::vector<EvalPair>& pairs) {
    if (pairs.empty()) {
        throw Error(ErrorKind::EmptyInput, "evaluation needs at least one sample");
    }
    MetricReport r;
    for (const EvalPair& p : pairs) {
        const Tokens hyp = tokenize(p.hypothesis);
        const Tokens ref = tokenize(p.reference);
        const Tokens src = tokenize(p.source);
        r.length_mean += static_cast<double>(hyp.size());
        r.rep3 += rep_n(hyp, 3);
        r.abs3 += abs_n(hyp, src, 3);
        r.bleu1 += bleu(hyp, ref, 1);
        r.bleu4 += bleu(hyp, ref, 4);
        r.rouge_l += rouge_l(hyp, ref);
    }
    const auto n = static_cast<double>(pairs.size());
    r.length_mean /= n;
    r.rep3 /= n;
    r.abs3 /= n;
    r.bleu1 /= n;
    r.bleu4 /= n;
    r.rouge_l /= n;
    r.sample_count = pairs.size();
    return r;
}

std::string report_to_json(const MetricReport& report, std::string_view system) {
    nlohmann::ordered_json j;
    j["system"] = system;
    j["sample_count"] = report.sample_count;
    j["length"] = report.length_mean;
    j["rep3"] = report.rep3;
    j["abs3"] = report.abs3;
    j["bleu1"] = report.bleu1;
    j["bleu4"] = report.bleu4;
    j["rouge_l"] = report.rouge_l;
    j["settings"] = {{"bleu_aggregation", "sentence-mean"},
                     {"bleu_smoothing", "zero-count epsilon 1e-9"},
                     {"rouge_l", "LCS F1, beta=1"},
                     {"abs3_unit", "trigrams"},
                     {"tokenizer", "lowercase, whitespace, punctuation split"}};
    return j.dump(2);
}

std::string format_report_table(
    const std::vector<std::pair<std::string, MetricReport>>& systems) {
    std::size_t width = 6;
    for (const auto& [name, r] : systems) width = std::max(width, name.size());
    std::ostringstream out;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-*s %8s %8s %8s %8s %8s %8s\n", static_cast<int>(width),
                  "system", "LENGTH", "REP-3", "ABS-3", "BLEU-1", "BLEU-4", "ROUGE-L");
    out << buf;
    for (const auto& [name, r] : systems) {
        std::snprintf(buf, sizeof buf, "%-*s %8.2f %8.2f %8.2f %8.2f %8.2f %8.2f\n",
                      static_cast<int>(width), name.c_str(), r.length_mean, r.rep3, r.abs3,
                      r.bleu1, r.bleu4, r.rouge_l);
        out << buf;
    }
    return out.str();
}

ZipfCurve zipf_cdf(const std::vector<std::string>& texts) {
    std::map<std::string, std::uint64_t> counts;
    for (const auto& text : texts) {
        for (auto& tok : tokenize(text)) ++counts[std::move(tok)];
    }
    std::vector<std::pair<std::string, std::uint64_t>> ranked(counts.begin(), counts.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    ZipfCurve curve;
    for (const auto& [tok, f] : ranked) curve.total_tokens += f;
    std::uint64_t running = 0;
    for (auto& [tok, f] : ranked) {
        running += f;
        curve.tokens.push_back(tok);
        curve.frequencies.push_back(f);
        // integer prefix sums keep the final point exactly 1.0
        curve.cdf.push_back(static_cast<double>(running) / static_cast<double>(curve.total_tokens));
    }
    return curve;
}

void write_zipf_csv(std::ostream& out, const ZipfCurve& curve) {
    out << "rank,frequency,cdf\n";
    char buf[64];
    for (std::size_t i = 0; i < curve.frequencies.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%llu,%.17g\n", i + 1,
                      static_cast<unsigned long long>(curve.frequencies[i]), curve.cdf[i]);
        out << buf;
    }
}

std::vector<ZipfRow> read_zipf_csv(std::istream& in) {
    std::vector<ZipfRow> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 && line.rfind("rank,", 0) == 0) continue;
        if (line.empty()) continue;
        ZipfRow row{};
        unsigned long long freq = 0;
        if (std::sscanf(line.c_str(), "%zu,%llu,%lf", &row.rank, &freq, &row.cdf) != 3) {
            throw Error(ErrorKind::MalformedRecord, "zipf csv line " + std::to_string(lineno));
        }
        row.frequency = freq;
        rows.push_back(row);
    }
    return rows;
}

} // namespace stancekit
