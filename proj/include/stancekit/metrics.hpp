#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace stancekit {

using Tokens = std::vector<std::string>;

/// ASCII-lowercases, splits on whitespace, and emits every ASCII punctuation
/// character as its own token. Bytes >= 0x80 are kept verbatim inside words.
Tokens tokenize(std::string_view text);

/// Added to a zero clipped n-gram match count before taking the log.
inline constexpr double bleu_epsilon = 1e-9;

/// Sentence BLEU against one reference, in percent. Geometric mean of
/// modified n-gram precisions for n = 1..max_n times the brevity penalty
/// exp(min(0, 1 - |ref|/|hyp|)). Empty hypothesis scores 0.
double bleu(const Tokens& hypothesis, const Tokens& reference, int max_n);
double bleu(std::string_view hypothesis, std::string_view reference, int max_n);

std::size_t lcs_length(const Tokens& a, const Tokens& b);

/// LCS-based F1 (beta = 1), in percent.
double rouge_l(const Tokens& hypothesis, const Tokens& reference);
double rouge_l(std::string_view hypothesis, std::string_view reference);

/// 100 * (1 - unique n-grams / total n-grams); 0 with fewer than n tokens.
double rep_n(const Tokens& hypothesis, int n);

/// 100 * fraction of hypothesis n-grams (occurrences) absent from the set of
/// source n-grams; 0 when the hypothesis has fewer than n tokens.
double abs_n(const Tokens& hypothesis, const Tokens& source, int n);

struct MetricReport {
    double length_mean = 0.0;
    double rep3 = 0.0;
    double abs3 = 0.0;
    double bleu1 = 0.0;
    double bleu4 = 0.0;
    double rouge_l = 0.0;
    std::size_t sample_count = 0;
};

struct EvalPair {
    std::string source;
    std::string hypothesis;
    std::string reference;
};

/// Per-sample metrics averaged over the pairs. Throws EmptyInput for none.
MetricReport evaluate_system(const std::vector<EvalPair>& pairs);

/// Report as a JSON object string, including the aggregation settings.
std::string report_to_json(const MetricReport& report, std::string_view system);

/// Results table: one row per named system, columns
/// LENGTH REP-3 ABS-3 BLEU-1 BLEU-4 ROUGE-L.
std::string format_report_table(
    const std::vector<std::pair<std::string, MetricReport>>& systems);

struct ZipfCurve {
    std::vector<std::string> tokens;       // descending frequency, ties by token
    std::vector<std::uint64_t> frequencies;
    std::vector<double> cdf;
    std::uint64_t total_tokens = 0;
};

ZipfCurve zipf_cdf(const std::vector<std::string>& texts);

/// CSV with header "rank,frequency,cdf"; cdf printed round-trip exact.
void write_zipf_csv(std::ostream& out, const ZipfCurve& curve);

struct ZipfRow {
    std::size_t rank;
    std::uint64_t frequency;
    double cdf;
};
std::vector<ZipfRow> read_zipf_csv(std::istream& in);

} // namespace stancekit
