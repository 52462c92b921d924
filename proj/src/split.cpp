#include "stancekit/split.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "stancekit/error.hpp"
#include "stancekit/rng.hpp"

namespace stancekit {

std::string_view to_string(Split s) {
    switch (s) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::test: return "test";
    }
    return "train";
}

std::optional<Split> parse_split(std::string_view s) {
    if (s == "train") return Split::train;
    if (s == "validation") return Split::validation;
    if (s == "test") return Split::test;
    return std::nullopt;
}

Split SplitAssignment::of(std::string_view discussion_id) const {
    auto it = assignment.find(discussion_id);
    if (it == assignment.end()) {
        throw Error(ErrorKind::InvalidArgument,
                    "discussion " + std::string(discussion_id) + " has no split assignment");
    }
    return it->second;
}

std::size_t SplitAssignment::count(Split s) const {
    return static_cast<std::size_t>(std::count_if(
        assignment.begin(), assignment.end(), [s](const auto& kv) { return kv.second == s; }));
}

std::size_t stratum_quota(double fraction, std::size_t size) {
    const double exact = fraction * static_cast<double>(size);
    return static_cast<std::size_t>(std::floor(exact + 0.5 + 1e-9));
}

namespace {

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

SplitAssignment stratified_split(const Corpus& corpus, double val_fraction, double test_fraction,
                                 std::uint64_t seed) {
    if (!(val_fraction >= 0.0) || !(test_fraction >= 0.0) || !(val_fraction + test_fraction < 1.0)) {
        throw Error(ErrorKind::FractionOutOfRange,
                    "need 0 <= val + test < 1, got val=" + format_double(val_fraction) +
                        " test=" + format_double(test_fraction));
    }
    const auto discussions = corpus.discussions();
    std::vector<std::size_t> sizes;
    sizes.reserve(discussions.size());
    for (const Discussion& d : discussions) sizes.push_back(d.size());
    std::vector<std::size_t> sorted = sizes;
    std::sort(sorted.begin(), sorted.end());

    const std::size_t n = sorted.size();
    std::size_t cut[3];
    for (std::size_t k = 1; k <= 3; ++k) {
        const std::size_t rank = (k * n + 3) / 4; // ceil(k*n/4), >= 1 for n >= 1
        cut[k - 1] = sorted[rank - 1];
    }

    std::vector<std::vector<std::size_t>> members(4);
    for (std::size_t i = 0; i < discussions.size(); ++i) {
        std::size_t bin = 0;
        for (std::size_t k = 0; k < 3; ++k) {
            if (sizes[i] > cut[k]) bin = k + 1;
        }
        members[bin].push_back(i); // discussions() is already in id order
    }

    SplitAssignment out;
    out.seed = seed;
    out.val_fraction = val_fraction;
    out.test_fraction = test_fraction;
    out.strata_spec = "nearest-rank quartiles of claims per discussion: q1=" +
                      std::to_string(cut[0]) + " q2=" + std::to_string(cut[1]) +
                      " q3=" + std::to_string(cut[2]) +
                      "; bins [min,q1] (q1,q2] (q2,q3] (q3,max]; round half away from zero";

    Rng rng(seed);
    for (auto& bin : members) {
        Stratum st;
        st.size = bin.size();
        if (!bin.empty()) {
            st.min_claims = sizes[bin.front()];
            st.max_claims = sizes[bin.front()];
            for (std::size_t i : bin) {
                st.min_claims = std::min(st.min_claims, sizes[i]);
                st.max_claims = std::max(st.max_claims, sizes[i]);
            }
        }
        st.validation = stratum_quota(val_fraction, bin.size());
        st.test = stratum_quota(test_fraction, bin.size());
        const std::size_t drawn = st.validation + st.test;
        for (std::size_t j = 0; j < drawn; ++j) {
            const std::size_t pick = j + static_cast<std::size_t>(rng.below(bin.size() - j));
            std::swap(bin[j], bin[pick]);
        }
        for (std::size_t j = 0; j < bin.size(); ++j) {
            Split s = Split::train;
            if (j < st.validation) {
                s = Split::validation;
            } else if (j < drawn) {
                s = Split::test;
            }
            out.assignment.emplace(discussions[bin[j]].id(), s);
        }
        out.strata.push_back(st);
    }
    return out;
}

void check_split_covers(const SplitAssignment& split, const Corpus& corpus) {
    for (const Discussion& d : corpus.discussions()) {
        if (split.assignment.find(d.id()) == split.assignment.end()) {
            throw Error(ErrorKind::MalformedRecord,
                        "split assignment is missing discussion " + d.id());
        }
    }
    for (const auto& [id, s] : split.assignment) {
        if (corpus.find_discussion(id) == nullptr) {
            throw Error(ErrorKind::MalformedRecord,
                        "split assignment names unknown discussion " + id);
        }
    }
}

void write_split(std::ostream& out, const SplitAssignment& split) {
    out << "# format=stancekit-split\n";
    out << "# version=1\n";
    out << "# seed=" << split.seed << '\n';
    out << "# val_fraction=" << format_double(split.val_fraction) << '\n';
    out << "# test_fraction=" << format_double(split.test_fraction) << '\n';
    out << "# strata=" << split.strata_spec << '\n';
    out << "discussion_id\tsplit\n";
    for (const auto& [id, s] : split.assignment) {
        out << id << '\t' << to_string(s) << '\n';
    }
}

SplitAssignment read_split(std::istream& in) {
    SplitAssignment out;
    std::string line;
    std::size_t lineno = 0;
    bool saw_header = false;
    auto bad = [&](const std::string& why) {
        return Error(ErrorKind::MalformedRecord, "split line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto body = line.substr(line.find_first_not_of("# "));
            const auto eq = body.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = body.substr(0, eq);
            const std::string value = body.substr(eq + 1);
            try {
                if (key == "format" && value != "stancekit-split") throw bad("unknown format " + value);
                if (key == "version" && value != "1") throw bad("unsupported version " + value);
                if (key == "seed") out.seed = std::stoull(value);
                if (key == "val_fraction") out.val_fraction = std::stod(value);
                if (key == "test_fraction") out.test_fraction = std::stod(value);
                if (key == "strata") out.strata_spec = value;
            } catch (const std::logic_error&) {
                throw bad("bad value for " + key);
            }
            continue;
        }
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw bad("expected two tab-separated columns");
        const std::string id = line.substr(0, tab);
        const std::string label = line.substr(tab + 1);
        if (!saw_header) {
            saw_header = true;
            if (id == "discussion_id") continue;
        }
        auto s = parse_split(label);
        if (!s) throw bad("unknown split " + label);
        if (!out.assignment.emplace(id, *s).second) throw bad("discussion " + id + " assigned twice");
    }
    return out;
}

SplitAssignment load_split(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::InvalidArgument, "cannot open split file " + path);
    }
    return read_split(in);
}

BucketTable bucket_table(const Corpus& corpus, const SplitAssignment& split, std::size_t threshold) {
    if (threshold < 1) {
        throw Error(ErrorKind::InvalidArgument, "bucket threshold must be >= 1");
    }
    check_split_covers(split, corpus);
    StringMap<std::size_t> train_claims;
    for (const Discussion& d : corpus.discussions()) {
        if (split.of(d.id()) != Split::train) continue;
        for (const Claim& c : d.claims()) ++train_claims[c.author_id];
    }
    BucketTable table;
    table.threshold = threshold;
    for (Split s : {Split::train, Split::validation, Split::test}) {
        table.rows.push_back({s, std::vector<std::size_t>(threshold + 1, 0), 0});
    }
    for (const Discussion& d : corpus.discussions()) {
        const Split s = split.of(d.id());
        BucketRow& row = table.rows[static_cast<std::size_t>(s)];
        for (const Claim& c : d.claims()) {
            auto it = train_claims.find(c.author_id);
            std::size_t size = it == train_claims.end() ? 0 : it->second;
            if (s == Split::train) --size; // the claim itself is not part of its persona
            ++row.counts[std::min(size, threshold)];
            ++row.total;
        }
    }
    return table;
}

std::string format_bucket_table(const BucketTable& table) {
    std::ostringstream out;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-12s", "split");
    out << buf;
    for (std::size_t k = 0; k < table.threshold; ++k) {
        std::snprintf(buf, sizeof buf, "%10s", ("#=" + std::to_string(k)).c_str());
        out << buf;
    }
    std::snprintf(buf, sizeof buf, "%10s%10s\n", ("#>=" + std::to_string(table.threshold)).c_str(),
                  "#TOTAL");
    out << buf;
    for (const BucketRow& row : table.rows) {
        std::snprintf(buf, sizeof buf, "%-12s", std::string(to_string(row.split)).c_str());
        out << buf;
        for (std::size_t v : row.counts) {
            std::snprintf(buf, sizeof buf, "%10zu", v);
            out << buf;
        }
        std::snprintf(buf, sizeof buf, "%10zu\n", row.total);
        out << buf;
    }
    return out.str();
}

} // namespace stancekit
