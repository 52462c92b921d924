#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "stancekit/error.hpp"
#include "stancekit/ingest.hpp"
#include "stancekit/split.hpp"
#include "support.hpp"

using namespace stancekit;

namespace {

ErrorKind parse_error(const std::string& text, IngestOptions opts = {}) {
    std::istringstream in(text);
    try {
        parse_corpus(in, opts);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected a parse error");
    return ErrorKind::EmptyInput;
}

std::string record(const std::string& id, const std::string& did, const std::string& parent,
                   const std::string& label, const std::string& author = "\"a\"") {
    return "{\"claim_id\":\"" + id + "\",\"discussion_id\":\"" + did + "\",\"author_id\":" + author +
           ",\"parent_id\":" + parent + ",\"text\":\"text " + id + "\",\"stance_label\":\"" + label +
           "\"}\n";
}

/// Corpus with discussions of the given sizes (each a star around its thesis).
Corpus sized_corpus(const std::vector<std::size_t>& sizes) {
    std::vector<std::vector<Claim>> groups;
    for (std::size_t d = 0; d < sizes.size(); ++d) {
        const std::string did = "d" + std::to_string(10000 + d);
        std::vector<Claim> g;
        for (std::size_t i = 0; i < sizes[d]; ++i) {
            const std::string id = did + "-" + std::to_string(i);
            if (i == 0) {
                g.push_back(testing::claim(id, did, "a" + std::to_string(d % 17), std::nullopt, "t", Stance::thesis));
            } else {
                g.push_back(testing::claim(id, did, "a" + std::to_string((d + i) % 17), did + "-0", "c", Stance::pro));
            }
        }
        groups.push_back(std::move(g));
    }
    return testing::corpus_from(std::move(groups));
}

} // namespace

TEST_CASE("parse_corpus") {
    SUBCASE("empty stream") {
        CHECK(parse_error("") == ErrorKind::EmptyCorpus);
        CHECK(parse_error("{\"format\":\"stancekit-corpus\",\"version\":1}\n") == ErrorKind::EmptyCorpus);
    }
    SUBCASE("three-line chain fixture without header") {
        auto c = load_corpus(testing::fixture_path("chain3.jsonl"));
        CHECK(c.discussions().size() == 1);
        CHECK(c.claim_count() == 3);
        CHECK(c.discussions()[0].max_depth() == 2);
    }
    SUBCASE("missing stance_label names the field") {
        std::istringstream in(
            "{\"claim_id\":\"c\",\"discussion_id\":\"d\",\"author_id\":\"a\",\"parent_id\":null,\"text\":\"t\"}\n");
        try {
            parse_corpus(in);
            FAIL("expected MissingField");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::MissingField);
            CHECK(std::string(e.what()).find("stance_label") != std::string::npos);
        }
    }
    SUBCASE("malformed line carries its line number") {
        std::istringstream in(record("c1", "d", "null", "thesis") + "{not json\n");
        try {
            parse_corpus(in);
            FAIL("expected MalformedRecord");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::MalformedRecord);
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }
    SUBCASE("unknown stance label") {
        CHECK(parse_error(record("c1", "d", "null", "maybe")) == ErrorKind::MalformedRecord);
    }
    SUBCASE("thesis label with a parent is rejected at parse") {
        CHECK(parse_error(record("c1", "d", "null", "thesis") + record("c2", "d", "\"c1\"", "thesis")) ==
              ErrorKind::InconsistentStance);
    }
    SUBCASE("parent_id must be present, even if null") {
        CHECK(parse_error("{\"claim_id\":\"c\",\"discussion_id\":\"d\",\"author_id\":\"a\",\"text\":\"t\","
                          "\"stance_label\":\"thesis\"}\n") == ErrorKind::MissingField);
    }
    SUBCASE("missing authors are rejected unless synthesized") {
        const std::string text = record("c1", "d", "null", "thesis", "null") +
                                 record("c2", "d", "\"c1\"", "pro", "\"\"");
        CHECK(parse_error(text) == ErrorKind::MissingField);
        std::istringstream in(text);
        auto c = parse_corpus(in, {.synthesize_missing_authors = true});
        CHECK(c.find_claim("c1")->author_id == "anon:c1");
        CHECK(c.find_claim("c2")->author_id == "anon:c2");
    }
    SUBCASE("tree errors surface from ingest") {
        CHECK(parse_error(record("c1", "d", "\"c2\"", "pro") + record("c2", "d", "\"c1\"", "con")) ==
              ErrorKind::CycleDetected);
        CHECK(parse_error(record("c1", "d", "null", "thesis") + record("c2", "d", "\"zz\"", "con")) ==
              ErrorKind::DanglingParent);
    }
    SUBCASE("non-contiguous discussion records") {
        CHECK(parse_error(record("c1", "d", "null", "thesis") + record("e1", "e", "null", "thesis") +
                          record("c2", "d", "\"c1\"", "pro")) == ErrorKind::MalformedRecord);
    }
    SUBCASE("unknown header version") {
        CHECK(parse_error("{\"format\":\"stancekit-corpus\",\"version\":9}\n" + record("c1", "d", "null", "thesis")) ==
              ErrorKind::MalformedRecord);
    }
}

TEST_CASE("reader yields one discussion at a time") {
    std::istringstream in(record("c1", "d", "null", "thesis") + record("c2", "d", "\"c1\"", "pro") +
                          record("e1", "e", "null", "thesis"));
    CorpusReader reader(in);
    auto first = reader.next();
    REQUIRE(first);
    CHECK(first->id() == "d");
    CHECK(first->size() == 2);
    auto second = reader.next();
    REQUIRE(second);
    CHECK(second->id() == "e");
    CHECK_FALSE(reader.next());
}

TEST_CASE("write_corpus then parse_corpus reproduces the corpus") {
    auto c = load_corpus(testing::fixture_path("fixture_corpus.jsonl"));
    std::ostringstream out;
    write_corpus(out, c);
    std::istringstream in(out.str());
    auto back = parse_corpus(in);
    REQUIRE(back.claim_count() == c.claim_count());
    for (const Discussion& d : c.discussions()) {
        for (const Claim& x : d.claims()) {
            const Claim* y = back.find_claim(x.claim_id);
            REQUIRE(y != nullptr);
            CHECK(y->text == x.text);
            CHECK(y->author_id == x.author_id);
            CHECK(y->parent_id == x.parent_id);
            CHECK(y->stance == x.stance);
        }
    }
    std::ostringstream again;
    write_corpus(again, back);
    CHECK(again.str() == out.str());
}

TEST_CASE("stratum quota rounds half away from zero") {
    CHECK(stratum_quota(0.05, 20) == 1);
    CHECK(stratum_quota(0.05, 30) == 2); // 1.5
    CHECK(stratum_quota(0.05, 29) == 1); // 1.45
    CHECK(stratum_quota(0.05, 1580) == 79);
    CHECK(stratum_quota(0.0, 100) == 0);
}

TEST_CASE("stratified_split") {
    SUBCASE("20 equal-size discussions at 5%/5%") {
        auto c = sized_corpus(std::vector<std::size_t>(20, 3));
        auto s = stratified_split(c, 0.05, 0.05, 1);
        CHECK(s.count(Split::validation) == 1);
        CHECK(s.count(Split::test) == 1);
        CHECK(s.count(Split::train) == 18);
        // all ties land in the first bin
        CHECK(s.strata[0].size == 20);
    }
    SUBCASE("deterministic for a fixed seed, seed-sensitive otherwise") {
        std::mt19937_64 rng(3);
        std::vector<std::size_t> sizes;
        for (int i = 0; i < 300; ++i) sizes.push_back(1 + rng() % 50);
        auto c = sized_corpus(sizes);
        auto a = stratified_split(c, 0.1, 0.1, 42);
        auto b = stratified_split(c, 0.1, 0.1, 42);
        CHECK(a.assignment == b.assignment);
        auto other = stratified_split(c, 0.1, 0.1, 43);
        CHECK(other.assignment != a.assignment);
        std::ostringstream x, y;
        write_split(x, a);
        write_split(y, b);
        CHECK(x.str() == y.str());
    }
    SUBCASE("fraction range") {
        auto c = sized_corpus({1, 2, 3});
        CHECK_THROWS_AS(stratified_split(c, 0.5, 0.5, 0), Error);
        CHECK_THROWS_AS(stratified_split(c, -0.1, 0.1, 0), Error);
        try {
            stratified_split(c, 0.6, 0.5, 0);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::FractionOutOfRange);
        }
        auto all_train = stratified_split(c, 0.0, 0.0, 0);
        CHECK(all_train.count(Split::train) == 3);
    }
}

TEST_CASE("split invariants over random corpora") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<std::size_t> sizes;
        const std::size_t n = 1 + rng() % 200;
        for (std::size_t i = 0; i < n; ++i) sizes.push_back(1 + rng() % (1 + rng() % 80));
        auto c = sized_corpus(sizes);
        const double val = static_cast<double>(rng() % 30) / 100.0;
        const double test = static_cast<double>(rng() % 30) / 100.0;
        auto s = stratified_split(c, val, test, rng());

        // partition of all discussions, each exactly once
        CHECK(s.assignment.size() == c.discussions().size());
        check_split_covers(s, c);

        // per-stratum counts follow the rounding rule exactly
        std::size_t strata_total = 0;
        std::size_t v = 0, t = 0;
        for (const Stratum& st : s.strata) {
            CHECK(st.validation == stratum_quota(val, st.size));
            CHECK(st.test == stratum_quota(test, st.size));
            strata_total += st.size;
            v += st.validation;
            t += st.test;
        }
        CHECK(strata_total == c.discussions().size());
        CHECK(s.count(Split::validation) == v);
        CHECK(s.count(Split::test) == t);

        // recount the strata membership from scratch
        std::vector<std::size_t> per_stratum_val(s.strata.size(), 0), per_stratum_test(s.strata.size(), 0);
        for (const Discussion& d : c.discussions()) {
            std::size_t bin = s.strata.size();
            for (std::size_t k = 0; k < s.strata.size(); ++k) {
                if (s.strata[k].size > 0 && d.size() >= s.strata[k].min_claims && d.size() <= s.strata[k].max_claims) bin = k;
            }
            REQUIRE(bin < s.strata.size());
            if (s.of(d.id()) == Split::validation) ++per_stratum_val[bin];
            if (s.of(d.id()) == Split::test) ++per_stratum_test[bin];
        }
        for (std::size_t k = 0; k < s.strata.size(); ++k) {
            CHECK(per_stratum_val[k] == s.strata[k].validation);
            CHECK(per_stratum_test[k] == s.strata[k].test);
        }
    }
}

TEST_CASE("split file round trip and validation") {
    auto c = sized_corpus({1, 2, 3, 4, 5, 6, 7, 8});
    auto s = stratified_split(c, 0.2, 0.2, 5);
    std::ostringstream out;
    write_split(out, s);
    std::istringstream in(out.str());
    auto back = read_split(in);
    CHECK(back.assignment == s.assignment);
    CHECK(back.seed == 5);
    CHECK(back.val_fraction == 0.2);
    CHECK(back.test_fraction == 0.2);
    CHECK(back.strata_spec == s.strata_spec);

    std::istringstream bad("discussion_id\tsplit\nd1\tholdout\n");
    CHECK_THROWS_AS(read_split(bad), Error);

    auto partial = back;
    partial.assignment.erase(partial.assignment.begin());
    CHECK_THROWS_AS(check_split_covers(partial, c), Error);
}

TEST_CASE("bucket_table") {
    SUBCASE("one author owning everything") {
        std::vector<Claim> g;
        for (int i = 0; i < 8; ++i) {
            g.push_back(testing::claim("c" + std::to_string(i), "d", "solo", i == 0 ? std::nullopt : std::optional<std::string>("c0"),
                                       "x", i == 0 ? Stance::thesis : Stance::pro));
        }
        auto c = testing::corpus_from({g});
        auto s = testing::manual_split({{"d", Split::train}});
        auto t = bucket_table(c, s, 5);
        // each claim sees the other seven train claims -> all mass in ">= 5"
        CHECK(t.rows[0].counts == std::vector<std::size_t>{0, 0, 0, 0, 0, 8});
        CHECK(t.rows[0].total == 8);
        CHECK(t.rows[1].total == 0);
    }
    SUBCASE("fixture corpus matches the independent recount") {
        auto c = load_corpus(testing::fixture_path("fixture_corpus.jsonl"));
        auto s = load_split(testing::fixture_path("fixture_split.tsv"));
        auto t = bucket_table(c, s, 5);
        const auto& g = testing::golden()["persona"]["bucket_table_T5"];
        for (const BucketRow& row : t.rows) {
            CHECK(row.counts == g[std::string(to_string(row.split))].get<std::vector<std::size_t>>());
            std::size_t sum = 0;
            for (auto v : row.counts) sum += v;
            CHECK(sum == row.total);
        }
        // row totals equal per-split claim counts
        std::size_t train_claims = 0;
        for (const Discussion& d : c.discussions()) {
            if (s.of(d.id()) == Split::train) train_claims += d.size();
        }
        CHECK(t.rows[0].total == train_claims);
        CHECK(format_bucket_table(t).find("#>=5") != std::string::npos);
    }
}
