#include "stancekit/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <json.hpp>

#include "stancekit/error.hpp"

namespace stancekit {

using nlohmann::json;

namespace {

std::string at_line(std::size_t line) { return "line " + std::to_string(line); }

bool blank_line(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string required_string(const json& rec, const char* field, std::size_t line) {
    auto it = rec.find(field);
    if (it == rec.end() || it->is_null()) {
        throw Error(ErrorKind::MissingField, std::string(field) + " (" + at_line(line) + ")");
    }
    if (!it->is_string()) {
        throw Error(ErrorKind::MalformedRecord,
                    at_line(line) + ": field " + field + " must be a string");
    }
    return it->get<std::string>();
}

} // namespace

CorpusReader::CorpusReader(std::istream& in, IngestOptions options)
    : in_(in), options_(options) {}

std::optional<Claim> CorpusReader::read_record() {
    std::string raw;
    while (std::getline(in_, raw)) {
        ++line_;
        if (blank_line(raw)) continue;
        json rec;
        try {
            rec = json::parse(raw);
        } catch (const json::parse_error& e) {
            throw Error(ErrorKind::MalformedRecord, at_line(line_) + ": " + e.what());
        }
        if (!rec.is_object()) {
            throw Error(ErrorKind::MalformedRecord, at_line(line_) + ": record is not an object");
        }
        if (!header_checked_) {
            header_checked_ = true;
            if (rec.contains("format")) {
                if (rec["format"] != corpus_format_name) {
                    throw Error(ErrorKind::MalformedRecord,
                                at_line(line_) + ": unknown format " + rec["format"].dump());
                }
                if (rec.value("version", 0) != corpus_format_version) {
                    throw Error(ErrorKind::MalformedRecord,
                                at_line(line_) + ": unsupported version " +
                                    rec.value("version", json()).dump());
                }
                continue;
            }
        }

        Claim c;
        c.claim_id = required_string(rec, "claim_id", line_);
        c.discussion_id = required_string(rec, "discussion_id", line_);
        auto author = rec.find("author_id");
        if (author == rec.end() || author->is_null() ||
            (author->is_string() && author->get<std::string>().empty())) {
            if (!options_.synthesize_missing_authors) {
                throw Error(ErrorKind::MissingField, "author_id (" + at_line(line_) + ")");
            }
            c.author_id = "anon:" + c.claim_id;
        } else {
            c.author_id = required_string(rec, "author_id", line_);
        }
        auto parent = rec.find("parent_id");
        if (parent == rec.end()) {
            throw Error(ErrorKind::MissingField, "parent_id (" + at_line(line_) + ")");
        }
        if (!parent->is_null()) {
            c.parent_id = required_string(rec, "parent_id", line_);
        }
        c.text = required_string(rec, "text", line_);
        const std::string label = required_string(rec, "stance_label", line_);
        auto stance = parse_stance(label);
        if (!stance) {
            throw Error(ErrorKind::MalformedRecord,
                        at_line(line_) + ": stance_label must be pro, con or thesis, got " + label);
        }
        c.stance = *stance;
        if (c.is_thesis() != (c.stance == Stance::thesis)) {
            throw Error(ErrorKind::InconsistentStance,
                        at_line(line_) + ": claim " + c.claim_id + " has stance_label " + label +
                            (c.is_thesis() ? " but parent_id is null" : " but a parent_id"));
        }
        if (blank_line(c.text)) {
            throw Error(ErrorKind::MalformedRecord,
                        at_line(line_) + ": claim " + c.claim_id + " has empty text");
        }
        return c;
    }
    return std::nullopt;
}

std::optional<Discussion> CorpusReader::next() {
    if (!pending_) {
        pending_ = read_record();
        if (!pending_) return std::nullopt;
    }
    const std::string id = pending_->discussion_id;
    if (closed_.count(id) != 0) {
        throw Error(ErrorKind::MalformedRecord,
                    at_line(line_) + ": records of discussion " + id + " are not contiguous");
    }
    std::vector<Claim> group;
    group.push_back(std::move(*pending_));
    pending_.reset();
    while (auto rec = read_record()) {
        if (rec->discussion_id != id) {
            pending_ = std::move(rec);
            break;
        }
        group.push_back(std::move(*rec));
    }
    closed_.insert(id);
    try {
        return Discussion::build(std::move(group));
    } catch (const Error& e) {
        throw Error(e.kind(), "discussion " + id + " (ending before " + at_line(line_) +
                                  "): " + e.what());
    }
}

Corpus parse_corpus(std::istream& in, IngestOptions options) {
    CorpusReader reader(in, options);
    std::vector<Discussion> discussions;
    while (auto d = reader.next()) {
        discussions.push_back(std::move(*d));
    }
    if (discussions.empty()) {
        throw Error(ErrorKind::EmptyCorpus, "input contains no claim records");
    }
    return Corpus::build(std::move(discussions));
}

Corpus load_corpus(const std::string& path, IngestOptions options) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::InvalidArgument, "cannot open corpus file " + path);
    }
    return parse_corpus(in, options);
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
    out << json{{"format", corpus_format_name}, {"version", corpus_format_version}}.dump() << '\n';
    for (const Discussion& d : corpus.discussions()) {
        for (const Claim& c : d.claims()) {
            json rec;
            rec["claim_id"] = c.claim_id;
            rec["discussion_id"] = c.discussion_id;
            rec["author_id"] = c.author_id;
            rec["parent_id"] = c.parent_id ? json(*c.parent_id) : json(nullptr);
            rec["text"] = c.text;
            rec["stance_label"] = to_string(c.stance);
            out << rec.dump() << '\n';
        }
    }
}

} // namespace stancekit
