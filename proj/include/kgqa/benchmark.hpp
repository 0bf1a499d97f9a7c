#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "kgqa/question.hpp"

namespace kgqa {

// A benchmark normalized to the pool layout: question, candidates, answer_index.
struct Benchmark {
    std::string name;
    std::vector<SyntheticQuestion> questions;

    std::size_t size() const { return questions.size(); }
};

// Thin column map from a benchmark's native JSONL layout onto the unified
// format. Fields are dotted paths; the answer may be a 0-based index, a
// 1-based index, or a choice letter.
struct BenchmarkAdapter {
    std::string id_field;                       // optional; falls back to the line number
    std::vector<std::string> question_fields;   // joined with a single space
    std::vector<std::string> candidate_fields;  // fixed per-choice columns...
    std::string candidates_field;               // ...or one array-valued field
    std::string candidate_text_subfield;        // for arrays of objects
    std::string answer_field;
    std::string answer_format = "index0"; // index0 | index1 | letter

    static BenchmarkAdapter unified() {
        BenchmarkAdapter a;
        a.id_field = "id";
        a.question_fields = {"question"};
        a.candidates_field = "candidates";
        a.answer_field = "answer_index";
        a.answer_format = "index0";
        return a;
    }

    static BenchmarkAdapter from_json(const Json& j) {
        BenchmarkAdapter a;
        a.id_field = j.value("id_field", "");
        if (j.contains("question_fields"))
            a.question_fields = j.at("question_fields").get<std::vector<std::string>>();
        else if (j.contains("question_field"))
            a.question_fields = {j.at("question_field").get<std::string>()};
        if (j.contains("candidate_fields"))
            a.candidate_fields = j.at("candidate_fields").get<std::vector<std::string>>();
        a.candidates_field = j.value("candidates_field", "");
        a.candidate_text_subfield = j.value("candidate_text_subfield", "");
        a.answer_field = j.value("answer_field", "");
        a.answer_format = j.value("answer_format", "index0");
        if (a.question_fields.empty())
            throw Error(ErrorKind::adapter, "adapter needs question_field(s)");
        if (a.candidate_fields.empty() && a.candidates_field.empty())
            throw Error(ErrorKind::adapter, "adapter needs candidate_fields or candidates_field");
        if (a.answer_field.empty()) throw Error(ErrorKind::adapter, "adapter needs answer_field");
        if (a.answer_format != "index0" && a.answer_format != "index1" && a.answer_format != "letter")
            throw Error(ErrorKind::adapter, "answer_format must be index0, index1 or letter");
        return a;
    }

    static BenchmarkAdapter from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error(ErrorKind::io, "cannot open adapter file: " + path);
        Json j = Json::parse(in, nullptr, false);
        if (j.is_discarded()) throw Error(ErrorKind::parse, path + ": invalid JSON");
        return from_json(j);
    }
};

namespace detail {

inline const Json* lookup_path(const Json& j, std::string_view path) {
    const Json* cur = &j;
    std::size_t start = 0;
    while (start <= path.size()) {
        auto dot = path.find('.', start);
        auto key = std::string(path.substr(start, dot == std::string_view::npos ? dot : dot - start));
        if (!cur->is_object() || !cur->contains(key)) return nullptr;
        cur = &cur->at(key);
        if (dot == std::string_view::npos) break;
        start = dot + 1;
    }
    return cur;
}

inline std::string value_as_text(const Json& j) {
    if (j.is_string()) return j.get<std::string>();
    return j.dump();
}

inline std::size_t parse_answer(const Json& value, std::size_t n_candidates,
                                const std::string& format, const std::string& where) {
    long idx = -1;
    if (format == "letter") {
        auto s = std::string(trim(value_as_text(value)));
        if (s.size() != 1 || !std::isalpha(static_cast<unsigned char>(s[0])))
            throw Error(ErrorKind::adapter, where + ": expected a choice letter, got '" + s + "'");
        idx = std::toupper(static_cast<unsigned char>(s[0])) - 'A';
    } else {
        if (value.is_number_integer()) idx = value.get<long>();
        else {
            auto s = std::string(trim(value_as_text(value)));
            try {
                idx = std::stol(s);
            } catch (...) {
                throw Error(ErrorKind::adapter, where + ": expected an index, got '" + s + "'");
            }
        }
        if (format == "index1") idx -= 1;
    }
    if (idx < 0 || static_cast<std::size_t>(idx) >= n_candidates)
        throw Error(ErrorKind::adapter,
                    where + ": answer index " + std::to_string(idx) + " out of range for " +
                        std::to_string(n_candidates) + " candidates");
    return static_cast<std::size_t>(idx);
}

} // namespace detail

inline Benchmark load_benchmark(const std::string& path, const BenchmarkAdapter& adapter,
                                const std::string& name) {
    Benchmark bench;
    bench.name = name;
    for_each_jsonl(path, [&](std::size_t line_no, Json&& j) {
        if (j.contains("_header")) return;
        const std::string where = path + ":" + std::to_string(line_no);
        SyntheticQuestion q;

        if (!adapter.id_field.empty()) {
            if (const Json* v = detail::lookup_path(j, adapter.id_field))
                q.id = detail::value_as_text(*v);
        }
        if (q.id.empty()) q.id = name + "-" + std::to_string(line_no);

        std::string question;
        for (const auto& f : adapter.question_fields) {
            const Json* v = detail::lookup_path(j, f);
            if (!v) throw Error(ErrorKind::adapter, where + ": missing field '" + f + "'");
            if (!question.empty()) question += ' ';
            question += detail::value_as_text(*v);
        }
        q.question = std::string(trim(question));

        if (!adapter.candidates_field.empty()) {
            const Json* arr = detail::lookup_path(j, adapter.candidates_field);
            if (!arr || !arr->is_array())
                throw Error(ErrorKind::adapter,
                            where + ": missing candidate array '" + adapter.candidates_field + "'");
            for (const auto& c : *arr) {
                if (!adapter.candidate_text_subfield.empty()) {
                    const Json* t = detail::lookup_path(c, adapter.candidate_text_subfield);
                    if (!t)
                        throw Error(ErrorKind::adapter, where + ": candidate lacks subfield '" +
                                                            adapter.candidate_text_subfield + "'");
                    q.candidates.push_back(detail::value_as_text(*t));
                } else {
                    q.candidates.push_back(detail::value_as_text(c));
                }
            }
        } else {
            for (const auto& f : adapter.candidate_fields) {
                const Json* v = detail::lookup_path(j, f);
                if (!v) throw Error(ErrorKind::adapter, where + ": missing field '" + f + "'");
                q.candidates.push_back(detail::value_as_text(*v));
            }
        }
        if (q.candidates.size() < 2)
            throw Error(ErrorKind::adapter, where + ": fewer than 2 candidates");

        const Json* ans = detail::lookup_path(j, adapter.answer_field);
        if (!ans)
            throw Error(ErrorKind::adapter, where + ": missing field '" + adapter.answer_field + "'");
        q.answer_index = detail::parse_answer(*ans, q.candidates.size(), adapter.answer_format, where);

        if (j.contains("dimension") && j.at("dimension").is_string())
            if (auto d = parse_dimension(j.at("dimension").get<std::string>())) q.dimension = *d;

        bench.questions.push_back(std::move(q));
    });
    return bench;
}

} // namespace kgqa
