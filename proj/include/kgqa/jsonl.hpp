#pragma once

#include <fstream>
#include <functional>
#include <string>

#include <json.hpp>

#include "kgqa/error.hpp"
#include "kgqa/text.hpp"

namespace kgqa {

// ordered_json keeps insertion order, which keeps serialized files diffable.
using Json = nlohmann::ordered_json;

inline void for_each_jsonl(const std::string& path,
                           const std::function<void(std::size_t line_no, Json&&)>& fn) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        Json j = Json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw Error(ErrorKind::parse, path + ":" + std::to_string(line_no) + ": invalid JSON");
        fn(line_no, std::move(j));
    }
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot write file: " + path);
    return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    auto out = open_output(path);
    out << content;
}

} // namespace kgqa
