#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "kgqa/error.hpp"
#include "kgqa/hash.hpp"

namespace kgqa {

inline std::string_view trim(std::string_view s) {
    std::size_t b = 0;
    while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    std::size_t e = s.size();
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

inline std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// ASCII punctuation becomes a space; multibyte UTF-8 is passed through untouched.
inline std::string normalize_punct(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        auto u = static_cast<unsigned char>(c);
        if (u < 0x80 && !std::isalnum(u) && !std::isspace(u)) c = ' ';
    }
    return out;
}

inline std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

using Tokenizer = std::function<std::vector<std::string>(std::string_view)>;

// Default tokenization everywhere: lowercase, punctuation to spaces, whitespace split.
inline std::vector<std::string> tokenize(std::string_view text) {
    return split_ws(normalize_punct(to_lower(text)));
}

inline Tokenizer default_tokenizer() {
    return [](std::string_view text) { return tokenize(text); };
}

// Greedy longest-match subword tokenizer over a fixed vocabulary, one entry per
// line. Words are pre-split as in the default tokenizer; unmatched leading
// characters fall back to single-character tokens.
class SubwordTokenizer {
public:
    explicit SubwordTokenizer(std::vector<std::string> vocab) {
        for (auto& v : vocab) {
            if (v.empty()) continue;
            max_len_ = std::max(max_len_, v.size());
            vocab_.insert(std::move(v));
        }
    }

    static SubwordTokenizer from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw Error(ErrorKind::io, "cannot open vocabulary file: " + path);
        std::vector<std::string> vocab;
        std::string line;
        while (std::getline(in, line)) {
            auto t = trim(line);
            if (t.empty() || t.front() == '#') continue;
            vocab.emplace_back(to_lower(t));
        }
        return SubwordTokenizer(std::move(vocab));
    }

    std::vector<std::string> operator()(std::string_view text) const {
        std::vector<std::string> out;
        for (const auto& word : tokenize(text)) {
            std::size_t pos = 0;
            while (pos < word.size()) {
                std::size_t best = 0;
                std::size_t cap = std::min(max_len_, word.size() - pos);
                for (std::size_t len = cap; len >= 1; --len) {
                    if (vocab_.count(std::string(word.substr(pos, len)))) {
                        best = len;
                        break;
                    }
                }
                if (best == 0) best = 1; // unknown char becomes its own token
                out.emplace_back(word.substr(pos, best));
                pos += best;
            }
        }
        return out;
    }

private:
    std::unordered_set<std::string> vocab_;
    std::size_t max_len_ = 1;
};

using StopwordSet = std::unordered_set<std::string>;

inline StopwordSet load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open stopword file: " + path);
    StopwordSet set;
    std::string line;
    while (std::getline(in, line)) {
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        set.insert(to_lower(t));
    }
    return set;
}

// Sorted unique token hashes; the working representation for disjointness checks.
inline std::vector<std::uint64_t> token_hash_set(const std::vector<std::string>& tokens) {
    std::vector<std::uint64_t> hs;
    hs.reserve(tokens.size());
    for (const auto& t : tokens) hs.push_back(fnv1a64(t));
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    return hs;
}

inline bool disjoint(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return false;
        if (a[i] < b[j]) ++i;
        else ++j;
    }
    return true;
}

} // namespace kgqa
