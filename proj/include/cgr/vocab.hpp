#pragma once

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace cgr {

struct TokenizeError : std::runtime_error {
    size_t line, column;
    TokenizeError(size_t ln, size_t col, const std::string& what)
        : std::runtime_error("line " + std::to_string(ln) + ", col " + std::to_string(col) +
                             ": " + what),
          line(ln), column(col) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

// Longest-match tokenization over the CGRSmiles grammar: bracket units
// (atoms and dynamic bonds) are single tokens, as are Cl, Br and %nn ring
// labels.
inline std::vector<std::string> tokenize(const std::string& s, size_t line_no = 0) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (c == '[') {
            size_t close = s.find(']', i);
            if (close == std::string::npos)
                throw TokenizeError(line_no, i, "unterminated '['");
            out.push_back(s.substr(i, close - i + 1));
            i = close + 1;
        } else if (c == '%') {
            if (i + 2 >= s.size() || !std::isdigit(s[i + 1]) || !std::isdigit(s[i + 2]))
                throw TokenizeError(line_no, i, "'%' needs two digits");
            out.push_back(s.substr(i, 3));
            i += 3;
        } else if ((c == 'C' && i + 1 < s.size() && s[i + 1] == 'l') ||
                   (c == 'B' && i + 1 < s.size() && s[i + 1] == 'r')) {
            out.push_back(s.substr(i, 2));
            i += 2;
        } else if (std::isalpha(c) || std::isdigit(c) || c == '-' || c == '=' || c == '#' ||
                   c == ':' || c == '(' || c == ')' || c == '.') {
            out.push_back(std::string(1, c));
            ++i;
        } else {
            throw TokenizeError(line_no, i, std::string("unknown character '") + c + "'");
        }
    }
    return out;
}

class Vocabulary {
public:
    static constexpr int kPad = 0;
    static constexpr int kSos = 1;
    static constexpr int kEos = 2;

    Vocabulary() { for (const char* t : {"<pad>", "<sos>", "<eos>"}) push(t); }

    static Vocabulary build(const std::vector<std::string>& corpus) {
        std::set<std::string> seen;
        for (size_t ln = 0; ln < corpus.size(); ++ln)
            for (const auto& t : tokenize(corpus[ln], ln + 1)) seen.insert(t);
        Vocabulary v;
        for (const auto& t : seen) v.push(t);
        return v;
    }

    int size() const { return static_cast<int>(tokens_.size()); }
    const std::string& token(int id) const { return tokens_[static_cast<size_t>(id)]; }
    const std::vector<std::string>& tokens() const { return tokens_; }

    int id(const std::string& t) const {
        auto it = index_.find(t);
        return it == index_.end() ? -1 : it->second;
    }

    std::vector<int> encode(const std::string& s, size_t line_no = 0) const {
        std::vector<int> out;
        size_t col = 0;
        for (const auto& t : tokenize(s, line_no)) {
            int i = id(t);
            if (i < 0) throw TokenizeError(line_no, col, "token not in vocabulary: " + t);
            out.push_back(i);
            col += t.size();
        }
        return out;
    }

    std::string decode(const std::vector<int>& ids) const {
        std::string s;
        for (int i : ids)
            if (i > kEos) s += token(i);
        return s;
    }

    void save(const std::string& path) const {
        std::ofstream f(path);
        if (!f) throw IoError("cannot write " + path);
        for (const auto& t : tokens_) f << t << "\n";
    }

    static Vocabulary load(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw IoError("cannot read " + path);
        Vocabulary v;
        v.tokens_.clear();
        v.index_.clear();
        std::string line;
        while (std::getline(f, line))
            if (!line.empty()) v.push(line);
        if (v.size() < 3 || v.token(0) != "<pad>" || v.token(1) != "<sos>" || v.token(2) != "<eos>")
            throw IoError("malformed vocabulary file " + path);
        return v;
    }

    static Vocabulary from_tokens(const std::vector<std::string>& tokens) {
        Vocabulary v;
        v.tokens_.clear();
        v.index_.clear();
        for (const auto& t : tokens) v.push(t);
        return v;
    }

private:
    void push(const std::string& t) {
        index_[t] = static_cast<int>(tokens_.size());
        tokens_.push_back(t);
    }

    std::vector<std::string> tokens_;
    std::map<std::string, int> index_;
};

}  // namespace cgr
