#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "cgr/vocab.hpp"

namespace cgr {

struct Corpus {
    std::vector<std::string> lines;
    size_t skipped_too_long = 0;
    size_t comment_lines = 0;
};

// One CGRSmiles per line; '#' lines are comments. Lines over max_len are
// skipped and counted, never silently dropped.
inline Corpus read_corpus(const std::string& path, size_t max_len = 156) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot read " + path);
    Corpus c;
    std::string line;
    while (std::getline(f, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            ++c.comment_lines;
            continue;
        }
        if (line.size() > max_len) {
            ++c.skipped_too_long;
            continue;
        }
        c.lines.push_back(line);
    }
    return c;
}

inline void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path);
    for (const auto& l : lines) f << l << "\n";
}

}  // namespace cgr
