#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace mtsem::testing {

inline std::string testdata_path(const std::string& name) {
    return std::string(MTSEM_TESTDATA_DIR) + "/" + name;
}

inline std::string read_file_or_die(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("missing test file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) lines.push_back(current);
    return lines;
}

/// Indices of differing lines; both texts must have the same line count for
/// the comparison to be meaningful (checked by callers).
inline std::vector<std::size_t> diff_lines(const std::string& a, const std::string& b) {
    std::vector<std::string> la = split_lines(a);
    std::vector<std::string> lb = split_lines(b);
    std::vector<std::size_t> changed;
    std::size_t n = std::max(la.size(), lb.size());
    for (std::size_t i = 0; i < n; ++i) {
        const std::string* va = i < la.size() ? &la[i] : nullptr;
        const std::string* vb = i < lb.size() ? &lb[i] : nullptr;
        if (!va || !vb || *va != *vb) changed.push_back(i);
    }
    return changed;
}

inline std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    std::size_t count = 0;
    std::size_t pos = 0;
    while ((pos = haystack.find(needle, pos)) != std::string::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

/// Lines (0-based) that contain the needle as a substring.
inline std::vector<std::size_t> lines_containing(const std::string& text,
                                                 const std::string& needle) {
    std::vector<std::size_t> hits;
    std::vector<std::string> lines = split_lines(text);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].find(needle) != std::string::npos) hits.push_back(i);
    }
    return hits;
}

}  // namespace mtsem::testing
