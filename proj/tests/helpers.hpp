#pragma once

// Brute-force oracles and shared fixtures. Oracles are written as plainly as
// possible, independent of the library implementations they check.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "biaseval/corpus.hpp"
#include "biaseval/rng.hpp"
#include "biaseval/taxonomy.hpp"

namespace testutil {

// full-table LCS, no banding, no caps
inline int oracle_lcs(const std::string& a, const std::string& b) {
    const size_t n = a.size(), m = b.size();
    std::vector<std::vector<int>> dp(n + 1, std::vector<int>(m + 1, 0));
    for (size_t i = 1; i <= n; ++i) {
        for (size_t j = 1; j <= m; ++j) {
            dp[i][j] = a[i - 1] == b[j - 1] ? dp[i - 1][j - 1] + 1
                                            : std::max(dp[i - 1][j], dp[i][j - 1]);
        }
    }
    return dp[n][m];
}

inline int oracle_indel(const std::string& a, const std::string& b) {
    return static_cast<int>(a.size() + b.size()) - 2 * oracle_lcs(a, b);
}

// round-half-up through floating point, deliberately a different route than
// the integer arithmetic in the library
inline int oracle_simple_ratio(const std::string& a, const std::string& b) {
    const double total = static_cast<double>(a.size() + b.size());
    if (total == 0.0) {
        return 100;
    }
    const double d = oracle_indel(a, b);
    return static_cast<int>(std::floor(100.0 * (total - d) / total + 0.5));
}

inline std::string oracle_normalize(const std::string& text) {
    std::string out;
    bool in_space = true; // swallow leading whitespace
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty()) {
            out += ' ';
        }
        in_space = false;
        out += static_cast<char>(std::tolower(c));
    }
    return out;
}

// max simple_ratio of the shorter normalized string against every window of
// the longer one, enumerated exhaustively
inline int oracle_partial_ratio(const std::string& a, const std::string& b) {
    std::string s = oracle_normalize(a);
    std::string l = oracle_normalize(b);
    if (s.size() > l.size()) {
        std::swap(s, l);
    }
    if (s.empty()) {
        return 100;
    }
    int best = 0;
    for (size_t start = 0; start + s.size() <= l.size(); ++start) {
        best = std::max(best, oracle_simple_ratio(s, l.substr(start, s.size())));
    }
    return best;
}

inline std::string random_text(biaseval::SeededRng& rng, int max_len,
                               std::string_view alphabet = "abc ") {
    const int len = rng.int_in(0, max_len);
    std::string out;
    for (int i = 0; i < len; ++i) {
        out += alphabet[rng.below(alphabet.size())];
    }
    return out;
}

// distinct plain sentences; the running index keeps texts unique so fuzzy
// alignment has no duplicate-text traps unless a test builds them on purpose
inline std::vector<biaseval::AnnotatedSentence> make_sentences(size_t n, double biased_ratio,
                                                               uint64_t seed) {
    static const char* kSubjects[] = {"the council", "the senator", "the agency",
                                      "the committee", "the ministry", "the board"};
    static const char* kVerbs[] = {"approved", "rejected", "postponed", "reviewed",
                                   "announced", "audited"};
    static const char* kObjects[] = {"the budget draft", "a zoning waiver", "the audit report",
                                     "new transit fares", "a housing plan", "the water contract"};
    biaseval::SeededRng rng(seed);
    std::vector<biaseval::AnnotatedSentence> out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        biaseval::AnnotatedSentence s;
        s.text = std::string(kSubjects[rng.below(6)]) + " " + kVerbs[rng.below(6)] + " " +
                 kObjects[rng.below(6)] + " in case " + std::to_string(i) + ".";
        s.label = rng.chance(biased_ratio) ? biaseval::Label::Biased : biaseval::Label::Unbiased;
        s.source = biaseval::Source::Manual;
        s.origin_id = "manual:" + std::to_string(i);
        s.position = static_cast<int>(i);
        out.push_back(std::move(s));
    }
    return out;
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        root_ = std::filesystem::temp_directory_path() /
                ("biaseval-test-" + tag + "-" + std::to_string(::getpid()));
        std::filesystem::remove_all(root_);
        std::filesystem::create_directories(root_);
    }
    ~TempDir() { std::filesystem::remove_all(root_); }

    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string path(const std::string& name) const { return (root_ / name).string(); }
    std::string root() const { return root_.string(); }

private:
    std::filesystem::path root_;
};

inline biaseval::Taxonomy load_default_taxonomy() {
    return biaseval::Taxonomy::load("data/taxonomy.json");
}

} // namespace testutil
