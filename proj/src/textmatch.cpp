#include "biaseval/textmatch.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <vector>

namespace biaseval::textmatch {

namespace {

// round-half-up of 100 * (total - d) / total, in integer arithmetic
int score_from_distance(long long d, long long total) {
    if (total == 0) {
        return 100;
    }
    long long num = 100 * (total - d);
    return static_cast<int>((2 * num + total) / (2 * total));
}

} // namespace

std::string normalize(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char ch : text) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

int indel_distance(std::string_view a, std::string_view b) {
    if (a.size() > b.size()) {
        std::swap(a, b);
    }
    const size_t n = a.size();
    const size_t m = b.size();
    if (n == 0) {
        return static_cast<int>(m);
    }
    std::vector<int> prev(m + 1);
    std::vector<int> cur(m + 1);
    for (size_t j = 0; j <= m; ++j) {
        prev[j] = static_cast<int>(j);
    }
    for (size_t i = 1; i <= n; ++i) {
        cur[0] = static_cast<int>(i);
        for (size_t j = 1; j <= m; ++j) {
            if (a[i - 1] == b[j - 1]) {
                cur[j] = prev[j - 1];
            } else {
                cur[j] = std::min(prev[j], cur[j - 1]) + 1;
            }
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

int indel_distance_capped(std::string_view a, std::string_view b, int cap) {
    if (cap < 0) {
        return cap + 1;
    }
    if (a.size() > b.size()) {
        std::swap(a, b);
    }
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b.size());
    const int gap = m - n;
    if (gap > cap) {
        return cap + 1;
    }
    // Any cell (i, j) on a path of cost <= cap satisfies
    // |j - i| + |gap - (j - i)| <= cap, i.e. j - i in [-margin, gap + margin].
    const int margin = (cap - gap) / 2;
    const int inf = cap + 1;
    std::vector<int> prev(static_cast<size_t>(m) + 1, inf);
    std::vector<int> cur(static_cast<size_t>(m) + 1, inf);
    for (int j = 0; j <= std::min(m, gap + margin); ++j) {
        prev[static_cast<size_t>(j)] = j;
    }
    for (int i = 1; i <= n; ++i) {
        const int jlo = std::max(0, i - margin);
        const int jhi = std::min(m, i + gap + margin);
        int row_best = inf;
        if (jlo == 0) {
            cur[0] = std::min(i, inf);
            row_best = cur[0];
        } else {
            cur[static_cast<size_t>(jlo) - 1] = inf;
        }
        for (int j = std::max(jlo, 1); j <= jhi; ++j) {
            int v;
            if (a[static_cast<size_t>(i) - 1] == b[static_cast<size_t>(j) - 1]) {
                v = prev[static_cast<size_t>(j) - 1];
            } else {
                v = std::min(prev[static_cast<size_t>(j)], cur[static_cast<size_t>(j) - 1]);
                v = v >= inf ? inf : v + 1;
            }
            cur[static_cast<size_t>(j)] = std::min(v, inf);
            row_best = std::min(row_best, cur[static_cast<size_t>(j)]);
        }
        if (jhi < m) {
            cur[static_cast<size_t>(jhi) + 1] = inf;
        }
        if (row_best >= inf) {
            return inf;
        }
        std::swap(prev, cur);
    }
    return std::min(prev[static_cast<size_t>(m)], inf);
}

int simple_ratio(std::string_view a, std::string_view b) {
    const long long total = static_cast<long long>(a.size()) + static_cast<long long>(b.size());
    if (total == 0) {
        return 100;
    }
    return score_from_distance(indel_distance(a, b), total);
}

int partial_ratio_normalized(std::string_view a, std::string_view b) {
    std::string_view s = a.size() <= b.size() ? a : b;
    std::string_view l = a.size() <= b.size() ? b : a;
    const size_t m = s.size();
    if (m == 0) {
        return 100;
    }
    if (l.find(s) != std::string_view::npos) {
        return 100;
    }
    int best = 2 * static_cast<int>(m); // worst case over an equal-length window
    for (size_t off = 0; off + m <= l.size(); ++off) {
        int d = indel_distance_capped(s, l.substr(off, m), best - 1);
        if (d < best) {
            best = d;
            if (best == 0) {
                break;
            }
        }
    }
    return score_from_distance(best, 2 * static_cast<long long>(m));
}

int partial_ratio(std::string_view a, std::string_view b) {
    return partial_ratio_normalized(normalize(a), normalize(b));
}

int partial_ratio_bound_normalized(std::string_view a, std::string_view b) {
    std::string_view s = a.size() <= b.size() ? a : b;
    std::string_view l = a.size() <= b.size() ? b : a;
    const long long m = static_cast<long long>(s.size());
    if (m == 0) {
        return 100;
    }
    std::array<int, 256> counts{};
    for (unsigned char c : s) {
        ++counts[c];
    }
    long long bag = 0;
    for (unsigned char c : l) {
        if (counts[c] > 0) {
            --counts[c];
            ++bag;
        }
    }
    // LCS(s, window) <= bag for every window, so distance >= 2 * (m - bag)
    return score_from_distance(2 * (m - bag), 2 * m);
}

} // namespace biaseval::textmatch
