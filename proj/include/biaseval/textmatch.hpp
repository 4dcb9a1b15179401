#pragma once

#include <string>
#include <string_view>

namespace biaseval::textmatch {

/// Case-folds (ASCII), strips leading/trailing whitespace and collapses
/// internal whitespace runs to single spaces. Nothing else is touched;
/// punctuation stays so that near-identical gold sentences stay distinct.
std::string normalize(std::string_view text);

/// Minimum number of single-character insertions and deletions transforming
/// a into b. Equals |a| + |b| - 2 * LCS(a, b).
int indel_distance(std::string_view a, std::string_view b);

/// Like indel_distance but gives up once the distance is known to exceed
/// `cap`; returns cap + 1 in that case.
int indel_distance_capped(std::string_view a, std::string_view b, int cap);

/// round(100 * (|a|+|b| - indel_distance) / (|a|+|b|)), round-half-up.
/// 100 when both strings are empty. Operates on the raw strings.
int simple_ratio(std::string_view a, std::string_view b);

/// Best simple_ratio between the shorter string and any window of the longer
/// string of the same length, both normalized first. 100 if the shorter
/// normalized string is empty.
int partial_ratio(std::string_view a, std::string_view b);

/// partial_ratio on already-normalized inputs.
int partial_ratio_normalized(std::string_view a, std::string_view b);

/// Cheap upper bound on partial_ratio_normalized, from character-bag
/// intersection. Used to skip hopeless pairs during decontamination.
int partial_ratio_bound_normalized(std::string_view a, std::string_view b);

} // namespace biaseval::textmatch
