#pragma once

// Default rule table for the telegram-style rewriter. Each stage is a list
// of ECMAScript regex substitutions applied to lowercased text in which
// every placeholder has been replaced by an opaque marker; "{PH}" in a
// pattern matches one such marker. Openers are only stripped at the start.

#include <string_view>

namespace ectsum {

inline constexpr std::string_view kDefaultRuleTable = R"json({
  "version": "telegram-rules-1",
  "quarters": [
    {"pattern": "\\bfirst quarter\\b", "replace": "q1"},
    {"pattern": "\\bsecond quarter\\b", "replace": "q2"},
    {"pattern": "\\bthird quarter\\b", "replace": "q3"},
    {"pattern": "\\bfourth quarter\\b", "replace": "q4"},
    {"pattern": "\\b(q[1-4]) of (fiscal )?({PH})", "replace": "$1 $3"},
    {"pattern": "\\bthe (q[1-4])\\b", "replace": "$1"}
  ],
  "openers": [
    "in the",
    "turning to",
    "i'm pleased to report that",
    "i am pleased to report that",
    "we're pleased to report that",
    "as you can see,",
    "as a result,",
    "in addition,",
    "additionally,",
    "overall,",
    "moving to",
    "looking at",
    "for the",
    "during the",
    "now,",
    "so,",
    "also,",
    "and"
  ],
  "substitutions": [
    {"pattern": "\\bincreased by\\b", "replace": "rose"},
    {"pattern": "\\brose by\\b", "replace": "rose"},
    {"pattern": "\\bgrew by\\b", "replace": "grew"},
    {"pattern": "\\bdecreased by\\b", "replace": "fell"},
    {"pattern": "\\bdeclined by\\b", "replace": "fell"},
    {"pattern": "\\bfell by\\b", "replace": "fell"},
    {"pattern": "\\bwe expect\\b", "replace": "sees"},
    {"pattern": "\\bwe now expect\\b", "replace": "now sees"},
    {"pattern": "\\b(full|fiscal) year\\b", "replace": "fy"},
    {"pattern": "\\bcompared to\\b", "replace": "vs"},
    {"pattern": "\\bour ", "replace": ""},
    {"pattern": "^(q[1-4]|fy),", "replace": "$1"}
  ]
})json";

}  // namespace ectsum
