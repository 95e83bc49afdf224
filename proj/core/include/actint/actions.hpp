#pragma once

#include <string>
#include <vector>

#include "actint/behavior.hpp"
#include "actint/observation.hpp"

namespace actint {

/// Maps a (channel, behavior) finding to a suggestion. `channel_pattern` is a
/// channel name or a glob with `*` and `?`. Time-of-day findings use the
/// channel name "time_of_day". Lower priority values rank first.
struct ActionRule {
  std::string channel_pattern;
  BehaviorLabel behavior = BehaviorLabel::NoDominantChange;
  std::string suggestion;
  int priority = 0;
  /// 1-based line of the rule in its source file, 0 when built in code.
  int source_line = 0;

  bool is_wildcard() const;
};

class RuleSet {
 public:
  RuleSet() = default;
  /// Throws ConfigError on a duplicate (pattern, behavior) pair.
  explicit RuleSet(std::vector<ActionRule> rules, std::string source = "<rules>");

  const std::vector<ActionRule>& rules() const noexcept { return rules_; }
  bool empty() const noexcept { return rules_.empty(); }
  std::size_t size() const noexcept { return rules_.size(); }
  const std::string& source() const noexcept { return source_; }

  /// JSON array of {channel, behavior, suggestion, priority}.
  std::string to_json() const;

 private:
  std::vector<ActionRule> rules_;
  std::string source_;
};

/// Glob match supporting `*` (any run) and `?` (any one character).
bool glob_match(const std::string& pattern, const std::string& text);

RuleSet parse_rules(const std::string& text, const std::string& source_name = "<rules>");
RuleSet load_rules(const std::string& path);

/// Text of the built-in rule file.
const char* default_rules_json();
RuleSet default_rules();

/// Channel key used for rule matching: the channel name, or "time_of_day".
std::string rule_channel(const PredictorId& p);

/// Suggestions of every rule matching (channel of `top`, evidence.label):
/// exact channel matches first, then wildcards; within each group by
/// priority, then file order. Duplicate texts are kept once.
std::vector<std::string> recommend(const PredictorId& top, const BehaviorEvidence& evidence,
                                   const RuleSet& rules);

}  // namespace actint
