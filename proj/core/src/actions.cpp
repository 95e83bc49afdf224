#include "actint/actions.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "actint/errors.hpp"
#include "json_util.hpp"

namespace actint {

using detail::json;

bool ActionRule::is_wildcard() const {
  return channel_pattern.find_first_of("*?") != std::string::npos;
}

RuleSet::RuleSet(std::vector<ActionRule> rules, std::string source)
    : rules_(std::move(rules)), source_(std::move(source)) {
  std::map<std::pair<std::string, BehaviorLabel>, const ActionRule*> seen;
  for (const auto& r : rules_) {
    auto [it, inserted] = seen.try_emplace({r.channel_pattern, r.behavior}, &r);
    if (!inserted) {
      throw ConfigError(source_ + ": duplicate rule (" + r.channel_pattern + ", " + to_string(r.behavior) +
                        ") at line " + std::to_string(it->second->source_line) + " and line " +
                        std::to_string(r.source_line));
    }
  }
}

std::string RuleSet::to_json() const {
  json out = json::array();
  for (const auto& r : rules_) {
    out.push_back({{"channel", r.channel_pattern},
                   {"behavior", to_string(r.behavior)},
                   {"suggestion", r.suggestion},
                   {"priority", r.priority}});
  }
  return out.dump(2) + "\n";
}

bool glob_match(const std::string& pattern, const std::string& text) {
  std::size_t p = 0, t = 0;
  std::size_t star = std::string::npos, resume = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
      ++p;
      ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      resume = t;
    } else if (star != std::string::npos) {
      p = star + 1;
      t = ++resume;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

namespace {

// Line number of each element that opens at depth 1 of the top-level array.
std::vector<int> element_lines(const std::string& text) {
  std::vector<int> lines;
  int line = 1;
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (char c : text) {
    if (c == '\n') ++line;
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{' || c == '[') {
      if (depth == 1 && c == '{') lines.push_back(line);
      ++depth;
    } else if (c == '}' || c == ']') {
      --depth;
    }
  }
  return lines;
}

}  // namespace

RuleSet parse_rules(const std::string& text, const std::string& source_name) {
  if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); })) {
    return RuleSet({}, source_name);
  }
  const json doc = detail::parse_json(text, source_name);
  if (!doc.is_array()) throw ConfigError(source_name + ": rule file must be a JSON array");
  const auto lines = element_lines(text);
  std::vector<ActionRule> rules;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const int line = i < lines.size() ? lines[i] : 0;
    const std::string where = source_name + " line " + std::to_string(line);
    const json& e = doc[i];
    if (!e.is_object()) throw ConfigError(where + ": rule must be an object");
    for (const auto& [key, value] : e.items()) {
      if (key != "channel" && key != "behavior" && key != "suggestion" && key != "priority") {
        throw ConfigError(where + ": unknown field '" + key + "'");
      }
    }
    const auto need_string = [&](const char* key) {
      const json& v = detail::require(e, key, where);
      if (!v.is_string() || v.get<std::string>().empty()) {
        throw ConfigError(where + ": '" + key + "' must be a non-empty string");
      }
      return v.get<std::string>();
    };
    ActionRule r;
    r.channel_pattern = need_string("channel");
    try {
      r.behavior = behavior_from_string(need_string("behavior"));
    } catch (const ConfigError& err) {
      throw ConfigError(where + ": " + err.what());
    }
    r.suggestion = need_string("suggestion");
    if (e.contains("priority")) {
      if (!e.at("priority").is_number_integer()) throw ConfigError(where + ": 'priority' must be an integer");
      r.priority = e.at("priority").get<int>();
    }
    r.source_line = line;
    rules.push_back(std::move(r));
  }
  return RuleSet(std::move(rules), source_name);
}

RuleSet load_rules(const std::string& path) { return parse_rules(detail::read_text_file(path), path); }

RuleSet default_rules() { return parse_rules(default_rules_json(), "default_rules.json"); }

std::string rule_channel(const PredictorId& p) {
  return p.kind == PredictorId::Kind::TimeOfDay ? std::string("time_of_day") : p.channel;
}

std::vector<std::string> recommend(const PredictorId& top, const BehaviorEvidence& evidence,
                                   const RuleSet& rules) {
  const std::string channel = rule_channel(top);
  std::vector<std::pair<std::size_t, const ActionRule*>> matches;
  for (std::size_t i = 0; i < rules.rules().size(); ++i) {
    const ActionRule& r = rules.rules()[i];
    if (r.behavior != evidence.label) continue;
    if (r.is_wildcard() ? glob_match(r.channel_pattern, channel) : r.channel_pattern == channel) {
      matches.emplace_back(i, &r);
    }
  }
  std::sort(matches.begin(), matches.end(), [](const auto& a, const auto& b) {
    const bool wa = a.second->is_wildcard();
    const bool wb = b.second->is_wildcard();
    if (wa != wb) return !wa;
    if (a.second->priority != b.second->priority) return a.second->priority < b.second->priority;
    return a.first < b.first;
  });
  std::vector<std::string> out;
  for (const auto& [index, rule] : matches) {
    if (std::find(out.begin(), out.end(), rule->suggestion) == out.end()) out.push_back(rule->suggestion);
  }
  return out;
}

}  // namespace actint
