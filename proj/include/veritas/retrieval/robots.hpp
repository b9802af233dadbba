#pragma once

// robots.txt parsing and path evaluation (RFC 9309 semantics): the most
// specific user-agent group applies, the longest matching rule decides,
// Allow wins ties, and no matching rule means allowed.

#include <chrono>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "veritas/text.hpp"

namespace veritas::retrieval {

struct RobotsRule {
    bool allow = false;
    std::string pattern;
};

struct RobotsGroup {
    std::vector<std::string> agents;  // lowercase
    std::vector<RobotsRule> rules;    // file order
};

struct RobotsPolicy {
    std::string host;
    std::vector<RobotsGroup> groups;
    std::chrono::system_clock::time_point fetchedAt{};
    // Set when the file could not be fetched (network failure or 5xx) and
    // the policy fell back to allow-all.
    bool warning = false;
    int status = 200;

    static RobotsPolicy allowAll(std::string host) {
        RobotsPolicy p;
        p.host = std::move(host);
        p.fetchedAt = std::chrono::system_clock::now();
        return p;
    }
};

/// Parses a robots.txt body. Malformed lines are skipped.
inline RobotsPolicy parseRobots(std::string_view body, std::string host = {}) {
    RobotsPolicy policy;
    policy.host = std::move(host);
    policy.fetchedAt = std::chrono::system_clock::now();

    std::istringstream in{std::string(body)};
    std::string line;
    bool lastWasAgent = false;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        const auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        const std::string key = text::toLowerAscii(text::trim(std::string_view(line).substr(0, colon)));
        const std::string value = text::trim(std::string_view(line).substr(colon + 1));

        if (key == "user-agent") {
            if (value.empty()) continue;
            if (!lastWasAgent || policy.groups.empty()) policy.groups.emplace_back();
            policy.groups.back().agents.push_back(text::toLowerAscii(value));
            lastWasAgent = true;
        } else if (key == "allow" || key == "disallow") {
            lastWasAgent = false;
            if (policy.groups.empty()) continue;  // rule before any user-agent line
            if (value.empty()) continue;          // "Disallow:" with no path restricts nothing
            std::string pattern = value;
            if (pattern[0] != '/' && pattern[0] != '*') pattern = "/" + pattern;
            policy.groups.back().rules.push_back({key == "allow", std::move(pattern)});
        } else {
            // sitemap, crawl-delay, host and unknown keys end a run of user-agent lines
            // without affecting rule evaluation.
            if (key == "sitemap" || key == "crawl-delay" || key == "host") lastWasAgent = false;
        }
    }
    return policy;
}

namespace detail {

/// Product token of a user-agent string: "veritas-bot/1.0 (+url)" -> "veritas-bot".
inline std::string productToken(std::string_view agent) {
    std::string tok;
    for (char c : agent) {
        if (c == '/' || text::isSpace(c)) break;
        tok.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return tok;
}

/// Pattern match with '*' wildcards and a trailing '$' end anchor.
inline bool robotsPatternMatches(std::string_view pattern, std::string_view path) {
    bool anchored = !pattern.empty() && pattern.back() == '$';
    if (anchored) pattern.remove_suffix(1);
    // Iterative glob match: '*' matches any run; without an anchor the pattern
    // only needs to match a prefix of the path.
    std::size_t p = 0, s = 0, starP = std::string_view::npos, starS = 0;
    while (true) {
        if (p == pattern.size()) {
            if (!anchored || s == path.size()) return true;
        } else if (pattern[p] == '*') {
            starP = p++;
            starS = s;
            continue;
        } else if (s < path.size() && pattern[p] == path[s]) {
            ++p;
            ++s;
            continue;
        }
        if (starP == std::string_view::npos || starS >= path.size()) return false;
        p = starP + 1;
        s = ++starS;
    }
}

}  // namespace detail

/// Rules applying to `agent`: the groups naming the longest pattern that
/// prefixes the agent's product token, else the "*" groups, merged.
inline std::vector<RobotsRule> applicableRules(const RobotsPolicy& policy, std::string_view agent) {
    const std::string token = detail::productToken(agent);
    std::size_t best = 0;
    for (const auto& g : policy.groups)
        for (const auto& a : g.agents)
            if (a != "*" && !a.empty() && text::startsWith(token, a)) best = std::max(best, a.size());

    std::vector<RobotsRule> rules;
    for (const auto& g : policy.groups) {
        bool hit = false;
        for (const auto& a : g.agents) {
            if (best > 0 ? (a != "*" && a.size() == best && text::startsWith(token, a)) : a == "*") hit = true;
        }
        if (hit) rules.insert(rules.end(), g.rules.begin(), g.rules.end());
    }
    return rules;
}

/// `path` is the request target (path plus optional query), starting with '/'.
inline bool isAllowed(const RobotsPolicy& policy, std::string_view path, std::string_view agent) {
    if (path == "/robots.txt") return true;
    const auto rules = applicableRules(policy, agent);
    const RobotsRule* winner = nullptr;
    for (const auto& r : rules) {
        if (!detail::robotsPatternMatches(r.pattern, path)) continue;
        if (!winner || r.pattern.size() > winner->pattern.size() ||
            (r.pattern.size() == winner->pattern.size() && r.allow && !winner->allow))
            winner = &r;
    }
    return winner == nullptr ? true : winner->allow;
}

}  // namespace veritas::retrieval
