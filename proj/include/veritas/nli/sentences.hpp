#pragma once

// Rule-based sentence segmentation for news prose.
//
// A boundary is placed after '.', '?' or '!' (plus any closing quotes or
// brackets) when it is followed by whitespace and then an uppercase letter,
// a digit, an opening quote/bracket, or the end of the line. A period ending
// a listed abbreviation ("Dr.", "U.S.") never ends a sentence. Line breaks
// are hard boundaries, so headings stay separate from the paragraphs below
// them.

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "veritas/text.hpp"

namespace veritas::nli {

class SentenceSplitter {
public:
    SentenceSplitter() = default;
    explicit SentenceSplitter(std::set<std::string, std::less<>> abbreviations) : abbrev_(std::move(abbreviations)) {}

    /// One abbreviation per line, without the trailing period; '#' comments allowed.
    static SentenceSplitter fromFile(const std::string& path) {
        std::set<std::string, std::less<>> abbrev;
        for (auto& a : text::readListFile(path)) {
            while (!a.empty() && a.back() == '.') a.pop_back();
            if (!a.empty()) abbrev.insert(std::move(a));
        }
        return SentenceSplitter(std::move(abbrev));
    }

    bool isAbbreviation(std::string_view token) const { return abbrev_.count(token) > 0; }

    std::vector<std::string> split(std::string_view input) const {
        std::vector<std::string> out;
        std::size_t lineStart = 0;
        while (lineStart <= input.size()) {
            std::size_t lineEnd = input.find('\n', lineStart);
            if (lineEnd == std::string_view::npos) lineEnd = input.size();
            splitLine(input.substr(lineStart, lineEnd - lineStart), out);
            lineStart = lineEnd + 1;
        }
        if (out.empty()) {
            std::string whole = text::normalizeWhitespace(input);
            if (!whole.empty()) out.push_back(std::move(whole));
        }
        return out;
    }

private:
    static bool isTerminal(char c) { return c == '.' || c == '?' || c == '!'; }

    static bool isCloser(std::string_view s, std::size_t i, std::size_t& len) {
        const char c = s[i];
        if (c == '"' || c == '\'' || c == ')' || c == ']') {
            len = 1;
            return true;
        }
        // UTF-8 right single / double quotation marks.
        if (s.substr(i, 3) == "\xE2\x80\x99" || s.substr(i, 3) == "\xE2\x80\x9D") {
            len = 3;
            return true;
        }
        return false;
    }

    static bool startsSentence(std::string_view s, std::size_t i) {
        if (i >= s.size()) return true;
        const unsigned char c = static_cast<unsigned char>(s[i]);
        if (std::isupper(c) || std::isdigit(c)) return true;
        if (c == '"' || c == '\'' || c == '(' || c == '[') return i + 1 >= s.size() || startsSentence(s, i + 1);
        if (c >= 0x80) {
            // Opening curly quotes, or a non-ASCII letter (treated as capitalised).
            if (s.substr(i, 3) == "\xE2\x80\x9C" || s.substr(i, 3) == "\xE2\x80\x98") return startsSentence(s, i + 3);
            return c >= 0xC3 && c <= 0xDF;
        }
        return false;
    }

    /// Token ending at the period at `dot` (letters, digits and inner periods).
    static std::string_view tokenBefore(std::string_view s, std::size_t dot) {
        std::size_t b = dot;
        while (b > 0) {
            const char c = s[b - 1];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '.') --b;
            else break;
        }
        return s.substr(b, dot - b);
    }

    void splitLine(std::string_view line, std::vector<std::string>& out) const {
        std::size_t segStart = 0;
        std::size_t i = 0;
        while (i < line.size()) {
            if (!isTerminal(line[i])) {
                ++i;
                continue;
            }
            const std::size_t termPos = i;
            std::size_t j = i;
            while (j < line.size() && isTerminal(line[j])) ++j;
            std::size_t closeLen = 0;
            while (j < line.size() && isCloser(line, j, closeLen)) j += closeLen;
            // Must be followed by whitespace (or end of line).
            if (j < line.size() && !text::isSpace(line[j])) {
                i = j;
                continue;
            }
            std::size_t k = j;
            while (k < line.size() && text::isSpace(line[k])) ++k;
            bool boundary = startsSentence(line, k);
            if (boundary && line[termPos] == '.' && k < line.size()) {
                const bool singlePeriod = termPos + 1 >= line.size() || line[termPos + 1] != '.';
                if (singlePeriod) {
                    std::string_view tok = tokenBefore(line, termPos);
                    if (!tok.empty() && isAbbreviation(tok)) boundary = false;
                }
            }
            if (boundary) {
                std::string seg = text::normalizeWhitespace(line.substr(segStart, j - segStart));
                if (!seg.empty()) out.push_back(std::move(seg));
                segStart = j;
            }
            i = j;
        }
        std::string tail = text::normalizeWhitespace(line.substr(segStart));
        if (!tail.empty()) out.push_back(std::move(tail));
    }

    std::set<std::string, std::less<>> abbrev_;
};

}  // namespace veritas::nli
